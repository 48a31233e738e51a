#include "graad/protocols/transport.hpp"

#include <algorithm>
#include <cstdio>

#include "graad/crypto/error.hpp"
#include "graad/protocols/wire.hpp"

namespace graad {

RelayNode::RelayNode(std::string name, std::string a, std::string b)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)) {}

std::vector<Envelope> RelayNode::receive(const Envelope& in) {
  if (in.from == a_) return {{name_, b_, in.bytes}};
  if (in.from == b_) return {{name_, a_, in.bytes}};
  return {};
}

void Transcript::message(const Envelope& e) {
  char tag[8];
  std::snprintf(tag, sizeof tag, "0x%02x", peek_tag(e.bytes));
  lines_.push_back(e.from + " -> " + e.to + " " + tag + " " + to_hex(e.bytes));
  messages_.push_back(e);
}

void Transcript::note(const std::string& text) { lines_.push_back("! " + text); }

std::string Transcript::text() const {
  std::string out;
  for (const auto& l : lines_) out += l + "\n";
  return out;
}

Bus::Bus(FaultPlan plan, std::size_t max_deliveries)
    : plan_(std::move(plan)), max_deliveries_(max_deliveries) {}

void Bus::attach(Node& node) { nodes_[node.name()] = &node; }

namespace {
bool listed(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}
}  // namespace

void Bus::post(const Envelope& original, bool relayed) {
  if (relayed) {
    queue_.push_back(original);
    return;
  }
  std::string step = step_label(peek_tag(original.bytes));
  Envelope e = original;
  if (!step.empty()) {
    if (auto it = plan_.substitute.find(step); it != plan_.substitute.end()) {
      transcript_.note("substitute step " + step);
      e.bytes = it->second;
    }
    if (listed(plan_.drop, step)) {
      transcript_.note("drop step " + step + " " + e.from + " -> " + e.to);
      return;
    }
    if (plan_.tamper && plan_.tamper->step == step) {
      const auto& t = *plan_.tamper;
      if (t.byte < e.bytes.size()) {
        e.bytes[t.byte] ^= t.mask;
        transcript_.note("tamper step " + step + " byte " + std::to_string(t.byte));
      } else {
        transcript_.note("tamper step " + step + " byte " + std::to_string(t.byte) +
                         " out of range");
      }
    }
  }
  queue_.push_back(e);
  if (!step.empty() && listed(plan_.replay, step)) {
    transcript_.note("replay step " + step);
    queue_.push_back(e);
  }
}

void Bus::run(const std::string& initiator) {
  auto it = nodes_.find(initiator);
  if (it == nodes_.end()) throw InvalidArgument("bus: unknown initiator " + initiator);
  for (auto& e : it->second->start()) post(e, false);

  std::size_t delivered = 0;
  while (head_ < queue_.size()) {
    Envelope e = queue_[head_++];
    if (++delivered > max_deliveries_) {
      transcript_.note("delivery limit reached");
      return;
    }
    auto dst = nodes_.find(e.to);
    if (dst == nodes_.end()) throw InvalidArgument("bus: unknown destination " + e.to);
    transcript_.message(e);
    bool relay = dynamic_cast<RelayNode*>(dst->second) != nullptr;
    for (auto& out : dst->second->receive(e)) post(out, relay);
  }
}

}  // namespace graad
