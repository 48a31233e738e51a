#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graad/crypto/bytes.hpp"

namespace graad {

struct Envelope {
  std::string from;
  std::string to;
  Bytes bytes;
};

enum class NodeStatus { running, accepted, failed };

// A protocol role. receive() consumes one delivered message and returns the
// messages it wants sent; once the node leaves `running` it ignores input.
class Node {
 public:
  virtual ~Node() = default;
  virtual const std::string& name() const = 0;
  virtual std::vector<Envelope> start() { return {}; }
  virtual std::vector<Envelope> receive(const Envelope& in) = 0;
  virtual NodeStatus status() const = 0;
  // Local diagnostic; never sent on the wire by NA roles.
  virtual const std::string& reason() const = 0;
};

// Forwards everything between two endpoints unchanged.
class RelayNode final : public Node {
 public:
  RelayNode(std::string name, std::string a, std::string b);
  const std::string& name() const override { return name_; }
  std::vector<Envelope> receive(const Envelope& in) override;
  NodeStatus status() const override { return NodeStatus::running; }
  const std::string& reason() const override { return reason_; }

 private:
  std::string name_, a_, b_, reason_;
};

// Fault injection keyed by step label ("1", "5b", ...). Faults apply when
// the original sender emits the message, not on relay hops.
struct FaultPlan {
  struct Tamper {
    std::string step;
    std::size_t byte = 0;
    std::uint8_t mask = 0x01;
  };
  std::vector<std::string> drop;
  std::optional<Tamper> tamper;
  std::vector<std::string> replay;         // deliver twice
  std::map<std::string, Bytes> substitute; // replace with recorded bytes

  bool empty() const {
    return drop.empty() && !tamper && replay.empty() && substitute.empty();
  }
};

// Deterministic log: one line per delivered message, plus '!' lines for
// injected faults.
class Transcript {
 public:
  void message(const Envelope& e);
  void note(const std::string& text);
  const std::vector<std::string>& lines() const { return lines_; }
  const std::vector<Envelope>& messages() const { return messages_; }
  std::string text() const;

 private:
  std::vector<std::string> lines_;
  std::vector<Envelope> messages_;
};

// FIFO in-process delivery between named nodes.
class Bus {
 public:
  explicit Bus(FaultPlan plan = {}, std::size_t max_deliveries = 256);

  void attach(Node& node);
  // Starts `initiator` and delivers until the queue drains.
  void run(const std::string& initiator);

  const Transcript& transcript() const { return transcript_; }

 private:
  void post(const Envelope& e, bool relayed);

  FaultPlan plan_;
  std::size_t max_deliveries_;
  std::map<std::string, Node*> nodes_;
  std::vector<Envelope> queue_;
  std::size_t head_ = 0;
  Transcript transcript_;
};

}  // namespace graad
