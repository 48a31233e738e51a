#pragma once

#include <optional>
#include <string>

#include "graad/crypto/dh.hpp"
#include "graad/protocols/authority.hpp"
#include "graad/protocols/transport.hpp"
#include "graad/protocols/wire.hpp"

namespace graad {

// A UE's long-term material plus its own replay cache of seen sids.
struct UeDevice {
  UeCredentials creds;
  ReplayCache seen_sids;
};

namespace cn_names {
inline const std::string initiator = "UE_i";
inline const std::string responder = "UE_j";
inline const std::string enb = "eNB";
inline const std::string hss = "HSS";
}  // namespace cn_names

// H(K, sid) as used for XRES.
Digest xres_value(const SymKey& k, const Block128& sid);

// Base for the three CN roles. On any failure a role enters `failed` with a
// step-tagged reason and sends a CN abort record to its neighbours.
class CnRole : public Node {
 public:
  const std::string& name() const override { return name_; }
  NodeStatus status() const override { return status_; }
  const std::string& reason() const override { return reason_; }
  std::vector<Envelope> receive(const Envelope& in) override;

  int step() const { return step_; }
  const Block128& sid() const { return sid_; }

 protected:
  CnRole(std::string name, const SystemParams& params, Rng rng)
      : name_(std::move(name)), params_(params), rng_(std::move(rng)) {}

  // Handles a decoded, non-abort message for the current step.
  virtual std::vector<Envelope> advance(const Envelope& in, const Message& msg) = 0;
  // Neighbours that receive our abort records.
  virtual std::vector<std::string> neighbours() const = 0;

  std::vector<Envelope> fail(const std::string& reason, const std::string& skip = {});
  Envelope send(const std::string& to, std::uint8_t tag, std::vector<Bytes> fields) const;
  void expect_sid(ByteView field) const;

  std::string name_;
  const SystemParams& params_;
  Rng rng_;
  NodeStatus status_ = NodeStatus::running;
  std::string reason_;
  int step_ = 0;
  Block128 sid_{};
};

class CnInitiator final : public CnRole {
 public:
  CnInitiator(const SystemParams& params, UeDevice& device, Rng rng);
  std::vector<Envelope> start() override;
  const std::optional<G>& key() const { return key_; }
  const DhKeypair& ephemeral() const { return dh_; }

 private:
  std::vector<Envelope> advance(const Envelope& in, const Message& msg) override;
  std::vector<std::string> neighbours() const override { return {cn_names::responder}; }

  UeDevice& device_;
  DhKeypair dh_;
  G peer_;
  std::optional<G> key_;
};

class CnResponder final : public CnRole {
 public:
  CnResponder(const SystemParams& params, UeDevice& device, Rng rng);
  const std::optional<G>& key() const { return key_; }
  const DhKeypair& ephemeral() const { return dh_; }

 private:
  std::vector<Envelope> advance(const Envelope& in, const Message& msg) override;
  std::vector<std::string> neighbours() const override {
    return {cn_names::initiator, cn_names::enb};
  }

  UeDevice& device_;
  DhKeypair dh_;
  G peer_;
  Block128 r_{};
  std::optional<G> key_;
};

class CnHss final : public CnRole {
 public:
  CnHss(const SystemParams& params, HssState& hss, const ProseState& prose, Rng rng);

 private:
  std::vector<Envelope> advance(const Envelope& in, const Message& msg) override;
  std::vector<std::string> neighbours() const override { return {cn_names::enb}; }

  HssState& hss_;
  const ProseState& prose_;
  Block128 r_{};
  SymKey k_i_{}, k_j_{};
};

struct CnOutcome {
  NodeStatus initiator = NodeStatus::running;
  NodeStatus responder = NodeStatus::running;
  NodeStatus hss = NodeStatus::running;
  std::string reason;  // first failure reason, empty on success
  std::optional<G> key_i;
  std::optional<G> key_j;
  Transcript transcript;

  bool accepted() const {
    return initiator == NodeStatus::accepted && responder == NodeStatus::accepted && key_i &&
           key_j && *key_i == *key_j;
  }
};

// One CN session over UE_i -> UE_j -> eNB -> HSS with the given faults.
CnOutcome run_cn(const SystemParams& params, Authorities& auth, UeDevice& initiator,
                 UeDevice& responder, Rng& rng, const FaultPlan& faults = {});

}  // namespace graad
