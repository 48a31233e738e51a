#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "graad/handshake/select.hpp"
#include "graad/protocols/authority.hpp"
#include "graad/protocols/transport.hpp"
#include "graad/protocols/wire.hpp"

namespace graad {

namespace na_names {
inline const std::string u = "UE_U";
inline const std::string v = "UE_V";
}  // namespace na_names

// What ProSe needs to attribute an accepted NA session.
struct TraceEvidence {
  Bytes label_u;  // candidate identity V encrypted to
  Bytes label_v;  // candidate identity U encrypted to
  G x_u;
  G x_v;
  KpCiphertext c1_u;
  LinCiphertext c2_u;
  DualProof pi_u;
  KpCiphertext c1_v;
  LinCiphertext c2_v;
  DualProof pi_v;
  Digest sigma0{};
  Digest sigma1{};
  Digest sigma2{};

  Bytes encode() const;
  static TraceEvidence decode(const PairingGroup& group, ByteView data);
};

// Session secrets as seen by one side; exposed for tests and tracing checks.
struct NaSecrets {
  mpz_class gamma;
  mpz_class delta;
  std::size_t i_u = 0;
  std::size_t i_v = 0;
};

// The public context a UE runs NA with: its own copies of the directory and
// CRL, which may be stale.
struct NaView {
  const SystemParams& params;
  const GroupDirectory& dir;
  const Crl& crl;
};

// The single abort record every NA failure path emits.
Bytes na_abort_record();

class NaRole : public Node {
 public:
  const std::string& name() const override { return name_; }
  NodeStatus status() const override { return status_; }
  const std::string& reason() const override { return reason_; }
  std::vector<Envelope> receive(const Envelope& in) override;

  int step() const { return step_; }
  const std::optional<Digest>& key() const { return key_; }
  const std::optional<TraceEvidence>& evidence() const { return evidence_; }
  const NaSecrets& secrets() const { return secrets_; }

 protected:
  NaRole(std::string name, std::string peer, NaView view, const UeCredentials& creds, Rng rng)
      : name_(std::move(name)),
        peer_(std::move(peer)),
        view_(view),
        creds_(creds),
        rng_(std::move(rng)) {}

  virtual std::vector<Envelope> advance(const Message& msg) = 0;

  std::vector<Envelope> fail(const std::string& reason);
  Envelope send(std::uint8_t tag, std::vector<Bytes> fields) const;
  const PairingGroup& grp() const { return view_.params.group(); }
  // Own directory position; throws when the label is not listed.
  MemberSlot self_slot() const;
  Bytes seal_payload(ByteView target, const mpz_class& scalar);

  std::string name_;
  std::string peer_;
  NaView view_;
  const UeCredentials& creds_;
  Rng rng_;
  NodeStatus status_ = NodeStatus::running;
  std::string reason_;
  int step_ = 0;

  Nonces nonces_;
  std::vector<std::size_t> s_;
  std::optional<Digest> key_;
  std::optional<TraceEvidence> evidence_;
  NaSecrets secrets_;
};

class NaInitiator final : public NaRole {
 public:
  NaInitiator(NaView view, const UeCredentials& creds, Rng rng);
  std::vector<Envelope> start() override;

 private:
  std::vector<Envelope> advance(const Message& msg) override;

  MemberSlot self_{};
  G x_v_;
  Bytes target_;
  KpCiphertext c1_;
  LinCiphertext c2_;
  DualProof pi_;
  Digest sigma0_{};
};

class NaResponder final : public NaRole {
 public:
  NaResponder(NaView view, const UeCredentials& creds, Rng rng);
  bool dummy() const { return dummy_; }

 private:
  std::vector<Envelope> advance(const Message& msg) override;

  MemberSlot self_{};
  bool dummy_ = false;
  Bytes target_;
  G x_u_;
  TraceEvidence partial_;
};

struct NaOutcome {
  NodeStatus u = NodeStatus::running;
  NodeStatus v = NodeStatus::running;
  std::string reason_u;
  std::string reason_v;
  std::optional<Digest> key_u;
  std::optional<Digest> key_v;
  std::optional<TraceEvidence> evidence;  // V's copy, holds sigma_2
  NaSecrets secrets;                      // U's view
  bool v_dummy = false;
  Transcript transcript;

  bool accepted() const {
    return u == NodeStatus::accepted && v == NodeStatus::accepted && key_u && key_v &&
           *key_u == *key_v;
  }
};

NaOutcome run_na(NaView view_u, const UeCredentials& u, NaView view_v, const UeCredentials& v,
                 Rng& rng, const FaultPlan& faults = {});

enum class TraceReject { none, malformed, proof_u, proof_v, payload, sigma, group };

std::string_view to_string(TraceReject r);

struct TraceResult {
  mpz_class gamma;
  mpz_class delta;
  std::size_t i_u = 0;
  std::size_t i_v = 0;
};

struct TraceOutcome {
  TraceReject reject = TraceReject::none;
  std::optional<TraceResult> result;  // set only when accepted

  bool accepted() const { return reject == TraceReject::none && result.has_value(); }
};

TraceOutcome trace_session(const ProseState& prose, const TraceEvidence& ev);

}  // namespace graad
