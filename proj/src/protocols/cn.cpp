#include "graad/protocols/cn.hpp"

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

Bytes block_bytes(const Block128& b) { return Bytes(b.begin(), b.end()); }

Bytes tid(ByteView delta, const G& dh, const Block128& sid) {
  return concat({delta, dh.encode(), sid});
}

// RES_i ^ R with R repeated over the length of RES_i.
Bytes xor_cyclic(ByteView data, const Block128& r) {
  Bytes out(data.begin(), data.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= r[i % r.size()];
  return out;
}

// E_S(K, ack || (sid ^ R))
Bytes seal_ack(const SymKey& k, const Digest& ack, const Block128& sid, const Block128& r,
               Rng& rng) {
  return sym_encrypt(k, concat({ack, xor_block(sid, r)}), rng);
}

// Inverse of seal_ack for the holder of K and AK; returns R.
Block128 open_ack(const UeCredentials& c, ByteView sealed, const Block128& sid) {
  Bytes pt = sym_decrypt(c.k, sealed);
  if (pt.size() != 48) throw VerifyError("ack envelope has wrong length");
  Digest ack = to_array<32>(ByteView(pt).subspan(0, 32));
  if (ack != ack_value(c.ak, sid)) throw VerifyError("ack mismatch");
  return xor_block(to_array<16>(ByteView(pt).subspan(32)), sid);
}

std::string step_reason(int step, const std::string& what) {
  return "step " + std::to_string(step) + ": " + what;
}

}  // namespace

Digest xres_value(const SymKey& k, const Block128& sid) {
  FieldWriter w;
  w.add(k).add(sid);
  return hash_h(w);
}

std::vector<Envelope> CnRole::receive(const Envelope& in) {
  if (status_ != NodeStatus::running) return {};
  Message msg;
  try {
    msg = Message::decode(in.bytes);
  } catch (const Error& e) {
    return fail(step_reason(step_, std::string("malformed message: ") + e.what()));
  }
  if (msg.tag == tag::cn_abort) {
    std::string why = msg.fields.size() == 2
                          ? std::string(msg.fields[1].begin(), msg.fields[1].end())
                          : "malformed abort";
    auto out = fail("peer abort (" + why + ")", in.from);
    // Relay the original reason rather than wrapping it again.
    for (auto& e : out) e.bytes = in.bytes;
    return out;
  }
  try {
    return advance(in, msg);
  } catch (const Error& e) {
    return fail(step_reason(step_, e.what()));
  }
}

std::vector<Envelope> CnRole::fail(const std::string& reason, const std::string& skip) {
  status_ = NodeStatus::failed;
  reason_ = reason;
  std::vector<Envelope> out;
  for (const auto& n : neighbours()) {
    if (n == skip) continue;
    out.push_back(send(n, tag::cn_abort, {block_bytes(sid_), to_bytes(reason)}));
  }
  return out;
}

Envelope CnRole::send(const std::string& to, std::uint8_t t, std::vector<Bytes> fields) const {
  return {name_, to, Message{t, std::move(fields)}.encode()};
}

void CnRole::expect_sid(ByteView field) const {
  if (to_array<16>(field) != sid_) throw VerifyError("session identity mismatch");
}

// ---- initiator -----------------------------------------------------------

CnInitiator::CnInitiator(const SystemParams& params, UeDevice& device, Rng rng)
    : CnRole(cn_names::initiator, params, std::move(rng)), device_(device) {}

std::vector<Envelope> CnInitiator::start() {
  step_ = 1;
  const auto& grp = params_.group();
  mpz_class s = grp.random_scalar(rng_);
  mpz_class mask = (mpz_class(1) << 128) - 1;
  sid_ = to_array<16>(mpz_to_bytes(s & mask, 16));
  device_.seen_sids.insert(sid_);

  dh_ = dh_keygen(grp, rng_);
  Digest delta = delta_value(device_.creds.ak, sid_);
  IbeCiphertext e =
      ibe_encrypt(params_.ibe, tid(delta, dh_.element, sid_), device_.creds.id, rng_);
  step_ = 4;
  return {send(cn_names::responder, tag::cn1,
               {block_bytes(sid_), Bytes(delta.begin(), delta.end()), dh_.element.encode(),
                e.encode()})};
}

std::vector<Envelope> CnInitiator::advance(const Envelope&, const Message& msg) {
  const auto& grp = params_.group();
  if (step_ == 4) {
    msg.expect(tag::cn4, 3);
    expect_sid(msg.fields[0]);
    Block128 r = open_ack(device_.creds, msg.fields[1], sid_);
    peer_ = grp.decode_g(msg.fields[2]);
    if (peer_.is_identity()) throw VerifyError("peer DH element is the identity");
    step_ = 5;
    Bytes res = sym_encrypt(device_.creds.k, r, rng_);
    step_ = 6;
    return {send(cn_names::responder, tag::cn_res_i, {block_bytes(sid_), res})};
  }
  if (step_ == 6) {
    msg.expect(tag::cn_xres_i, 2);
    expect_sid(msg.fields[0]);
    Digest x = xres_value(device_.creds.k, sid_);
    if (to_array<32>(msg.fields[1]) != x) throw VerifyError("XRES_i mismatch");
    key_ = dh_shared(dh_.exponent, peer_);
    status_ = NodeStatus::accepted;
    return {};
  }
  throw VerifyError("unexpected message");
}

// ---- responder -----------------------------------------------------------

CnResponder::CnResponder(const SystemParams& params, UeDevice& device, Rng rng)
    : CnRole(cn_names::responder, params, std::move(rng)), device_(device) {
  step_ = 2;
}

std::vector<Envelope> CnResponder::advance(const Envelope&, const Message& msg) {
  const auto& grp = params_.group();
  if (step_ == 2) {
    msg.expect(tag::cn1, 4);
    sid_ = to_array<16>(msg.fields[0]);
    if (!device_.seen_sids.insert(sid_)) throw VerifyError("replayed sid");
    Digest delta_i = to_array<32>(msg.fields[1]);
    peer_ = grp.decode_g(msg.fields[2]);
    if (peer_.is_identity()) throw VerifyError("peer DH element is the identity");
    IbeCiphertext::decode(grp, msg.fields[3]);

    dh_ = dh_keygen(grp, rng_);
    Digest delta_j = delta_value(device_.creds.ak, sid_);
    IbeCiphertext e =
        ibe_encrypt(params_.ibe, tid(delta_j, dh_.element, sid_), device_.creds.id, rng_);
    step_ = 4;
    return {send(cn_names::enb, tag::cn2,
                 {block_bytes(sid_), Bytes(delta_i.begin(), delta_i.end()),
                  Bytes(delta_j.begin(), delta_j.end()), msg.fields[3], e.encode(),
                  msg.fields[2], dh_.element.encode()})};
  }
  if (step_ == 4) {
    msg.expect(tag::cn3, 3);
    expect_sid(msg.fields[0]);
    r_ = open_ack(device_.creds, msg.fields[2], sid_);
    step_ = 5;
    return {send(cn_names::initiator, tag::cn4,
                 {block_bytes(sid_), msg.fields[1], dh_.element.encode()})};
  }
  if (step_ == 5) {
    msg.expect(tag::cn_res_i, 2);
    expect_sid(msg.fields[0]);
    Bytes res_j = sym_encrypt(device_.creds.k, xor_cyclic(msg.fields[1], r_), rng_);
    step_ = 6;
    return {send(cn_names::enb, tag::cn_res_j, {block_bytes(sid_), res_j})};
  }
  if (step_ == 6) {
    msg.expect(tag::cn_xres, 3);
    expect_sid(msg.fields[0]);
    Digest x = xres_value(device_.creds.k, sid_);
    if (to_array<32>(msg.fields[2]) != x) throw VerifyError("XRES_j mismatch");
    key_ = dh_shared(dh_.exponent, peer_);
    status_ = NodeStatus::accepted;
    return {send(cn_names::initiator, tag::cn_xres_i, {block_bytes(sid_), msg.fields[1]})};
  }
  throw VerifyError("unexpected message");
}

// ---- HSS -----------------------------------------------------------------

CnHss::CnHss(const SystemParams& params, HssState& hss, const ProseState& prose, Rng rng)
    : CnRole(cn_names::hss, params, std::move(rng)), hss_(hss), prose_(prose) {
  step_ = 3;
}

std::vector<Envelope> CnHss::advance(const Envelope&, const Message& msg) {
  const auto& grp = params_.group();
  if (step_ == 3) {
    msg.expect(tag::cn2, 7);
    sid_ = to_array<16>(msg.fields[0]);
    if (!hss_.seen_sids.insert(sid_)) throw VerifyError("replayed sid");
    Digest delta_i = to_array<32>(msg.fields[1]);
    Digest delta_j = to_array<32>(msg.fields[2]);
    IbeCiphertext e_i = IbeCiphertext::decode(grp, msg.fields[3]);
    IbeCiphertext e_j = IbeCiphertext::decode(grp, msg.fields[4]);
    G x = grp.decode_g(msg.fields[5]);
    G y = grp.decode_g(msg.fields[6]);

    auto identity = [&](const Digest& delta, const G& dh, const IbeCiphertext& e) {
      IbePrivateKey d = ibe_extract(hss_.params, hss_.msk, tid(delta, dh, sid_));
      Block128 id = ibe_decrypt(hss_.params, d, e);
      auto it = hss_.table.find(id);
      if (it == hss_.table.end()) throw VerifyError("identity not registered");
      return it->second;
    };
    Subscriber sub_i = identity(delta_i, x, e_i);
    Subscriber sub_j = identity(delta_j, y, e_j);

    GroupCheck gc = prose_group_check(prose_, sid_, delta_i, delta_j, sub_i.aid, sub_j.aid);
    if (!gc.same_group) throw VerifyError("group check failed");

    k_i_ = sub_i.k;
    k_j_ = sub_j.k;
    r_ = rng_.block();
    Bytes sealed_i = seal_ack(k_i_, gc.ack_i, sid_, r_, rng_);
    Bytes sealed_j = seal_ack(k_j_, gc.ack_j, sid_, r_, rng_);
    step_ = 6;
    return {send(cn_names::enb, tag::cn3, {block_bytes(sid_), sealed_i, sealed_j})};
  }
  if (step_ == 6) {
    msg.expect(tag::cn_res_j, 2);
    expect_sid(msg.fields[0]);
    Bytes inner = xor_cyclic(sym_decrypt(k_j_, msg.fields[1]), r_);
    if (to_array<16>(sym_decrypt(k_i_, inner)) != r_) throw VerifyError("RES mismatch");
    Digest x_i = xres_value(k_i_, sid_);
    Digest x_j = xres_value(k_j_, sid_);
    status_ = NodeStatus::accepted;
    return {send(cn_names::enb, tag::cn_xres,
                 {block_bytes(sid_), Bytes(x_i.begin(), x_i.end()), Bytes(x_j.begin(), x_j.end())})};
  }
  throw VerifyError("unexpected message");
}

// ---- runner --------------------------------------------------------------

CnOutcome run_cn(const SystemParams& params, Authorities& auth, UeDevice& initiator,
                 UeDevice& responder, Rng& rng, const FaultPlan& faults) {
  Rng session = Rng::seeded(rng.bytes(32));
  CnInitiator ue_i(params, initiator, session.fork(cn_names::initiator));
  CnResponder ue_j(params, responder, session.fork(cn_names::responder));
  CnHss hss(params, auth.hss, auth.prose, session.fork(cn_names::hss));
  RelayNode enb(cn_names::enb, cn_names::responder, cn_names::hss);

  Bus bus(faults);
  bus.attach(ue_i);
  bus.attach(ue_j);
  bus.attach(enb);
  bus.attach(hss);
  bus.run(cn_names::initiator);

  CnOutcome out;
  out.initiator = ue_i.status();
  out.responder = ue_j.status();
  out.hss = hss.status();
  // Prefer the role that detected the failure over roles that only saw its
  // abort record.
  const Node* roles[] = {&ue_i, &ue_j, &hss};
  for (bool origin : {true, false}) {
    for (const Node* n : roles) {
      if (!out.reason.empty() || n->status() != NodeStatus::failed) continue;
      if (origin && n->reason().rfind("peer abort", 0) == 0) continue;
      out.reason = n->name() + ": " + n->reason();
    }
  }
  if (out.reason.empty() && !out.accepted()) out.reason = "session did not complete";
  out.key_i = ue_i.key();
  out.key_j = ue_j.key();
  out.transcript = bus.transcript();
  return out;
}

}  // namespace graad
