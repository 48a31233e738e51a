#include "graad/protocols/na.hpp"

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

Bytes digest_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }

struct Opened {
  mpz_class scalar;
  G x;
};

// Hybrid-IBE payload: scalar || X.
Opened open_payload(const SystemParams& params, const IbePrivateKey& key, ByteView data) {
  const auto& grp = params.group();
  HybridCiphertext c = HybridCiphertext::decode(grp, data);
  Bytes pt = hybrid_decrypt(params.ibe, key, c);
  std::size_t sw = grp.scalar_width();
  if (pt.size() != sw + grp.g_width()) throw DecodeError("payload has wrong length");
  Opened o;
  o.scalar = grp.decode_scalar(ByteView(pt).subspan(0, sw));
  if (o.scalar >= payload_scalar_bound(grp)) throw DecodeError("payload scalar out of range");
  o.x = grp.decode_g(ByteView(pt).subspan(sw));
  if (o.x.is_identity()) throw DecodeError("payload key is the identity");
  return o;
}

// Both proofs commit to the session's two candidate labels, so ProSe can
// trust the labels it is handed along with the ciphertexts.
Bytes label_context(ByteView label_u, ByteView label_v) {
  FieldWriter w;
  w.add("na-labels").add(label_u).add(label_v);
  return w.take();
}

}  // namespace

Bytes na_abort_record() { return Message{tag::na_abort, {}}.encode(); }

// ---- evidence ------------------------------------------------------------

Bytes TraceEvidence::encode() const {
  FieldWriter w;
  w.add("graad-trace v1")
      .add(label_u)
      .add(label_v)
      .add(x_u.encode())
      .add(x_v.encode())
      .add(c1_u.encode())
      .add(c2_u.encode())
      .add(pi_u.encode())
      .add(c1_v.encode())
      .add(c2_v.encode())
      .add(pi_v.encode())
      .add(sigma0)
      .add(sigma1)
      .add(sigma2);
  return w.take();
}

TraceEvidence TraceEvidence::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  if (r.next_string() != "graad-trace v1") throw DecodeError("not a trace evidence record");
  TraceEvidence ev;
  ev.label_u = to_bytes(r.next());
  ev.label_v = to_bytes(r.next());
  ev.x_u = group.decode_g(r.next());
  ev.x_v = group.decode_g(r.next());
  ev.c1_u = KpCiphertext::decode(group, r.next());
  ev.c2_u = LinCiphertext::decode(group, r.next());
  ev.pi_u = DualProof::decode(group, r.next());
  ev.c1_v = KpCiphertext::decode(group, r.next());
  ev.c2_v = LinCiphertext::decode(group, r.next());
  ev.pi_v = DualProof::decode(group, r.next());
  ev.sigma0 = to_array<32>(r.next());
  ev.sigma1 = to_array<32>(r.next());
  ev.sigma2 = to_array<32>(r.next());
  r.finish();
  return ev;
}

// ---- common role plumbing ------------------------------------------------

std::vector<Envelope> NaRole::receive(const Envelope& in) {
  if (status_ != NodeStatus::running) return {};
  Message msg;
  try {
    msg = Message::decode(in.bytes);
  } catch (const Error& e) {
    return fail(std::string("malformed message: ") + e.what());
  }
  if (msg.tag == tag::na_abort) {
    status_ = NodeStatus::failed;
    reason_ = "peer abort";
    return {};
  }
  try {
    return advance(msg);
  } catch (const Error& e) {
    return fail(e.what());
  }
}

std::vector<Envelope> NaRole::fail(const std::string& reason) {
  status_ = NodeStatus::failed;
  reason_ = "step " + std::to_string(step_) + ": " + reason;
  key_.reset();
  evidence_.reset();
  return {{name_, peer_, na_abort_record()}};
}

Envelope NaRole::send(std::uint8_t t, std::vector<Bytes> fields) const {
  return {name_, peer_, Message{t, std::move(fields)}.encode()};
}

MemberSlot NaRole::self_slot() const {
  auto slot = view_.dir.find_member(creds_.label());
  if (!slot) throw InvalidArgument("own label not in directory");
  return *slot;
}

Bytes NaRole::seal_payload(ByteView target, const mpz_class& scalar) {
  Bytes pt = concat({grp().encode_scalar(scalar), creds_.kp.X.encode()});
  return hybrid_encrypt(view_.params.ibe, target, pt, rng_).encode();
}

// ---- U -------------------------------------------------------------------

NaInitiator::NaInitiator(NaView view, const UeCredentials& creds, Rng rng)
    : NaRole(na_names::u, na_names::v, view, creds, std::move(rng)) {}

std::vector<Envelope> NaInitiator::start() {
  step_ = 1;
  try {
    view_.dir.require_populated();
    self_ = self_slot();
  } catch (const Error& e) {
    return fail(e.what());
  }
  nonces_.u = rng_.block();
  return {send(tag::na_nonce_u, {Bytes(nonces_.u.begin(), nonces_.u.end())})};
}

std::vector<Envelope> NaInitiator::advance(const Message& msg) {
  const auto& g = grp();
  const auto& pk = view_.params.prose_pk;
  if (step_ == 1) {
    msg.expect(tag::na_nonce_v, 1);
    nonces_.v = to_array<16>(msg.fields[0]);
    GroupSelection gs = g_select(view_.dir, g, self_.group, nonces_, rng_);
    s_ = g_select_verify(view_.dir, g, nonces_, gs);
    UserSelection us = u_select(view_.dir, g, s_, self_.group.chunk, self_.index, nonces_, rng_);
    step_ = 2;
    return {send(tag::na_select, {g.encode_scalar(gs.theta1), digest_bytes(gs.sigma_g),
                                  g.encode_scalar(us.theta2), digest_bytes(us.sigma_u)})};
  }
  if (step_ == 2) {
    step_ = 3;
    msg.expect(tag::na2, 3);
    UserSelection theirs{g.decode_scalar(msg.fields[0]), to_array<32>(msg.fields[1])};
    SelectedCandidates cands = u_select_verify(view_.dir, g, nonces_, s_, theirs);
    target_ = cands.labels.at(self_.group.chunk);
    if (view_.crl.contains(target_)) throw VerifyError("candidate is revoked");

    secrets_.gamma = rng_.below(payload_scalar_bound(g));
    secrets_.i_u = view_.dir.index_of(self_.group);
    Bytes e_u = seal_payload(target_, secrets_.gamma);

    // A peer outside our group sent something we cannot open; carry on with
    // random values so the failure surfaces at V like any other mismatch.
    try {
      Opened o = open_payload(view_.params, creds_.d, msg.fields[2]);
      secrets_.delta = o.scalar;
      x_v_ = o.x;
    } catch (const Error&) {
      secrets_.delta = rng_.below(payload_scalar_bound(g));
      x_v_ = g.random_element(rng_);
    }

    sigma0_ = prf_f0(g, secrets_.gamma, secrets_.delta, 0);
    G m = embed_payload(g, secrets_.gamma, static_cast<std::uint16_t>(secrets_.i_u));
    KpEncryption kp = kp_encrypt(x_v_, m, rng_);
    LinEncryption lin = lin_encrypt(pk, m, rng_);
    pi_ = enc_proof(kp.ct, lin.ct, lin.beta1, lin.beta2, kp.y, x_v_, pk, rng_,
                    label_context(creds_.label(), target_));
    c1_ = kp.ct;
    c2_ = lin.ct;
    step_ = 4;
    return {send(tag::na3,
                 {e_u, digest_bytes(sigma0_), c1_.encode(), c2_.encode(), pi_.encode()})};
  }
  if (step_ == 4) {
    step_ = 5;
    msg.expect(tag::na4, 4);
    Digest sigma1 = to_array<32>(msg.fields[0]);
    KpCiphertext c1_v = KpCiphertext::decode(g, msg.fields[1]);
    LinCiphertext c2_v = LinCiphertext::decode(g, msg.fields[2]);
    DualProof pi_v = DualProof::decode(g, msg.fields[3]);
    if (sigma1 != prf_f0(g, secrets_.gamma, secrets_.delta, 1)) {
      throw VerifyError("sigma_1 mismatch");
    }
    if (!enc_verify(c1_v, c2_v, pi_v, creds_.kp.X, pk, label_context(creds_.label(), target_))) {
      throw VerifyError("proof rejected");
    }
    auto [delta, i_v] = unembed_payload(g, kp_decrypt(creds_.kp.x, c1_v));
    if (delta != secrets_.delta || i_v != secrets_.i_u) throw VerifyError("payload mismatch");
    secrets_.i_v = i_v;

    Digest sigma2 = prf_f0(g, secrets_.gamma, secrets_.delta, 2);
    key_ = prf_f0(g, secrets_.gamma, secrets_.delta, 3);
    evidence_ = TraceEvidence{creds_.label(), target_, creds_.kp.X, x_v_, c1_, c2_, pi_,
                              c1_v, c2_v, pi_v, sigma0_, sigma1, sigma2};
    status_ = NodeStatus::accepted;
    return {send(tag::na_sigma2, {digest_bytes(sigma2)})};
  }
  throw VerifyError("unexpected message");
}

// ---- V -------------------------------------------------------------------

NaResponder::NaResponder(NaView view, const UeCredentials& creds, Rng rng)
    : NaRole(na_names::v, na_names::u, view, creds, std::move(rng)) {
  step_ = 1;
}

std::vector<Envelope> NaResponder::advance(const Message& msg) {
  const auto& g = grp();
  const auto& pk = view_.params.prose_pk;
  if (step_ == 1) {
    msg.expect(tag::na_nonce_u, 1);
    view_.dir.require_populated();
    self_ = self_slot();
    nonces_.u = to_array<16>(msg.fields[0]);
    nonces_.v = rng_.block();
    step_ = 2;
    return {send(tag::na_nonce_v, {Bytes(nonces_.v.begin(), nonces_.v.end())})};
  }
  if (step_ == 2) {
    msg.expect(tag::na_select, 4);
    GroupSelection gs{g.decode_scalar(msg.fields[0]), to_array<32>(msg.fields[1])};
    UserSelection us{g.decode_scalar(msg.fields[2]), to_array<32>(msg.fields[3])};
    s_ = g_select_verify(view_.dir, g, nonces_, gs);
    SelectedCandidates cands = u_select_verify(view_.dir, g, nonces_, s_, us);

    std::size_t chunk = self_.group.chunk;
    std::size_t lambda = self_.index;
    dummy_ = s_[chunk] != self_.group.sub;
    if (dummy_) {
      // Our group was not selected: answer with a well-formed selection and
      // ciphertext for a random slot.
      chunk = rng_.below(view_.dir.w()).get_ui();
      const auto& grp_entry = view_.dir.group(GroupSlot{chunk, s_[chunk]});
      lambda = rng_.below(grp_entry.members.size()).get_ui();
    }
    UserSelection mine = u_select(view_.dir, g, s_, chunk, lambda, nonces_, rng_);
    target_ = cands.labels.at(chunk);
    if (view_.crl.contains(target_)) throw VerifyError("candidate is revoked");

    secrets_.delta = rng_.below(payload_scalar_bound(g));
    secrets_.i_v = view_.dir.index_of(self_.group);
    Bytes e_v = seal_payload(target_, secrets_.delta);
    step_ = 3;
    return {send(tag::na2, {g.encode_scalar(mine.theta2), digest_bytes(mine.sigma_u), e_v})};
  }
  if (step_ == 3) {
    step_ = 4;
    if (dummy_) throw VerifyError("own group not selected");
    msg.expect(tag::na3, 5);
    Opened o = open_payload(view_.params, creds_.d, msg.fields[0]);
    Digest sigma0 = to_array<32>(msg.fields[1]);
    KpCiphertext c1_u = KpCiphertext::decode(g, msg.fields[2]);
    LinCiphertext c2_u = LinCiphertext::decode(g, msg.fields[3]);
    DualProof pi_u = DualProof::decode(g, msg.fields[4]);
    if (sigma0 != prf_f0(g, o.scalar, secrets_.delta, 0)) throw VerifyError("sigma_0 mismatch");
    if (!enc_verify(c1_u, c2_u, pi_u, creds_.kp.X, pk, label_context(target_, creds_.label()))) {
      throw VerifyError("proof rejected");
    }
    auto [gamma, i_u] = unembed_payload(g, kp_decrypt(creds_.kp.x, c1_u));
    if (gamma != o.scalar || i_u != secrets_.i_v) throw VerifyError("payload mismatch");
    secrets_.gamma = gamma;
    secrets_.i_u = i_u;
    x_u_ = o.x;

    Digest sigma1 = prf_f0(g, secrets_.gamma, secrets_.delta, 1);
    G m = embed_payload(g, secrets_.delta, static_cast<std::uint16_t>(secrets_.i_v));
    KpEncryption kp = kp_encrypt(x_u_, m, rng_);
    LinEncryption lin = lin_encrypt(pk, m, rng_);
    DualProof pi_v = enc_proof(kp.ct, lin.ct, lin.beta1, lin.beta2, kp.y, x_u_, pk, rng_,
                               label_context(target_, creds_.label()));
    partial_ = TraceEvidence{target_, creds_.label(), x_u_, creds_.kp.X, c1_u, c2_u, pi_u,
                             kp.ct, lin.ct, pi_v, sigma0, sigma1, {}};
    step_ = 5;
    return {send(tag::na4,
                 {digest_bytes(sigma1), kp.ct.encode(), lin.ct.encode(), pi_v.encode()})};
  }
  if (step_ == 5) {
    msg.expect(tag::na_sigma2, 1);
    Digest sigma2 = to_array<32>(msg.fields[0]);
    if (sigma2 != prf_f0(g, secrets_.gamma, secrets_.delta, 2)) {
      throw VerifyError("sigma_2 mismatch");
    }
    key_ = prf_f0(g, secrets_.gamma, secrets_.delta, 3);
    partial_.sigma2 = sigma2;
    evidence_ = partial_;
    status_ = NodeStatus::accepted;
    step_ = 6;
    return {};
  }
  throw VerifyError("unexpected message");
}

// ---- runner --------------------------------------------------------------

NaOutcome run_na(NaView view_u, const UeCredentials& u, NaView view_v, const UeCredentials& v,
                 Rng& rng, const FaultPlan& faults) {
  Rng session = Rng::seeded(rng.bytes(32));
  NaInitiator ue_u(view_u, u, session.fork(na_names::u));
  NaResponder ue_v(view_v, v, session.fork(na_names::v));
  Bus bus(faults);
  bus.attach(ue_u);
  bus.attach(ue_v);
  bus.run(na_names::u);

  NaOutcome out;
  out.u = ue_u.status();
  out.v = ue_v.status();
  out.reason_u = ue_u.reason();
  out.reason_v = ue_v.reason();
  out.key_u = ue_u.key();
  out.key_v = ue_v.key();
  out.evidence = ue_v.evidence();
  out.secrets = ue_u.secrets();
  out.v_dummy = ue_v.dummy();
  out.transcript = bus.transcript();
  return out;
}

// ---- trace ---------------------------------------------------------------

std::string_view to_string(TraceReject r) {
  switch (r) {
    case TraceReject::none: return "none";
    case TraceReject::malformed: return "malformed";
    case TraceReject::proof_u: return "proof_u";
    case TraceReject::proof_v: return "proof_v";
    case TraceReject::payload: return "payload";
    case TraceReject::sigma: return "sigma";
    case TraceReject::group: return "group";
  }
  return "unknown";
}

TraceOutcome trace_session(const ProseState& prose, const TraceEvidence& ev) {
  auto reject = [](TraceReject r) { return TraceOutcome{r, std::nullopt}; };
  if (!ev.x_u.valid() || !ev.x_v.valid()) return reject(TraceReject::malformed);
  const PairingGroup& g = ev.x_u.group();
  const LinPublicKey& pk = prose.lin.pk;
  if (&g != &pk.u.group()) return reject(TraceReject::malformed);

  Bytes ctx = label_context(ev.label_u, ev.label_v);
  if (!enc_verify(ev.c1_u, ev.c2_u, ev.pi_u, ev.x_v, pk, ctx)) return reject(TraceReject::proof_u);
  if (!enc_verify(ev.c1_v, ev.c2_v, ev.pi_v, ev.x_u, pk, ctx)) return reject(TraceReject::proof_v);

  TraceResult res;
  try {
    std::uint16_t iu, iv;
    std::tie(res.gamma, iu) = unembed_payload(g, lin_decrypt(prose.lin.sk, ev.c2_u));
    std::tie(res.delta, iv) = unembed_payload(g, lin_decrypt(prose.lin.sk, ev.c2_v));
    res.i_u = iu;
    res.i_v = iv;
  } catch (const Error&) {
    return reject(TraceReject::payload);
  }

  if (prf_f0(g, res.gamma, res.delta, 0) != ev.sigma0 ||
      prf_f0(g, res.gamma, res.delta, 1) != ev.sigma1 ||
      prf_f0(g, res.gamma, res.delta, 2) != ev.sigma2) {
    return reject(TraceReject::sigma);
  }

  // The candidate labels must sit in the groups the payloads name.
  try {
    auto slot_u = prose.dir.find_gid(parse_label(ev.label_u).gid);
    auto slot_v = prose.dir.find_gid(parse_label(ev.label_v).gid);
    if (!slot_u || !slot_v || prose.dir.index_of(*slot_u) != res.i_u ||
        prose.dir.index_of(*slot_v) != res.i_v) {
      return reject(TraceReject::group);
    }
  } catch (const Error&) {
    return reject(TraceReject::malformed);
  }
  return TraceOutcome{TraceReject::none, std::move(res)};
}

}  // namespace graad
