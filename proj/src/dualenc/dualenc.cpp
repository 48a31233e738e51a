#include "graad/dualenc/dualenc.hpp"

#include <numeric>

#include "graad/crypto/error.hpp"
#include "graad/crypto/hash.hpp"

namespace graad {

namespace {

Bytes encode_elements(std::initializer_list<const G*> elements) {
  FieldWriter w;
  for (const G* e : elements) w.add(e->encode());
  return w.take();
}

mpz_class inverse_mod(const mpz_class& v, const mpz_class& p) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()) == 0) {
    throw InvalidArgument("scalar not invertible");
  }
  return out;
}

bool same_group(const PairingGroup* group, std::initializer_list<const G*> elements) {
  for (const G* e : elements) {
    if (!e->valid() || &e->group() != group) return false;
  }
  return true;
}

}  // namespace

Bytes KpCiphertext::encode() const { return encode_elements({&y, &c}); }

KpCiphertext KpCiphertext::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  KpCiphertext out;
  out.y = group.decode_g(r.next());
  out.c = group.decode_g(r.next());
  r.finish();
  return out;
}

KpKeypair kp_keygen(const PairingGroup& group, Rng& rng) {
  mpz_class x = group.random_scalar(rng);
  return KpKeypair{x, group.generator().pow(x)};
}

KpEncryption kp_encrypt(const G& X, const G& message, Rng& rng) {
  const auto& group = X.group();
  mpz_class y = group.random_scalar(rng);
  return KpEncryption{KpCiphertext{group.generator().pow(y), message * X.pow(y)}, y};
}

G kp_decrypt(const mpz_class& x, const KpCiphertext& ct) { return ct.c / ct.y.pow(x); }

Bytes LinPublicKey::encode() const { return encode_elements({&u, &v, &h}); }

LinPublicKey LinPublicKey::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  LinPublicKey out;
  out.u = group.decode_g(r.next());
  out.v = group.decode_g(r.next());
  out.h = group.decode_g(r.next());
  r.finish();
  return out;
}

Bytes LinCiphertext::encode() const { return encode_elements({&c_hat, &t1, &t2}); }

LinCiphertext LinCiphertext::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  LinCiphertext out;
  out.c_hat = group.decode_g(r.next());
  out.t1 = group.decode_g(r.next());
  out.t2 = group.decode_g(r.next());
  r.finish();
  return out;
}

LinKeypair lin_keygen(const PairingGroup& group, Rng& rng) {
  LinKeypair kp;
  kp.sk.xh = group.random_scalar(rng);
  kp.sk.yh = group.random_scalar(rng);
  kp.pk.h = group.random_element(rng);
  kp.pk.u = kp.pk.h.pow(inverse_mod(kp.sk.xh, group.order()));
  kp.pk.v = kp.pk.h.pow(inverse_mod(kp.sk.yh, group.order()));
  return kp;
}

LinEncryption lin_encrypt(const LinPublicKey& pk, const G& message, Rng& rng) {
  const auto& group = pk.h.group();
  LinEncryption out;
  out.beta1 = group.random_scalar(rng);
  out.beta2 = group.random_scalar(rng);
  out.ct.c_hat = message * pk.h.pow(out.beta1 + out.beta2);
  out.ct.t1 = pk.u.pow(out.beta1);
  out.ct.t2 = pk.v.pow(out.beta2);
  return out;
}

G lin_decrypt(const LinSecretKey& sk, const LinCiphertext& ct) {
  return ct.c_hat / (ct.t1.pow(sk.xh) * ct.t2.pow(sk.yh));
}

Bytes DualProof::encode() const {
  const auto& group = r1.group();
  FieldWriter w;
  w.add(group.encode_scalar(c))
      .add(group.encode_scalar(s_b1))
      .add(group.encode_scalar(s_b2))
      .add(group.encode_scalar(s_y))
      .add(r1.encode())
      .add(r2.encode())
      .add(r3.encode());
  return w.take();
}

DualProof DualProof::decode(const PairingGroup& group, ByteView data) {
  FieldReader r(data);
  DualProof out;
  out.c = group.decode_scalar(r.next());
  out.s_b1 = group.decode_scalar(r.next());
  out.s_b2 = group.decode_scalar(r.next());
  out.s_y = group.decode_scalar(r.next());
  out.r1 = group.decode_g(r.next());
  out.r2 = group.decode_g(r.next());
  out.r3 = group.decode_gt(r.next());
  r.finish();
  return out;
}

namespace detail {

std::vector<Bytes> challenge_fields(const KpCiphertext& c1, const LinCiphertext& c2,
                                    const G& r1, const G& r2, const GT& r3, const G& X) {
  return {c1.y.encode(), c1.c.encode(), c2.c_hat.encode(), c2.t1.encode(), c2.t2.encode(),
          r1.encode(),   r2.encode(),   r3.encode(),       c2.t1.encode(), c2.t2.encode(),
          X.encode()};
}

mpz_class challenge_from_fields(const PairingGroup& group, std::span<const Bytes> fields) {
  FieldWriter w;
  w.add("EncProof");
  for (const auto& f : fields) w.add(f);
  return group.reduce(mpz_from_bytes(hash_h(w)));
}

DualProof enc_proof_with_order(const KpCiphertext& c1, const LinCiphertext& c2,
                               const mpz_class& beta1, const mpz_class& beta2,
                               const mpz_class& y, const G& recipient_X,
                               const LinPublicKey& lin_pk, Rng& rng,
                               std::span<const std::size_t> order, ByteView context) {
  const auto& group = lin_pk.h.group();
  const G& g = group.generator();
  mpz_class rb1 = group.random_scalar(rng);
  mpz_class rb2 = group.random_scalar(rng);
  mpz_class ry = group.random_scalar(rng);

  DualProof p;
  p.r1 = lin_pk.u.pow(rb1);
  p.r2 = lin_pk.v.pow(rb2);
  p.r3 = group.pair(lin_pk.h, g).pow(rb1 + rb2) * group.pair(recipient_X, g).pow(-ry);

  auto fields = challenge_fields(c1, c2, p.r1, p.r2, p.r3, recipient_X);
  std::vector<Bytes> ordered;
  ordered.reserve(order.size());
  for (auto i : order) ordered.push_back(fields.at(i));
  if (!context.empty()) ordered.push_back(to_bytes(context));
  p.c = challenge_from_fields(group, ordered);

  p.s_b1 = group.reduce(rb1 + p.c * beta1);
  p.s_b2 = group.reduce(rb2 + p.c * beta2);
  p.s_y = group.reduce(ry + p.c * y);
  return p;
}

}  // namespace detail

DualProof enc_proof(const KpCiphertext& c1, const LinCiphertext& c2, const mpz_class& beta1,
                    const mpz_class& beta2, const mpz_class& y, const G& recipient_X,
                    const LinPublicKey& lin_pk, Rng& rng, ByteView context) {
  std::vector<std::size_t> order(11);
  std::iota(order.begin(), order.end(), 0);
  return detail::enc_proof_with_order(c1, c2, beta1, beta2, y, recipient_X, lin_pk, rng, order,
                                      context);
}

bool enc_verify(const KpCiphertext& c1, const LinCiphertext& c2, const DualProof& proof,
                const G& recipient_X, const LinPublicKey& lin_pk, ByteView context) {
  try {
    if (!lin_pk.h.valid()) return false;
    const PairingGroup* grp = &lin_pk.h.group();
    if (!same_group(grp, {&c1.y, &c1.c, &c2.c_hat, &c2.t1, &c2.t2, &proof.r1, &proof.r2,
                          &recipient_X, &lin_pk.u, &lin_pk.v}) ||
        !proof.r3.valid() || &proof.r3.group() != grp) {
      return false;
    }
    const auto& group = *grp;
    const mpz_class& p = group.order();
    for (const mpz_class* s : {&proof.c, &proof.s_b1, &proof.s_b2, &proof.s_y}) {
      if (sgn(*s) < 0 || *s >= p) return false;
    }
    const G& g = group.generator();

    if (proof.r1 != lin_pk.u.pow(proof.s_b1) * c2.t1.pow(-proof.c)) return false;
    if (proof.r2 != lin_pk.v.pow(proof.s_b2) * c2.t2.pow(-proof.c)) return false;
    GT r3 = group.pair(lin_pk.h, g).pow(proof.s_b1 + proof.s_b2) *
            group.pair(recipient_X, g).pow(-proof.s_y) *
            group.pair(c1.c / c2.c_hat, g).pow(proof.c);
    if (proof.r3 != r3) return false;

    auto fields = detail::challenge_fields(c1, c2, proof.r1, proof.r2, proof.r3, recipient_X);
    if (!context.empty()) fields.push_back(to_bytes(context));
    return detail::challenge_from_fields(group, fields) == proof.c;
  } catch (const Error&) {
    return false;
  }
}

mpz_class payload_scalar_bound(const PairingGroup& group) {
  mpz_class cap = mpz_class(1) << (8 * (group.embed_capacity() - 2));
  return cap < group.order() ? cap : group.order();
}

G embed_payload(const PairingGroup& group, const mpz_class& scalar, std::uint16_t index) {
  if (sgn(scalar) < 0 || scalar >= payload_scalar_bound(group)) {
    throw InvalidArgument("payload scalar out of range");
  }
  Bytes payload = mpz_to_bytes(scalar, group.embed_capacity() - 2);
  put_u16(payload, index);
  return group.embed(payload);
}

std::pair<mpz_class, std::uint16_t> unembed_payload(const PairingGroup& group, const G& element) {
  Bytes payload = group.unembed(element);
  ByteView view(payload);
  std::size_t n = payload.size() - 2;
  return {mpz_from_bytes(view.first(n)), get_u16(view.subspan(n))};
}

}  // namespace graad
