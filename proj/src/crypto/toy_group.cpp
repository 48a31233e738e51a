// Exponent-representation bilinear group.
//
// G is Z_r written multiplicatively: the element g^a is stored as a. G_T is
// the order-r subgroup of Z_Q^* generated by z, and e(g^a, g^b) = z^(ab).
// Discrete logs in G are free, so this backend offers no security at all; it
// exists to run the full protocol stack quickly in tests.

#include "backends.hpp"
#include "graad/crypto/error.hpp"
#include "graad/crypto/hash.hpp"

namespace graad::detail {

namespace {

class ToyGroup final : public PairingGroup {
 public:
  ToyGroup() {
    mpz_class r = (mpz_class(1) << 127) - 1;
    modulus_ = 114 * r + 1;
    mpz_class exp = (modulus_ - 1) / r;
    mpz_powm(gt_gen_.get_mpz_t(), mpz_class(3).get_mpz_t(), exp.get_mpz_t(),
             modulus_.get_mpz_t());
    ElementRepr g;
    g.a = 1;
    init(r, g);
  }

  std::string_view name() const override { return "toy"; }
  std::size_t g_width() const override { return 16; }
  std::size_t gt_width() const override { return 17; }

  GT pair(const G& x, const G& y) const override {
    mpz_class e = reduce(x.repr().a * y.repr().a);
    ElementRepr out;
    mpz_powm(out.a.get_mpz_t(), gt_gen_.get_mpz_t(), e.get_mpz_t(),
             modulus_.get_mpz_t());
    return GT(this, out);
  }

  G hash_to_group(ByteView input) const override {
    for (unsigned ctr = 0; ctr < 256; ++ctr) {
      Bytes buf(input.begin(), input.end());
      buf.push_back(static_cast<std::uint8_t>(ctr));
      Digest d = sha256(buf);
      ElementRepr e;
      e.a = reduce(mpz_from_bytes(d));
      if (sgn(e.a) != 0) return G(this, e);
    }
    throw Error("hash_to_group: counter exhausted");
  }

  std::size_t embed_capacity() const override { return 15; }

  G embed(ByteView payload) const override {
    if (payload.size() != embed_capacity()) throw InvalidArgument("embed: wrong payload width");
    ElementRepr e;
    e.a = mpz_from_bytes(payload);
    return G(this, e);
  }

  Bytes unembed(const G& element) const override {
    const auto& a = element.repr().a;
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > embed_capacity() * 8) {
      throw DecodeError("element is not an embedded payload");
    }
    return mpz_to_bytes(a, embed_capacity());
  }

  G decode_g(ByteView data) const override {
    if (data.size() != g_width()) throw DecodeError("G element has wrong width");
    ElementRepr e;
    e.a = mpz_from_bytes(data);
    if (e.a >= order()) throw DecodeError("G element out of range");
    return G(this, e);
  }

  GT decode_gt(ByteView data) const override {
    if (data.size() != gt_width()) throw DecodeError("G_T element has wrong width");
    ElementRepr e;
    e.a = mpz_from_bytes(data);
    if (sgn(e.a) == 0 || e.a >= modulus_) throw DecodeError("G_T element out of range");
    mpz_class check;
    mpz_powm(check.get_mpz_t(), e.a.get_mpz_t(), order().get_mpz_t(),
             modulus_.get_mpz_t());
    if (check != 1) throw DecodeError("G_T element not in the order-p subgroup");
    return GT(this, e);
  }

  ElementRepr g_identity_repr() const override { return ElementRepr{}; }

  ElementRepr g_mul(const ElementRepr& x, const ElementRepr& y) const override {
    ElementRepr out;
    out.a = reduce(x.a + y.a);
    return out;
  }

  ElementRepr g_pow(const ElementRepr& x, const mpz_class& e) const override {
    ElementRepr out;
    out.a = reduce(x.a * e);
    return out;
  }

  ElementRepr g_inverse(const ElementRepr& x) const override {
    ElementRepr out;
    out.a = reduce(-x.a);
    return out;
  }

  Bytes g_encode(const ElementRepr& x) const override {
    return mpz_to_bytes(x.a, g_width());
  }

  ElementRepr gt_identity_repr() const override {
    ElementRepr e;
    e.a = 1;
    return e;
  }

  ElementRepr gt_mul(const ElementRepr& x, const ElementRepr& y) const override {
    ElementRepr out;
    out.a = (x.a * y.a) % modulus_;
    return out;
  }

  ElementRepr gt_pow(const ElementRepr& x, const mpz_class& e) const override {
    ElementRepr out;
    mpz_powm(out.a.get_mpz_t(), x.a.get_mpz_t(), e.get_mpz_t(), modulus_.get_mpz_t());
    return out;
  }

  ElementRepr gt_inverse(const ElementRepr& x) const override {
    ElementRepr out;
    if (mpz_invert(out.a.get_mpz_t(), x.a.get_mpz_t(), modulus_.get_mpz_t()) == 0) {
      throw InvalidArgument("G_T element not invertible");
    }
    return out;
  }

  Bytes gt_encode(const ElementRepr& x) const override {
    return mpz_to_bytes(x.a, gt_width());
  }

 private:
  mpz_class modulus_;
  mpz_class gt_gen_;
};

}  // namespace

GroupPtr toy_group() {
  static const auto instance = std::make_shared<const ToyGroup>();
  return instance;
}

}  // namespace graad::detail
