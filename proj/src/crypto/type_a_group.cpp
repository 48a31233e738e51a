// Type-A symmetric pairing on the supersingular curve E: y^2 = x^3 + x over
// F_q with q = 4r - 1 (q = 3 mod 4, #E(F_q) = q + 1 = 4r). G is the order-r
// subgroup, G_T the order-r subgroup of F_q^2 = F_q[i]/(i^2 + 1), and
// e(P, Q) is the reduced Tate pairing f_{r,P}(phi(Q))^((q^2-1)/r) with the
// distortion map phi(x, y) = (-x, i*y).
//
// The cofactor is 4, so roughly one in eight candidate x-coordinates lands in
// G. That keeps hash-to-group and the payload embedding cheap while leaving
// the embedding invertible (the payload is read back from the x-coordinate).

#include "backends.hpp"
#include "graad/crypto/error.hpp"
#include "graad/crypto/hash.hpp"

namespace graad::detail {

namespace {

constexpr const char* kOrderHex =
    "3460d1455ca5307a3d07a6f979afc41796c94ed155166ec5058fc9d3b02bb180"
    "a494c52bcc13d5758a0e360c4068d7b3a268e377bb6f632a248c06026c95de15";

constexpr std::size_t kFieldBytes = 64;

struct Fq2 {
  mpz_class re;
  mpz_class im;
};

struct Jacobian {
  mpz_class x;
  mpz_class y;
  mpz_class z;  // z == 0 is the point at infinity
};

class TypeAGroup final : public PairingGroup {
 public:
  TypeAGroup() {
    mpz_class r(kOrderHex, 16);
    q_ = 4 * r - 1;
    sqrt_exp_ = (q_ + 1) / 4;
    order_copy_ = r;
    capacity_ = (mpz_sizeinbase(q_.get_mpz_t(), 2) - 1 - 8) / 8;
    Bytes tag = to_bytes(std::string_view("graad/a512/generator"));
    ElementRepr g = hash_to_point(tag);
    init(r, g);
  }

  std::string_view name() const override { return "a512"; }
  std::size_t g_width() const override { return 1 + kFieldBytes; }
  std::size_t gt_width() const override { return 2 * kFieldBytes; }

  GT pair(const G& x, const G& y) const override {
    const auto& p = x.repr();
    const auto& q = y.repr();
    if (p.infinity || q.infinity) return gt_identity();
    return GT(this, to_repr(final_exponentiation(miller(p, q))));
  }

  G hash_to_group(ByteView input) const override { return G(this, hash_to_point(input)); }

  std::size_t embed_capacity() const override { return capacity_; }

  G embed(ByteView payload) const override {
    if (payload.size() != capacity_) throw InvalidArgument("embed: wrong payload width");
    mpz_class base = mpz_from_bytes(payload) << 8;
    for (unsigned ctr = 0; ctr < 256; ++ctr) {
      mpz_class x = base + ctr;
      mpz_class y;
      if (!lift_x(x, y)) continue;
      if (mpz_odd_p(y.get_mpz_t())) y = q_ - y;
      ElementRepr p{x, y, false};
      if (in_subgroup(p)) return G(this, p);
    }
    throw Error("embed: no subgroup point found for payload");
  }

  Bytes unembed(const G& element) const override {
    const auto& p = element.repr();
    if (p.infinity) throw DecodeError("identity carries no payload");
    mpz_class v = p.a >> 8;
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > capacity_ * 8) {
      throw DecodeError("element is not an embedded payload");
    }
    return mpz_to_bytes(v, capacity_);
  }

  G decode_g(ByteView data) const override {
    if (data.size() != g_width()) throw DecodeError("G element has wrong width");
    auto tag = data[0];
    auto body = data.subspan(1);
    if (tag == 0x00) {
      for (auto b : body) {
        if (b != 0) throw DecodeError("non-canonical identity encoding");
      }
      return identity();
    }
    if (tag != 0x02 && tag != 0x03) throw DecodeError("bad G element tag");
    mpz_class x = mpz_from_bytes(body);
    if (x >= q_) throw DecodeError("x-coordinate out of range");
    mpz_class y;
    if (!lift_x(x, y)) throw DecodeError("x-coordinate not on the curve");
    if (sgn(y) == 0) throw DecodeError("point of order two");
    if (static_cast<unsigned>(mpz_odd_p(y.get_mpz_t()) ? 1 : 0) != (tag & 1u)) y = q_ - y;
    ElementRepr p{x, y, false};
    if (!in_subgroup(p)) throw DecodeError("point outside the prime-order subgroup");
    return G(this, p);
  }

  GT decode_gt(ByteView data) const override {
    if (data.size() != gt_width()) throw DecodeError("G_T element has wrong width");
    Fq2 v{mpz_from_bytes(data.subspan(0, kFieldBytes)),
          mpz_from_bytes(data.subspan(kFieldBytes))};
    if (v.re >= q_ || v.im >= q_) throw DecodeError("G_T coordinate out of range");
    if (sgn(v.re) == 0 && sgn(v.im) == 0) throw DecodeError("zero is not in G_T");
    Fq2 check = fq2_pow(v, order_copy_);
    if (check.re != 1 || sgn(check.im) != 0) {
      throw DecodeError("G_T element not in the order-p subgroup");
    }
    return GT(this, to_repr(v));
  }

  ElementRepr g_identity_repr() const override {
    ElementRepr e;
    e.infinity = true;
    return e;
  }

  ElementRepr g_mul(const ElementRepr& x, const ElementRepr& y) const override {
    if (x.infinity) return y;
    return to_affine(add_mixed(to_jacobian(x), y));
  }

  ElementRepr g_pow(const ElementRepr& x, const mpz_class& e) const override {
    return to_affine(scalar_mul(x, e));
  }

  ElementRepr g_inverse(const ElementRepr& x) const override {
    if (x.infinity || sgn(x.b) == 0) return x;
    return ElementRepr{x.a, q_ - x.b, false};
  }

  Bytes g_encode(const ElementRepr& x) const override {
    Bytes out(g_width(), 0);
    if (x.infinity) return out;
    out[0] = mpz_odd_p(x.b.get_mpz_t()) ? 0x03 : 0x02;
    Bytes xb = mpz_to_bytes(x.a, kFieldBytes);
    std::copy(xb.begin(), xb.end(), out.begin() + 1);
    return out;
  }

  ElementRepr gt_identity_repr() const override {
    ElementRepr e;
    e.a = 1;
    e.b = 0;
    return e;
  }

  ElementRepr gt_mul(const ElementRepr& x, const ElementRepr& y) const override {
    return to_repr(fq2_mul(from_repr(x), from_repr(y)));
  }

  ElementRepr gt_pow(const ElementRepr& x, const mpz_class& e) const override {
    return to_repr(fq2_pow(from_repr(x), e));
  }

  // Order-r elements of F_q^2 have norm one, so the inverse is the conjugate.
  ElementRepr gt_inverse(const ElementRepr& x) const override {
    return ElementRepr{x.a, fmod(-x.b), false};
  }

  Bytes gt_encode(const ElementRepr& x) const override {
    Bytes out = mpz_to_bytes(x.a, kFieldBytes);
    Bytes im = mpz_to_bytes(x.b, kFieldBytes);
    out.insert(out.end(), im.begin(), im.end());
    return out;
  }

 private:
  mpz_class fmod(const mpz_class& v) const {
    mpz_class out;
    mpz_mod(out.get_mpz_t(), v.get_mpz_t(), q_.get_mpz_t());
    return out;
  }

  // Finds y with y^2 = x^3 + x; false if x^3 + x is a non-residue.
  bool lift_x(const mpz_class& x, mpz_class& y) const {
    if (x >= q_) return false;
    mpz_class rhs = fmod(x * x * x + x);
    mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), sqrt_exp_.get_mpz_t(), q_.get_mpz_t());
    return fmod(y * y) == rhs;
  }

  bool in_subgroup(const ElementRepr& p) const {
    return scalar_mul(p, order_copy_).z == 0;
  }

  ElementRepr hash_to_point(ByteView input) const {
    for (unsigned ctr = 0; ctr < 256; ++ctr) {
      Bytes wide;
      for (std::uint8_t half = 0; half < 2; ++half) {
        Bytes buf(input.begin(), input.end());
        buf.push_back(static_cast<std::uint8_t>(ctr));
        buf.push_back(half);
        Digest d = sha256(buf);
        wide.insert(wide.end(), d.begin(), d.end());
      }
      mpz_class x = fmod(mpz_from_bytes(wide));
      mpz_class y;
      if (!lift_x(x, y) || sgn(y) == 0) continue;
      if ((wide[0] & 1) != (mpz_odd_p(y.get_mpz_t()) ? 1 : 0)) y = q_ - y;
      Jacobian p = to_jacobian(ElementRepr{x, y, false});
      p = dbl(dbl(p));
      if (p.z == 0) continue;
      return to_affine(p);
    }
    throw Error("hash_to_group: counter exhausted");
  }

  Jacobian to_jacobian(const ElementRepr& p) const {
    if (p.infinity) return Jacobian{1, 1, 0};
    return Jacobian{p.a, p.b, 1};
  }

  ElementRepr to_affine(const Jacobian& p) const {
    if (p.z == 0) return g_identity_repr();
    mpz_class zinv;
    mpz_invert(zinv.get_mpz_t(), p.z.get_mpz_t(), q_.get_mpz_t());
    mpz_class zinv2 = fmod(zinv * zinv);
    return ElementRepr{fmod(p.x * zinv2), fmod(p.y * zinv2 * zinv), false};
  }

  Jacobian dbl(const Jacobian& p) const {
    if (p.z == 0 || sgn(p.y) == 0) return Jacobian{1, 1, 0};
    mpz_class xx = fmod(p.x * p.x);
    mpz_class yy = fmod(p.y * p.y);
    mpz_class yyyy = fmod(yy * yy);
    mpz_class zz = fmod(p.z * p.z);
    mpz_class s = fmod(4 * p.x * yy);
    mpz_class m = fmod(3 * xx + zz * zz);
    Jacobian out;
    out.x = fmod(m * m - 2 * s);
    out.y = fmod(m * (s - out.x) - 8 * yyyy);
    out.z = fmod(2 * p.y * p.z);
    return out;
  }

  Jacobian add_mixed(const Jacobian& p, const ElementRepr& q) const {
    if (q.infinity) return p;
    if (p.z == 0) return to_jacobian(q);
    mpz_class z1z1 = fmod(p.z * p.z);
    mpz_class u2 = fmod(q.a * z1z1);
    mpz_class s2 = fmod(q.b * p.z * z1z1);
    mpz_class h = fmod(u2 - p.x);
    mpz_class rr = fmod(s2 - p.y);
    if (sgn(h) == 0) {
      if (sgn(rr) == 0) return dbl(p);
      return Jacobian{1, 1, 0};
    }
    mpz_class hh = fmod(h * h);
    mpz_class hhh = fmod(h * hh);
    mpz_class v = fmod(p.x * hh);
    Jacobian out;
    out.x = fmod(rr * rr - hhh - 2 * v);
    out.y = fmod(rr * (v - out.x) - p.y * hhh);
    out.z = fmod(p.z * h);
    return out;
  }

  // Fixed 4-bit window over affine precomputed multiples.
  Jacobian scalar_mul(const ElementRepr& p, const mpz_class& k) const {
    Jacobian acc{1, 1, 0};
    if (p.infinity || sgn(k) == 0) return acc;
    std::array<ElementRepr, 16> table;
    table[0] = g_identity_repr();
    table[1] = p;
    Jacobian run = to_jacobian(p);
    for (std::size_t i = 2; i < table.size(); ++i) {
      run = add_mixed(run, p);
      table[i] = to_affine(run);
    }
    std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
    std::size_t windows = (bits + 3) / 4;
    for (std::size_t w = windows; w-- > 0;) {
      if (acc.z != 0) acc = dbl(dbl(dbl(dbl(acc))));
      unsigned digit = 0;
      for (int b = 3; b >= 0; --b) {
        digit = (digit << 1) | mpz_tstbit(k.get_mpz_t(), w * 4 + static_cast<std::size_t>(b));
      }
      if (digit != 0) acc = add_mixed(acc, table[digit]);
    }
    return acc;
  }

  Fq2 fq2_mul(const Fq2& x, const Fq2& y) const {
    mpz_class ac = x.re * y.re;
    mpz_class bd = x.im * y.im;
    mpz_class cross = (x.re + x.im) * (y.re + y.im);
    return Fq2{fmod(ac - bd), fmod(cross - ac - bd)};
  }

  Fq2 fq2_sqr(const Fq2& x) const {
    return Fq2{fmod((x.re + x.im) * (x.re - x.im)), fmod(2 * x.re * x.im)};
  }

  Fq2 fq2_pow(const Fq2& x, const mpz_class& e) const {
    Fq2 acc{1, 0};
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (sgn(e) == 0) return acc;
    for (std::size_t i = bits; i-- > 0;) {
      acc = fq2_sqr(acc);
      if (mpz_tstbit(e.get_mpz_t(), i)) acc = fq2_mul(acc, x);
    }
    return acc;
  }

  // Miller loop for f_{r,P} evaluated at phi(Q). Line functions are scaled
  // by F_q factors, which the final exponentiation removes; vertical lines
  // are dropped for the same reason.
  Fq2 miller(const ElementRepr& p, const ElementRepr& q) const {
    Fq2 f{1, 0};
    Jacobian t = to_jacobian(p);
    const mpz_class& r = order_copy_;
    std::size_t bits = mpz_sizeinbase(r.get_mpz_t(), 2);
    for (std::size_t i = bits - 1; i-- > 0;) {
      mpz_class zz = fmod(t.z * t.z);
      mpz_class n = fmod(3 * t.x * t.x + zz * zz);
      Fq2 line{fmod(n * (q.a * zz + t.x) - 2 * t.y * t.y),
               fmod(2 * q.b * t.y * zz * t.z)};
      f = fq2_mul(fq2_sqr(f), line);
      t = dbl(t);
      if (mpz_tstbit(r.get_mpz_t(), i)) {
        mpz_class zz2 = fmod(t.z * t.z);
        mpz_class a = fmod(p.b * t.z * zz2 - t.y);
        mpz_class b = fmod(t.z * (p.a * zz2 - t.x));
        if (sgn(b) != 0) {
          Fq2 add_line{fmod(a * (q.a + p.a) - p.b * b), fmod(q.b * b)};
          f = fq2_mul(f, add_line);
        }
        t = add_mixed(t, p);
      }
    }
    return f;
  }

  // f^((q^2 - 1) / r) = (conj(f) / f)^4.
  Fq2 final_exponentiation(const Fq2& f) const {
    mpz_class norm = fmod(f.re * f.re + f.im * f.im);
    mpz_class ninv;
    mpz_invert(ninv.get_mpz_t(), norm.get_mpz_t(), q_.get_mpz_t());
    Fq2 inv{fmod(f.re * ninv), fmod(-f.im * ninv)};
    Fq2 conj{f.re, fmod(-f.im)};
    Fq2 g = fq2_mul(conj, inv);
    return fq2_sqr(fq2_sqr(g));
  }

  static Fq2 from_repr(const ElementRepr& e) { return Fq2{e.a, e.b}; }
  static ElementRepr to_repr(const Fq2& v) { return ElementRepr{v.re, v.im, false}; }

  mpz_class q_;
  mpz_class sqrt_exp_;
  mpz_class order_copy_;
  std::size_t capacity_ = 0;
};

}  // namespace

GroupPtr type_a_group() {
  static const auto instance = std::make_shared<const TypeAGroup>();
  return instance;
}

}  // namespace graad::detail
