#include "graad/crypto/group.hpp"

#include "backends.hpp"
#include "graad/crypto/error.hpp"

namespace graad {

bool operator==(const ElementRepr& x, const ElementRepr& y) {
  if (x.infinity || y.infinity) return x.infinity == y.infinity;
  return x.a == y.a && x.b == y.b;
}

namespace {

void require_same(const PairingGroup* a, const PairingGroup* b) {
  if (a == nullptr || b == nullptr) throw InvalidArgument("uninitialised group element");
  if (a != b) throw InvalidArgument("elements belong to different groups");
}

}  // namespace

const PairingGroup& G::group() const {
  if (group_ == nullptr) throw InvalidArgument("uninitialised group element");
  return *group_;
}

G G::operator*(const G& other) const {
  require_same(group_, other.group_);
  return G(group_, group_->g_mul(repr_, other.repr_));
}

G G::operator/(const G& other) const { return *this * other.inverse(); }

G G::pow(const mpz_class& exponent) const {
  const auto& grp = group();
  return G(group_, grp.g_pow(repr_, grp.reduce(exponent)));
}

G G::inverse() const { return G(group_, group().g_inverse(repr_)); }

bool G::is_identity() const { return repr_ == group().g_identity_repr(); }

Bytes G::encode() const { return group().g_encode(repr_); }

bool operator==(const G& x, const G& y) {
  return x.group_ == y.group_ && x.repr_ == y.repr_;
}

const PairingGroup& GT::group() const {
  if (group_ == nullptr) throw InvalidArgument("uninitialised target-group element");
  return *group_;
}

GT GT::operator*(const GT& other) const {
  require_same(group_, other.group_);
  return GT(group_, group_->gt_mul(repr_, other.repr_));
}

GT GT::operator/(const GT& other) const { return *this * other.inverse(); }

GT GT::pow(const mpz_class& exponent) const {
  const auto& grp = group();
  return GT(group_, grp.gt_pow(repr_, grp.reduce(exponent)));
}

GT GT::inverse() const { return GT(group_, group().gt_inverse(repr_)); }

bool GT::is_identity() const { return repr_ == group().gt_identity_repr(); }

Bytes GT::encode() const { return group().gt_encode(repr_); }

bool operator==(const GT& x, const GT& y) {
  return x.group_ == y.group_ && x.repr_ == y.repr_;
}

void PairingGroup::init(mpz_class order, ElementRepr generator) {
  order_ = std::move(order);
  generator_ = G(this, std::move(generator));
}

G PairingGroup::identity() const { return G(this, g_identity_repr()); }

GT PairingGroup::gt_identity() const { return GT(this, gt_identity_repr()); }

mpz_class PairingGroup::reduce(const mpz_class& v) const {
  mpz_class out;
  mpz_mod(out.get_mpz_t(), v.get_mpz_t(), order_.get_mpz_t());
  return out;
}

Bytes PairingGroup::encode_scalar(const mpz_class& v) const {
  return mpz_to_bytes(reduce(v), scalar_width());
}

mpz_class PairingGroup::decode_scalar(ByteView data) const {
  if (data.size() != scalar_width()) throw DecodeError("scalar has wrong width");
  mpz_class v = mpz_from_bytes(data);
  if (v >= order_) throw DecodeError("scalar not reduced modulo the group order");
  return v;
}

GroupPtr make_group(std::string_view name) {
  if (name == "toy") return detail::toy_group();
  if (name == "a512") return detail::type_a_group();
  throw InvalidArgument("unknown pairing backend: " + std::string(name));
}

std::vector<std::string> group_names() { return {"toy", "a512"}; }

}  // namespace graad
