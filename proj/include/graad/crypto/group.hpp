#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "graad/crypto/bytes.hpp"
#include "graad/crypto/rng.hpp"

namespace graad {

class PairingGroup;

// Backend-defined coordinates of a group element. Elements are only created
// by a PairingGroup, which keeps the representation canonical so that
// equality is plain field comparison.
struct ElementRepr {
  mpz_class a;
  mpz_class b;
  bool infinity = false;
};

bool operator==(const ElementRepr& x, const ElementRepr& y);

// Element of the source group G (written multiplicatively).
class G {
 public:
  G() = default;
  G(const PairingGroup* group, ElementRepr repr)
      : group_(group), repr_(std::move(repr)) {}

  G operator*(const G& other) const;
  G operator/(const G& other) const;
  G pow(const mpz_class& exponent) const;
  G inverse() const;
  bool is_identity() const;
  Bytes encode() const;

  bool valid() const { return group_ != nullptr; }
  const PairingGroup& group() const;
  const ElementRepr& repr() const { return repr_; }

  friend bool operator==(const G& x, const G& y);

 private:
  const PairingGroup* group_ = nullptr;
  ElementRepr repr_;
};

// Element of the target group G_T.
class GT {
 public:
  GT() = default;
  GT(const PairingGroup* group, ElementRepr repr)
      : group_(group), repr_(std::move(repr)) {}

  GT operator*(const GT& other) const;
  GT operator/(const GT& other) const;
  GT pow(const mpz_class& exponent) const;
  GT inverse() const;
  bool is_identity() const;
  Bytes encode() const;

  bool valid() const { return group_ != nullptr; }
  const PairingGroup& group() const;
  const ElementRepr& repr() const { return repr_; }

  friend bool operator==(const GT& x, const GT& y);

 private:
  const PairingGroup* group_ = nullptr;
  ElementRepr repr_;
};

// Symmetric bilinear group (G, G_T, e) of prime order p with generator g.
//
// Implementations must keep element encodings fixed-width, reject
// non-members on decode, and provide an invertible embedding of
// embed_capacity() bytes into G.
class PairingGroup {
 public:
  virtual ~PairingGroup() = default;
  PairingGroup(const PairingGroup&) = delete;
  PairingGroup& operator=(const PairingGroup&) = delete;

  virtual std::string_view name() const = 0;

  const mpz_class& order() const { return order_; }
  const G& generator() const { return generator_; }
  G identity() const;
  GT gt_identity() const;

  std::size_t scalar_width() const { return byte_width(order_); }
  virtual std::size_t g_width() const = 0;
  virtual std::size_t gt_width() const = 0;

  virtual GT pair(const G& x, const G& y) const = 0;

  // Deterministic map into G* (try-and-increment, at most 256 attempts).
  virtual G hash_to_group(ByteView input) const = 0;

  virtual std::size_t embed_capacity() const = 0;
  virtual G embed(ByteView payload) const = 0;
  virtual Bytes unembed(const G& element) const = 0;

  virtual G decode_g(ByteView data) const = 0;
  virtual GT decode_gt(ByteView data) const = 0;

  mpz_class random_scalar(Rng& rng) const { return rng.nonzero_below(order_); }
  G random_element(Rng& rng) const { return generator_.pow(random_scalar(rng)); }

  mpz_class reduce(const mpz_class& v) const;
  Bytes encode_scalar(const mpz_class& v) const;
  // Rejects values >= p.
  mpz_class decode_scalar(ByteView data) const;

  // Arithmetic hooks used by G / GT.
  virtual ElementRepr g_identity_repr() const = 0;
  virtual ElementRepr g_mul(const ElementRepr& x, const ElementRepr& y) const = 0;
  virtual ElementRepr g_pow(const ElementRepr& x, const mpz_class& e) const = 0;
  virtual ElementRepr g_inverse(const ElementRepr& x) const = 0;
  virtual Bytes g_encode(const ElementRepr& x) const = 0;

  virtual ElementRepr gt_identity_repr() const = 0;
  virtual ElementRepr gt_mul(const ElementRepr& x, const ElementRepr& y) const = 0;
  virtual ElementRepr gt_pow(const ElementRepr& x, const mpz_class& e) const = 0;
  virtual ElementRepr gt_inverse(const ElementRepr& x) const = 0;
  virtual Bytes gt_encode(const ElementRepr& x) const = 0;

 protected:
  PairingGroup() = default;
  void init(mpz_class order, ElementRepr generator);

 private:
  mpz_class order_;
  G generator_;
};

using GroupPtr = std::shared_ptr<const PairingGroup>;

// Backends by name: "toy" (exponent representation, insecure, fast) and
// "a512" (Type-A supersingular curve over a 512-bit prime field).
GroupPtr make_group(std::string_view name);
std::vector<std::string> group_names();

}  // namespace graad
