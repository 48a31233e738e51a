#include "graad/handshake/select.hpp"

#include "graad/crypto/error.hpp"

namespace graad {

namespace {

constexpr std::uint64_t kEta1 = 0;
constexpr std::uint64_t kGroupPoint = 1;
constexpr std::uint64_t kEta2 = 2;
constexpr std::uint64_t kUserPoint = 3;

Digest digest_of(std::string_view tag, const std::vector<std::size_t>& values) {
  FieldWriter w;
  w.add(tag);
  for (auto v : values) w.add_u64(v);
  return hash_h(w);
}

std::size_t evaluate(const PairingGroup& group, const mpz_class& eta, const mpz_class& x,
                     const mpz_class& theta, std::size_t modulus) {
  mpz_class y = group.reduce(eta * x + theta);
  return mpz_class(y % static_cast<unsigned long>(modulus)).get_ui();
}

// theta with y = eta * x + theta (mod p), where y = target + r * modulus for a
// random r in {0..floor((p+1)/modulus)}. Draws that overflow p are redrawn so
// y mod modulus stays equal to target.
mpz_class solve_theta(const PairingGroup& group, const mpz_class& eta, const mpz_class& x,
                      std::size_t target, std::size_t modulus, Rng& rng) {
  const mpz_class& p = group.order();
  mpz_class r_bound = (p + 1) / static_cast<unsigned long>(modulus) + 1;
  mpz_class y;
  do {
    y = target + rng.below(r_bound) * static_cast<unsigned long>(modulus);
  } while (y >= p);
  return group.reduce(y - eta * x);
}

std::size_t group_size(const GroupDirectory& dir, std::size_t z, std::size_t s_z) {
  std::size_t n = dir.group(GroupSlot{z, s_z}).members.size();
  if (n == 0) throw InvalidArgument("selected group has no members");
  return n;
}

}  // namespace

GroupSelection g_select(const GroupDirectory& dir, const PairingGroup& group,
                        const GroupSlot& self, const Nonces& n, Rng& rng) {
  std::size_t cs = dir.chunk_size();
  if (self.chunk >= dir.w() || self.sub >= cs) throw InvalidArgument("own group slot out of range");

  mpz_class eta = prf_f1(group, n.u, n.v, {kEta1});
  mpz_class x = prf_f1(group, n.u, n.v, {kGroupPoint, self.chunk});
  GroupSelection out;
  out.theta1 = solve_theta(group, eta, x, self.sub, cs, rng);

  std::vector<std::size_t> s(dir.w());
  for (std::size_t z = 0; z < dir.w(); ++z) {
    s[z] = z == self.chunk ? self.sub
                           : evaluate(group, eta, prf_f1(group, n.u, n.v, {kGroupPoint, z}),
                                      out.theta1, cs);
  }
  out.sigma_g = digest_of("sigma_g", s);
  return out;
}

std::vector<std::size_t> g_select_verify(const GroupDirectory& dir, const PairingGroup& group,
                                         const Nonces& n, const GroupSelection& sel) {
  if (sgn(sel.theta1) < 0 || sel.theta1 >= group.order()) throw VerifyError("theta1 out of range");
  mpz_class eta = prf_f1(group, n.u, n.v, {kEta1});
  std::vector<std::size_t> s(dir.w());
  for (std::size_t z = 0; z < dir.w(); ++z) {
    s[z] = evaluate(group, eta, prf_f1(group, n.u, n.v, {kGroupPoint, z}), sel.theta1,
                    dir.chunk_size());
  }
  if (digest_of("sigma_g", s) != sel.sigma_g) throw VerifyError("group selection digest mismatch");
  return s;
}

UserSelection u_select(const GroupDirectory& dir, const PairingGroup& group,
                       const std::vector<std::size_t>& s, std::size_t a, std::size_t lambda,
                       const Nonces& n, Rng& rng) {
  if (s.size() != dir.w() || a >= dir.w()) throw InvalidArgument("bad selection vector");
  std::size_t own_size = group_size(dir, a, s[a]);
  if (lambda >= own_size) throw InvalidArgument("member index out of range");

  mpz_class eta = prf_f1(group, n.u, n.v, {kEta2});
  mpz_class x = prf_f1(group, n.u, n.v, {kUserPoint, a, s[a]});
  UserSelection out;
  out.theta2 = solve_theta(group, eta, x, lambda, own_size, rng);

  std::vector<std::size_t> lam(dir.w());
  for (std::size_t z = 0; z < dir.w(); ++z) {
    lam[z] = z == a ? lambda
                    : evaluate(group, eta, prf_f1(group, n.u, n.v, {kUserPoint, z, s[z]}),
                               out.theta2, group_size(dir, z, s[z]));
  }
  out.sigma_u = digest_of("sigma_u", lam);
  return out;
}

SelectedCandidates u_select_verify(const GroupDirectory& dir, const PairingGroup& group,
                                   const Nonces& n, const std::vector<std::size_t>& s,
                                   const UserSelection& sel) {
  if (s.size() != dir.w()) throw InvalidArgument("bad selection vector");
  if (sgn(sel.theta2) < 0 || sel.theta2 >= group.order()) throw VerifyError("theta2 out of range");
  mpz_class eta = prf_f1(group, n.u, n.v, {kEta2});
  SelectedCandidates out;
  out.s = s;
  out.lambda.resize(dir.w());
  for (std::size_t z = 0; z < dir.w(); ++z) {
    out.lambda[z] = evaluate(group, eta, prf_f1(group, n.u, n.v, {kUserPoint, z, s[z]}),
                             sel.theta2, group_size(dir, z, s[z]));
  }
  if (digest_of("sigma_u", out.lambda) != sel.sigma_u) {
    throw VerifyError("user selection digest mismatch");
  }
  for (std::size_t z = 0; z < dir.w(); ++z) {
    out.labels.push_back(dir.group(GroupSlot{z, s[z]}).members[out.lambda[z]]);
  }
  return out;
}

Bytes encode_selections(const PairingGroup& group, const GroupSelection& g,
                        const UserSelection& u) {
  return concat({group.encode_scalar(g.theta1), g.sigma_g, group.encode_scalar(u.theta2),
                 u.sigma_u});
}

}  // namespace graad
