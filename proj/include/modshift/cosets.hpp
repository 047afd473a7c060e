#pragma once

#include "modshift/psl2.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace modshift {

// Index of a right coset G e of G = Gamma_0(N) in Gamma, i.e. of a point of P1(Z/N).
using CosetLabel = std::size_t;

// A point (c : d) of P1(Z/N), stored in normal form: the lexicographically
// least pair among all unit multiples (u c, u d) mod N.
struct P1Point {
  std::int64_t c = 0;
  std::int64_t d = 1;

  friend bool operator==(const P1Point&, const P1Point&) = default;
  friend auto operator<=>(const P1Point&, const P1Point&) = default;
};

// Normal form of (c : d) mod N. Throws Error("NotProjective") when
// gcd(c, d, N) != 1 and Error("LevelZero") when N < 1.
P1Point normalize_p1(std::int64_t c, std::int64_t d, std::int64_t level);

// The coset space Gamma_0(N) \ PSL2(Z). A coset is determined by the bottom
// row of any of its matrices, read mod N up to units.
class CosetTable {
 public:
  // Throws Error("LevelZero") for N < 1.
  explicit CosetTable(std::int64_t level);

  std::int64_t level() const { return level_; }
  std::size_t size() const { return reps_.size(); }
  const std::vector<P1Point>& reps() const { return reps_; }
  const P1Point& rep(CosetLabel e) const { return reps_.at(e); }

  // Label of the class of (c : d); any integers with gcd(c, d, N) = 1.
  CosetLabel label_of(std::int64_t c, std::int64_t d) const;
  CosetLabel label_of(const P1Point& p) const { return label_of(p.c, p.d); }

  // Coset G m of a matrix m.
  CosetLabel coset_of(const MoebiusMatrix& m) const;

  // tau_k(e) = coset of e S T^k, i.e. (c : d) -> (d : k d - c).
  // Throws Error("ZeroDigit") for k == 0.
  CosetLabel tau(const Integer& k, CosetLabel e) const;
  CosetLabel tau(std::int64_t k, CosetLabel e) const;
  // Same action indexed by the residue r = k mod N (r in [0, N)); no zero check.
  CosetLabel tau_residue(std::int64_t r, CosetLabel e) const {
    return tau_[static_cast<std::size_t>(r) * reps_.size() + e];
  }
  // Inverse of tau_residue(r, .).
  CosetLabel tau_residue_inverse(std::int64_t r, CosetLabel e) const {
    return tau_inv_[static_cast<std::size_t>(r) * reps_.size() + e];
  }

  // Right multiplication by the generators.
  CosetLabel right_S(CosetLabel e) const;   // (c : d) -> (d : -c)
  CosetLabel right_T(CosetLabel e) const;   // (c : d) -> (c : c + d)
  CosetLabel right_ST(CosetLabel e) const;  // (c : d) -> (d : d - c)

  std::int64_t residue(const Integer& k) const;
  std::int64_t residue(std::int64_t k) const;

 private:
  std::int64_t level_;
  std::vector<P1Point> reps_;
  std::vector<std::int32_t> lookup_;  // (c mod N) * N + (d mod N) -> label, -1 if not projective
  std::vector<CosetLabel> tau_;       // r * size + e
  std::vector<CosetLabel> tau_inv_;
};

inline CosetTable build_coset_table(std::int64_t level) { return CosetTable(level); }

struct SubgroupInvariants {
  std::int64_t kappa = 0;  // index [Gamma : Gamma_0(N)]
  std::int64_t n2 = 0;     // inequivalent elliptic points of order 2
  std::int64_t n3 = 0;     // inequivalent elliptic points of order 3
  std::int64_t n_inf = 0;  // cusps
  std::int64_t genus = 0;

  friend bool operator==(const SubgroupInvariants&, const SubgroupInvariants&) = default;
};

// Closed forms in terms of the prime factorisation of N. Throws
// Error("LevelZero") for N < 1 and Error("GenusNotIntegral") if the
// Riemann-Hurwitz combination fails to be a nonnegative integer.
SubgroupInvariants subgroup_invariants(std::int64_t level);

// Helpers shared with the closed forms.
std::int64_t euler_phi(std::int64_t n);
std::vector<std::int64_t> prime_divisors(std::int64_t n);
// Kronecker symbol (D | p) for a prime p and D in {-3, -4}.
int kronecker_symbol(std::int64_t discriminant, std::int64_t prime);

}  // namespace modshift
