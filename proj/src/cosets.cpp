#include "modshift/cosets.hpp"

#include "modshift/error.hpp"

#include <numeric>
#include <string>

namespace modshift {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

void require_level(std::int64_t level) {
  if (level < 1) throw Error("LevelZero", "level must be positive, got " + std::to_string(level));
}

}  // namespace

P1Point normalize_p1(std::int64_t c, std::int64_t d, std::int64_t level) {
  require_level(level);
  const std::int64_t n = level;
  c = mod(c, n);
  d = mod(d, n);
  if (n == 1) return {0, 0};
  if (std::gcd(std::gcd(c, d), n) != 1) {
    throw Error("NotProjective", "(" + std::to_string(c) + ":" + std::to_string(d) +
                                     ") is not a point of P1(Z/" + std::to_string(n) + ")");
  }
  // The least unit multiple of c is g = gcd(c, N). The units u with
  // u c = g (mod N) form one class u0 + j N/g; among them pick the least u d.
  const std::int64_t g = std::gcd(c, n);
  const std::int64_t m = n / g;
  std::int64_t u0 = 1;
  if (c != 0) {
    // Solve (c/g) u0 = 1 (mod m).
    const std::int64_t cg = (c / g) % m;
    std::int64_t t0 = 0, t1 = 1, r0 = m, r1 = cg;
    while (r1 != 0) {
      std::int64_t q = r0 / r1;
      std::int64_t tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
      tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
    }
    u0 = mod(t0, m);
    if (m == 1) u0 = 0;
  }
  P1Point best{-1, -1};
  for (std::int64_t j = 0; j < g; ++j) {
    const std::int64_t u = u0 + j * m;
    if (std::gcd(u, n) != 1) continue;
    const std::int64_t cand_d = static_cast<std::int64_t>((static_cast<__int128>(u) * d) % n);
    if (best.d < 0 || cand_d < best.d) best = {c == 0 ? 0 : g, cand_d};
  }
  return best;
}

CosetTable::CosetTable(std::int64_t level) : level_(level) {
  require_level(level);
  const std::int64_t n = level;
  lookup_.assign(static_cast<std::size_t>(n * n), -1);
  if (n == 1) {
    reps_.push_back({0, 0});
    lookup_[0] = 0;
  } else {
    // Lexicographic sweep: the normal form of a class is its least member,
    // so it is always met before the rest of its class.
    for (std::int64_t c = 0; c < n; ++c) {
      for (std::int64_t d = 0; d < n; ++d) {
        if (std::gcd(std::gcd(c, d), n) != 1) continue;
        const P1Point p = normalize_p1(c, d, n);
        const auto key = static_cast<std::size_t>(c * n + d);
        if (p.c == c && p.d == d) {
          lookup_[key] = static_cast<std::int32_t>(reps_.size());
          reps_.push_back(p);
        } else {
          lookup_[key] = lookup_[static_cast<std::size_t>(p.c * n + p.d)];
        }
      }
    }
  }

  const std::size_t size = reps_.size();
  tau_.resize(static_cast<std::size_t>(n) * size);
  tau_inv_.resize(tau_.size());
  for (std::int64_t r = 0; r < n; ++r) {
    for (CosetLabel e = 0; e < size; ++e) {
      const P1Point& p = reps_[e];
      const CosetLabel target = label_of(p.d, r * p.d - p.c);
      tau_[static_cast<std::size_t>(r) * size + e] = target;
      tau_inv_[static_cast<std::size_t>(r) * size + target] = e;
    }
  }
}

CosetLabel CosetTable::label_of(std::int64_t c, std::int64_t d) const {
  const std::int64_t n = level_;
  const std::int32_t label = lookup_[static_cast<std::size_t>(mod(c, n) * n + mod(d, n))];
  if (label < 0) {
    throw Error("NotProjective", "(" + std::to_string(c) + ":" + std::to_string(d) +
                                     ") is not a point of P1(Z/" + std::to_string(n) + ")");
  }
  return static_cast<CosetLabel>(label);
}

std::int64_t CosetTable::residue(const Integer& k) const {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), static_cast<unsigned long>(level_));
  return r.get_si();
}

std::int64_t CosetTable::residue(std::int64_t k) const { return mod(k, level_); }

CosetLabel CosetTable::coset_of(const MoebiusMatrix& m) const {
  return label_of(residue(m.c()), residue(m.d()));
}

CosetLabel CosetTable::tau(const Integer& k, CosetLabel e) const {
  if (sgn(k) == 0) throw Error("ZeroDigit", "tau is undefined for the digit 0");
  return tau_residue(residue(k), e);
}

CosetLabel CosetTable::tau(std::int64_t k, CosetLabel e) const {
  if (k == 0) throw Error("ZeroDigit", "tau is undefined for the digit 0");
  return tau_residue(residue(k), e);
}

CosetLabel CosetTable::right_S(CosetLabel e) const {
  const P1Point& p = reps_.at(e);
  return label_of(p.d, -p.c);
}

CosetLabel CosetTable::right_T(CosetLabel e) const {
  const P1Point& p = reps_.at(e);
  return label_of(p.c, p.c + p.d);
}

CosetLabel CosetTable::right_ST(CosetLabel e) const {
  const P1Point& p = reps_.at(e);
  return label_of(p.d, p.d - p.c);
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p : prime_divisors(n)) result = result / p * (p - 1);
  return result;
}

int kronecker_symbol(std::int64_t discriminant, std::int64_t prime) {
  if (discriminant == -4) {
    if (prime == 2) return 0;
    return prime % 4 == 1 ? 1 : -1;
  }
  if (discriminant == -3) {
    if (prime == 3) return 0;
    if (prime == 2) return -1;
    return prime % 3 == 1 ? 1 : -1;
  }
  throw Error("UnsupportedDiscriminant", std::to_string(discriminant));
}

SubgroupInvariants subgroup_invariants(std::int64_t level) {
  require_level(level);
  const std::int64_t n = level;
  const auto primes = prime_divisors(n);

  SubgroupInvariants inv;
  inv.kappa = n;
  for (std::int64_t p : primes) inv.kappa = inv.kappa / p * (p + 1);

  inv.n2 = 0;
  if (n % 4 != 0) {
    inv.n2 = 1;
    for (std::int64_t p : primes) inv.n2 *= 1 + kronecker_symbol(-4, p);
  }
  inv.n3 = 0;
  if (n % 9 != 0) {
    inv.n3 = 1;
    for (std::int64_t p : primes) inv.n3 *= 1 + kronecker_symbol(-3, p);
  }
  inv.n_inf = 0;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d == 0) inv.n_inf += euler_phi(std::gcd(d, n / d));
  }

  // g = 1 + kappa/12 - n2/4 - n3/3 - n_inf/2, kept in twelfths.
  const std::int64_t twelve_g = 12 + inv.kappa - 3 * inv.n2 - 4 * inv.n3 - 6 * inv.n_inf;
  if (twelve_g < 0 || twelve_g % 12 != 0) {
    throw Error("GenusNotIntegral", "12 * genus = " + std::to_string(twelve_g) + " at level " +
                                        std::to_string(n));
  }
  inv.genus = twelve_g / 12;
  return inv;
}

}  // namespace modshift
