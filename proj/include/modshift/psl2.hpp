#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace modshift {

using Integer = mpz_class;
using Rational = mpq_class;

// An element of PSL2(Z). Entries are kept in a canonical sign: c > 0, or
// c == 0 and d > 0, so that equality of values is equality of entries.
class MoebiusMatrix {
 public:
  MoebiusMatrix();  // identity
  // Throws Error("NotUnimodular") unless a*d - b*c == 1.
  MoebiusMatrix(Integer a, Integer b, Integer c, Integer d);

  static MoebiusMatrix identity() { return {}; }
  static MoebiusMatrix S();                       // z -> -1/z
  static MoebiusMatrix T(const Integer& k = 1);   // z -> z + k

  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  const Integer& d() const { return d_; }

  Integer trace() const { return a_ + d_; }

  friend MoebiusMatrix operator*(const MoebiusMatrix& lhs, const MoebiusMatrix& rhs);
  friend bool operator==(const MoebiusMatrix& lhs, const MoebiusMatrix& rhs);

  std::string to_string() const;

 private:
  void normalize();

  Integer a_, b_, c_, d_;
};

std::ostream& operator<<(std::ostream& os, const MoebiusMatrix& m);

// A point of P1(Q). den >= 0, gcd(num, den) = 1, and infinity is (1, 0).
struct ExtendedRational {
  Integer num;
  Integer den;

  ExtendedRational();  // 0
  ExtendedRational(Integer num, Integer den);
  explicit ExtendedRational(const Rational& q);

  static ExtendedRational infinity();
  bool is_infinity() const { return den == 0; }
  // Throws Error("InfinitePoint") at infinity.
  Rational to_rational() const;

  friend bool operator==(const ExtendedRational&, const ExtendedRational&) = default;
};

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x);

ExtendedRational apply(const MoebiusMatrix& m, const ExtendedRational& x);

// Finite word of nonzero digits x_1 ... x_n.
struct SignedWord {
  std::vector<Integer> digits;

  std::size_t size() const { return digits.size(); }
  bool empty() const { return digits.empty(); }
  // x_i * x_{i+1} < 0 for every consecutive pair.
  bool is_alternating() const;

  friend bool operator==(const SignedWord&, const SignedWord&) = default;
};

SignedWord make_word(std::initializer_list<long> digits);

// S T^{x_1} S T^{x_2} ... S T^{x_n}; the empty word gives the identity.
// Throws Error("ZeroDigit") for a zero digit.
MoebiusMatrix word_to_matrix(std::span<const Integer> digits);
inline MoebiusMatrix word_to_matrix(const SignedWord& w) { return word_to_matrix(w.digits); }

struct Convergent {
  Integer p;
  Integer q;
};

// Convergents p_k/q_k of [a_1, ..., a_n] for k = 1..n with the seeds
// (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (0, 1).
struct ConvergentTable {
  Convergent seed_minus1{1, 0};
  Convergent seed0{0, 1};
  std::vector<Convergent> terms;  // terms[k-1] = (p_k, q_k)

  // Index -1 and 0 address the seeds.
  const Convergent& at(long k) const;
};

// Throws Error("NonPositiveDigit") if one of the first n digits is < 1 and
// Error("CountOutOfRange") if n exceeds the number of digits.
ConvergentTable convergents(std::span<const Integer> digits, std::size_t n);
inline ConvergentTable convergents(std::span<const Integer> digits) {
  return convergents(digits, digits.size());
}

}  // namespace modshift
