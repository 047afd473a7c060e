#include "modshift/psl2.hpp"

#include "modshift/error.hpp"

#include <sstream>
#include <utility>

namespace modshift {

MoebiusMatrix::MoebiusMatrix() : a_(1), b_(0), c_(0), d_(1) {}

MoebiusMatrix::MoebiusMatrix(Integer a, Integer b, Integer c, Integer d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_ * d_ - b_ * c_ != 1) {
    throw Error("NotUnimodular", "determinant of " + to_string() + " is not 1");
  }
  normalize();
}

MoebiusMatrix MoebiusMatrix::S() { return MoebiusMatrix(0, -1, 1, 0); }

MoebiusMatrix MoebiusMatrix::T(const Integer& k) { return MoebiusMatrix(1, k, 0, 1); }

void MoebiusMatrix::normalize() {
  if (sgn(c_) < 0 || (sgn(c_) == 0 && sgn(d_) < 0)) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
    d_ = -d_;
  }
}

MoebiusMatrix operator*(const MoebiusMatrix& lhs, const MoebiusMatrix& rhs) {
  MoebiusMatrix out;
  out.a_ = lhs.a_ * rhs.a_ + lhs.b_ * rhs.c_;
  out.b_ = lhs.a_ * rhs.b_ + lhs.b_ * rhs.d_;
  out.c_ = lhs.c_ * rhs.a_ + lhs.d_ * rhs.c_;
  out.d_ = lhs.c_ * rhs.b_ + lhs.d_ * rhs.d_;
  out.normalize();
  return out;
}

bool operator==(const MoebiusMatrix& lhs, const MoebiusMatrix& rhs) {
  return lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.c_ == rhs.c_ && lhs.d_ == rhs.d_;
}

std::string MoebiusMatrix::to_string() const {
  std::ostringstream os;
  os << "(" << a_ << "," << b_ << ";" << c_ << "," << d_ << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MoebiusMatrix& m) { return os << m.to_string(); }

ExtendedRational::ExtendedRational() : num(0), den(1) {}

ExtendedRational::ExtendedRational(Integer n, Integer d) : num(std::move(n)), den(std::move(d)) {
  if (num == 0 && den == 0) {
    throw Error("InvalidPoint", "0/0 is not a point of P1(Q)");
  }
  if (sgn(den) < 0) {
    num = -num;
    den = -den;
  }
  if (den == 0) {
    num = 1;
    return;
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) {
    num /= g;
    den /= g;
  }
}

ExtendedRational::ExtendedRational(const Rational& q)
    : num(q.get_num()), den(q.get_den()) {}

ExtendedRational ExtendedRational::infinity() { return ExtendedRational(1, 0); }

Rational ExtendedRational::to_rational() const {
  if (is_infinity()) {
    throw Error("InfinitePoint", "infinity has no rational value");
  }
  return Rational(num, den);
}

std::ostream& operator<<(std::ostream& os, const ExtendedRational& x) {
  if (x.is_infinity()) return os << "oo";
  return os << x.num << "/" << x.den;
}

ExtendedRational apply(const MoebiusMatrix& m, const ExtendedRational& x) {
  // Projective action on the column (num, den); never 0/0 since det = 1.
  return ExtendedRational(m.a() * x.num + m.b() * x.den, m.c() * x.num + m.d() * x.den);
}

bool SignedWord::is_alternating() const {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (sgn(digits[i]) == 0) return false;
    if (i + 1 < digits.size() && sgn(digits[i]) * sgn(digits[i + 1]) >= 0) return false;
  }
  return true;
}

SignedWord make_word(std::initializer_list<long> digits) {
  SignedWord w;
  for (long x : digits) w.digits.emplace_back(x);
  return w;
}

MoebiusMatrix word_to_matrix(std::span<const Integer> digits) {
  // S T^k = (0 -1; 1 k), so (a b; c d) S T^k = (b, b k - a; d, d k - c).
  Integer a = 1, b = 0, c = 0, d = 1;
  for (const Integer& k : digits) {
    if (sgn(k) == 0) throw Error("ZeroDigit", "digit words may not contain 0");
    Integer na = b;
    Integer nb = b * k - a;
    Integer nc = d;
    Integer nd = d * k - c;
    a = std::move(na);
    b = std::move(nb);
    c = std::move(nc);
    d = std::move(nd);
  }
  return MoebiusMatrix(a, b, c, d);
}

const Convergent& ConvergentTable::at(long k) const {
  if (k == -1) return seed_minus1;
  if (k == 0) return seed0;
  if (k < -1 || static_cast<std::size_t>(k) > terms.size()) {
    throw Error("CountOutOfRange", "convergent index " + std::to_string(k) + " out of range");
  }
  return terms[static_cast<std::size_t>(k - 1)];
}

ConvergentTable convergents(std::span<const Integer> digits, std::size_t n) {
  if (n > digits.size()) {
    throw Error("CountOutOfRange", "requested " + std::to_string(n) + " convergents from " +
                                       std::to_string(digits.size()) + " digits");
  }
  ConvergentTable table;
  table.terms.reserve(n);
  Convergent prev2 = table.seed_minus1;
  Convergent prev1 = table.seed0;
  for (std::size_t k = 0; k < n; ++k) {
    const Integer& a = digits[k];
    if (sgn(a) <= 0) {
      throw Error("NonPositiveDigit", "continued fraction digit " + a.get_str() + " is not positive");
    }
    Convergent next{a * prev1.p + prev2.p, a * prev1.q + prev2.q};
    table.terms.push_back(next);
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  return table;
}

}  // namespace modshift
