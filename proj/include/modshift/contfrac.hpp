#pragma once

#include "modshift/cosets.hpp"
#include "modshift/psl2.hpp"

#include <json.hpp>

#include <cstddef>
#include <vector>

namespace modshift {

// Point of the coding interval given exactly: either a rational in
// (-1, 0) u (0, 1), or sign * [preperiod..., period, period, ...].
struct CFInput {
  enum class Kind { rational, periodic };

  Kind kind = Kind::rational;
  Rational value;  // rational kind
  int sign = 1;    // periodic kind
  std::vector<Integer> preperiod;
  std::vector<Integer> period;

  // Throw Error("OutOfDomain") / Error("NonPositiveDigit") / Error("EmptyPeriod").
  static CFInput rational(const Rational& x);
  static CFInput periodic(int sign, std::vector<Integer> preperiod, std::vector<Integer> period);

  // |x|'s k-th continued fraction digit (k >= 1) for the periodic kind.
  const Integer& periodic_digit(std::size_t k) const;
};

void to_json(nlohmann::json& j, const CFInput& x);
void from_json(const nlohmann::json& j, CFInput& x);

struct GaussStep {
  Integer digit;
  Rational next;
};

// x -> (floor(1/x), 1/x - floor(1/x)) for 0 < x < 1; Error("OutOfDomain") otherwise.
GaussStep gauss_step(const Rational& x);

// x -> -sign(x) * G(|x|) for 0 < |x| < 1; Error("OutOfDomain") otherwise.
Rational twisted_gauss(const Rational& x);

struct Expansion {
  SignedWord word;
  bool terminated = false;  // rational input ran out of digits before n
};

// Alternating digit word (x_1, ..., x_n) with -sign(x_1) = sign(x) and
// |x_k| the continued fraction digits of |x|.
Expansion expand(const CFInput& x, std::size_t n);

struct SymbolEntry {
  Integer digit;
  CosetLabel coset = 0;

  friend bool operator==(const SymbolEntry&, const SymbolEntry&) = default;
};

// Finite admissible prefix ((x_1, e_1), ..., (x_n, e_n)) of the coset-decorated shift.
struct SymbolSequence {
  std::vector<SymbolEntry> entries;
  bool terminated = false;

  std::size_t size() const { return entries.size(); }
  SignedWord digits() const;
};

// Digits from expand(x, n); cosets e_{k+1} = tau_{x_k}(e_k).
SymbolSequence encode_orbit(const CosetTable& table, const CFInput& x, CosetLabel e1, std::size_t n);

// Decorates an arbitrary digit word starting at coset e1.
SymbolSequence decorate(const CosetTable& table, const SignedWord& word, CosetLabel e1);

}  // namespace modshift
