#include "modshift/contfrac.hpp"
#include "modshift/error.hpp"

#include <doctest.h>

#include <random>

using namespace modshift;

namespace {

std::vector<long> as_longs(const SignedWord& w) {
  std::vector<long> out;
  for (const Integer& k : w.digits) out.push_back(k.get_si());
  return out;
}

// Plain-integer Euclid for |p/q|.
std::vector<long> euclid(long p, long q) {
  std::vector<long> digits;
  while (p != 0) {
    digits.push_back(q / p);
    const long r = q % p;
    q = p;
    p = r;
  }
  return digits;
}

}  // namespace

TEST_SUITE("contfrac") {
  TEST_CASE("gauss_step examples") {
    GaussStep g = gauss_step(Rational(2, 5));
    CHECK(g.digit == 2);
    CHECK(g.next == Rational(1, 2));
    g = gauss_step(Rational(1, 3));
    CHECK(g.digit == 3);
    CHECK(g.next == 0);
    g = gauss_step(Rational(5, 8));
    CHECK(g.digit == 1);
    CHECK(g.next == Rational(3, 5));
    CHECK_THROWS_WITH_AS(gauss_step(Rational(0)), doctest::Contains("OutOfDomain"), Error);
    CHECK_THROWS_WITH_AS(gauss_step(Rational(1)), doctest::Contains("OutOfDomain"), Error);
    CHECK_THROWS_WITH_AS(gauss_step(Rational(-1, 2)), doctest::Contains("OutOfDomain"), Error);
  }

  TEST_CASE("twisted_gauss examples") {
    CHECK(twisted_gauss(Rational(2, 5)) == Rational(-1, 2));
    CHECK(twisted_gauss(Rational(-2, 5)) == Rational(1, 2));
    CHECK_THROWS_WITH_AS(twisted_gauss(Rational(0)), doctest::Contains("OutOfDomain"), Error);
  }

  TEST_CASE("expand examples") {
    Expansion e = expand(CFInput::rational(Rational(3, 7)), 2);
    CHECK(as_longs(e.word) == std::vector<long>{-2, 3});
    CHECK_FALSE(e.terminated);

    const CFInput golden = CFInput::periodic(-1, {}, {Integer(1)});
    e = expand(golden, 2);
    CHECK(as_longs(e.word) == std::vector<long>{1, -1});

    CHECK(expand(golden, 0).word.digits.empty());

    e = expand(CFInput::rational(Rational(3, 7)), 5);
    CHECK(e.terminated);
    CHECK(e.word.digits.size() == 2);
  }

  TEST_CASE("input validation") {
    CHECK_THROWS_WITH_AS(CFInput::rational(Rational(0)), doctest::Contains("OutOfDomain"), Error);
    CHECK_THROWS_WITH_AS(CFInput::rational(Rational(1)), doctest::Contains("OutOfDomain"), Error);
    CHECK_THROWS_WITH_AS(CFInput::rational(Rational(-3, 2)), doctest::Contains("OutOfDomain"), Error);
    CHECK_THROWS_WITH_AS(CFInput::periodic(1, {}, {}), doctest::Contains("EmptyPeriod"), Error);
    CHECK_THROWS_WITH_AS(CFInput::periodic(1, {Integer(0)}, {Integer(1)}), doctest::Contains("NonPositiveDigit"),
                         Error);
  }

  TEST_CASE("digits of rationals match Euclid") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
      const long q = 2 + static_cast<long>(rng() % 5000);
      const long p = 1 + static_cast<long>(rng() % (q - 1));
      const int sign = rng() % 2 ? 1 : -1;
      const std::vector<long> ref = euclid(p, q);
      const Expansion e = expand(CFInput::rational(Rational(sign * p, q)), 64);
      REQUIRE(e.word.digits.size() == ref.size());
      CHECK(e.terminated);
      int expected_sign = -sign;
      for (std::size_t k = 0; k < ref.size(); ++k) {
        CHECK(e.word.digits[k] == expected_sign * ref[k]);
        expected_sign = -expected_sign;
      }
    }
  }

  TEST_CASE("two twisted steps shift the digits by two") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      const long q = 10 + static_cast<long>(rng() % 10000);
      const long p = 1 + static_cast<long>(rng() % (q - 1));
      const Rational x(rng() % 2 ? p : -p, q);
      const Expansion full = expand(CFInput::rational(x), 64);
      if (full.word.digits.size() < 3) continue;
      const Rational y = twisted_gauss(twisted_gauss(x));
      const Expansion tail = expand(CFInput::rational(y), 64);
      REQUIRE(tail.word.digits.size() + 2 == full.word.digits.size());
      for (std::size_t k = 0; k < tail.word.digits.size(); ++k) CHECK(tail.word.digits[k] == full.word.digits[k + 2]);
    }
  }

  TEST_CASE("encode at level 2 follows the coset action") {
    const CosetTable t(2);
    const CFInput golden = CFInput::periodic(1, {}, {Integer(1)});
    const SymbolSequence s = encode_orbit(t, golden, t.label_of(0, 1), 6);
    REQUIRE(s.size() == 6);
    const CosetLabel cycle[] = {t.label_of(0, 1), t.label_of(1, 1), t.label_of(1, 0)};
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(s.entries[k].coset == cycle[k % 3]);
      CHECK(abs(s.entries[k].digit) == 1);
    }
    CHECK(s.entries[0].digit == -1);
    CHECK_FALSE(s.terminated);
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      CHECK(t.tau(s.entries[k].digit, s.entries[k].coset) == s.entries[k + 1].coset);
    }
  }

  TEST_CASE("rational orbits terminate") {
    const CosetTable t(5);
    const SymbolSequence s = encode_orbit(t, CFInput::rational(Rational(-5, 8)), 0, 10);
    CHECK(s.terminated);
    CHECK(s.size() == euclid(5, 8).size());
  }

  TEST_CASE("inputs round trip through JSON") {
    const CFInput r = CFInput::rational(Rational(-7, 19));
    const CFInput back = nlohmann::json(r).get<CFInput>();
    CHECK(back.kind == CFInput::Kind::rational);
    CHECK(back.value == r.value);

    const CFInput p = CFInput::periodic(-1, {Integer(3), Integer(1)}, {Integer(2), Integer(5)});
    const CFInput back_p = nlohmann::json(p).get<CFInput>();
    CHECK(back_p.kind == CFInput::Kind::periodic);
    CHECK(back_p.sign == -1);
    CHECK(back_p.preperiod == p.preperiod);
    CHECK(back_p.period == p.period);
    CHECK(as_longs(expand(back_p, 12).word) == as_longs(expand(p, 12).word));
  }
}
