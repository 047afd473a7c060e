#include "modshift/error.hpp"
#include "modshift/spectrum.hpp"

#include <doctest.h>

#include <cmath>

using namespace modshift;

namespace {

NumericsConfig fast_config() {
  NumericsConfig cfg;
  cfg.threads = 2;
  return cfg;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("Legendre transform at alpha = 0") {
    const LevelData level(11);
    const SpectrumPoint p = legendre(level, {0, 0}, fast_config());
    CHECK(p.dimension == doctest::Approx(1.0).epsilon(1e-6));
    for (double x : p.t) CHECK(std::abs(x) <= 1e-4);
  }

  TEST_CASE("Legendre transform inverts the forward map") {
    const LevelData level(11);
    const NumericsConfig cfg = fast_config();
    for (const std::vector<double>& t0 : {std::vector<double>{0.15, -0.1}, std::vector<double>{-0.3, 0.2}}) {
      const GibbsMoments m = gibbs_moments(level, t0, cfg, false);
      const SpectrumPoint p = legendre(level, m.alpha, cfg);
      for (std::size_t i = 0; i < 2; ++i) CHECK(p.t[i] == doctest::Approx(t0[i]).epsilon(1e-5));
      CHECK(p.dimension == doctest::Approx(m.beta - dot(t0, m.alpha)).epsilon(1e-8));
      CHECK(p.dimension < 1.0);
    }
  }

  TEST_CASE("forward curve at the origin and symmetric nodes") {
    const LevelData level(11);
    const std::vector<SpectrumPoint> origin = spectrum_curve(level, {{0, 0}}, fast_config());
    REQUIRE(origin.size() == 1);
    CHECK_FALSE(origin[0].error.has_value());
    CHECK(origin[0].dimension == doctest::Approx(1.0).epsilon(1e-6));

    const std::vector<SpectrumPoint> pair = spectrum_curve(level, {{0.2, 0.1}, {-0.2, -0.1}}, fast_config());
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].beta == doctest::Approx(pair[1].beta).epsilon(1e-8));
    CHECK(pair[0].dimension == doctest::Approx(pair[1].dimension).epsilon(1e-8));
    for (std::size_t i = 0; i < 2; ++i) CHECK(pair[0].alpha[i] == doctest::Approx(-pair[1].alpha[i]).epsilon(1e-7));
    for (const SpectrumPoint& p : pair) CHECK(p.dimension == doctest::Approx(p.beta - dot(p.t, p.alpha)));
  }

  TEST_CASE("failing nodes carry their error") {
    const LevelData level(11);
    const std::vector<SpectrumPoint> pts = spectrum_curve(level, {{0, 0}, {0}}, fast_config());
    REQUIRE(pts.size() == 2);
    CHECK_FALSE(pts[0].error.has_value());
    REQUIRE(pts[1].error.has_value());
    CHECK(pts[1].error->find("DimensionMismatch") != std::string::npos);
  }

  TEST_CASE("line grid") {
    const auto g = line_grid({0, 0}, {1, -2}, 5);
    REQUIRE(g.size() == 5);
    CHECK(g[2][0] == doctest::Approx(0.5));
    CHECK(g[4][1] == doctest::Approx(-2));
    CHECK(line_grid({1}, {2}, 1) == std::vector<std::vector<double>>{{1}});
  }

  TEST_CASE("periodic symbols are invariant under doubling and rotation") {
    const LevelData level(11);
    const CosetTable& t = level.table();
    const SymbolSequence period = close_periodic_word(t, make_word({-1, 2, -3, 1}), 0);
    REQUIRE(t.tau(period.entries.back().digit, period.entries.back().coset) == period.entries.front().coset);
    const PeriodicSymbolValue v = limiting_symbol_periodic(level, period);
    REQUIRE(v.value.size() == 2);
    CHECK(v.denominator > 0);

    SymbolSequence doubled = period;
    doubled.entries.insert(doubled.entries.end(), period.entries.begin(), period.entries.end());
    const PeriodicSymbolValue vd = limiting_symbol_periodic(level, doubled);
    CHECK(vd.denominator == doctest::Approx(2 * v.denominator).epsilon(1e-12));

    SymbolSequence rotated;
    rotated.entries.assign(period.entries.begin() + 2, period.entries.end());
    rotated.entries.insert(rotated.entries.end(), period.entries.begin(), period.entries.begin() + 2);
    const PeriodicSymbolValue vr = limiting_symbol_periodic(level, rotated);
    CHECK(vr.numerator == v.numerator);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(vd.value[i] == doctest::Approx(v.value[i]).epsilon(1e-12));
      CHECK(vr.value[i] == doctest::Approx(v.value[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("periodic symbol errors") {
    const LevelData level(11);
    const CosetTable& t = level.table();
    SymbolSequence odd = decorate(t, make_word({1, -1, 1}), 0);
    CHECK_THROWS_WITH_AS(limiting_symbol_periodic(level, odd), doctest::Contains("OddPeriod"), Error);
    CHECK_THROWS_WITH_AS(close_periodic_word(t, make_word({1, -1, 1}), 0), doctest::Contains("OddPeriod"), Error);

    bool found = false;
    for (long k = 1; k <= 12 && !found; ++k) {
      const SymbolSequence s = decorate(t, make_word({-1, k}), 0);
      if (t.tau(s.entries.back().digit, s.entries.back().coset) == 0) continue;
      found = true;
      CHECK_THROWS_WITH_AS(limiting_symbol_periodic(level, s), doctest::Contains("NotCyclic"), Error);
    }
    CHECK(found);
    CHECK_THROWS_WITH_AS(limiting_symbol_periodic(level, SymbolSequence{}), doctest::Contains("InvalidWord"), Error);
  }

  TEST_CASE("Birkhoff numerators telescope along the orbit") {
    const LevelData level(11);
    const CFInput x = CFInput::periodic(1, {Integer(2)}, {Integer(1), Integer(3)});
    const SymbolSequence orbit = encode_orbit(level.table(), x, 3, 12);
    for (std::size_t n = 1; n < 12; ++n) {
      const BirkhoffPartial a = birkhoff_partial(level, x, 3, n);
      const BirkhoffPartial b = birkhoff_partial(level, x, 3, n + 1);
      CHECK(b.numerator == add(a.numerator, level.symbol_class(orbit.entries[n].coset)));
      CHECK(a.length == n);
    }
    const BirkhoffPartial c = birkhoff_partial(level, x, 3, 12, BirkhoffNormalisation::convergent);
    const BirkhoffPartial p = birkhoff_partial(level, x, 3, 12);
    CHECK(c.numerator == p.numerator);
    CHECK(std::abs(c.denominator - p.denominator) < 2.0);
  }

  TEST_CASE("Birkhoff partials on the edge cases") {
    const BirkhoffPartial one = birkhoff_partial(LevelData(1), CFInput::periodic(1, {}, {Integer(1)}), 0, 8);
    CHECK(one.value.empty());
    CHECK(one.denominator > 0);

    const LevelData level(11);
    const BirkhoffPartial r = birkhoff_partial(level, CFInput::rational(Rational(5, 13)), 0, 20);
    CHECK(r.terminated);
    CHECK(r.length == 4);
    CHECK_THROWS_WITH_AS(birkhoff_partial(level, CFInput::rational(Rational(1, 2)), 0, 0),
                         doctest::Contains("CountOutOfRange"), Error);
  }

  TEST_CASE("Hessian of beta is symmetric and positive at the origin") {
    const LevelData level(11);
    const auto h = beta_hessian(level, {0, 0}, fast_config());
    REQUIRE(h.size() == 2);
    CHECK(h[0][1] == doctest::Approx(h[1][0]));
    CHECK(h[0][0] > 0);
    CHECK(h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0);
  }
}
