#include "modshift/contfrac.hpp"
#include "modshift/cosets.hpp"
#include "modshift/error.hpp"
#include "modshift/homology.hpp"
#include "modshift/level.hpp"
#include "modshift/shiftspace.hpp"
#include "modshift/spectrum.hpp"
#include "modshift/thermo.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace modshift;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.pass = false;
    out.detail += " (time limit " + std::to_string(limit_seconds) + " s exceeded)";
  }
  if (!out.pass) ++failures;
  std::printf("%s %2d %-28s %8.2fs  %s\n", out.pass ? "PASS" : "FAIL", id, name.c_str(), secs, out.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    ps.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::int64_t phi(std::int64_t n) {
  std::int64_t r = n;
  for (std::int64_t p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

// (-4|p) and (-3|p) from residues of p.
int chi4(std::int64_t p) { return p == 2 ? 0 : (p % 4 == 1 ? 1 : -1); }
int chi3(std::int64_t p) { return p == 3 ? 0 : (p % 3 == 1 ? 1 : -1); }

struct ClosedForms {
  std::int64_t kappa, n2, n3, n_inf;
  std::int64_t twelve_genus;  // 12 g, integral by construction
};

ClosedForms closed_forms(std::int64_t n) {
  ClosedForms f{n, 1, 1, 0, 0};
  for (std::int64_t p : prime_factors(n)) {
    f.kappa = f.kappa / p * (p + 1);
    f.n2 *= 1 + chi4(p);
    f.n3 *= 1 + chi3(p);
  }
  if (n % 4 == 0) f.n2 = 0;
  if (n % 9 == 0) f.n3 = 0;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d == 0) f.n_inf += phi(std::gcd(d, n / d));
  }
  f.twelve_genus = 12 + f.kappa - 3 * f.n2 - 4 * f.n3 - 6 * f.n_inf;
  return f;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> random_t(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> t;
  do {
    t = {radius * u(rng), radius * u(rng)};
  } while (norm(t) > radius);
  return t;
}

double gauss_mean_I() {
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(1000);
  gsl_function f;
  f.function = [](double x, void*) { return -2 * std::log(x) / ((1 + x) * std::log(2.0)); };
  f.params = nullptr;
  double result = 0, err = 0;
  gsl_integration_qags(&f, 0, 1, 0, 1e-12, 1000, w, &result, &err);
  gsl_integration_workspace_free(w);
  return result;
}

}  // namespace

int main() {
  const NumericsConfig cfg;
  const LevelData eleven(11);

  run(1, "index", 5, [] {
    for (std::int64_t n = 1; n <= 200; ++n) {
      const auto size = static_cast<std::int64_t>(CosetTable(n).size());
      if (size != closed_forms(n).kappa) return Outcome{false, "N=" + std::to_string(n)};
    }
    return Outcome{true, "N <= 200"};
  });

  run(2, "counts", 0, [] {
    for (std::int64_t n = 1; n <= 200; ++n) {
      const ClosedForms f = closed_forms(n);
      const SubgroupInvariants inv = subgroup_invariants(n);
      const bool integral = f.twelve_genus >= 0 && f.twelve_genus % 12 == 0;
      if (!integral || inv.n2 != f.n2 || inv.n3 != f.n3 || inv.n_inf != f.n_inf ||
          12 * inv.genus != f.twelve_genus) {
        return Outcome{false, "N=" + std::to_string(n)};
      }
      if (n <= 100 && cusp_orbits(CosetTable(n)).orbit_count != static_cast<std::size_t>(f.n_inf)) {
        return Outcome{false, "cusp orbits at N=" + std::to_string(n)};
      }
    }
    return Outcome{true, "N <= 200, orbits N <= 100"};
  });

  run(3, "finite irreducibility", 0, [] {
    std::size_t witnesses = 0;
    for (std::int64_t n = 1; n <= 100; ++n) {
      const CosetTable t(n);
      const TransitionGraph g(t);
      const IrreducibilityReport r = check_finitely_irreducible(g, n <= 25);
      if (!r.irreducible) return Outcome{false, "N=" + std::to_string(n)};
      if (n > 25) continue;
      if (r.witnesses.size() != g.vertex_count() * g.vertex_count()) {
        return Outcome{false, "missing witnesses at N=" + std::to_string(n)};
      }
      for (const Witness& w : r.witnesses) {
        if (!verify_witness(g, w)) return Outcome{false, "witness replay at N=" + std::to_string(n)};
        ++witnesses;
      }
    }
    return Outcome{true, std::to_string(witnesses) + " witnesses replayed"};
  });

  run(4, "homology dimensions", 0, [] {
    for (std::int64_t n = 1; n <= 50; ++n) {
      const SubgroupInvariants inv = subgroup_invariants(n);
      const HomologyData h{CosetTable(n)};
      if (h.presentation().dimension() != static_cast<std::size_t>(2 * inv.genus + inv.n_inf - 1) ||
          h.dimension() != static_cast<std::size_t>(2 * inv.genus)) {
        return Outcome{false, "N=" + std::to_string(n)};
      }
    }
    return Outcome{true, "N <= 50"};
  });

  run(5, "class-sum vanishing", 0, [] {
    for (std::int64_t n = 1; n <= 50; ++n) {
      const CosetTable t(n);
      const HomologyData h(t);
      HomologyVector sum(h.dimension(), Rational(0));
      for (CosetLabel e = 0; e < t.size(); ++e) sum = add(sum, h.symbol_class(e));
      if (!is_zero(sum)) return Outcome{false, "N=" + std::to_string(n)};
    }
    return Outcome{true, "N <= 50"};
  });

  run(6, "telescoping", 0, [] {
    std::mt19937_64 rng(6);
    std::size_t steps = 0;
    for (std::int64_t n : {2, 6, 11}) {
      const CosetTable t(n);
      const CuspOrbitMap cusps = cusp_orbits(t);
      for (int trial = 0; trial < 1000; ++trial) {
        const int sign = rng() % 2 ? 1 : -1;
        std::vector<Integer> pre, period;
        for (int j = 0; j < 3; ++j) pre.emplace_back(static_cast<long>(1 + rng() % 20));
        for (int j = 0; j < 1 + trial % 5; ++j) period.emplace_back(static_cast<long>(1 + rng() % 20));
        const CFInput x = CFInput::periodic(sign, pre, period);
        const SymbolSequence s = encode_orbit(t, x, rng() % t.size(), 30);
        for (std::size_t k = 0; k + 1 < s.size(); ++k) {
          if (cusps.cusp_of_zero[s.entries[k].coset] != cusps.cusp_of_infinity[s.entries[k + 1].coset]) {
            return Outcome{false, "N=" + std::to_string(n)};
          }
          ++steps;
        }
      }
    }
    return Outcome{true, std::to_string(steps) + " steps"};
  });

  run(7, "Gauss pressure zero", 30, [&] {
    const double p1 = pressure_collocation(LevelData(1), {}, 1.0, cfg).value;
    const double p11 = pressure_collocation(eleven, {0, 0}, 1.0, cfg).value;
    const bool ok = std::abs(p1) <= 1e-5 && std::abs(p11) <= 1e-5;
    return Outcome{ok, "P(N=1)=" + fmt(p1) + " P(N=11)=" + fmt(p11)};
  });

  run(8, "beta at origin", 0, [&] {
    const double b0 = solve_beta(eleven, {0, 0}, cfg).value;
    if (std::abs(b0 - 1) > 1e-3) return Outcome{false, "beta(0)=" + fmt(b0)};
    std::mt19937_64 rng(8);
    double lowest = 1e9;
    for (int k = 0; k < 20; ++k) lowest = std::min(lowest, solve_beta(eleven, random_t(rng, 0.2), cfg).value);
    return Outcome{lowest >= 1 - 1e-3, "beta(0)=" + fmt(b0) + " min beta(t)=" + fmt(lowest)};
  });

  run(9, "gradient at origin", 0, [&] {
    const GibbsMoments m = gibbs_moments(eleven, {0, 0}, cfg, false);
    const double a = norm(m.alpha);
    return Outcome{a <= 1e-3, "|alpha(0)|=" + fmt(a)};
  });

  run(10, "Lyapunov constant", 0, [&] {
    const double oracle = gauss_mean_I();
    const double m1 = collocation_spectrum(LevelData(1), {}, 1.0, cfg).meanI;
    const double m11 = collocation_spectrum(eleven, {0, 0}, 1.0, cfg).meanI;
    const bool ok = std::abs(oracle - 2.37314) <= 1e-5 && std::abs(m1 - oracle) <= 1e-3 &&
                    std::abs(m11 - oracle) <= 1e-3;
    return Outcome{ok, "oracle=" + fmt(oracle) + " N=1:" + fmt(m1) + " N=11:" + fmt(m11)};
  });

  run(11, "estimator agreement", 120, [] {
    const LevelData two(2);
    NumericsConfig c;
    c.depth = 10;
    c.cutoff = 30;
    c.tail = TailMode::truncate;
    double worst = 0;
    for (double beta : {0.8, 1.0, 1.2}) {
      const double cyl = pressure_cylinder(two, {}, beta, c).value;
      const double col = pressure_collocation(two, {}, beta, c).value;
      worst = std::max(worst, std::abs(cyl - col));
    }
    return Outcome{worst <= 0.02, "max gap " + fmt(worst)};
  });

  run(12, "duality round trip", 0, [&] {
    std::mt19937_64 rng(12);
    double worst_t = 0, worst_res = 0;
    for (int k = 0; k < 5; ++k) {
      const std::vector<double> t = random_t(rng, 0.1);
      const GibbsMoments m = gibbs_moments(eleven, t, cfg, false);
      const SpectrumPoint p = legendre(eleven, m.alpha, cfg);
      for (std::size_t i = 0; i < t.size(); ++i) worst_t = std::max(worst_t, std::abs(p.t[i] - t[i]));
      worst_res = std::max(worst_res, std::abs(p.dimension - (m.beta - dot(t, m.alpha))));
    }
    return Outcome{worst_t <= 1e-3 && worst_res <= 1e-6,
                   "max |t err|=" + fmt(worst_t) + " max residual=" + fmt(worst_res)};
  });

  run(13, "convexity", 0, [&] {
    std::mt19937_64 rng(13);
    double lowest = 1e9;
    for (int k = 0; k < 10; ++k) {
      const auto h = beta_hessian(eleven, random_t(rng, 0.3), cfg);
      const double mean = (h[0][0] + h[1][1]) / 2;
      const double gap = std::hypot((h[0][0] - h[1][1]) / 2, h[0][1]);
      lowest = std::min(lowest, mean - gap);
    }
    return Outcome{lowest > 0, "min eigenvalue " + fmt(lowest)};
  });

  run(14, "periodic symbols", 0, [&] {
    const CosetTable& t = eleven.table();
    const SignedWord base = make_word({-1, 1});
    for (CosetLabel e1 = 0; e1 < t.size(); ++e1) {
      const SymbolSequence period = close_periodic_word(t, base, e1);
      const PeriodicSymbolValue exact = limiting_symbol_periodic(eleven, period);
      if (is_zero(exact.numerator)) continue;

      const MoebiusMatrix m = word_to_matrix(period.digits());
      const double tr = std::abs(Integer(m.a() + m.d()).get_d());
      const double expected = 2 * std::log((tr + std::sqrt(tr * tr - 4)) / 2);
      const double den_err = std::abs(exact.denominator - expected);

      std::vector<Integer> mags;
      for (const Integer& d : period.digits().digits) mags.push_back(abs(d));
      const CFInput x = CFInput::periodic(-sgn(period.entries.front().digit), {}, mags);
      std::vector<double> errors;
      for (std::size_t j : {4, 8, 16}) {
        const BirkhoffPartial b =
            birkhoff_partial(eleven, x, e1, j * period.size(), BirkhoffNormalisation::convergent);
        double err = 0;
        for (std::size_t i = 0; i < b.value.size(); ++i) err = std::max(err, std::abs(b.value[i] - exact.value[i]));
        errors.push_back(err);
      }
      const double r1 = errors[1] / errors[0], r2 = errors[2] / errors[1];
      const bool ok = den_err <= 1e-9 && r1 <= 0.6 && r2 <= 0.6;
      return Outcome{ok, "period " + std::to_string(period.size()) + " ratios " + fmt(r1) + ", " + fmt(r2) +
                             " denominator err " + fmt(den_err)};
    }
    return Outcome{false, "no closed word with a nonzero class"};
  });

  run(15, "spectrum shape", 0, [&] {
    const std::vector<double> end{0.6, 0.3};
    const auto grid = line_grid({-end[0], -end[1]}, end, 11);
    const std::vector<SpectrumPoint> pts = spectrum_curve(eleven, grid, cfg);
    std::vector<double> a, f;
    std::size_t peak = 0, nearest = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].error) return Outcome{false, "node " + std::to_string(k) + ": " + *pts[k].error};
      if (pts[k].dimension > 1 + cfg.tolerance) return Outcome{false, "dimension above 1 at node " + std::to_string(k)};
      a.push_back(dot(end, pts[k].alpha));
      f.push_back(pts[k].dimension);
      if (f[k] > f[peak]) peak = k;
      if (norm(pts[k].alpha) < norm(pts[nearest].alpha)) nearest = k;
    }
    if (peak != nearest) return Outcome{false, "maximum at node " + std::to_string(peak)};
    for (std::size_t k = 1; k + 1 < f.size(); ++k) {
      const double left = (f[k] - f[k - 1]) / (a[k] - a[k - 1]);
      const double right = (f[k + 1] - f[k]) / (a[k + 1] - a[k]);
      if (right > left) return Outcome{false, "convexity at node " + std::to_string(k)};
    }
    return Outcome{true, "max " + fmt(f[peak]) + " at node " + std::to_string(peak)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
