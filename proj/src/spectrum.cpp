#include "modshift/spectrum.hpp"

#include "modshift/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace modshift {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> alpha_at(const LevelData& level, const std::vector<double>& t, const NumericsConfig& cfg) {
  return gibbs_moments(level, t, cfg, false).alpha;
}

}  // namespace

std::vector<std::vector<double>> beta_hessian(const LevelData& level, const std::vector<double>& t,
                                              const NumericsConfig& cfg, double step) {
  const std::size_t d = t.size();
  std::vector<std::vector<double>> h(d, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> tp = t, tm = t;
    tp[j] += step;
    tm[j] -= step;
    const std::vector<double> ap = alpha_at(level, tp, cfg);
    const std::vector<double> am = alpha_at(level, tm, cfg);
    for (std::size_t i = 0; i < d; ++i) h[i][j] = (ap[i] - am[i]) / (2 * step);
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) h[i][j] = h[j][i] = 0.5 * (h[i][j] + h[j][i]);
  }
  return h;
}

SpectrumPoint legendre(const LevelData& level, const std::vector<double>& alpha, const NumericsConfig& cfg,
                       std::optional<std::vector<double>> start) {
  const std::size_t d = level.dimension();
  if (alpha.size() != d) {
    throw Error("DimensionMismatch", "alpha has length " + std::to_string(alpha.size()) + " but 2g = " +
                                         std::to_string(d));
  }
  std::vector<double> t = start.value_or(std::vector<double>(d, 0.0));
  if (t.size() != d) throw Error("DimensionMismatch", "start point has the wrong length");

  constexpr int max_newton = 40;
  constexpr double t_limit = 50.0;
  GibbsMoments g = gibbs_moments(level, t, cfg, false);
  auto objective = [&](const GibbsMoments& m) { return m.beta - dot(m.t, alpha); };

  for (int it = 0; it < max_newton; ++it) {
    std::vector<double> grad(d);
    for (std::size_t i = 0; i < d; ++i) grad[i] = g.alpha[i] - alpha[i];
    if (max_abs(grad) < 1e-11) break;

    const auto h = beta_hessian(level, t, cfg);
    Eigen::MatrixXd hm(d, d);
    Eigen::VectorXd gv(d);
    for (std::size_t i = 0; i < d; ++i) {
      gv(static_cast<Eigen::Index>(i)) = grad[i];
      for (std::size_t j = 0; j < d; ++j) hm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i][j];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(hm);
    if (llt.info() != Eigen::Success) {
      throw Error("AlphaOutOfRange", "Hessian of beta is not positive definite along the Newton path");
    }
    const Eigen::VectorXd dir = -llt.solve(gv);

    double damping = 1.0;
    const double f0 = objective(g);
    const double slope = gv.dot(dir);
    bool accepted = false;
    while (damping >= 1.0 / 1024) {
      std::vector<double> trial = t;
      for (std::size_t i = 0; i < d; ++i) trial[i] += damping * dir(static_cast<Eigen::Index>(i));
      if (max_abs(trial) > t_limit) {
        damping *= 0.5;
        continue;
      }
      try {
        GibbsMoments gt = gibbs_moments(level, trial, cfg, false);
        if (objective(gt) <= f0 + 1e-4 * damping * slope + 1e-13) {
          t = std::move(trial);
          g = std::move(gt);
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // step left the region where beta can be bracketed
      }
      damping *= 0.5;
    }
    if (!accepted) {
      // No descent possible: either at the minimum within round-off or alpha is unreachable.
      if (max_abs(grad) < 1e-7) break;
      std::ostringstream os;
      os << "no stationary point of beta(t) - (t|alpha) found; gradient residual " << max_abs(grad);
      throw Error("AlphaOutOfRange", os.str());
    }
    if (damping * dir.cwiseAbs().maxCoeff() < 1e-12) break;
  }

  std::vector<double> residual(d);
  for (std::size_t i = 0; i < d; ++i) residual[i] = g.alpha[i] - alpha[i];
  if (max_abs(residual) > std::max(1e-7, cfg.tolerance * 100)) {
    std::ostringstream os;
    os << "Newton iteration stalled with gradient residual " << max_abs(residual);
    throw Error("AlphaOutOfRange", os.str());
  }

  SpectrumPoint p;
  p.t = t;
  p.alpha = alpha;
  p.beta = g.beta;
  p.dimension = g.beta - dot(t, alpha);
  p.provenance = g.provenance;
  return p;
}

std::vector<SpectrumPoint> spectrum_curve(const LevelData& level, const std::vector<std::vector<double>>& grid,
                                          const NumericsConfig& cfg) {
  std::vector<SpectrumPoint> out(grid.size());
  auto run = [&](std::size_t i) {
    SpectrumPoint& p = out[i];
    try {
      const GibbsMoments g = gibbs_moments(level, grid[i], cfg, false);
      p.t = g.t;
      p.alpha = g.alpha;
      p.beta = g.beta;
      p.dimension = g.beta - dot(g.t, g.alpha);
      p.provenance = g.provenance;
    } catch (const Error& e) {
      p = SpectrumPoint{};
      p.t = grid[i];
      p.error = e.name() + ": " + e.detail();
    }
  };
  const unsigned hw = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, grid.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < grid.size();) run(i);
    });
  }
  for (std::size_t i; (i = next++) < grid.size();) run(i);
  for (auto& th : pool) th.join();
  return out;
}

std::vector<std::vector<double>> line_grid(const std::vector<double>& from, const std::vector<double>& to,
                                           std::size_t count) {
  if (from.size() != to.size()) throw Error("DimensionMismatch", "grid endpoints differ in length");
  if (count == 0) return {};
  std::vector<std::vector<double>> grid;
  for (std::size_t k = 0; k < count; ++k) {
    const double s = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
    std::vector<double> t(from.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = from[i] + s * (to[i] - from[i]);
    grid.push_back(std::move(t));
  }
  return grid;
}

PeriodicSymbolValue limiting_symbol_periodic(const LevelData& level, const SymbolSequence& period) {
  const auto& entries = period.entries;
  if (entries.empty()) throw Error("InvalidWord", "empty period");
  if (!is_admissible(period, level.table())) throw Error("InvalidWord", "period word is not admissible");
  if (entries.size() % 2 == 1) {
    throw Error("OddPeriod", "period of odd length " + std::to_string(entries.size()) +
                                 "; use the doubled word, whose signs alternate across the wrap");
  }
  if (level.table().tau(entries.back().digit, entries.back().coset) != entries.front().coset) {
    throw Error("NotCyclic", "the coset does not return to the start after one period");
  }
  PeriodicSymbolValue out;
  out.numerator.assign(level.dimension(), Rational(0));
  for (const SymbolEntry& s : entries) out.numerator = add(out.numerator, level.symbol_class(s.coset));
  out.denominator = potential_I_on_cylinder(period.digits());
  for (const Rational& x : out.numerator) out.value.push_back(x.get_d() / out.denominator);
  return out;
}

SymbolSequence close_periodic_word(const CosetTable& table, const SignedWord& word, CosetLabel e1) {
  if (word.empty() || !word.is_alternating()) throw Error("InvalidWord", "word must be nonempty and alternating");
  if (word.size() % 2 == 1) throw Error("OddPeriod", "odd period; double the word first");
  SymbolSequence out;
  CosetLabel e = e1;
  do {
    SymbolSequence block = decorate(table, word, e);
    e = table.tau(word.digits.back(), block.entries.back().coset);
    out.entries.insert(out.entries.end(), block.entries.begin(), block.entries.end());
  } while (e != e1);
  return out;
}

BirkhoffPartial birkhoff_partial(const LevelData& level, const CFInput& x, CosetLabel e1, std::size_t n,
                                 BirkhoffNormalisation norm) {
  if (n == 0) throw Error("CountOutOfRange", "n must be at least 1");
  const SymbolSequence seq = encode_orbit(level.table(), x, e1, n);
  BirkhoffPartial out;
  out.length = seq.size();
  out.terminated = seq.terminated;
  out.numerator.assign(level.dimension(), Rational(0));
  if (seq.entries.empty()) return out;
  for (const SymbolEntry& s : seq.entries) out.numerator = add(out.numerator, level.symbol_class(s.coset));

  const SignedWord word = seq.digits();
  if (norm == BirkhoffNormalisation::periodic_point) {
    out.denominator = potential_I_on_cylinder(word);
  } else {
    std::vector<Integer> magnitudes;
    for (const Integer& d : word.digits) magnitudes.push_back(abs(d));
    const ConvergentTable conv = convergents(magnitudes, magnitudes.size());
    const Integer& q = conv.at(static_cast<long>(magnitudes.size())).q;
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, q.get_mpz_t());
    out.denominator = 2.0 * (std::log(mant) + static_cast<double>(exp) * std::log(2.0));
  }
  if (!(out.denominator > 0)) throw Error("NumericalFailure", "Birkhoff denominator is not positive");
  for (const Rational& v : out.numerator) out.value.push_back(v.get_d() / out.denominator);
  return out;
}

}  // namespace modshift
