#include "modshift/thermo.hpp"

#include "modshift/error.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace modshift {

void NumericsConfig::validate() const {
  if (cutoff < 1) throw Error("InvalidConfig", "digit cutoff K must be at least 1");
  if (degree < 2) throw Error("InvalidConfig", "collocation degree m must be at least 2");
  if (!(tolerance > 0)) throw Error("InvalidConfig", "tolerance must be positive");
  if (depth < 1) throw Error("InvalidConfig", "cylinder depth n must be at least 1");
  if (max_iterations < 1) throw Error("InvalidConfig", "iteration cap must be positive");
  if (samples < 1) throw Error("InvalidConfig", "sample count must be positive");
}

std::string to_string(TailMode mode) { return mode == TailMode::truncate ? "truncate" : "zeta-tail"; }

TailMode tail_mode_from_string(const std::string& s) {
  if (s == "truncate") return TailMode::truncate;
  if (s == "zeta-tail" || s == "zeta") return TailMode::zeta_tail;
  throw Error("UsageError", "unknown tail mode '" + s + "'");
}

nlohmann::ordered_json to_json(const Provenance& p) {
  nlohmann::ordered_json j{{"method", p.method},       {"K", p.cutoff},     {"m", p.degree},
                           {"n", p.depth},             {"tol", p.tolerance}, {"tail", p.tail},
                           {"tailErrorBound", p.tail_error_bound}};
  if (p.method == "cylinder") j["statisticalError"] = p.statistical_error;
  return j;
}

namespace {

void check_beta(double beta) {
  if (!(beta > 0.5) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "beta must exceed 1/2, got " << beta;
    throw Error("BetaOutOfDomain", os.str());
  }
}

double hurwitz_zeta(double s, double q) {
  gsl_sf_result r;
  const int status = gsl_sf_hzeta_e(s, q, &r);
  if (status != GSL_SUCCESS) {
    throw Error("NumericalFailure", std::string("Hurwitz zeta: ") + gsl_strerror(status));
  }
  return r.val;
}

struct GslHandlerGuard {
  GslHandlerGuard() { gsl_set_error_handler_off(); }
};
const GslHandlerGuard gsl_guard;

// log of a positive big integer.
double log_integer(const Integer& x) {
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

// ---------------------------------------------------------------------------
// Collocation on Chebyshev-Lobatto nodes of [0, 1].

struct Collocation {
  int m = 0;
  std::vector<double> nodes;
  std::vector<double> weights;  // barycentric
  Eigen::MatrixXd diff;         // first derivative of the interpolant at the nodes

  explicit Collocation(int degree) : m(degree), nodes(degree + 1), weights(degree + 1) {
    for (int i = 0; i <= m; ++i) {
      nodes[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * i / m));
      weights[i] = (i % 2 == 0 ? 1.0 : -1.0) * ((i == 0 || i == m) ? 0.5 : 1.0);
    }
    diff = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) {
      double row = 0;
      for (int j = 0; j <= m; ++j) {
        if (i == j) continue;
        diff(i, j) = (weights[j] / weights[i]) / (nodes[i] - nodes[j]);
        row += diff(i, j);
      }
      diff(i, i) = -row;
    }
  }

  std::size_t size() const { return nodes.size(); }

  // Values of all Lagrange basis polynomials at u.
  void basis(double u, double* out) const {
    for (std::size_t j = 0; j < size(); ++j) {
      if (u == nodes[j]) {
        std::fill(out, out + size(), 0.0);
        out[j] = 1.0;
        return;
      }
    }
    double denom = 0;
    for (std::size_t j = 0; j < size(); ++j) {
      out[j] = weights[j] / (u - nodes[j]);
      denom += out[j];
    }
    for (std::size_t j = 0; j < size(); ++j) out[j] /= denom;
  }
};

// Per magnitude residue rho (mod N): A_rho[i][j] = sum_{k <= K, k = rho} (k + y_i)^{-2 beta} l_j(1 / (k + y_i))
// plus the tail, and the matching blocks weighted by I = 2 log(k + y).
struct ResidueBlocks {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::MatrixXd> weight_I;
  double tail_error_bound = 0;
};

ResidueBlocks residue_blocks(std::int64_t level, double beta, const NumericsConfig& cfg, const Collocation& col) {
  const auto n = static_cast<std::size_t>(level);
  const std::size_t p = col.size();
  ResidueBlocks blocks;
  blocks.weight.assign(n, Eigen::MatrixXd::Zero(p, p));
  blocks.weight_I.assign(n, Eigen::MatrixXd::Zero(p, p));
  std::vector<double> ell(p);
  for (int k = 1; k <= cfg.cutoff; ++k) {
    const std::size_t rho = static_cast<std::size_t>(k) % n;
    for (std::size_t i = 0; i < p; ++i) {
      const double x = k + col.nodes[i];
      const double w = std::pow(x, -2.0 * beta);
      const double wi = 2.0 * std::log(x) * w;
      col.basis(1.0 / x, ell.data());
      for (std::size_t j = 0; j < p; ++j) {
        blocks.weight[rho](i, j) += w * ell[j];
        blocks.weight_I[rho](i, j) += wi * ell[j];
      }
    }
  }
  const double kk = cfg.cutoff;
  if (cfg.tail == TailMode::truncate) {
    blocks.tail_error_bound = hurwitz_zeta(2.0 * beta, kk + 1.0);
    return blocks;
  }

  // f(1/(k+y)) ~ f(0) + f'(0) u + f''(0) u^2 / 2 with u = 1/(k+y), each power
  // of u summed in closed form over the residue class k = rho (mod N), k > K.
  const double nd = static_cast<double>(level);
  const Eigen::MatrixXd d2 = col.diff * col.diff;
  auto tail = [&](double b, double y, std::size_t rho, double* t) {
    const std::int64_t first = cfg.cutoff + 1;
    const std::int64_t shift = ((static_cast<std::int64_t>(rho) - first) % level + level) % level;
    const double q = (static_cast<double>(first + shift) + y) / nd;
    for (int order = 0; order < 3; ++order) {
      t[order] = std::pow(nd, -2.0 * b - order) * hurwitz_zeta(2.0 * b + order, q);
    }
  };
  const double h = 1e-6;
  for (std::size_t rho = 0; rho < n; ++rho) {
    for (std::size_t i = 0; i < p; ++i) {
      double t[3], tp[3], tm[3];
      tail(beta, col.nodes[i], rho, t);
      tail(beta + h, col.nodes[i], rho, tp);
      tail(beta - h, col.nodes[i], rho, tm);
      for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double c0 = j == 0 ? 1.0 : 0.0;
        const double c1 = col.diff(0, jj);
        const double c2 = 0.5 * d2(0, jj);
        blocks.weight[rho](i, j) += c0 * t[0] + c1 * t[1] + c2 * t[2];
        const double di0 = -(tp[0] - tm[0]) / (2 * h);
        const double di1 = -(tp[1] - tm[1]) / (2 * h);
        const double di2 = -(tp[2] - tm[2]) / (2 * h);
        blocks.weight_I[rho](i, j) += c0 * di0 + c1 * di1 + c2 * di2;
      }
    }
  }
  blocks.tail_error_bound = hurwitz_zeta(2.0 * beta + 3.0, kk + 1.0);
  return blocks;
}

// The operator alternates signs, L = [[0, Lp], [Lm, 0]]: Lp maps functions on
// negative-sign states to positive-sign states (prepending a negative digit)
// and Lm the reverse. Rows and columns are indexed by coset * (m + 1) + node.
struct SignedOperator {
  Eigen::MatrixXd plus, minus;      // Lp, Lm
  Eigen::MatrixXd plus_I, minus_I;  // same with the I weights
};

SignedOperator assemble(const LevelData& level, const std::vector<double>& tj, const ResidueBlocks& blocks,
                        std::size_t p) {
  const CosetTable& table = level.table();
  const std::int64_t n = level.level();
  const auto dim = static_cast<Eigen::Index>(table.size() * p);
  SignedOperator op;
  op.plus = op.minus = op.plus_I = op.minus_I = Eigen::MatrixXd::Zero(dim, dim);
  const auto bp = static_cast<Eigen::Index>(p);
  for (CosetLabel target = 0; target < table.size(); ++target) {
    const auto row = static_cast<Eigen::Index>(target * p);
    for (std::int64_t rho = 0; rho < n; ++rho) {
      // Positive digit k = rho (mod N): residue rho; negative digit -k: residue -rho.
      const std::int64_t r_pos = rho;
      const std::int64_t r_neg = (n - rho) % n;
      const CosetLabel src_neg = table.tau_residue_inverse(r_neg, target);
      const CosetLabel src_pos = table.tau_residue_inverse(r_pos, target);
      const double w_neg = std::exp(tj[src_neg]);
      const double w_pos = std::exp(tj[src_pos]);
      const auto& a = blocks.weight[static_cast<std::size_t>(rho)];
      const auto& ai = blocks.weight_I[static_cast<std::size_t>(rho)];
      const auto col_neg = static_cast<Eigen::Index>(src_neg * p);
      const auto col_pos = static_cast<Eigen::Index>(src_pos * p);
      op.plus.block(row, col_neg, bp, bp) += w_neg * a;
      op.plus_I.block(row, col_neg, bp, bp) += w_neg * ai;
      op.minus.block(row, col_pos, bp, bp) += w_pos * a;
      op.minus_I.block(row, col_pos, bp, bp) += w_pos * ai;
    }
  }
  return op;
}

struct Eigenpair {
  double mu = 0;  // eigenvalue of Lp * Lm
  Eigen::VectorXd vec;
  int iterations = 0;
};

// Power iteration for the leading eigenpair of A * B (applied as two products).
Eigenpair power_iteration(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const NumericsConfig& cfg) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(b.cols());
  Eigenpair out;
  double last_change = std::numeric_limits<double>::infinity();
  constexpr double target = 1e-14;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::VectorXd w = a * (b * v);
    const Eigen::Index idx = [&] {
      Eigen::Index k;
      w.cwiseAbs().maxCoeff(&k);
      return k;
    }();
    const double scale = w(idx);
    if (!(std::abs(scale) > 0) || !std::isfinite(scale)) {
      throw Error("NoConvergence", "power iteration degenerated");
    }
    w /= scale;
    last_change = (w - v).cwiseAbs().maxCoeff();
    v = std::move(w);
    out.iterations = it;
    if (last_change <= target) break;
  }
  if (last_change > target && last_change > cfg.tolerance * 1e-3) {
    std::ostringstream os;
    os << "power iteration did not converge in " << cfg.max_iterations << " steps (change " << last_change << ")";
    throw Error("NoConvergence", os.str());
  }
  // Rayleigh-type refinement of the eigenvalue on the converged vector.
  const Eigen::VectorXd w = a * (b * v);
  out.mu = v.dot(w) / v.dot(v);
  if (!(out.mu > 0)) throw Error("NoConvergence", "leading eigenvalue is not positive");
  out.vec = std::move(v);
  return out;
}

}  // namespace

OperatorSpectrum collocation_spectrum(const LevelData& level, const std::vector<double>& t, double beta,
                                      const NumericsConfig& cfg) {
  cfg.validate();
  check_beta(beta);
  const std::vector<double> tj = level.pair_with_J(t);
  const Collocation col(cfg.degree);
  const ResidueBlocks blocks = residue_blocks(level.level(), beta, cfg, col);
  const SignedOperator op = assemble(level, tj, blocks, col.size());

  const Eigenpair right = power_iteration(op.plus, op.minus, cfg);
  const Eigen::MatrixXd plus_t = op.plus.transpose();
  const Eigen::MatrixXd minus_t = op.minus.transpose();
  const Eigenpair left = power_iteration(minus_t, plus_t, cfg);

  const double lambda = std::sqrt(right.mu);
  const Eigen::VectorXd& h_plus = right.vec;
  const Eigen::VectorXd h_minus = op.minus * h_plus / lambda;
  const Eigen::VectorXd& w_plus = left.vec;
  const Eigen::VectorXd w_minus = plus_t * w_plus / lambda;

  OperatorSpectrum out;
  out.log_lambda = std::log(lambda);
  out.iterations = right.iterations + left.iterations;
  const double pairing = w_plus.dot(h_plus) + w_minus.dot(h_minus);
  out.meanI = (w_plus.dot(op.plus_I * h_minus) + w_minus.dot(op.minus_I * h_plus)) / (lambda * pairing);

  const std::size_t p = col.size();
  const std::size_t dim = level.dimension();
  out.meanJ.assign(dim, 0.0);
  for (CosetLabel e = 0; e < level.table().size(); ++e) {
    double mass = 0;
    for (std::size_t i = 0; i < p; ++i) {
      const auto k = static_cast<Eigen::Index>(e * p + i);
      mass += w_plus(k) * h_plus(k) + w_minus(k) * h_minus(k);
    }
    const auto& j = level.potential_J(e);
    for (std::size_t c = 0; c < dim; ++c) out.meanJ[c] += mass * j[c];
  }
  for (double& x : out.meanJ) x /= pairing;

  if (cfg.tail == TailMode::zeta_tail) {
    // Third-order remainder of the tail expansion, relative to the eigenfunction.
    const Eigen::MatrixXd d3 = col.diff * col.diff * col.diff;
    double curvature = 0;
    for (std::size_t e = 0; e < 2 * level.table().size(); ++e) {
      const Eigen::VectorXd& h = e % 2 == 0 ? h_plus : h_minus;
      const auto base = static_cast<Eigen::Index>((e / 2) * p);
      const auto seg = h.segment(base, static_cast<Eigen::Index>(p));
      const double f0 = std::abs(seg(0));
      if (f0 > 0) curvature = std::max(curvature, std::abs(d3.row(0).dot(seg)) / f0);
    }
    out.tail_error_bound = curvature * blocks.tail_error_bound / 6.0;
  } else {
    out.tail_error_bound = blocks.tail_error_bound;
  }
  return out;
}

namespace {

Provenance collocation_provenance(const NumericsConfig& cfg, double tail_bound) {
  Provenance p;
  p.method = "collocation";
  p.cutoff = cfg.cutoff;
  p.degree = cfg.degree;
  p.depth = cfg.depth;
  p.tolerance = cfg.tolerance;
  p.tail = to_string(cfg.tail);
  p.tail_error_bound = tail_bound;
  return p;
}

}  // namespace

PressureEstimate pressure_collocation(const LevelData& level, const std::vector<double>& t, double beta,
                                      const NumericsConfig& cfg) {
  const OperatorSpectrum s = collocation_spectrum(level, t, beta, cfg);
  return {s.log_lambda, collocation_provenance(cfg, s.tail_error_bound)};
}

PressureEstimate solve_beta(const LevelData& level, const std::vector<double>& t, const NumericsConfig& cfg) {
  cfg.validate();
  constexpr double beta_floor = 0.51;
  auto pressure = [&](double b) { return pressure_collocation(level, t, b, cfg); };

  std::ostringstream scanned;
  auto record = [&](double b, double v) { scanned << " P(" << b << ")=" << v; };

  PressureEstimate last = pressure(1.0);
  double lo = 1.0, hi = 1.0, p_lo = last.value, p_hi = last.value;
  record(1.0, last.value);
  if (last.value == 0) return {1.0, last.provenance};
  if (last.value > 0) {
    bool found = false;
    for (double b : {1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0}) {
      const double v = pressure(b).value;
      record(b, v);
      if (v < 0) {
        hi = b;
        p_hi = v;
        found = true;
        break;
      }
      lo = b;
      p_lo = v;
    }
    if (!found) throw Error("BracketFailure", "no sign change up to beta = 16:" + scanned.str());
  } else {
    bool found = false;
    for (double b : {0.9, 0.8, 0.7, 0.6, 0.55, 0.52, beta_floor + 1e-6}) {
      const double v = pressure(b).value;
      record(b, v);
      if (v > 0) {
        lo = b;
        p_lo = v;
        found = true;
        break;
      }
      hi = b;
      p_hi = v;
    }
    if (!found) {
      throw Error("BracketFailure",
                  "no sign change above beta = 0.51; the pressure diverges near 1/2:" + scanned.str());
    }
  }

  // Bisection to a narrow bracket, then Illinois-safeguarded secant steps.
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double v = pressure(mid).value;
    if (v > 0) {
      lo = mid;
      p_lo = v;
    } else {
      hi = mid;
      p_hi = v;
    }
  }
  double beta = lo;
  double value = p_lo;
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    beta = (lo * p_hi - hi * p_lo) / (p_hi - p_lo);
    if (!(beta > lo && beta < hi)) beta = 0.5 * (lo + hi);
    last = pressure(beta);
    value = last.value;
    if (value == 0 || hi - lo < 1e-14) break;
    if (value > 0) {
      lo = beta;
      p_lo = value;
      if (side == 1) p_hi *= 0.5;
      side = 1;
    } else {
      hi = beta;
      p_hi = value;
      if (side == -1) p_lo *= 0.5;
      side = -1;
    }
    if (std::abs(value) < 1e-15) break;
  }
  if (std::abs(value) > cfg.tolerance * 10) {
    std::ostringstream os;
    os << "residual |P| = " << std::abs(value) << " at beta = " << beta;
    throw Error("NoConvergence", os.str());
  }
  return {beta, last.provenance};
}

GibbsMoments gibbs_moments(const LevelData& level, const std::vector<double>& t, const NumericsConfig& cfg,
                           bool self_check) {
  const PressureEstimate root = solve_beta(level, t, cfg);
  const OperatorSpectrum s = collocation_spectrum(level, t, root.value, cfg);
  GibbsMoments g;
  g.t = t;
  g.beta = root.value;
  g.meanI = s.meanI;
  g.meanJ = s.meanJ;
  if (!(g.meanI > 0)) throw Error("NumericalFailure", "mean of I is not positive");
  for (double x : g.meanJ) g.alpha.push_back(x / g.meanI);
  g.provenance = collocation_provenance(cfg, s.tail_error_bound);

  if (self_check) {
    const double h = 2e-5;
    auto p = [&](const std::vector<double>& tt, double b) { return collocation_spectrum(level, tt, b, cfg).log_lambda; };
    const double fd_i = -(p(t, g.beta + h) - p(t, g.beta - h)) / (2 * h);
    g.self_check_residual = std::abs(fd_i - g.meanI);
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<double> tp = t, tm = t;
      tp[i] += h;
      tm[i] -= h;
      const double fd_j = (p(tp, g.beta) - p(tm, g.beta)) / (2 * h);
      g.self_check_residual = std::max(g.self_check_residual, std::abs(fd_j - g.meanJ[i]));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

double potential_I_on_cylinder(const SignedWord& w) {
  if (w.empty()) throw Error("InvalidWord", "empty word");
  if (!w.is_alternating()) throw Error("InvalidWord", "digits must be nonzero with alternating signs");
  std::vector<Integer> digits = w.digits;
  const bool odd = digits.size() % 2 == 1;
  if (odd) {
    for (const Integer& d : w.digits) digits.push_back(-d);
  }
  const MoebiusMatrix m = word_to_matrix(digits);
  const Integer tr = abs(m.trace());
  if (tr <= 2) throw Error("NonHyperbolic", "word matrix has |trace| = " + tr.get_str());
  // log((tr + sqrt(tr^2 - 4)) / 2) = log tr + log((1 + sqrt(1 - 4/tr^2)) / 2)
  const double inv = std::exp(-log_integer(tr));
  const double value = 2.0 * (log_integer(tr) + std::log((1.0 + std::sqrt(1.0 - 4.0 * inv * inv)) / 2.0));
  return odd ? value / 2 : value;
}

namespace {

// Running product of [[0, 1], [1, k]] matrices with columns (p_{j-1}, q_{j-1}), (p_j, q_j),
// renormalised so that q_j = 1.
struct ConvergentWalk {
  double p_prev = 1, p = 0, q_prev = 0;
  double log_q = 0;
  int length = 0;

  double ratio() const { return q_prev; }  // q_{j-1} / q_j

  void step(double k) {
    const double np = p_prev + k * p;
    const double nq = q_prev + k;
    p_prev = p / nq;
    p = np / nq;
    q_prev = 1.0 / nq;
    log_q += std::log(nq);
    ++length;
  }

  // log of the Perron root of the unsigned product (det = (-1)^n).
  double log_lambda() const {
    const double tr = p_prev + 1.0;
    const double det = (length % 2 == 0 ? 1.0 : -1.0) * std::exp(-2.0 * log_q);
    const double disc = std::max(tr * tr - 4.0 * det, 0.0);
    return log_q + std::log((tr + std::sqrt(disc)) / 2.0);
  }
};

std::int64_t signed_residue(double magnitude, int sign, std::int64_t level) {
  const auto r = static_cast<std::int64_t>(std::fmod(magnitude, static_cast<double>(level)));
  return sign > 0 ? r : (level - r) % level;
}

void enumerate(const LevelData& level, const std::vector<double>& tj, double beta, int depth, int cutoff,
               ConvergentWalk walk, CosetLabel e, int sign, double tsum, double& total) {
  if (walk.length == depth) {
    total += std::exp(tsum - 2.0 * beta * walk.log_lambda());
    return;
  }
  for (int k = 1; k <= cutoff; ++k) {
    ConvergentWalk next = walk;
    next.step(k);
    const CosetLabel e_next = level.table().tau_residue(signed_residue(k, sign, level.level()), e);
    enumerate(level, tj, beta, depth, cutoff, next, e_next, -sign, tsum + tj[e], total);
  }
}

unsigned thread_count(const NumericsConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

double cylinder_partition_sum(const LevelData& level, const std::vector<double>& t, double beta, int depth,
                              int cutoff) {
  check_beta(beta);
  if (depth < 1) throw Error("InvalidConfig", "cylinder depth must be at least 1");
  if (cutoff < 1) throw Error("InvalidConfig", "digit cutoff must be at least 1");
  const std::vector<double> tj = level.pair_with_J(t);
  double total = 0;
  for (CosetLabel e = 0; e < level.table().size(); ++e) {
    for (int sign : {1, -1}) enumerate(level, tj, beta, depth, cutoff, {}, e, sign, 0.0, total);
  }
  return total;
}

PressureEstimate pressure_cylinder(const LevelData& level, const std::vector<double>& t, double beta,
                                   const NumericsConfig& cfg) {
  cfg.validate();
  check_beta(beta);
  const std::vector<double> tj = level.pair_with_J(t);
  const std::size_t starts = 2 * level.table().size();
  const int n = cfg.depth;
  const double k_max = cfg.cutoff;

  Provenance prov;
  prov.method = "cylinder";
  prov.cutoff = cfg.cutoff;
  prov.degree = cfg.degree;
  prov.depth = n;
  prov.tolerance = cfg.tolerance;
  prov.tail = to_string(cfg.tail);

  const double exact_words = std::pow(k_max, n);
  if (cfg.tail == TailMode::truncate && exact_words <= static_cast<double>(cfg.exact_limit)) {
    const double z = cylinder_partition_sum(level, t, beta, n, cfg.cutoff);
    prov.tail_error_bound = 0;
    return {std::log(z / static_cast<double>(starts)) / n, prov};
  }

  // Sequential importance sampling: at state s = q_{j-1}/q_j the next digit is
  // drawn with probability proportional to (k + s)^{-2 beta} = (q_{j+1}/q_j)^{-2 beta}.
  const std::size_t samples = (cfg.samples + starts - 1) / starts * starts;
  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<double> sums(chunks, 0.0), squares(chunks, 0.0);
  const bool with_tail = cfg.tail == TailMode::zeta_tail;
  constexpr double max_digit = 4503599627370496.0;  // 2^52

  auto run_chunk = [&](std::size_t c) {
    std::mt19937_64 rng(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (c + 1)));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> cumulative(static_cast<std::size_t>(cfg.cutoff));
    double sum = 0, sq = 0;
    const std::size_t end = std::min(samples, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const std::size_t start = i % starts;
      CosetLabel e = start / 2;
      int sign = start % 2 == 0 ? 1 : -1;
      ConvergentWalk walk;
      double log_w = 0, tsum = 0;
      for (int j = 0; j < n; ++j) {
        const double s = walk.ratio();
        double acc = 0;
        for (int k = 1; k <= cfg.cutoff; ++k) {
          acc += std::pow(k + s, -2.0 * beta);
          cumulative[static_cast<std::size_t>(k - 1)] = acc;
        }
        const double head = acc;
        const double tail = with_tail ? hurwitz_zeta(2.0 * beta, k_max + 1.0 + s) : 0.0;
        const double u = uniform(rng) * (head + tail);
        double k;
        if (u < head) {
          const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
          k = static_cast<double>(std::min<std::ptrdiff_t>(it - cumulative.begin(), cfg.cutoff - 1) + 1);
          log_w += std::log(head + tail);
        } else {
          // Discretised Pareto proposal on k > K, corrected by the exact weight.
          const double a = 1.0 - 2.0 * beta;
          const double base = k_max + 1.0 + s;
          const double v = std::max(uniform(rng), 1e-300);
          k = std::floor(base * std::pow(v, 1.0 / a) - s);
          k = std::clamp(k, k_max + 1.0, max_digit);
          const double g = (std::pow(k + s, a) - std::pow(k + 1.0 + s, a)) / std::pow(base, a);
          const double target = std::pow(k + s, -2.0 * beta);
          log_w += std::log(target * (head + tail) / (g * tail));
        }
        tsum += tj[e];
        e = level.table().tau_residue(signed_residue(k, sign, level.level()), e);
        sign = -sign;
        walk.step(k);
      }
      // The target factors (k + s)^{-2 beta} multiply to q_n^{-2 beta}, so
      // weight = prod(target / proposal) * q_n^{2 beta} * lambda^{-2 beta} * exp(S_n (t|J)).
      log_w += 2.0 * beta * (walk.log_q - walk.log_lambda()) + tsum;
      const double w = std::exp(log_w);
      sum += w;
      sq += w * w;
    }
    sums[c] = sum;
    squares[c] = sq;
  };

  const unsigned workers = std::min<std::size_t>(thread_count(cfg), chunks);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t c; (c = next++) < chunks;) run_chunk(c);
    });
  }
  for (std::size_t c; (c = next++) < chunks;) run_chunk(c);
  for (auto& th : pool) th.join();

  double sum = 0, sq = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sq += squares[c];
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  const double var = std::max(sq / count - mean * mean, 0.0);
  prov.statistical_error = std::sqrt(var / count) / mean / n;
  prov.tail_error_bound = with_tail ? 0 : hurwitz_zeta(2.0 * beta, k_max + 1.0);
  return {std::log(mean) / n, prov};
}

}  // namespace modshift
