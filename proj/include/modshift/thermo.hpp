#pragma once

#include "modshift/level.hpp"
#include "modshift/psl2.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace modshift {

enum class TailMode { truncate, zeta_tail };

struct NumericsConfig {
  int cutoff = 200;          // K: digits |k| <= K are summed explicitly
  int degree = 24;           // m: collocation on m + 1 Chebyshev-Lobatto nodes
  double tolerance = 1e-8;   // eps
  int depth = 10;            // n: cylinder length
  TailMode tail = TailMode::zeta_tail;
  int max_iterations = 20000;
  std::size_t samples = 200000;  // Monte Carlo paths for deep cylinder sums
  std::uint64_t seed = 20240601;
  std::size_t exact_limit = 2000000;  // enumerate exactly when K^n is at most this
  unsigned threads = 0;               // 0: hardware concurrency

  void validate() const;
};

std::string to_string(TailMode mode);
TailMode tail_mode_from_string(const std::string& s);

struct Provenance {
  std::string method;
  int cutoff = 0;
  int degree = 0;
  int depth = 0;
  double tolerance = 0;
  std::string tail;
  double tail_error_bound = 0;
  double statistical_error = 0;  // cylinder Monte Carlo only
};

nlohmann::ordered_json to_json(const Provenance& p);

struct PressureEstimate {
  double value = 0;
  Provenance provenance;
};

// S_n I at the periodic point of w; odd words are evaluated through w(-w).
// Throws Error("InvalidWord") for empty or non-alternating words and
// Error("NonHyperbolic") when |tr| <= 2.
double potential_I_on_cylinder(const SignedWord& w);

// Sum over admissible decorated words of length n (every start coset and
// sign, |digit| <= K) of exp(S_n(t|J) - beta S_n I). Exact enumeration only.
double cylinder_partition_sum(const LevelData& level, const std::vector<double>& t, double beta,
                              int depth, int cutoff);

// (1/n) log of the partition sum per start vertex. Exact when K^n is small,
// otherwise sequential importance sampling with a fixed seed.
PressureEstimate pressure_cylinder(const LevelData& level, const std::vector<double>& t, double beta,
                                   const NumericsConfig& cfg);

PressureEstimate pressure_collocation(const LevelData& level, const std::vector<double>& t, double beta,
                                      const NumericsConfig& cfg);

// Root of beta -> P(t, beta) for the collocation pressure.
PressureEstimate solve_beta(const LevelData& level, const std::vector<double>& t, const NumericsConfig& cfg);

struct GibbsMoments {
  std::vector<double> t;
  double beta = 0;
  std::vector<double> meanJ;
  double meanI = 0;
  std::vector<double> alpha;
  // Largest deviation between the eigenvector moments and central
  // differences of P in t and beta.
  double self_check_residual = 0;
  Provenance provenance;
};

GibbsMoments gibbs_moments(const LevelData& level, const std::vector<double>& t, const NumericsConfig& cfg,
                           bool self_check = true);

// Lower-level access used by tests: leading eigenvalue, eigenvectors and
// moments of the discretized operator at fixed (t, beta).
struct OperatorSpectrum {
  double log_lambda = 0;
  double meanI = 0;
  std::vector<double> meanJ;
  int iterations = 0;
  double tail_error_bound = 0;
};

OperatorSpectrum collocation_spectrum(const LevelData& level, const std::vector<double>& t, double beta,
                                      const NumericsConfig& cfg);

}  // namespace modshift
