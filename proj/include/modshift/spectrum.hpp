#pragma once

#include "modshift/contfrac.hpp"
#include "modshift/level.hpp"
#include "modshift/thermo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace modshift {

struct SpectrumPoint {
  std::vector<double> t;
  std::vector<double> alpha;
  double beta = 0;
  double dimension = 0;  // beta - (t | alpha)
  Provenance provenance;
  std::optional<std::string> error;  // set when the node failed; other fields are then empty
};

// Minimises beta(t) - (t | alpha) by damped Newton steps with a
// finite-difference Hessian of beta. Throws Error("AlphaOutOfRange") when
// no stationary point is found.
SpectrumPoint legendre(const LevelData& level, const std::vector<double>& alpha, const NumericsConfig& cfg,
                       std::optional<std::vector<double>> start = std::nullopt);

// Forward pass: one point per grid node from alpha(t) and the duality
// formula. Nodes run concurrently; a failing node carries its error.
std::vector<SpectrumPoint> spectrum_curve(const LevelData& level, const std::vector<std::vector<double>>& grid,
                                          const NumericsConfig& cfg);

// `count` evenly spaced points on the segment from `from` to `to`.
std::vector<std::vector<double>> line_grid(const std::vector<double>& from, const std::vector<double>& to,
                                           std::size_t count);

// Hessian of beta at t by central differences of alpha, symmetrised.
std::vector<std::vector<double>> beta_hessian(const LevelData& level, const std::vector<double>& t,
                                              const NumericsConfig& cfg, double step = 1e-3);

struct PeriodicSymbolValue {
  HomologyVector numerator;
  double denominator = 0;  // S_p I of the period word
  std::vector<double> value;
};

// Requires an admissible period of even length whose coset returns to the
// start: Error("OddPeriod") / Error("NotCyclic") / Error("InvalidWord").
PeriodicSymbolValue limiting_symbol_periodic(const LevelData& level, const SymbolSequence& period);

// Repeats an even alternating word from coset e1 until the coset returns
// to e1; Error("OddPeriod") for odd words.
SymbolSequence close_periodic_word(const CosetTable& table, const SignedWord& word, CosetLabel e1);

enum class BirkhoffNormalisation {
  periodic_point,  // S_n I at the periodic point of the length-n prefix
  convergent,      // 2 log q_n(|x|)
};

struct BirkhoffPartial {
  std::vector<double> value;
  HomologyVector numerator;  // S_n J, exact
  double denominator = 0;
  std::size_t length = 0;    // n, or fewer when a rational input terminated
  bool terminated = false;
};

BirkhoffPartial birkhoff_partial(const LevelData& level, const CFInput& x, CosetLabel e1, std::size_t n,
                                 BirkhoffNormalisation norm = BirkhoffNormalisation::periodic_point);

}  // namespace modshift
