#pragma once

#include "modshift/cosets.hpp"
#include "modshift/homology.hpp"
#include "modshift/shiftspace.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace modshift {

// Immutable per-level bundle shared by the numerical modules: coset table,
// transition graph, exact symbol classes and their floating-point images.
class LevelData {
 public:
  explicit LevelData(std::int64_t level);
  // Classes taken from a cache; the full homology data is rebuilt on demand.
  LevelData(std::int64_t level, std::vector<HomologyVector> classes);

  LevelData(const LevelData&) = delete;
  LevelData& operator=(const LevelData&) = delete;

  std::int64_t level() const { return table_->level(); }
  const CosetTable& table() const { return *table_; }
  const TransitionGraph& graph() const { return *graph_; }
  const SubgroupInvariants& invariants() const { return invariants_; }
  std::size_t dimension() const { return static_cast<std::size_t>(2 * invariants_.genus); }

  const HomologyData& homology() const;
  const std::vector<HomologyVector>& classes() const { return classes_; }
  const HomologyVector& symbol_class(CosetLabel e) const { return classes_.at(e); }

  // J(e) as doubles; J(e)[i] is the i-th cuspidal coordinate.
  const std::vector<double>& potential_J(CosetLabel e) const { return j_.at(e); }

  // (t | J(e)) for every coset; throws Error("DimensionMismatch") on a wrong length.
  std::vector<double> pair_with_J(const std::vector<double>& t) const;

 private:
  void finish();

  std::unique_ptr<CosetTable> table_;
  std::unique_ptr<TransitionGraph> graph_;
  SubgroupInvariants invariants_;
  std::vector<HomologyVector> classes_;
  std::vector<std::vector<double>> j_;
  mutable std::once_flag homology_once_;
  mutable std::unique_ptr<HomologyData> homology_;
};

}  // namespace modshift
