#include "modshift/level.hpp"

#include "modshift/error.hpp"

#include <string>

namespace modshift {

LevelData::LevelData(std::int64_t level)
    : table_(std::make_unique<CosetTable>(level)), invariants_(subgroup_invariants(level)) {
  homology_ = std::make_unique<HomologyData>(*table_);
  classes_ = homology_->classes();
  finish();
}

LevelData::LevelData(std::int64_t level, std::vector<HomologyVector> classes)
    : table_(std::make_unique<CosetTable>(level)),
      invariants_(subgroup_invariants(level)),
      classes_(std::move(classes)) {
  if (classes_.size() != table_->size()) {
    throw Error("DimensionMismatch", "expected one class per coset");
  }
  for (const auto& c : classes_) {
    if (c.size() != dimension()) throw Error("DimensionMismatch", "class length is not 2g");
  }
  finish();
}

void LevelData::finish() {
  graph_ = std::make_unique<TransitionGraph>(*table_);
  j_.reserve(classes_.size());
  for (const auto& c : classes_) {
    std::vector<double> v;
    v.reserve(c.size());
    for (const Rational& x : c) v.push_back(x.get_d());
    j_.push_back(std::move(v));
  }
}

const HomologyData& LevelData::homology() const {
  std::call_once(homology_once_, [this] {
    if (!homology_) homology_ = std::make_unique<HomologyData>(*table_);
  });
  return *homology_;
}

std::vector<double> LevelData::pair_with_J(const std::vector<double>& t) const {
  if (t.size() != dimension()) {
    throw Error("DimensionMismatch", "t has length " + std::to_string(t.size()) + " but 2g = " +
                                         std::to_string(dimension()));
  }
  std::vector<double> out(j_.size(), 0.0);
  for (std::size_t e = 0; e < j_.size(); ++e) {
    for (std::size_t i = 0; i < t.size(); ++i) out[e] += t[i] * j_[e][i];
  }
  return out;
}

}  // namespace modshift
