#include "modshift/homology.hpp"

#include "modshift/error.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace modshift {

std::vector<std::size_t> RationalMatrix::rref() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t pivot = row;
    while (pivot < rows_ && sgn((*this)(pivot, col)) == 0) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != row) {
      for (std::size_t c = col; c < cols_; ++c) swap((*this)(pivot, c), (*this)(row, c));
    }
    const Rational inv = 1 / (*this)(row, col);
    for (std::size_t c = col; c < cols_; ++c) {
      if (sgn((*this)(row, c)) != 0) (*this)(row, c) *= inv;
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || sgn((*this)(r, col)) == 0) continue;
      const Rational factor = (*this)(r, col);
      for (std::size_t c = col; c < cols_; ++c) {
        if (sgn((*this)(row, c)) != 0) (*this)(r, c) -= factor * (*this)(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RationalVector RationalMatrix::multiply(const RationalVector& v) const {
  if (v.size() != cols_) throw Error("DimensionMismatch", "matrix-vector size mismatch");
  RationalVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn((*this)(r, c)) != 0 && sgn(v[c]) != 0) out[r] += (*this)(r, c) * v[c];
    }
  }
  return out;
}

RelativePresentation manin_presentation(const CosetTable& table,
                                        const std::optional<std::vector<std::size_t>>& order) {
  const std::size_t kappa = table.size();
  std::vector<std::size_t> generator_at(kappa);
  std::iota(generator_at.begin(), generator_at.end(), 0);
  if (order) {
    if (order->size() != kappa) throw Error("InvalidOrder", "generator order has the wrong length");
    generator_at = *order;
  }
  std::vector<std::size_t> position_of(kappa, kappa);
  for (std::size_t i = 0; i < kappa; ++i) {
    if (generator_at[i] >= kappa || position_of[generator_at[i]] != kappa) {
      throw Error("InvalidOrder", "generator order is not a permutation");
    }
    position_of[generator_at[i]] = i;
  }

  RelativePresentation pres;
  pres.level = table.level();
  pres.generator_count = kappa;
  pres.relations = RationalMatrix(2 * kappa, kappa);
  for (CosetLabel e = 0; e < kappa; ++e) {
    // {e(oo), e(0)} + {eS(oo), eS(0)} = 0
    pres.relations(e, position_of[e]) += 1;
    pres.relations(e, position_of[table.right_S(e)]) += 1;
    // {e(oo), e(0)} + {e(0), e(-1)} + {e(-1), e(oo)} = 0, using ST: oo -> 0 -> -1 -> oo
    const CosetLabel e1 = table.right_ST(e);
    const CosetLabel e2 = table.right_ST(e1);
    pres.relations(kappa + e, position_of[e]) += 1;
    pres.relations(kappa + e, position_of[e1]) += 1;
    pres.relations(kappa + e, position_of[e2]) += 1;
  }

  RationalMatrix reduced = pres.relations;
  const std::vector<std::size_t> pivots = reduced.rref();
  std::vector<long> pivot_row(kappa, -1);
  for (std::size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<long>(i);

  std::vector<std::size_t> free_positions;
  for (std::size_t pos = 0; pos < kappa; ++pos) {
    if (pivot_row[pos] < 0) free_positions.push_back(pos);
  }
  for (std::size_t pos : free_positions) pres.quotient_basis.push_back(generator_at[pos]);

  const std::size_t dim = free_positions.size();
  pres.expressor.assign(kappa, RationalVector(dim));
  for (std::size_t pos = 0; pos < kappa; ++pos) {
    RationalVector& coords = pres.expressor[generator_at[pos]];
    if (pivot_row[pos] < 0) {
      const auto j = static_cast<std::size_t>(
          std::lower_bound(free_positions.begin(), free_positions.end(), pos) - free_positions.begin());
      coords[j] = 1;
    } else {
      // x_pos + sum_j R[row, f_j] x_{f_j} = 0 in the quotient.
      const auto row = static_cast<std::size_t>(pivot_row[pos]);
      for (std::size_t j = 0; j < dim; ++j) coords[j] = -reduced(row, free_positions[j]);
    }
  }

  const SubgroupInvariants inv = subgroup_invariants(table.level());
  const auto expected = static_cast<std::size_t>(2 * inv.genus + inv.n_inf - 1);
  if (dim != expected) {
    throw Error("DimensionMismatch", "relative quotient has dimension " + std::to_string(dim) +
                                         ", expected 2g + N_inf - 1 = " + std::to_string(expected));
  }
  return pres;
}

CuspOrbitMap cusp_orbits(const CosetTable& table) {
  const std::size_t kappa = table.size();
  CuspOrbitMap map;
  map.orbit_of.assign(kappa, kappa);
  for (CosetLabel start = 0; start < kappa; ++start) {
    if (map.orbit_of[start] != kappa) continue;
    for (CosetLabel e = start; map.orbit_of[e] == kappa; e = table.right_T(e)) {
      map.orbit_of[e] = map.orbit_count;
    }
    ++map.orbit_count;
  }
  map.cusp_of_infinity = map.orbit_of;
  map.cusp_of_zero.resize(kappa);
  for (CosetLabel e = 0; e < kappa; ++e) map.cusp_of_zero[e] = map.orbit_of[table.right_S(e)];
  return map;
}

RationalVector CuspidalBasis::coordinates(const RationalVector& v) const {
  RationalVector out(free_coordinates.size());
  for (std::size_t j = 0; j < free_coordinates.size(); ++j) out[j] = v.at(free_coordinates[j]);
  return out;
}

CuspidalBasis cuspidal_basis(const RelativePresentation& pres, const CuspOrbitMap& cusps) {
  const std::size_t dim = pres.dimension();
  CuspidalBasis basis;
  basis.boundary = RationalMatrix(cusps.orbit_count, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t g = pres.quotient_basis[j];
    basis.boundary(cusps.cusp_of_zero[g], j) += 1;
    basis.boundary(cusps.cusp_of_infinity[g], j) -= 1;
  }

  RationalMatrix reduced = basis.boundary;
  basis.pivot_coordinates = reduced.rref();
  std::vector<bool> is_pivot(dim, false);
  for (std::size_t p : basis.pivot_coordinates) is_pivot[p] = true;
  for (std::size_t j = 0; j < dim; ++j) {
    if (!is_pivot[j]) basis.free_coordinates.push_back(j);
  }
  basis.dimension = basis.free_coordinates.size();

  basis.projector = RationalMatrix(dim, dim);
  for (std::size_t f : basis.free_coordinates) {
    RationalVector v(dim);
    v[f] = 1;
    for (std::size_t i = 0; i < basis.pivot_coordinates.size(); ++i) {
      v[basis.pivot_coordinates[i]] = -reduced(i, f);
    }
    for (std::size_t r = 0; r < dim; ++r) basis.projector(r, f) = v[r];
    basis.kernel_basis.push_back(std::move(v));
  }

  const SubgroupInvariants inv = subgroup_invariants(pres.level);
  if (basis.dimension != static_cast<std::size_t>(2 * inv.genus)) {
    throw Error("DimensionMismatch", "cuspidal kernel has dimension " + std::to_string(basis.dimension) +
                                         ", expected 2g = " + std::to_string(2 * inv.genus));
  }
  return basis;
}

HomologyData::HomologyData(const CosetTable& table, const std::optional<std::vector<std::size_t>>& order)
    : presentation_(manin_presentation(table, order)),
      cusps_(cusp_orbits(table)),
      basis_(cuspidal_basis(presentation_, cusps_)),
      genus_(subgroup_invariants(table.level()).genus) {
  classes_.reserve(table.size());
  for (CosetLabel e = 0; e < table.size(); ++e) {
    classes_.push_back(basis_.coordinates(presentation_.expressor[e]));
  }
}

RationalVector HomologyData::boundary_of(const std::vector<Rational>& combination) const {
  RationalVector out(cusps_.orbit_count);
  for (CosetLabel e = 0; e < combination.size(); ++e) {
    if (sgn(combination[e]) == 0) continue;
    out[cusps_.cusp_of_zero[e]] += combination[e];
    out[cusps_.cusp_of_infinity[e]] -= combination[e];
  }
  return out;
}

HomologyVector add(const HomologyVector& a, const HomologyVector& b) {
  if (a.size() != b.size()) throw Error("DimensionMismatch", "homology vectors of different length");
  HomologyVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool is_zero(const HomologyVector& v) {
  for (const Rational& x : v) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

}  // namespace modshift
