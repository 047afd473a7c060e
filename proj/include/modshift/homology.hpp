#pragma once

#include "modshift/cosets.hpp"
#include "modshift/psl2.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace modshift {

using RationalVector = std::vector<Rational>;

// Dense exact matrix; the matrices here have at most a few hundred columns.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  // In-place reduced row echelon form; returns the pivot column of each
  // nonzero row, in order.
  std::vector<std::size_t> rref();

  RationalVector multiply(const RationalVector& v) const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Relative homology of the modular curve presented by Manin symbols: one
// generator per coset, modulo x + xS = 0 and x + x(ST) + x(ST)^2 = 0.
struct RelativePresentation {
  std::int64_t level = 0;
  std::size_t generator_count = 0;
  RationalMatrix relations;                   // one relation per row, in generator coordinates
  std::vector<std::size_t> quotient_basis;    // free generators, ascending
  std::vector<RationalVector> expressor;      // generator -> coordinates on quotient_basis

  std::size_t dimension() const { return quotient_basis.size(); }
};

// `order` optionally permutes the elimination order of the generators
// (order[i] is the generator eliminated i-th); the identity by default.
// Throws Error("DimensionMismatch") if the quotient dimension is not
// 2g + N_inf - 1.
RelativePresentation manin_presentation(const CosetTable& table,
                                        const std::optional<std::vector<std::size_t>>& order = std::nullopt);

// Cusps of the cover as orbits of right translation by T on cosets.
struct CuspOrbitMap {
  std::size_t orbit_count = 0;
  std::vector<std::size_t> orbit_of;        // coset -> orbit of the coset itself
  std::vector<std::size_t> cusp_of_infinity;  // e -> cusp class of e(i oo)
  std::vector<std::size_t> cusp_of_zero;      // e -> cusp class of e(0) = (eS)(i oo)
};

CuspOrbitMap cusp_orbits(const CosetTable& table);

// Kernel of the boundary map on the relative quotient, together with the
// projection onto it along the span of the boundary's pivot coordinates.
struct CuspidalBasis {
  std::size_t dimension = 0;                  // 2g
  std::vector<std::size_t> pivot_coordinates; // complement of the kernel
  std::vector<std::size_t> free_coordinates;  // kernel coordinates, one per basis vector
  RationalMatrix boundary;                    // cusps x quotient
  std::vector<RationalVector> kernel_basis;   // in quotient coordinates
  RationalMatrix projector;                   // quotient -> quotient, image = kernel

  // Coordinates of the projection of v in kernel_basis.
  RationalVector coordinates(const RationalVector& v) const;
};

// Throws Error("DimensionMismatch") if the kernel dimension is not 2g.
CuspidalBasis cuspidal_basis(const RelativePresentation& pres, const CuspOrbitMap& cusps);

using HomologyVector = RationalVector;

// Everything the potential J needs at one level: presentation, cusps,
// cuspidal basis and the class of every Manin symbol {e(i oo), e(0)}.
class HomologyData {
 public:
  explicit HomologyData(const CosetTable& table,
                        const std::optional<std::vector<std::size_t>>& order = std::nullopt);

  std::int64_t level() const { return presentation_.level; }
  std::int64_t genus() const { return genus_; }
  std::size_t dimension() const { return basis_.dimension; }  // 2g

  const RelativePresentation& presentation() const { return presentation_; }
  const CuspOrbitMap& cusps() const { return cusps_; }
  const CuspidalBasis& basis() const { return basis_; }

  // Projected class of the Manin symbol of e, in cuspidal coordinates.
  const HomologyVector& symbol_class(CosetLabel e) const { return classes_.at(e); }
  const std::vector<HomologyVector>& classes() const { return classes_; }

  // Boundary of a coset combination, i.e. sum c_e ([e(0)] - [e(i oo)]).
  RationalVector boundary_of(const std::vector<Rational>& combination) const;

 private:
  RelativePresentation presentation_;
  CuspOrbitMap cusps_;
  CuspidalBasis basis_;
  std::vector<HomologyVector> classes_;
  std::int64_t genus_ = 0;
};

HomologyVector add(const HomologyVector& a, const HomologyVector& b);
bool is_zero(const HomologyVector& v);

}  // namespace modshift
