#pragma once

// Finite-difference verification of the divergence identity on sampled fields.
//
// Grid layout: t in [0, 2 pi) periodic with nt points, x in [0, lx] with nx
// points, y_j in [-ly, ly] with ny points each (n = 1 or 2). Values are
// stored row-major in the order (ix, it, iy1[, iy2]).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnpwe/jet.hpp"
#include "gnpwe/model.hpp"

namespace gnpwe::fd {

struct GridSpec {
  int n = 1;
  int nt = 32;
  int ny = 33;
  int nx = 17;
  double lx = 1.0;
  double ly = 4.0;
  int stencil_order = 2;

  /// Throws DomainError / StencilError on violated invariants.
  void validate() const;

  double ht() const;
  double hx() const;
  double hy() const;
  double t(int i) const { return i * ht(); }
  double x(int i) const { return i * hx(); }
  double y(int i) const { return -ly + i * hy(); }
  int ny2() const { return n == 2 ? ny : 1; }
  std::size_t slice_size() const;
  std::size_t size() const;
  std::size_t index(int ix, int it, int iy1, int iy2 = 0) const {
    return ((static_cast<std::size_t>(ix) * nt + it) * ny + iy1) * ny2() + iy2;
  }
  /// Points excluded from interior norms at each non-periodic end.
  int margin() const { return stencil_order; }

  bool operator==(const GridSpec&) const = default;
};

class GridField {
 public:
  explicit GridField(GridSpec grid);
  GridField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(int ix, int it, int iy1, int iy2 = 0) const { return values_[grid_.index(ix, it, iy1, iy2)]; }
  double& at(int ix, int it, int iy1, int iy2 = 0) { return values_[grid_.index(ix, it, iy1, iy2)]; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Sample g(t, x, y) where y holds n coordinates.
GridField sample(const GridSpec& grid,
                 const std::function<double(double t, double x, std::span<const double> y)>& g);

/// f(u) = sum_m c_m u^m with rational coefficients and f'' not identically 0.
class FModel {
 public:
  /// Throws DomainError when f'' vanishes identically.
  explicit FModel(std::vector<Rational> coeffs);
  /// From a polynomial in u alone, e.g. parse("u^2", 1).
  static FModel from_polynomial(const DiffPolynomial& p);

  /// f^(k)(u).
  double derivative(int k, double u) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

 private:
  std::vector<Rational> coeffs_;
};

struct Norms {
  double max_norm = 0.0;
  /// Root mean square over the interior points.
  double l2_norm = 0.0;
};

struct FdResidual {
  Norms norms;
  GridField field;
};

/// D_t rho + D_x sigma + sum_j D_yj zeta_j - chi * Delta, every jet of u and
/// every divergence approximated with stencils of grid.stencil_order. Explicit
/// powers of t in rho are differentiated exactly, the rest periodically.
FdResidual fd_divergence_residual(const Characteristic& chi, const GridField& u, const FModel& f,
                                  const Rational& a, const Rational& b);

/// Divergence of the flux tuple alone; small on (approximate) solutions.
FdResidual fd_flux_divergence(const Characteristic& chi, const GridField& u, const FModel& f,
                              const Rational& a, const Rational& b);

/// fd_divergence_residual minus `expected` evaluated with the same FD jets.
FdResidual fd_residual_against(const Characteristic& chi, const GridField& u, const FModel& f,
                               const Rational& a, const Rational& b, const DiffPolynomial& expected);

/// Evaluate a parameter-free polynomial pointwise with FD-approximated jets.
GridField evaluate_on_grid(const DiffPolynomial& p, const GridField& u, const FModel& f);

/// Norms over points at least grid.margin() away from the x and y ends; t is
/// periodic and fully included.
Norms interior_norms(const GridField& field);

/// Interior norms restricted to the points shared with `coarse`, which the
/// field's grid must refine in every axis. The margin is counted on the
/// coarse grid, so successive refinements are measured on the same points.
Norms nested_norms(const GridField& field, const GridSpec& coarse);

/// Norms of lhs - rhs over every grid point.
Norms difference_norms(const GridField& lhs, const GridField& rhs);

/// First derivative along one axis: 0 = x, 1 = t, 2 = y1, 3 = y2.
std::vector<double> differentiate(std::span<const double> data, const GridSpec& grid, int axis, bool periodic);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double max_norm = 0.0;
  double l2_norm = 0.0;
  /// Not applicable on the first level and when norms are at roundoff.
  std::optional<double> observed_order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Norms strictly decrease from level to level.
  bool monotone = true;

  /// level,h,max_norm,l2_norm,observed_order
  std::string to_csv() const;
  /// Observed order of the last refinement, if applicable.
  std::optional<double> final_order() const;
};

/// Runs op(level) for level = 0..levels-1; op returns (h, norms).
/// Orders come from successive max-norm ratios. Throws DomainError for
/// fewer than 3 levels.
ConvergenceTable convergence_study(const std::function<std::pair<double, Norms>(int level)>& op, int levels);

}  // namespace gnpwe::fd
