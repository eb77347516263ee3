#pragma once

// One-way x-marching solver for n = 1:
//
//     d/dx (u_t) = -(f(u))_tt - a u_ttt - b u_yy + F(t, x, y)
//
// t is periodic and resolved spectrally; d/dt is inverted on the nonzero
// modes with the zero-mean gauge (the t-mean of u_x is set to 0, so the
// t-mean of u is constant in x). u_yy uses central differences of the grid's
// stencil order with u held at its initial values on y = +-ly. Marching in x
// is classical RK4.
//
// With a > 0 the a-term acts like backward diffusion in x; the marcher then
// only stays bounded for short distances and smooth data.

#include <functional>
#include <span>

#include "gnpwe/fd.hpp"

namespace gnpwe::fd {

using Forcing = std::function<double(double t, double x, double y)>;

struct MarchOptions {
  /// max |u| above this aborts with DivergenceError.
  double blowup_threshold = 1e6;
  /// Relative tolerance of the zero t-mean check on the initial data.
  double gauge_tolerance = 1e-10;
};

/// initial holds u(t, y) at x = 0 in (it, iy) order, i.e. one x-slice.
/// Throws GaugeError if any y-line has nonzero t-mean, DivergenceError on
/// blowup, DomainError unless grid.n == 1.
GridField march_solver_n1(const FModel& f, const Rational& a, const Rational& b,
                          std::span<const double> initial, const GridSpec& grid,
                          const Forcing& forcing = {}, const MarchOptions& options = {});

}  // namespace gnpwe::fd
