#pragma once

// Separable manufactured fields u = A sin(t) cos(x) Y(y1) [Y(y2)] with exact
// derivatives of every order, and the forcing that makes them solve the
// forced equation.

#include <span>

#include "gnpwe/fd.hpp"
#include "gnpwe/march.hpp"

namespace gnpwe::fd {

class ManufacturedField {
 public:
  enum class Profile {
    kGaussian,   // Y(y) = exp(-y^2)
    kParabolic,  // Y(y) = 1 - y^2 / ly^2, zero on y = +-ly
  };

  ManufacturedField(double amplitude, Profile profile, double ly = 1.0, int n = 1);

  double value(double t, double x, std::span<const double> y) const { return derivative({}, t, x, y); }
  double derivative(const DerivIndex& index, double t, double x, std::span<const double> y) const;

  GridField sample(const GridSpec& grid) const;
  /// u at x = 0 in (it, iy) order, for march_solver_n1.
  std::vector<double> initial_slice(const GridSpec& grid) const;

  /// F = u_tx + (f(u))_tt + a u_ttt + b u_yy for n = 1.
  Forcing forcing(const FModel& f, const Rational& a, const Rational& b) const;

 private:
  double profile_derivative(int k, double y) const;

  double amplitude_;
  Profile profile_;
  double ly_;
  int n_;
};

}  // namespace gnpwe::fd
