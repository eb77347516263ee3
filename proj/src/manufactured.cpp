#include "gnpwe/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "gnpwe/errors.hpp"

namespace gnpwe::fd {

namespace {

// d^k/ds^k sin(s) and cos(s).
double sin_derivative(int k, double s) { return std::sin(s + k * std::numbers::pi / 2); }
double cos_derivative(int k, double s) { return std::cos(s + k * std::numbers::pi / 2); }

}  // namespace

ManufacturedField::ManufacturedField(double amplitude, Profile profile, double ly, int n)
    : amplitude_(amplitude), profile_(profile), ly_(ly), n_(n) {
  if (n != 1 && n != 2) throw DomainError("manufactured fields support n = 1 or 2");
  if (ly <= 0) throw DomainError("ly must be positive");
}

double ManufacturedField::profile_derivative(int k, double y) const {
  if (profile_ == Profile::kParabolic) {
    switch (k) {
      case 0: return 1.0 - y * y / (ly_ * ly_);
      case 1: return -2.0 * y / (ly_ * ly_);
      case 2: return -2.0 / (ly_ * ly_);
      default: return 0.0;
    }
  }
  // d^k exp(-y^2) = (-1)^k H_k(y) exp(-y^2), physicists' Hermite polynomials.
  double h_prev = 1.0;
  double h = 2.0 * y;
  if (k == 0) return std::exp(-y * y);
  for (int m = 1; m < k; ++m) {
    double next = 2.0 * y * h - 2.0 * m * h_prev;
    h_prev = h;
    h = next;
  }
  return (k % 2 ? -1.0 : 1.0) * h * std::exp(-y * y);
}

double ManufacturedField::derivative(const DerivIndex& index, double t, double x,
                                     std::span<const double> y) const {
  if (index.max_y() > n_) throw DomainError("derivative in y beyond the field dimension");
  double v = amplitude_ * sin_derivative(index.t(), t) * cos_derivative(index.x(), x);
  for (int j = 1; j <= n_; ++j) v *= profile_derivative(index.y(j), y[static_cast<std::size_t>(j - 1)]);
  return v;
}

GridField ManufacturedField::sample(const GridSpec& grid) const {
  if (grid.n != n_) throw DomainError("grid dimension does not match the manufactured field");
  return fd::sample(grid, [this](double t, double x, std::span<const double> y) { return value(t, x, y); });
}

std::vector<double> ManufacturedField::initial_slice(const GridSpec& grid) const {
  if (grid.n != 1 || n_ != 1) throw DomainError("initial slices are for n = 1");
  std::vector<double> out(grid.slice_size());
  for (int it = 0; it < grid.nt; ++it) {
    for (int iy = 0; iy < grid.ny; ++iy) {
      double y = grid.y(iy);
      out[static_cast<std::size_t>(it) * grid.ny + iy] = value(grid.t(it), 0.0, std::span<const double>(&y, 1));
    }
  }
  return out;
}

Forcing ManufacturedField::forcing(const FModel& f, const Rational& a, const Rational& b) const {
  if (n_ != 1) throw DomainError("forcing is provided for n = 1");
  const double av = a.get_d();
  const double bv = b.get_d();
  return [self = *this, f, av, bv](double t, double x, double y) {
    std::span<const double> ys(&y, 1);
    const double u = self.value(t, x, ys);
    const double ut = self.derivative(DerivIndex(1, 0), t, x, ys);
    const double utt = self.derivative(DerivIndex(2, 0), t, x, ys);
    const double uttt = self.derivative(DerivIndex(3, 0), t, x, ys);
    const double utx = self.derivative(DerivIndex(1, 1), t, x, ys);
    const double uyy = self.derivative(DerivIndex(0, 0, {2}), t, x, ys);
    return utx + f.derivative(2, u) * ut * ut + f.derivative(1, u) * utt + av * uttt + bv * uyy;
  };
}

}  // namespace gnpwe::fd
