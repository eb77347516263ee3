#include "gnpwe/march.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>

#include "gnpwe/errors.hpp"

namespace gnpwe::fd {

namespace {

// Real-to-complex FFT of length n with owned, aligned buffers.
class RealFft {
 public:
  explicit RealFft(int n)
      : n_(n),
        real_(fftw_alloc_real(static_cast<std::size_t>(n)), &fftw_free),
        spec_(fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)), &fftw_free) {
    forward_ = fftw_plan_dft_r2c_1d(n, real_.get(), spec_.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(n, spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  int modes() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::vector<std::complex<double>>& out) {
    std::copy(in.begin(), in.end(), real_.get());
    fftw_execute(forward_);
    out.resize(static_cast<std::size_t>(modes()));
    for (int k = 0; k < modes(); ++k) out[k] = {spec_.get()[k][0], spec_.get()[k][1]};
  }

  /// Unnormalized inverse; the caller divides by n.
  void backward(const std::vector<std::complex<double>>& in, std::span<double> out) {
    for (int k = 0; k < modes(); ++k) {
      spec_.get()[k][0] = in[k].real();
      spec_.get()[k][1] = in[k].imag();
    }
    fftw_execute(backward_);
    std::copy(real_.get(), real_.get() + n_, out.begin());
  }

 private:
  int n_;
  std::unique_ptr<double, decltype(&fftw_free)> real_;
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> spec_;
  fftw_plan forward_;
  fftw_plan backward_;
};

class Marcher {
 public:
  Marcher(const FModel& f, double a, double b, const GridSpec& grid, const Forcing& forcing)
      : f_(f), a_(a), b_(b), g_(grid), forcing_(forcing), fft_(grid.nt) {
    const auto nt = static_cast<std::size_t>(g_.nt);
    line_u_.resize(nt);
    line_f_.resize(nt);
    line_g_.resize(nt);
    line_out_.resize(nt);
  }

  // du/dx at position x for state u in (it, iy) layout.
  void rhs(std::span<const double> u, double x, std::span<double> out) {
    const int nt = g_.nt;
    const int ny = g_.ny;
    const double hy2 = g_.hy() * g_.hy();
    std::fill(out.begin(), out.end(), 0.0);
    for (int iy = 1; iy < ny - 1; ++iy) {
      const bool wide = g_.stencil_order == 4 && iy >= 2 && iy < ny - 2;
      const double y = g_.y(iy);
      for (int it = 0; it < nt; ++it) {
        auto at = [&](int j) { return u[static_cast<std::size_t>(it) * ny + j]; };
        const double uc = at(iy);
        double uyy = 0.0;
        if (wide) {
          uyy = (-at(iy - 2) + 16 * at(iy - 1) - 30 * uc + 16 * at(iy + 1) - at(iy + 2)) / (12 * hy2);
        } else {
          uyy = (at(iy - 1) - 2 * uc + at(iy + 1)) / hy2;
        }
        line_u_[it] = uc;
        line_f_[it] = f_.derivative(0, uc);
        line_g_[it] = -b_ * uyy + (forcing_ ? forcing_(g_.t(it), x, y) : 0.0);
      }
      fft_.forward(line_u_, spec_u_);
      fft_.forward(line_f_, spec_f_);
      fft_.forward(line_g_, spec_g_);
      spec_out_.assign(spec_u_.size(), {0.0, 0.0});
      const int nyquist = nt / 2;
      for (int k = 1; k < nyquist; ++k) {
        const std::complex<double> ik(0.0, static_cast<double>(k));
        spec_out_[k] = -ik * spec_f_[k] + a_ * double(k) * double(k) * spec_u_[k] + spec_g_[k] / ik;
      }
      fft_.backward(spec_out_, line_out_);
      for (int it = 0; it < nt; ++it) out[static_cast<std::size_t>(it) * ny + iy] = line_out_[it] / nt;
    }
  }

 private:
  const FModel& f_;
  double a_;
  double b_;
  GridSpec g_;
  const Forcing& forcing_;
  RealFft fft_;
  std::vector<double> line_u_, line_f_, line_g_, line_out_;
  std::vector<std::complex<double>> spec_u_, spec_f_, spec_g_, spec_out_;
};

}  // namespace

GridField march_solver_n1(const FModel& f, const Rational& a, const Rational& b,
                          std::span<const double> initial, const GridSpec& grid,
                          const Forcing& forcing, const MarchOptions& options) {
  grid.validate();
  if (grid.n != 1) throw DomainError("the x-marching solver supports n = 1 only");
  if (b == 0) throw DomainError("b must be nonzero");
  const std::size_t slice = grid.slice_size();
  if (initial.size() != slice) throw DomainError("initial data must hold nt * ny values");

  double scale = 0.0;
  for (double v : initial) {
    if (!std::isfinite(v)) throw DomainError("initial data contains non-finite values");
    scale = std::max(scale, std::abs(v));
  }
  for (int iy = 0; iy < grid.ny; ++iy) {
    double mean = 0.0;
    for (int it = 0; it < grid.nt; ++it) mean += initial[static_cast<std::size_t>(it) * grid.ny + iy];
    mean /= grid.nt;
    if (std::abs(mean) > options.gauge_tolerance * std::max(1.0, scale)) {
      throw GaugeError("initial data has nonzero t-mean " + std::to_string(mean) + " at y = " +
                       std::to_string(grid.y(iy)));
    }
  }

  Marcher marcher(f, a.get_d(), b.get_d(), grid, forcing);
  GridField out(grid);
  auto values = out.values();
  std::vector<double> u(initial.begin(), initial.end());
  std::vector<double> k1(slice), k2(slice), k3(slice), k4(slice), stage(slice);
  std::copy(u.begin(), u.end(), values.begin());

  const double h = grid.hx();
  for (int ix = 1; ix < grid.nx; ++ix) {
    const double x = grid.x(ix - 1);
    marcher.rhs(u, x, k1);
    for (std::size_t i = 0; i < slice; ++i) stage[i] = u[i] + 0.5 * h * k1[i];
    marcher.rhs(stage, x + 0.5 * h, k2);
    for (std::size_t i = 0; i < slice; ++i) stage[i] = u[i] + 0.5 * h * k2[i];
    marcher.rhs(stage, x + 0.5 * h, k3);
    for (std::size_t i = 0; i < slice; ++i) stage[i] = u[i] + h * k3[i];
    marcher.rhs(stage, x + h, k4);
    double peak = 0.0;
    for (std::size_t i = 0; i < slice; ++i) {
      u[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      peak = std::max(peak, std::abs(u[i]));
      if (!std::isfinite(u[i])) peak = INFINITY;
    }
    if (!(peak <= options.blowup_threshold)) {
      throw DivergenceError("x-march diverged at x = " + std::to_string(grid.x(ix)) +
                            " (max |u| = " + std::to_string(peak) + ")");
    }
    std::copy(u.begin(), u.end(), values.begin() + static_cast<std::ptrdiff_t>(ix * slice));
  }
  return out;
}

}  // namespace gnpwe::fd
