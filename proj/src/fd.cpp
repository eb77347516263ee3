#include "gnpwe/fd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "gnpwe/errors.hpp"

namespace gnpwe::fd {

namespace {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

Stencil central(int order) {
  if (order == 2) return {{-1, 1}, {-0.5, 0.5}};
  return {{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
}

// One-sided stencil for point i of an axis of length len (non-periodic).
Stencil boundary(int order, int i, int len) {
  if (order == 2) {
    if (i == 0) return {{0, 1, 2}, {-1.5, 2.0, -0.5}};
    return {{0, -1, -2}, {1.5, -2.0, 0.5}};
  }
  if (i == 0) return {{0, 1, 2, 3, 4}, {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12}};
  if (i == 1) return {{-1, 0, 1, 2, 3}, {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12, 1.0 / 12}};
  if (i == len - 2) return {{1, 0, -1, -2, -3}, {3.0 / 12, 10.0 / 12, -18.0 / 12, 6.0 / 12, -1.0 / 12}};
  return {{0, -1, -2, -3, -4}, {25.0 / 12, -48.0 / 12, 36.0 / 12, -16.0 / 12, 3.0 / 12}};
}

struct AxisInfo {
  int len;
  std::size_t stride;
  double h;
};

AxisInfo axis_info(const GridSpec& g, int axis) {
  const auto ny2 = static_cast<std::size_t>(g.ny2());
  const auto ny = static_cast<std::size_t>(g.ny);
  const auto nt = static_cast<std::size_t>(g.nt);
  switch (axis) {
    case 0: return {g.nx, nt * ny * ny2, g.hx()};
    case 1: return {g.nt, ny * ny2, g.ht()};
    case 2: return {g.ny, ny2, g.hy()};
    case 3:
      if (g.n != 2) break;
      return {g.ny, 1, g.hy()};
    default: break;
  }
  throw DomainError("invalid axis " + std::to_string(axis));
}

int axis_of(Direction d) {
  if (d == Direction::t()) return 1;
  if (d == Direction::x()) return 0;
  return 1 + d.y_index();
}

// Jets of u approximated by repeated first differences (periodic in t).
class JetCache {
 public:
  explicit JetCache(const GridField& u) : u_(u) {}

  const std::vector<double>& get(const DerivIndex& index) {
    if (auto it = cache_.find(index); it != cache_.end()) return it->second;
    std::vector<double> value;
    if (index.is_zero()) {
      value.assign(u_.values().begin(), u_.values().end());
    } else {
      const auto& e = index.entries();
      const int last = static_cast<int>(e.size()) - 1;
      const Direction d = Direction::from_index(last);
      const auto& lower = get(index.added(d, -1));
      value = differentiate(lower, u_.grid(), axis_of(d), d == Direction::t());
    }
    return cache_.emplace(index, std::move(value)).first->second;
  }

 private:
  const GridField& u_;
  std::map<DerivIndex, std::vector<double>> cache_;
};

GridField evaluate_with(const DiffPolynomial& p, const GridField& u, const FModel& f, JetCache& jets) {
  const GridSpec& g = u.grid();
  if (p.max_y_index() > g.n) throw DomainError("polynomial references y beyond the grid dimension");
  const CompiledPolynomial compiled(p);
  std::vector<const std::vector<double>*> slots;
  for (const auto& index : compiled.jet_slots()) slots.push_back(&jets.get(index));

  GridField out(g);
  std::vector<double> base(static_cast<std::size_t>(2 + g.n), 0.0);
  std::vector<double> jet_vals(slots.size());
  std::vector<double> fvals(static_cast<std::size_t>(compiled.max_f_order() + 1));
  const auto uvals = u.values();
  auto values = out.values();
  for (int ix = 0; ix < g.nx; ++ix) {
    base[1] = g.x(ix);
    for (int it = 0; it < g.nt; ++it) {
      base[0] = g.t(it);
      for (int iy1 = 0; iy1 < g.ny; ++iy1) {
        base[2] = g.y(iy1);
        for (int iy2 = 0; iy2 < g.ny2(); ++iy2) {
          if (g.n == 2) base[3] = g.y(iy2);
          const std::size_t idx = g.index(ix, it, iy1, iy2);
          for (std::size_t s = 0; s < slots.size(); ++s) jet_vals[s] = (*slots[s])[idx];
          for (std::size_t k = 0; k < fvals.size(); ++k) fvals[k] = f.derivative(static_cast<int>(k), uvals[idx]);
          values[idx] = compiled(base, jet_vals, fvals);
        }
      }
    }
  }
  return out;
}

// p = sum_k t^k p_k with p_k free of explicit t.
std::map<int, DiffPolynomial> split_t_powers(const DiffPolynomial& p) {
  std::map<int, DiffPolynomial> parts;
  for (const auto& [key, coeff] : p.terms()) {
    const int k = key.base.t();
    MonomialKey reduced = key;
    reduced.base = key.base.added(Direction::t(), -k);
    parts[k].add_term(reduced, coeff);
  }
  return parts;
}

enum class Mode { kIdentity, kFluxOnly, kAgainst };

FdResidual fd_residual(Mode mode, const Characteristic& chi, const GridField& u, const FModel& f,
                       const Rational& a, const Rational& b, const DiffPolynomial* expected) {
  const GridSpec& g = u.grid();
  g.validate();
  if (chi.poly().has_functions()) throw DomainError("the FD harness needs a polynomial characteristic");
  const GnpweEquation eq(g.n);
  const ConservationLaw law = substitute_params(build_fluxes(eq, chi), a, b);
  JetCache jets(u);

  auto accumulate = [&](std::vector<double>& acc, const DiffPolynomial& flux, int axis) {
    GridField values = evaluate_with(flux, u, f, jets);
    auto deriv = differentiate(values.values(), g, axis, false);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += deriv[i];
  };

  // D_t of sum_k t^k rho_k: the rho_k are periodic in t, the powers of t are
  // differentiated exactly.
  auto accumulate_t = [&](std::vector<double>& acc, const DiffPolynomial& flux) {
    for (const auto& [k, part] : split_t_powers(flux)) {
      GridField values = evaluate_with(part, u, f, jets);
      auto deriv = differentiate(values.values(), g, 1, true);
      for (int ix = 0; ix < g.nx; ++ix) {
        for (int it = 0; it < g.nt; ++it) {
          const double t = g.t(it);
          const double tk = std::pow(t, k);
          const double dtk = k == 0 ? 0.0 : k * std::pow(t, k - 1);
          const std::size_t first = g.index(ix, it, 0);
          for (std::size_t i = first; i < first + static_cast<std::size_t>(g.ny) * g.ny2(); ++i) {
            acc[i] += tk * deriv[i] + dtk * values.values()[i];
          }
        }
      }
    }
  };

  std::vector<double> acc(g.size(), 0.0);
  accumulate_t(acc, law.rho);
  accumulate(acc, law.sigma, 0);
  for (int j = 1; j <= g.n; ++j) accumulate(acc, law.zeta[static_cast<std::size_t>(j - 1)], 1 + j);

  if (mode != Mode::kFluxOnly) {
    const DiffPolynomial source = substitute_params(chi.poly() * eq.delta(), a, b);
    GridField s = evaluate_with(source, u, f, jets);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= s.values()[i];
  }
  if (mode == Mode::kAgainst) {
    GridField e = evaluate_with(substitute_params(*expected, a, b), u, f, jets);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= e.values()[i];
  }
  GridField field(g, std::move(acc));
  Norms norms = interior_norms(field);
  return FdResidual{norms, std::move(field)};
}

}  // namespace

void GridSpec::validate() const {
  if (n != 1 && n != 2) throw DomainError("the FD harness supports n = 1 or 2");
  if (stencil_order != 2 && stencil_order != 4) throw StencilError("stencil order must be 2 or 4");
  if (nt < 8 || ny < 8) throw DomainError("nt and ny must be at least 8");
  if (nt % 2 != 0) throw DomainError("nt must be even");
  if (lx <= 0 || ly <= 0) throw DomainError("lx and ly must be positive");
  const int need = 2 * margin() + 1;
  if (nx < need || ny < need || nt < need) {
    throw StencilError("grid too coarse for a stencil of order " + std::to_string(stencil_order) +
                       ": every axis needs at least " + std::to_string(need) + " points");
  }
}

double GridSpec::ht() const { return 2.0 * std::numbers::pi / nt; }
double GridSpec::hx() const { return lx / (nx - 1); }
double GridSpec::hy() const { return 2.0 * ly / (ny - 1); }

std::size_t GridSpec::slice_size() const {
  return static_cast<std::size_t>(nt) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(ny2());
}

std::size_t GridSpec::size() const { return static_cast<std::size_t>(nx) * slice_size(); }

GridField::GridField(GridSpec grid) : grid_(grid), values_(grid.size(), 0.0) {}

GridField::GridField(GridSpec grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("field size does not match the grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("field contains non-finite values");
  }
}

GridField sample(const GridSpec& grid,
                 const std::function<double(double t, double x, std::span<const double> y)>& g) {
  GridField out(grid);
  std::vector<double> y(static_cast<std::size_t>(grid.n));
  for (int ix = 0; ix < grid.nx; ++ix) {
    for (int it = 0; it < grid.nt; ++it) {
      for (int iy1 = 0; iy1 < grid.ny; ++iy1) {
        y[0] = grid.y(iy1);
        for (int iy2 = 0; iy2 < grid.ny2(); ++iy2) {
          if (grid.n == 2) y[1] = grid.y(iy2);
          out.at(ix, it, iy1, iy2) = g(grid.t(it), grid.x(ix), y);
        }
      }
    }
  }
  return out;
}

FModel::FModel(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 3) throw DomainError("f must be nonlinear in u (f'' must not vanish identically)");
}

FModel FModel::from_polynomial(const DiffPolynomial& p) {
  std::vector<Rational> coeffs;
  for (const auto& [key, c] : p.terms()) {
    MonomialKey rest = key;
    int power = 0;
    if (auto it = rest.jet.find(DerivIndex{}); it != rest.jet.end()) {
      power = it->second;
      rest.jet.erase(it);
    }
    if (!(rest == MonomialKey{})) throw DomainError("f must be a polynomial in u with rational coefficients");
    if (coeffs.size() <= static_cast<std::size_t>(power)) coeffs.resize(static_cast<std::size_t>(power) + 1, 0);
    coeffs[static_cast<std::size_t>(power)] = c;
  }
  return FModel(std::move(coeffs));
}

double FModel::derivative(int k, double u) const {
  // Horner on the k-th derivative.
  double acc = 0.0;
  for (int m = static_cast<int>(coeffs_.size()) - 1; m >= k; --m) {
    double falling = 1.0;
    for (int r = 0; r < k; ++r) falling *= m - r;
    acc = acc * u + coeffs_[static_cast<std::size_t>(m)].get_d() * falling;
  }
  return acc;
}

std::vector<double> differentiate(std::span<const double> data, const GridSpec& grid, int axis, bool periodic) {
  if (data.size() != grid.size()) throw DomainError("data size does not match the grid");
  const AxisInfo info = axis_info(grid, axis);
  const int order = grid.stencil_order;
  const Stencil inner = central(order);
  const int half = order / 2;
  if (info.len < order + 1) throw StencilError("axis too short for the stencil");

  std::vector<double> out(data.size(), 0.0);
  const std::size_t block = info.stride * static_cast<std::size_t>(info.len);
  for (std::size_t outer = 0; outer < data.size(); outer += block) {
    for (std::size_t inner_off = 0; inner_off < info.stride; ++inner_off) {
      const std::size_t base = outer + inner_off;
      auto at = [&](int i) { return data[base + static_cast<std::size_t>(i) * info.stride]; };
      for (int i = 0; i < info.len; ++i) {
        double acc = 0.0;
        if (periodic) {
          for (std::size_t s = 0; s < inner.offsets.size(); ++s) {
            int j = ((i + inner.offsets[s]) % info.len + info.len) % info.len;
            acc += inner.weights[s] * at(j);
          }
        } else {
          const Stencil& st = (i >= half && i < info.len - half) ? inner : boundary(order, i, info.len);
          for (std::size_t s = 0; s < st.offsets.size(); ++s) acc += st.weights[s] * at(i + st.offsets[s]);
        }
        out[base + static_cast<std::size_t>(i) * info.stride] = acc / info.h;
      }
    }
  }
  return out;
}

GridField evaluate_on_grid(const DiffPolynomial& p, const GridField& u, const FModel& f) {
  JetCache jets(u);
  return evaluate_with(p, u, f, jets);
}

FdResidual fd_divergence_residual(const Characteristic& chi, const GridField& u, const FModel& f,
                                  const Rational& a, const Rational& b) {
  return fd_residual(Mode::kIdentity, chi, u, f, a, b, nullptr);
}

FdResidual fd_flux_divergence(const Characteristic& chi, const GridField& u, const FModel& f,
                              const Rational& a, const Rational& b) {
  return fd_residual(Mode::kFluxOnly, chi, u, f, a, b, nullptr);
}

FdResidual fd_residual_against(const Characteristic& chi, const GridField& u, const FModel& f,
                               const Rational& a, const Rational& b, const DiffPolynomial& expected) {
  return fd_residual(Mode::kAgainst, chi, u, f, a, b, &expected);
}

Norms interior_norms(const GridField& field) { return nested_norms(field, field.grid()); }

Norms nested_norms(const GridField& field, const GridSpec& coarse) {
  const GridSpec& g = field.grid();
  coarse.validate();
  auto stride = [](int fine_intervals, int coarse_intervals, const char* axis) {
    if (coarse_intervals <= 0 || fine_intervals % coarse_intervals != 0) {
      throw DomainError(std::string("grid is not a refinement of the coarse grid in ") + axis);
    }
    return fine_intervals / coarse_intervals;
  };
  if (g.n != coarse.n || g.lx != coarse.lx || g.ly != coarse.ly) {
    throw DomainError("grid and coarse grid cover different domains");
  }
  const int sx = stride(g.nx - 1, coarse.nx - 1, "x");
  const int st = stride(g.nt, coarse.nt, "t");
  const int sy = stride(g.ny - 1, coarse.ny - 1, "y");
  const int m = coarse.margin();
  double max_abs = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (int cx = m; cx < coarse.nx - m; ++cx) {
    for (int ct = 0; ct < coarse.nt; ++ct) {
      for (int cy1 = m; cy1 < coarse.ny - m; ++cy1) {
        const int lo2 = g.n == 2 ? m : 0;
        const int hi2 = g.n == 2 ? coarse.ny - m : 1;
        for (int cy2 = lo2; cy2 < hi2; ++cy2) {
          const double v = std::abs(field.at(cx * sx, ct * st, cy1 * sy, g.n == 2 ? cy2 * sy : 0));
          max_abs = std::max(max_abs, v);
          sum_sq += v * v;
          ++count;
        }
      }
    }
  }
  return Norms{max_abs, count ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0};
}

Norms difference_norms(const GridField& lhs, const GridField& rhs) {
  if (!(lhs.grid() == rhs.grid())) throw DomainError("fields live on different grids");
  double max_abs = 0.0;
  double sum_sq = 0.0;
  const auto l = lhs.values();
  const auto r = rhs.values();
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double v = std::abs(l[i] - r[i]);
    max_abs = std::max(max_abs, v);
    sum_sq += v * v;
  }
  return Norms{max_abs, l.empty() ? 0.0 : std::sqrt(sum_sq / static_cast<double>(l.size()))};
}

ConvergenceTable convergence_study(const std::function<std::pair<double, Norms>(int level)>& op, int levels) {
  if (levels < 3) throw DomainError("a convergence study needs at least 3 levels");
  constexpr double kRoundoff = 1e-13;
  ConvergenceTable table;
  for (int level = 0; level < levels; ++level) {
    auto [h, norms] = op(level);
    ConvergenceRow row{level, h, norms.max_norm, norms.l2_norm, std::nullopt};
    if (level > 0) {
      const ConvergenceRow& prev = table.rows.back();
      if (prev.max_norm > kRoundoff && row.max_norm > kRoundoff && prev.h != h) {
        row.observed_order = std::log(prev.max_norm / row.max_norm) / std::log(prev.h / h);
      }
      if (!(row.max_norm < prev.max_norm)) table.monotone = false;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string ConvergenceTable::to_csv() const {
  std::ostringstream out;
  out << "level,h,max_norm,l2_norm,observed_order\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.level << ',' << r.h << ',' << r.max_norm << ',' << r.l2_norm << ',';
    if (r.observed_order) {
      out << *r.observed_order;
    } else {
      out << "NA";
    }
    out << '\n';
  }
  return out.str();
}

std::optional<double> ConvergenceTable::final_order() const {
  if (rows.empty()) return std::nullopt;
  return rows.back().observed_order;
}

}  // namespace gnpwe::fd
