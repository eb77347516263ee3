#include "gnpwe/model.hpp"

#include <string>

#include "gnpwe/errors.hpp"

namespace gnpwe {

namespace {

using P = DiffPolynomial;

P d(const P& p, Direction dir, int times = 1) {
  P out = p;
  for (int i = 0; i < times; ++i) out = total_derivative(out, dir);
  return out;
}

void check_dimension(const GnpweEquation& eq, const P& p) {
  if (p.max_y_index() > eq.n()) {
    throw DomainError("expression references y" + std::to_string(p.max_y_index()) +
                      " but the equation has n = " + std::to_string(eq.n()));
  }
}

P laplacian_y(const P& p, int n) {
  P out;
  for (int j = 1; j <= n; ++j) out += d(p, Direction::y(j), 2);
  return out;
}

}  // namespace

GnpweEquation::GnpweEquation(int n) : n_(n) {
  if (n < 1) {
    throw DomainError("the number of y variables must be a positive integer, got " +
                      std::to_string(n));
  }
  const auto t = Direction::t();
  const auto x = Direction::x();
  // (f(u))_tt expanded through the chain rule.
  delta_ = d(d(P::u(), x), t) + d(P::f(0), t, 2);
  delta_ += P::a() * d(P::u(), t, 3);
  delta_ += P::b() * laplacian_y(P::u(), n);
}

GnpweEquation build_equation(int n) { return GnpweEquation(n); }

Characteristic::Characteristic(DiffPolynomial chi) : chi_(std::move(chi)) {
  if (!chi_.is_base_only()) {
    throw DomainError("a characteristic may depend on t, x, y only (found jet or f terms)");
  }
}

Characteristic abstract_characteristic() { return Characteristic(P::func("chi")); }

DiffPolynomial characteristic_residual(const GnpweEquation& eq, const Characteristic& chi) {
  const P& c = chi.poly();
  check_dimension(eq, c);
  const auto t = Direction::t();
  const auto x = Direction::x();
  P out = d(d(c, x), t);
  out += P::f(1) * d(c, t, 2);
  out -= P::a() * d(c, t, 3);
  out += P::b() * laplacian_y(c, eq.n());
  return out;
}

DiffPolynomial adjoint_residual(const GnpweEquation& eq, const Characteristic& chi) {
  return adjoint_residual(eq, chi.poly());
}

DiffPolynomial adjoint_residual(const GnpweEquation& eq, const DiffPolynomial& multiplier) {
  check_dimension(eq, multiplier);
  return euler_operator(multiplier * eq.delta());
}

ConservationLaw build_fluxes(const GnpweEquation& eq, const Characteristic& chi) {
  const P& c = chi.poly();
  check_dimension(eq, c);
  const auto t = Direction::t();
  const P u = P::u();
  const P u_t = P::u(DerivIndex(1, 0));
  const P u_x = P::u(DerivIndex(0, 1));
  const P u_tt = P::u(DerivIndex(2, 0));
  const P c_t = d(c, t);

  ConservationLaw law;
  law.chi = chi;
  law.rho = (u_x + P::f(1) * u_t + P::a() * u_tt) * c - (P::a() * u_t + P::f(0)) * c_t;
  law.sigma = -(u * c_t);
  for (int j = 1; j <= eq.n(); ++j) {
    const auto y = Direction::y(j);
    law.zeta.push_back(P::b() * (d(u, y) * c - u * d(c, y)));
  }
  return law;
}

DiffPolynomial flux_divergence(const GnpweEquation& eq, const ConservationLaw& law) {
  if (static_cast<int>(law.zeta.size()) != eq.n()) {
    throw DomainError("flux tuple has " + std::to_string(law.zeta.size()) +
                      " y-components, equation has n = " + std::to_string(eq.n()));
  }
  P div = total_derivative(law.rho, Direction::t()) + total_derivative(law.sigma, Direction::x());
  for (int j = 1; j <= eq.n(); ++j) {
    div += total_derivative(law.zeta[static_cast<std::size_t>(j - 1)], Direction::y(j));
  }
  return div;
}

DiffPolynomial divergence_residual(const GnpweEquation& eq, const ConservationLaw& law) {
  return flux_divergence(eq, law) - law.chi.poly() * eq.delta();
}

DiffPolynomial closed_form_residual(const GnpweEquation& eq, const Characteristic& chi) {
  const P& c = chi.poly();
  check_dimension(eq, c);
  const auto t = Direction::t();
  const P source = P::a() * P::u(DerivIndex(1, 0)) + P::f(0);
  return -(source * d(c, t, 2)) - P::u() * (d(d(c, Direction::x()), t) + P::b() * laplacian_y(c, eq.n()));
}

bool is_nontrivial(const Characteristic& chi) { return !chi.poly().is_zero(); }

ConservationLaw substitute_params(const ConservationLaw& law, const Rational& a, const Rational& b) {
  ConservationLaw out;
  out.chi = Characteristic(substitute_params(law.chi.poly(), a, b));
  out.rho = substitute_params(law.rho, a, b);
  out.sigma = substitute_params(law.sigma, a, b);
  for (const auto& z : law.zeta) out.zeta.push_back(substitute_params(z, a, b));
  return out;
}

}  // namespace gnpwe
