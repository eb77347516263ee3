#pragma once

// The generalized nonlinear progressive wave equation
//
//     u_tx + (f(u))_tt + a u_ttt + b (u_y1y1 + ... + u_ynyn) = 0
//
// and the conservation laws generated by multipliers chi(t, x, y).
//
// Conservation laws are stored as the off-shell identity
//     D_t rho + D_x sigma + sum_j D_yj zeta_j = chi * Delta,
// which holds exactly (no reduction modulo the equation) whenever chi solves
// the characteristic equation. The source term uses Laplacian_y of u.

#include <vector>

#include "gnpwe/jet.hpp"

namespace gnpwe {

class GnpweEquation {
 public:
  /// Throws DomainError for n < 1.
  explicit GnpweEquation(int n);

  int n() const { return n_; }
  /// Expanded left-hand side u_tx + f''u_t^2 + f'u_tt + a u_ttt + b sum_j u_yjyj.
  const DiffPolynomial& delta() const { return delta_; }

 private:
  int n_;
  DiffPolynomial delta_;
};

GnpweEquation build_equation(int n);

/// Multiplier depending on the base variables only (and possibly on a, b and
/// abstract function symbols).
class Characteristic {
 public:
  Characteristic() = default;
  /// Throws DomainError if chi contains jet coordinates or f-symbols.
  explicit Characteristic(DiffPolynomial chi);

  const DiffPolynomial& poly() const { return chi_; }

  bool operator==(const Characteristic&) const = default;

 private:
  DiffPolynomial chi_;
};

/// The abstract characteristic chi(t, x, y) as a function symbol.
Characteristic abstract_characteristic();

struct ConservationLaw {
  DiffPolynomial rho;                 // t-component
  DiffPolynomial sigma;               // x-component
  std::vector<DiffPolynomial> zeta;   // y_j-components
  Characteristic chi;

  bool operator==(const ConservationLaw&) const = default;
};

/// chi_xt + f' chi_tt - a chi_ttt + b Laplacian_y chi, with derivatives of chi
/// taken directly.
DiffPolynomial characteristic_residual(const GnpweEquation& eq, const Characteristic& chi);

/// E_u(chi * Delta); must coincide with characteristic_residual.
DiffPolynomial adjoint_residual(const GnpweEquation& eq, const Characteristic& chi);

/// Euler-operator residual for a general multiplier that may depend on jets.
DiffPolynomial adjoint_residual(const GnpweEquation& eq, const DiffPolynomial& multiplier);

/// rho   = (u_x + f' u_t + a u_tt) chi - (a u_t + f) chi_t
/// sigma = -u chi_t
/// zeta_j = b (u_yj chi - u chi_yj)
/// chi need not be a valid characteristic.
ConservationLaw build_fluxes(const GnpweEquation& eq, const Characteristic& chi);

/// D_t rho + D_x sigma + sum_j D_yj zeta_j - chi * Delta.
DiffPolynomial divergence_residual(const GnpweEquation& eq, const ConservationLaw& law);

/// Value of divergence_residual(build_fluxes(chi)) for any base-only chi:
///   -(a u_t + f) chi_tt - u (chi_xt + b Laplacian_y chi).
DiffPolynomial closed_form_residual(const GnpweEquation& eq, const Characteristic& chi);

/// Total divergence of the flux tuple alone (no source term).
DiffPolynomial flux_divergence(const GnpweEquation& eq, const ConservationLaw& law);

bool is_nontrivial(const Characteristic& chi);

/// Substitute a, b into every component of a law.
ConservationLaw substitute_params(const ConservationLaw& law, const Rational& a, const Rational& b);

}  // namespace gnpwe
