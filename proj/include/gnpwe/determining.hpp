#pragma once

// Bounded-degree solution of the determining problem for characteristics.
//
// An ansatz chi = sum_i c_i m_i over monomials m_i in t, x, y (optionally
// times jet monomials in u and its first derivatives) is substituted into the
// residual; every monomial signature of the residual gives one linear
// equation on the c_i. Because the f^(k) are independent symbols, this
// splitting covers the separation "coefficient of f' and of 1" as well as the
// separation by powers of t.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnpwe/jet.hpp"
#include "gnpwe/linalg.hpp"
#include "gnpwe/model.hpp"

namespace gnpwe {

/// Jet factors allowed in the ansatz, with a cap on their total degree.
struct JetAnsatz {
  std::vector<DerivIndex> vars;
  int degree = 1;

  /// u, u_t, u_x, u_y1, ..., u_yn.
  static JetAnsatz first_order(int n, int degree);
};

struct AnsatzSpec {
  int n = 1;
  int deg_t = 1;
  int deg_x = 0;
  /// Cap on the total degree in y1..yn.
  int deg_y = 0;
  std::optional<JetAnsatz> jets;
  Rational a = 1;
  Rational b = 1;

  /// Throws DomainError on n < 1, negative caps or b = 0.
  void validate() const;
};

struct DeterminingSystem {
  int n = 1;
  /// Ansatz monomials in canonical order; unknown i multiplies ansatz[i].
  std::vector<DiffPolynomial> ansatz;
  /// Residual signature of each row.
  std::vector<MonomialKey> row_keys;
  linalg::SparseMatrix matrix;

  std::size_t unknowns() const { return ansatz.size(); }
  std::size_t equations() const { return matrix.rows(); }

  /// Coordinates of p in the ansatz; nullopt if p uses a monomial outside it.
  std::optional<std::vector<Rational>> coordinates(const DiffPolynomial& p) const;
  /// sum_i v_i ansatz_i.
  DiffPolynomial combine(const std::vector<Rational>& v) const;
  /// True iff p lies in the ansatz span and solves every equation.
  bool contains(const DiffPolynomial& p) const;
};

struct CharacteristicBasis {
  /// Kernel elements. Base-only unless a jet ansatz produced u-dependent ones.
  std::vector<DiffPolynomial> basis;
  std::size_t dimension() const { return basis.size(); }
};

/// Ansatz monomials (before any jet factors) for the given caps.
std::vector<DiffPolynomial> base_monomials(int n, int deg_t, int deg_x, int deg_y);

/// Throws EmptySystemError if the ansatz is empty.
DeterminingSystem assemble_determining_system(const AnsatzSpec& spec);

CharacteristicBasis null_space(const DeterminingSystem& sys);

/// Laplacian_y phi1 = 0 and b Laplacian_y phi0 + (phi1)_x = 0, with b
/// substituted by b_val (a by 1, it never occurs in well-formed input).
bool solve_sys_conditions(const DiffPolynomial& phi0, const DiffPolynomial& phi1, int n,
                          const Rational& b_val);

/// chi = phi0 + t phi1 when chi has t-degree <= 1.
std::optional<std::pair<DiffPolynomial, DiffPolynomial>> split_in_t(const DiffPolynomial& chi);

/// Arbitrary functions of x for the n = 1 family (polynomials in x).
struct N1FamilyInput {
  DiffPolynomial eta0;
  DiffPolynomial eta1;
  DiffPolynomial xi0;
  DiffPolynomial xi1;
};

/// phi1 = xi0 + y1 xi1,
/// phi0 = eta0 + eta1 y1 - (xi0)_x y1^2 / (2b) - (xi1)_x y1^3 / (6b),
/// chi = phi0 + t phi1, with b kept as the symbol b (inverse powers).
Characteristic n1_family_symbolic(const N1FamilyInput& input);
/// Same with b replaced by b_val. Throws DivisionByZeroError for b_val = 0.
Characteristic n1_explicit_characteristic(const N1FamilyInput& input, const Rational& b_val);

/// Dimension of the n = 1 family restricted to the spec's degree caps
/// (only meaningful for n = 1).
std::size_t explicit_family_dimension(const AnsatzSpec& spec);

/// Family members whose span is the capped n = 1 family, one per free
/// coefficient of eta0, eta1, xi0, xi1.
std::vector<Characteristic> explicit_family_generators(const AnsatzSpec& spec);

struct BasisCheck {
  DiffPolynomial multiplier;
  bool depends_on_u = false;
  bool residual_zero = false;        // E_u(chi Delta) or characteristic residual
  bool flux_identity_zero = false;   // divergence residual of the built fluxes
  bool t_degree_ok = false;          // at most linear in t
  bool sys_conditions_ok = false;    // phi-parts solve the linear system
  std::optional<ConservationLaw> law;

  bool verified() const {
    return !depends_on_u && residual_zero && flux_identity_zero && t_degree_ok && sys_conditions_ok;
  }
};

struct ClassificationReport {
  AnsatzSpec spec;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
  CharacteristicBasis basis;
  std::vector<BasisCheck> checks;
  std::size_t u_dependent = 0;
  /// n = 1 only.
  std::optional<std::size_t> family_dimension;
  /// n = 1 only: every explicit family generator lies in the kernel.
  std::optional<bool> family_members_in_kernel;

  std::size_t dimension() const { return basis.dimension(); }
  bool all_verified() const;
  /// Caveat attached to jet-ansatz runs.
  std::string note() const;
};

ClassificationReport classify(const AnsatzSpec& spec);

}  // namespace gnpwe
