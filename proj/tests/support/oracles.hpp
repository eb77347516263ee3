#pragma once

// Reference computations that share no code path with the library routines
// they check.

#include <cstddef>
#include <vector>

#include "gnpwe/jet.hpp"
#include "gnpwe/linalg.hpp"

namespace gnpwe::testing {

using DenseMatrix = std::vector<std::vector<Rational>>;

DenseMatrix to_dense(const linalg::SparseMatrix& m);

/// Rank by textbook Gaussian elimination over the rationals.
std::size_t dense_rank(DenseMatrix m);

/// Partial derivative of a polynomial in t, x, y (and a, b) by exponent
/// arithmetic. Throws if p contains jets, f-symbols or functions.
DiffPolynomial base_partial(const DiffPolynomial& p, Direction d, int times = 1);

/// chi_xt + f' chi_tt - a chi_ttt + b Laplacian_y chi for polynomial chi.
DiffPolynomial characteristic_oracle(const DiffPolynomial& chi, int n);

/// -(a u_t + f) chi_tt - u (chi_xt + b Laplacian_y chi).
DiffPolynomial closed_form_oracle(const DiffPolynomial& chi, int n);

/// eta0 + eta1 y - (xi0)' y^2 / (2 b) - (xi1)' y^3 / (6 b) + t (xi0 + y xi1)
/// with b numeric.
DiffPolynomial family_oracle(const DiffPolynomial& eta0, const DiffPolynomial& eta1, const DiffPolynomial& xi0,
                             const DiffPolynomial& xi1, const Rational& b);

}  // namespace gnpwe::testing
