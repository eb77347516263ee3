#pragma once

// Seeded random differential polynomials for property tests.

#include <cstdint>
#include <random>

#include "gnpwe/jet.hpp"

namespace gnpwe::testing {

class PolyGenerator {
 public:
  explicit PolyGenerator(std::uint64_t seed, int n = 1) : rng_(seed), n_(n) {}

  int n() const { return n_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Rational rational();
  DerivIndex deriv_index(int max_order);

  /// Up to max_terms monomials mixing parameters, base variables, f-symbols
  /// and jets of order <= max_jet_order.
  DiffPolynomial polynomial(int max_terms = 4, int max_jet_order = 2);
  /// Polynomial in t, x, y1..yn only, degree <= max_degree in each variable.
  DiffPolynomial base_polynomial(int max_degree = 3, int max_terms = 5);
  /// Polynomial in x alone.
  DiffPolynomial x_polynomial(int max_degree);

 private:
  std::mt19937_64 rng_;
  int n_;
};

}  // namespace gnpwe::testing
