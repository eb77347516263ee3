#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "gnpwe/errors.hpp"
#include "gnpwe/jet.hpp"

using namespace gnpwe;
using P = DiffPolynomial;

namespace {

const P u = P::u();
const P u_t = P::u(DerivIndex(1, 0));
const P u_x = P::u(DerivIndex(0, 1));
const P u_tt = P::u(DerivIndex(2, 0));
const P u_tx = P::u(DerivIndex(1, 1));

const MonomialKey& key_of(const P& monomial) { return monomial.terms().begin()->first; }

P random_total_derivative(testing::PolyGenerator& gen, const P& p) {
  return total_derivative(p, Direction::from_index(gen.uniform(0, 1 + gen.n())));
}

}  // namespace

TEST_CASE("derivative indices compare componentwise and ignore trailing zeros") {
  CHECK(DerivIndex(1, 0) == DerivIndex(std::vector<int>{1, 0, 0}));
  CHECK(DerivIndex(1, 2, {0, 3}).total() == 6);
  CHECK(DerivIndex(0, 0, {0, 3}).max_y() == 2);
  CHECK(DerivIndex(1, 0) != DerivIndex(0, 1));
  CHECK(DerivIndex().is_zero());
  CHECK(DerivIndex(1, 0).added(Direction::x()) == DerivIndex(1, 1));
}

TEST_CASE("normalize merges like terms and drops cancellations") {
  const auto& k = key_of(u_t);
  CHECK(normalize({{1, k}, {1, k}}) == P(2) * u_t);
  CHECK(normalize({{1, k}, {-1, k}}).is_zero());
  CHECK((u_t + u_x) * (u_t - u_x) == u_t.pow(2) - u_x.pow(2));
}

TEST_CASE("normalize is idempotent and zero has no terms") {
  testing::PolyGenerator gen(11, 2);
  for (int i = 0; i < 50; ++i) {
    const P p = gen.polynomial();
    CHECK(normalize(p.monomials()) == p);
  }
  CHECK(P().size() == 0);
  CHECK((P::t() - P::t()).is_zero());
}

TEST_CASE("total derivative follows the chain and product rules") {
  const auto t = Direction::t();
  CHECK(total_derivative(P::f(0), t) == P::f(1) * u_t);
  CHECK(total_derivative(P::f(1) * u_t, t) == P::f(2) * u_t.pow(2) + P::f(1) * u_tt);
  CHECK(total_derivative(P::t() * u_x, t) == u_x + P::t() * u_tx);
  CHECK(total_derivative(P::y(1, 3), Direction::y(1)) == P(3) * P::y(1, 2));
  CHECK(total_derivative(P::a() * P::b(-1), t).is_zero());
  CHECK(total_derivative(P::func("chi"), Direction::y(2)) == P::func("chi", DerivIndex(0, 0, {0, 1})));
}

TEST_CASE("total derivatives commute") {
  testing::PolyGenerator gen(20240601, 2);
  for (int i = 0; i < 120; ++i) {
    const P p = gen.polynomial();
    const Direction d1 = Direction::from_index(gen.uniform(0, 3));
    const Direction d2 = Direction::from_index(gen.uniform(0, 3));
    CHECK(total_derivative(total_derivative(p, d1), d2) == total_derivative(total_derivative(p, d2), d1));
  }
}

TEST_CASE("ring axioms hold on random triples") {
  testing::PolyGenerator gen(7, 1);
  for (int i = 0; i < 60; ++i) {
    const P p = gen.polynomial(3), q = gen.polynomial(3), r = gen.polynomial(3);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p * q == q * p);
    CHECK(p - p == P());
  }
}

TEST_CASE("Euler operator on small examples") {
  CHECK(euler_operator(u_t * u_x) == P(-2) * u_tx);
  CHECK(euler_operator(u.pow(2)) == P(2) * u);
  CHECK(euler_operator(P::f(0)) == P::f(1));
  // E(u_t^2 / 2) = -u_tt.
  CHECK(euler_operator(P(Rational(1, 2)) * u_t.pow(2)) == -u_tt);
}

TEST_CASE("Euler operator annihilates total derivatives") {
  testing::PolyGenerator gen(99, 2);
  for (int dir = 0; dir < 4; ++dir) {
    for (int i = 0; i < 100; ++i) {
      const P p = gen.polynomial(3, 2);
      CHECK(euler_operator(total_derivative(p, Direction::from_index(dir))).is_zero());
    }
  }
}

TEST_CASE("Euler operator does not annihilate non-divergences") {
  CHECK(euler_operator(u.pow(3)) == P(3) * u.pow(2));
  CHECK(euler_operator(P::t() * u) == P::t());
  CHECK_FALSE(euler_operator(u * u_t.pow(2)).is_zero());
}

TEST_CASE("substituting parameters") {
  CHECK(substitute_params(P::a() * P::u(DerivIndex(3, 0)), 2, 1) == P(2) * P::u(DerivIndex(3, 0)));
  CHECK(substitute_params(P::b(-1) * P::y(1, 2), 1, Rational(1, 2)) == P(2) * P::y(1, 2));
  CHECK(substitute_params(P::a() * P::b(-1), 3, 3) == P(1));
  CHECK_THROWS_AS(substitute_params(P::b(-1), 1, 0), DivisionByZeroError);
  CHECK(substitute_params(P::b(2), 1, 0).is_zero());
}

TEST_CASE("evaluation at a point") {
  PointBinding pt;
  pt.base = {2.0, 0.0, 0.0};
  pt.jet = {{DerivIndex(), 2.0}, {DerivIndex(1, 0), 3.0}, {DerivIndex(0, 1), -1.0}};
  pt.f = [](int k, double v) { return k == 0 ? v * v : k == 1 ? 2 * v : k == 2 ? 2.0 : 0.0; };
  CHECK(evaluate_at_point(u_t.pow(2), pt) == doctest::Approx(9.0));
  pt.jet[DerivIndex(1, 0)] = 5.0;
  CHECK(evaluate_at_point(P::f(1) * u_t, pt) == doctest::Approx(20.0));
  CHECK(evaluate_at_point(P::t() * u_x, pt) == doctest::Approx(-2.0));
}

TEST_CASE("evaluation reports missing symbols") {
  PointBinding pt;
  pt.base = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(evaluate_at_point(u_t, pt), IncompleteBindingError);
  CHECK_THROWS_AS(evaluate_at_point(P::a(), pt), IncompleteBindingError);
  CHECK_THROWS_AS(evaluate_at_point(P::func("chi"), pt), IncompleteBindingError);
}

TEST_CASE("evaluation is multiplicative on random polynomials") {
  testing::PolyGenerator gen(31337, 1);
  PointBinding pt;
  pt.f = [](int k, double v) { return k == 0 ? v * v : k == 1 ? 2 * v : k == 2 ? 2.0 : 0.0; };
  for (int i = 0; i < 100; ++i) {
    const P p = substitute_params(gen.polynomial(3, 2), 1, 1);
    const P q = substitute_params(gen.polynomial(3, 2), 1, 1);
    pt.base = {gen.uniform(-10, 10) / 10.0, gen.uniform(-10, 10) / 10.0, gen.uniform(-10, 10) / 10.0};
    pt.jet.clear();
    for (const auto& j : (p * q).jets()) pt.jet[j] = gen.uniform(-10, 10) / 10.0;
    if (!pt.jet.count(DerivIndex())) pt.jet[DerivIndex()] = 0.3;
    const double pq = evaluate_at_point(p * q, pt);
    const double expected = evaluate_at_point(p, pt) * evaluate_at_point(q, pt);
    CHECK(std::abs(pq - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("compiled polynomials agree with pointwise evaluation") {
  testing::PolyGenerator gen(5, 2);
  for (int i = 0; i < 50; ++i) {
    const P p = substitute_params(gen.polynomial(4, 2), 2, -3);
    const CompiledPolynomial c(p);
    PointBinding pt;
    pt.base = {0.7, -0.4, 1.1, 0.25};
    pt.f = [](int k, double v) { return k == 0 ? v * v * v : k == 1 ? 3 * v * v : k == 2 ? 6 * v : k == 3 ? 6.0 : 0.0; };
    std::vector<double> jets;
    for (const auto& j : c.jet_slots()) {
      const double v = 0.1 * static_cast<double>(j.total() + 1);
      pt.jet[j] = v;
      jets.push_back(v);
    }
    if (!pt.jet.count(DerivIndex())) pt.jet[DerivIndex()] = 0.5;
    const double uval = pt.jet[DerivIndex()];
    std::vector<double> fvals;
    for (int k = 0; k <= c.max_f_order(); ++k) fvals.push_back(pt.f(k, uval));
    CHECK(c(pt.base, jets, fvals) == doctest::Approx(evaluate_at_point(p, pt)).epsilon(1e-12));
  }
}

TEST_CASE("capacity limits raise") {
  CHECK_THROWS_AS(P::t(1 << 20) * P::t(1 << 20), CapacityError);
  Rational huge = 1;
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, (1u << 20) + 8);
  huge = big;
  CHECK_THROWS_AS(P{huge}, CapacityError);
}

TEST_CASE("queries on polynomials") {
  const P p = P::t(2) * P::y(2) * u_t + P::b(-1) * P::x() * P::f(3);
  CHECK(p.max_y_index() == 2);
  CHECK(p.degree_in(Direction::t()) == 2);
  CHECK(p.max_f_order() == 3);
  CHECK(p.has_params());
  CHECK_FALSE(p.is_base_only());
  CHECK((P::t() * P::x() + P(3)).is_base_only());
  CHECK((P(5) + P::t()).constant_term() == 5);
}
