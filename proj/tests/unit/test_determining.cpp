#include <doctest.h>

#include <algorithm>

#include "generators.hpp"
#include "gnpwe/determining.hpp"
#include "gnpwe/errors.hpp"
#include "oracles.hpp"

using namespace gnpwe;
using P = DiffPolynomial;

namespace {

AnsatzSpec make_spec(int n, int deg_t, int deg_x, int deg_y, Rational a = 1, Rational b = 1) {
  AnsatzSpec s;
  s.n = n;
  s.deg_t = deg_t;
  s.deg_x = deg_x;
  s.deg_y = deg_y;
  s.a = a;
  s.b = b;
  return s;
}

std::size_t oracle_dimension(const DeterminingSystem& sys) {
  return sys.unknowns() - testing::dense_rank(testing::to_dense(sys.matrix));
}

bool spans_contain(const CharacteristicBasis& basis, const P& p) {
  // p lies in the span iff appending it does not raise the rank.
  std::vector<P> all = basis.basis;
  std::vector<MonomialKey> keys;
  auto collect = [&](const P& q) {
    for (const auto& [k, c] : q.terms()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
  };
  for (const auto& q : all) collect(q);
  collect(p);
  auto row = [&](const P& q) {
    std::vector<Rational> r(keys.size(), Rational(0));
    for (std::size_t i = 0; i < keys.size(); ++i) r[i] = q.coefficient(keys[i]);
    return r;
  };
  testing::DenseMatrix m;
  for (const auto& q : all) m.push_back(row(q));
  const std::size_t before = testing::dense_rank(m);
  m.push_back(row(p));
  return testing::dense_rank(m) == before;
}

}  // namespace

TEST_CASE("ansatz monomials respect the caps") {
  CHECK(base_monomials(1, 1, 0, 0).size() == 2);
  CHECK(base_monomials(1, 1, 2, 3).size() == 2 * 3 * 4);
  // Total y-degree <= 1 in two variables: 1, y1, y2.
  CHECK(base_monomials(2, 0, 0, 1).size() == 3);
  CHECK(base_monomials(2, 0, 0, 2).size() == 6);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(make_spec(0, 1, 0, 0).validate(), DomainError);
  CHECK_THROWS_AS(make_spec(1, -1, 0, 0).validate(), DomainError);
  CHECK_THROWS_AS(make_spec(1, 1, 0, 0, 1, 0).validate(), DomainError);
}

TEST_CASE("constant and linear-in-t characteristics") {
  const auto sys = assemble_determining_system(make_spec(1, 1, 0, 0));
  const auto basis = null_space(sys);
  CHECK(basis.dimension() == 2);
  CHECK(spans_contain(basis, P(1)));
  CHECK(spans_contain(basis, P::t()));
}

TEST_CASE("second powers of t are excluded") {
  const auto sys = assemble_determining_system(make_spec(1, 2, 0, 0));
  const auto basis = null_space(sys);
  CHECK(basis.dimension() == 2);
  for (const auto& m : basis.basis) CHECK(m.degree_in(Direction::t()) <= 1);
  CHECK_FALSE(sys.contains(P::t(2)));
}

TEST_CASE("affine-in-y family for n = 1") {
  const auto basis = null_space(assemble_determining_system(make_spec(1, 1, 0, 1)));
  CHECK(basis.dimension() == 4);
  for (const P& p : {P(1), P::y(1), P::t(), P::t() * P::y(1)}) CHECK(spans_contain(basis, p));
}

TEST_CASE("harmonic family for n = 2") {
  const auto basis = null_space(assemble_determining_system(make_spec(2, 1, 0, 1)));
  CHECK(basis.dimension() == 6);
  for (const P& p : {P(1), P::y(1), P::y(2), P::t(), P::t() * P::y(1), P::t() * P::y(2)}) {
    CHECK(spans_contain(basis, p));
  }
}

TEST_CASE("dimension counts for n = 1 match the rank oracle and the explicit family") {
  const std::vector<std::pair<Rational, Rational>> params = {{1, 1}, {2, -3}, {-1, Rational(1, 2)}};
  for (const auto& [a, b] : params) {
    for (int k = 0; k <= 3; ++k) {
      for (int dy : {0, 1, 2, 3, 4}) {
        const auto spec = make_spec(1, 1, k, dy, a, b);
        const auto sys = assemble_determining_system(spec);
        const auto basis = null_space(sys);
        CAPTURE(k);
        CAPTURE(dy);
        CHECK(basis.dimension() == oracle_dimension(sys));
        if (dy >= 3) CHECK(basis.dimension() == static_cast<std::size_t>(4 * (k + 1)));
        if (dy == 0) CHECK(basis.dimension() == static_cast<std::size_t>(k + 2));
        const auto generators = explicit_family_generators(spec);
        CHECK(generators.size() == basis.dimension());
        for (const auto& g : generators) CHECK(sys.contains(g.poly()));
      }
    }
  }
}

TEST_CASE("dimension is independent of the parameters for n = 2") {
  for (int k = 0; k <= 1; ++k) {
    const std::size_t reference = null_space(assemble_determining_system(make_spec(2, 1, k, 2))).dimension();
    for (const auto& [a, b] : std::vector<std::pair<Rational, Rational>>{{2, -3}, {-1, Rational(1, 2)}, {5, 7}}) {
      const auto sys = assemble_determining_system(make_spec(2, 1, k, 2, a, b));
      CHECK(null_space(sys).dimension() == reference);
      CHECK(oracle_dimension(sys) == reference);
    }
  }
}

TEST_CASE("row count equals the number of residual signatures") {
  const auto spec = make_spec(1, 2, 1, 2, 3, 5);
  const auto sys = assemble_determining_system(spec);
  std::vector<MonomialKey> keys = sys.row_keys;
  std::sort(keys.begin(), keys.end());
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  CHECK(sys.equations() == sys.row_keys.size());
}

TEST_CASE("conditions on phi0 and phi1") {
  const P half_inv_b = P(Rational(1, 2)) * P::b(-1);
  CHECK(solve_sys_conditions(-(half_inv_b * P::y(1, 2)), P::x(), 1, 1));
  CHECK(solve_sys_conditions(P(-2) * P::y(1, 2), P::x(), 1, Rational(1, 4)));
  CHECK_FALSE(solve_sys_conditions(P(), P::x(), 1, 1));
  CHECK(solve_sys_conditions(P(), P::y(1) * P::y(2), 2, 1));
  CHECK_FALSE(solve_sys_conditions(P(), P::y(1, 2), 1, 1));
  CHECK_THROWS_AS(solve_sys_conditions(P(), P::x(), 1, 0), DomainError);
}

TEST_CASE("splitting in t") {
  const auto parts = split_in_t(P::x() + P::t() * P::y(1));
  REQUIRE(parts);
  CHECK(parts->first == P::x());
  CHECK(parts->second == P::y(1));
  CHECK_FALSE(split_in_t(P::t(2)));
}

TEST_CASE("explicit n = 1 characteristics") {
  const P zero;
  CHECK(n1_explicit_characteristic({zero, zero, P::x(), zero}, 1).poly() ==
        P::t() * P::x() - P(Rational(1, 2)) * P::y(1, 2));
  CHECK(n1_explicit_characteristic({P(1), zero, zero, zero}, 1).poly() == P(1));
  CHECK(n1_explicit_characteristic({zero, zero, zero, P::x()}, 1).poly() ==
        P::t() * P::x() * P::y(1) - P(Rational(1, 6)) * P::y(1, 3));
  CHECK_THROWS_AS(n1_explicit_characteristic({zero, zero, P::x(), zero}, 0), DivisionByZeroError);
  CHECK_THROWS_AS(n1_explicit_characteristic({P::t(), zero, zero, zero}, 1), DomainError);
}

TEST_CASE("explicit family agrees with the formula and solves the characteristic equation") {
  testing::PolyGenerator gen(606, 1);
  const GnpweEquation eq(1);
  for (int i = 0; i < 40; ++i) {
    const P e0 = gen.x_polynomial(3), e1 = gen.x_polynomial(3), x0 = gen.x_polynomial(3), x1 = gen.x_polynomial(3);
    const Rational b = gen.rational();
    const auto chi = n1_explicit_characteristic({e0, e1, x0, x1}, b);
    CHECK(chi.poly() == testing::family_oracle(e0, e1, x0, x1, b));
    CHECK(substitute_params(characteristic_residual(eq, chi), gen.rational(), b).is_zero());
    const auto symbolic = n1_family_symbolic({e0, e1, x0, x1});
    CHECK(substitute_params(symbolic.poly(), 1, b) == chi.poly());
  }
}

TEST_CASE("classification report for n = 1") {
  const auto report = classify(make_spec(1, 1, 1, 3));
  CHECK(report.dimension() == 8);
  CHECK(report.rank == report.unknowns - 8);
  CHECK(report.all_verified());
  REQUIRE(report.family_dimension);
  CHECK(*report.family_dimension == 8);
  CHECK(*report.family_members_in_kernel);
  CHECK(report.note().empty());
  for (const auto& c : report.checks) {
    CHECK(c.verified());
    REQUIRE(c.law);
  }
  // Basis vectors are scaled so their leading coefficient is 1.
  for (const auto& m : report.basis.basis) CHECK(m.terms().begin()->second == 1);
}

TEST_CASE("classification is reproducible") {
  const auto r1 = classify(make_spec(2, 1, 1, 2, 2, -3));
  const auto r2 = classify(make_spec(2, 1, 1, 2, 2, -3));
  CHECK(r1.basis.basis == r2.basis.basis);
  CHECK_FALSE(r1.family_dimension);
}

TEST_CASE("degenerate deg_t = 0 gives the t-independent family") {
  const auto report = classify(make_spec(1, 0, 2, 3));
  // eta0, eta1 of degree <= 2 in x.
  CHECK(report.dimension() == 6);
  for (const auto& m : report.basis.basis) CHECK(m.degree_in(Direction::t()) == 0);
  CHECK(report.all_verified());
}

TEST_CASE("jet ansatz finds no u-dependent multipliers") {
  AnsatzSpec spec = make_spec(1, 1, 0, 0);
  spec.jets = JetAnsatz{{DerivIndex()}, 1};
  auto report = classify(spec);
  CHECK(report.u_dependent == 0);
  CHECK(report.dimension() == 2);
  CHECK_FALSE(report.note().empty());

  spec = make_spec(1, 2, 2, 2);
  spec.jets = JetAnsatz::first_order(1, 1);
  report = classify(spec);
  CHECK(report.u_dependent == 0);
  CHECK(report.dimension() == null_space(assemble_determining_system(make_spec(1, 2, 2, 2))).dimension());
  CHECK(report.all_verified());
}

TEST_CASE("every basis element satisfies the structural conditions") {
  for (int n = 1; n <= 2; ++n) {
    const auto report = classify(make_spec(n, 2, 2, 2, -1, Rational(1, 2)));
    for (const auto& c : report.checks) {
      CHECK(c.residual_zero);
      CHECK(c.flux_identity_zero);
      CHECK(c.t_degree_ok);
      CHECK(c.sys_conditions_ok);
    }
  }
}
