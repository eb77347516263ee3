#include <doctest.h>

#include "generators.hpp"
#include "gnpwe/errors.hpp"
#include "gnpwe/expr_io.hpp"

using namespace gnpwe;
using P = DiffPolynomial;

TEST_CASE("parsing characteristics and equation text") {
  CHECK(parse("t*x - 1/2 * b^-1 * y1^2", 1) == P::t() * P::x() - P(Rational(1, 2)) * P::b(-1) * P::y(1, 2));
  CHECK(parse("u_tx + f2*u_t^2 + f1*u_tt + a*u_ttt + b*u_y1y1", 1) == build_equation(1).delta());
  CHECK(parse("-(t + 1)^2", 1) == -(P::t() + P(1)).pow(2));
  CHECK_THROWS_AS(parse("2*-x", 1), ParseError);  // unary minus binds looser than *
  CHECK(parse("u", 1) == P::u());
  CHECK(parse("chi_ttx", 1) == P::func("chi", DerivIndex(2, 1)));
  CHECK(parse("phi0 + xi1_y1", 1) == P::func("phi0") + P::func("xi1", DerivIndex(0, 0, {1})));
  CHECK(parse("f0", 1) == P::f(0));
  CHECK(parse("y10", 10) == P::y(10));
  CHECK(parse("u_y10y2", 10) == P::u(DerivIndex(0, 0, {0, 1, 0, 0, 0, 0, 0, 0, 0, 1})));
}

TEST_CASE("precedence: power, product, unary minus, sum") {
  CHECK(parse("-x^2", 1) == -(P::x(2)));
  CHECK(parse("1 - x*t^2", 1) == P(1) - P::x() * P::t(2));
  CHECK(parse("3/4*x - -t", 1) == P(Rational(3, 4)) * P::x() + P::t());
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse("y3", 2), ParseError);
  CHECK_THROWS_AS(parse("t +", 1), ParseError);
  CHECK_THROWS_AS(parse("t ** x", 1), ParseError);
  CHECK_THROWS_AS(parse("t^-1", 1), ParseError);
  CHECK_THROWS_AS(parse("u_q", 1), ParseError);
  CHECK_THROWS_AS(parse("zeta3", 1) + parse("foo", 1), ParseError);
  CHECK_THROWS_AS(parse("1/0", 1), ParseError);
  CHECK_THROWS_AS(parse("0.5*t", 1), ParseError);
  try {
    parse("t + $", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("rendering small polynomials") {
  CHECK(render(P(), RenderTarget::kPlain, 1) == "0");
  CHECK(render(P(), RenderTarget::kLatex, 1) == "0");
  CHECK(nlohmann::json::parse(render(P(), RenderTarget::kJson, 1))["terms"] == nlohmann::json::array());
  CHECK(render(P::t(), RenderTarget::kPlain, 1) == "t");
  CHECK(to_plain(P(Rational(-1, 2)) * P::b(-1) * P::y(1, 2)) == "-1/2*b^-1*y1^2");
  CHECK(to_latex(P::f(1) * P::u(DerivIndex(2, 0))) == "f' u_{tt}");
}

TEST_CASE("LaTeX of the adjoint residual lists the four characteristic terms") {
  const auto text = to_latex(characteristic_residual(GnpweEquation(1), abstract_characteristic()));
  for (const char* part : {"\\chi_{tx}", "f' \\chi_{tt}", "- a \\chi_{ttt}", "b \\chi_{y_1y_1}"}) {
    CHECK(text.find(part) != std::string::npos);
  }
}

TEST_CASE("JSON layout") {
  const auto j = to_json(P(Rational(3, 2)) * P::a() * P::b(-1) * P::t() * P::y(2) * P::f(1) *
                             P::u(DerivIndex(1, 0)).pow(2) * P::func("chi", DerivIndex(0, 1)),
                         2);
  REQUIRE(j["terms"].size() == 1);
  const auto& t = j["terms"][0];
  CHECK(t["coeff"] == "3/2");
  CHECK(t["a"] == 1);
  CHECK(t["b"] == -1);
  CHECK(t["base"]["t"] == 1);
  CHECK(t["base"]["y"] == nlohmann::json::array({0, 1}));
  CHECK(t["f"]["1"] == 1);
  CHECK(t["jet"][0]["idx"] == nlohmann::json::array({1, 0, 0, 0}));
  CHECK(t["jet"][0]["exp"] == 2);
  CHECK(t["fn"][0]["name"] == "chi");
  CHECK(t["fn"][0]["idx"] == nlohmann::json::array({0, 1, 0, 0}));
}

TEST_CASE("plain and JSON round trips on random polynomials") {
  for (int n = 1; n <= 2; ++n) {
    testing::PolyGenerator gen(5150 + n, n);
    for (int i = 0; i < 120; ++i) {
      P p = gen.polynomial(5, 3);
      if (i % 5 == 0) p *= P::func(i % 2 ? "phi0" : "chi", gen.deriv_index(2));
      CHECK(parse(to_plain(p), n) == p);
      CHECK(from_json(to_json(p, n)) == p);
    }
  }
}

TEST_CASE("rendering is deterministic") {
  testing::PolyGenerator g1(8, 2), g2(8, 2);
  for (int i = 0; i < 30; ++i) {
    const P p = g1.polynomial();
    const P q = g2.polynomial();
    REQUIRE(p == q);
    for (auto target : {RenderTarget::kPlain, RenderTarget::kLatex, RenderTarget::kJson}) {
      CHECK(render(p, target, 2) == render(q, target, 2));
    }
  }
}

TEST_CASE("malformed JSON is rejected") {
  CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"({"terms":[{"coeff":"1"}]})")), DomainError);
  CHECK_THROWS_AS(from_json(nlohmann::json::parse(R"({"nothing":1})")), DomainError);
}

TEST_CASE("conservation laws and bases render in every target") {
  const GnpweEquation eq(1);
  const auto law = build_fluxes(eq, Characteristic(P::t()));
  const auto plain = render(law, RenderTarget::kPlain, 1);
  CHECK(plain.find("sigma = -u") != std::string::npos);
  CHECK(plain.find("zeta1 = b*t*u_y1") != std::string::npos);
  const auto j = nlohmann::json::parse(render(law, RenderTarget::kJson, 1));
  CHECK(from_json(j["rho"]) == law.rho);
  CHECK(j["schema"] == 1);
  CharacteristicBasis basis{{P(1), P::t()}};
  CHECK(render(basis, RenderTarget::kPlain, 1) == "dimension: 2\n[1] 1\n[2] t\n");
  CHECK(nlohmann::json::parse(render(basis, RenderTarget::kJson, 1))["dimension"] == 2);
}

TEST_CASE("render targets by name") {
  CHECK(parse_render_target("plain") == RenderTarget::kPlain);
  CHECK(parse_render_target("latex") == RenderTarget::kLatex);
  CHECK(parse_render_target("json") == RenderTarget::kJson);
  CHECK_THROWS_AS(parse_render_target("xml"), DomainError);
}
