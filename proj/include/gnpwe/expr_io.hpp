#pragma once

// Text, LaTeX and JSON forms of differential polynomials.
//
// Plain grammar (precedence ^ > * > unary minus > binary +/-):
//   expr    := term (('+' | '-') term)*
//   term    := ('+' | '-') term | product
//   product := power ('*' power)*
//   power   := atom ('^' ['+' | '-'] INTEGER)?
//   atom    := RATIONAL | IDENT | '(' expr ')'
// RATIONAL is an integer or p/q. Identifiers:
//   t  x  a  b  y1..yn  f0..fk (f^(k))  u  u_<dirs>  name  name_<dirs>
// where <dirs> is a sequence of t, x, y<j> (e.g. u_tx, u_y1y1, chi_ttt) and
// name is a greek letter optionally followed by digits (chi, phi0, xi1, ...),
// standing for an abstract function of t, x, y. Negative exponents are
// accepted on b only.

#include <string>
#include <string_view>

#include "gnpwe/determining.hpp"
#include "gnpwe/jet.hpp"
#include "gnpwe/model.hpp"
#include "json.hpp"

namespace gnpwe {

enum class RenderTarget { kPlain, kLatex, kJson };

/// Throws ParseError (with position) on malformed input, unknown identifiers
/// and y indices outside 1..n.
DiffPolynomial parse(std::string_view text, int n);

std::string to_plain(const DiffPolynomial& p);
std::string to_latex(const DiffPolynomial& p);
/// {"terms": [...]}; y arrays and derivative indices are padded to n.
nlohmann::json to_json(const DiffPolynomial& p, int n);
DiffPolynomial from_json(const nlohmann::json& j);

/// Deterministic rendering. JSON output carries "schema": 1.
std::string render(const DiffPolynomial& p, RenderTarget target, int n);
std::string render(const ConservationLaw& law, RenderTarget target, int n);
std::string render(const CharacteristicBasis& basis, RenderTarget target, int n);
std::string render(const ClassificationReport& report, RenderTarget target);

nlohmann::json to_json(const ConservationLaw& law, int n);
nlohmann::json to_json(const ClassificationReport& report);

/// "plain" | "latex" | "json"; throws DomainError otherwise.
RenderTarget parse_render_target(std::string_view name);

}  // namespace gnpwe
