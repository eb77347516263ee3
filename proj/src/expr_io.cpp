#include "gnpwe/expr_io.hpp"

#include <array>
#include <cctype>
#include <sstream>

#include "gnpwe/errors.hpp"

namespace gnpwe {

namespace {

using P = DiffPolynomial;
using nlohmann::json;

constexpr std::array<std::string_view, 25> kGreek = {
    "alpha", "beta",    "gamma", "delta", "epsilon", "zeta",   "eta",   "theta", "iota",
    "kappa", "lambda",  "mu",    "nu",    "xi",      "omicron", "pi",   "rho",   "sigma",
    "tau",   "upsilon", "phi",   "chi",   "psi",     "omega",  "varphi"};

// Splits "phi0" into ("phi", "0") when the stem is a greek letter name.
bool split_function_name(std::string_view name, std::string_view& stem, std::string_view& digits) {
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  stem = name.substr(0, cut);
  digits = name.substr(cut);
  for (auto g : kGreek) {
    if (stem == g) return true;
  }
  return false;
}

bool is_function_name(std::string_view name) {
  std::string_view stem;
  std::string_view digits;
  return split_function_name(name, stem, digits);
}

std::string dirs_suffix(const DerivIndex& index, bool latex) {
  std::string s(static_cast<std::size_t>(index.t()), 't');
  s.append(static_cast<std::size_t>(index.x()), 'x');
  for (int j = 1; j <= index.max_y(); ++j) {
    for (int r = 0; r < index.y(j); ++r) {
      s += latex ? "y_" + std::to_string(j) : "y" + std::to_string(j);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Plain text

std::string power_suffix(int e) { return e == 1 ? "" : "^" + std::to_string(e); }

std::vector<std::string> plain_factors(const MonomialKey& k) {
  std::vector<std::string> out;
  if (k.pa != 0) out.push_back("a" + power_suffix(k.pa));
  if (k.pb != 0) out.push_back("b" + power_suffix(k.pb));
  const auto& base = k.base.entries();
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] == 0) continue;
    out.push_back(Direction::from_index(static_cast<int>(i)).name() + power_suffix(base[i]));
  }
  for (const auto& [order, e] : k.fsym) out.push_back("f" + std::to_string(order) + power_suffix(e));
  for (const auto& [index, e] : k.jet) {
    std::string s = index.is_zero() ? "u" : "u_" + dirs_suffix(index, false);
    out.push_back(s + power_suffix(e));
  }
  for (const auto& [fk, e] : k.func) {
    std::string s = fk.index.is_zero() ? fk.name : fk.name + "_" + dirs_suffix(fk.index, false);
    out.push_back(s + power_suffix(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// LaTeX

std::string latex_power(const std::string& base, int e) {
  return e == 1 ? base : base + "^{" + std::to_string(e) + "}";
}

std::string latex_function_name(const std::string& name) {
  std::string_view stem;
  std::string_view digits;
  split_function_name(name, stem, digits);
  std::string s = stem == "phi" ? "\\varphi" : "\\" + std::string(stem);
  if (!digits.empty()) s += "_{" + std::string(digits) + "}";
  return s;
}

std::vector<std::string> latex_factors(const MonomialKey& k) {
  std::vector<std::string> out;
  if (k.pa != 0) out.push_back(latex_power("a", k.pa));
  if (k.pb != 0) out.push_back(latex_power("b", k.pb));
  const auto& base = k.base.entries();
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] == 0) continue;
    std::string v = i == 0 ? "t" : i == 1 ? "x" : "y_{" + std::to_string(i - 1) + "}";
    out.push_back(latex_power(v, base[i]));
  }
  for (const auto& [order, e] : k.fsym) {
    std::string v = order == 0   ? "f"
                    : order == 1 ? "f'"
                    : order == 2 ? "f''"
                                 : "f^{(" + std::to_string(order) + ")}";
    if (order > 0 && e != 1) v = "{" + v + "}";
    out.push_back(latex_power(v, e));
  }
  for (const auto& [index, e] : k.jet) {
    std::string v = index.is_zero() ? "u" : "u_{" + dirs_suffix(index, true) + "}";
    out.push_back(latex_power(v, e));
  }
  for (const auto& [fk, e] : k.func) {
    std::string v = latex_function_name(fk.name);
    if (!fk.index.is_zero()) {
      bool indexed = v.find('_') != std::string::npos;
      v = (indexed ? "(" + v + ")" : v) + "_{" + dirs_suffix(fk.index, true) + "}";
    }
    if (e != 1 && !fk.index.is_zero()) v = "{" + v + "}";
    out.push_back(latex_power(v, e));
  }
  return out;
}

std::string latex_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "\\frac{" + q.get_num().get_str() + "}{" + q.get_den().get_str() + "}";
}

template <class FactorFn, class CoeffFn>
std::string render_sum(const P& p, FactorFn factors, CoeffFn coeff, const std::string& mul) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [key, c] : p.terms()) {
    const bool negative = c < 0;
    Rational mag = abs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    auto fs = factors(key);
    std::string body;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i > 0) body += mul;
      body += fs[i];
    }
    if (fs.empty()) {
      out += coeff(mag);
    } else if (mag == 1) {
      out += body;
    } else {
      out += coeff(mag) + mul + body;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  P run() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    P value = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return value;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  P expr() {
    P value = term();
    for (;;) {
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  P term() {
    if (accept('-')) return -term();
    if (accept('+')) return term();
    return product();
  }

  P product() {
    P value = power();
    while (accept('*')) value *= power();
    return value;
  }

  P power() {
    const std::size_t start = (skip_space(), pos_);
    P base = atom();
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    const std::size_t exp_pos = pos_;
    std::string digits = read_digits();
    if (digits.empty()) throw ParseError("expected integer exponent", exp_pos);
    if (digits.size() > 7) throw ParseError("exponent too large", exp_pos);
    int e = std::stoi(digits);
    if (!negative) return base.pow(e);
    // b^-k: only a bare power of b may be inverted.
    if (base.size() == 1) {
      const auto& [key, c] = *base.terms().begin();
      MonomialKey only_b;
      only_b.pb = key.pb;
      if (c == 1 && key == only_b && key.pb != 0) return P::b(-key.pb * e);
    }
    throw ParseError("negative exponents are only allowed on b", start);
  }

  std::string read_digits() {
    std::string s;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      s += text_[pos_++];
    }
    return s;
  }

  P atom() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      P inner = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  P number() {
    const std::size_t start = pos_;
    mpz_class num(read_digits());
    std::size_t save = pos_;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_space();
      std::string den = read_digits();
      if (den.empty()) throw ParseError("expected denominator", pos_);
      mpz_class d(den);
      if (d == 0) throw ParseError("zero denominator", start);
      Rational q(num, d);
      q.canonicalize();
      return P(q);
    }
    pos_ = save;
    return P(Rational(num));
  }

  int y_index(std::string_view digits, std::size_t at) {
    if (digits.empty()) throw ParseError("expected y index", at);
    if (digits.size() > 6) throw ParseError("y index out of range for n = " + std::to_string(n_), at);
    int j = std::stoi(std::string(digits));
    if (j < 1 || j > n_) {
      throw ParseError("y index " + std::to_string(j) + " out of range for n = " + std::to_string(n_), at);
    }
    return j;
  }

  DerivIndex suffix_index(std::string_view suffix, std::size_t at) {
    DerivIndex index;
    std::size_t i = 0;
    while (i < suffix.size()) {
      const char c = suffix[i];
      if (c == 't') {
        index = index.added(Direction::t());
        ++i;
      } else if (c == 'x') {
        index = index.added(Direction::x());
        ++i;
      } else if (c == 'y') {
        std::size_t j = i + 1;
        while (j < suffix.size() && std::isdigit(static_cast<unsigned char>(suffix[j]))) ++j;
        index = index.added(Direction::y(y_index(suffix.substr(i + 1, j - i - 1), at + i)));
        i = j;
      } else {
        throw ParseError("invalid derivative direction '" + std::string(1, c) + "'", at + i);
      }
    }
    return index;
  }

  P identifier() {
    const std::size_t start = pos_;
    auto word_char = [&](std::size_t k) {
      return k < text_.size() && std::isalnum(static_cast<unsigned char>(text_[k]));
    };
    std::size_t end = pos_;
    while (word_char(end)) ++end;
    std::string_view name = text_.substr(pos_, end - pos_);
    std::string_view suffix;
    std::size_t suffix_at = end;
    if (end < text_.size() && text_[end] == '_') {
      std::size_t s = end + 1;
      std::size_t e = s;
      while (word_char(e)) ++e;
      if (e == s) throw ParseError("empty derivative suffix", end);
      suffix = text_.substr(s, e - s);
      suffix_at = s;
      end = e;
    }
    pos_ = end;

    if (!suffix.empty()) {
      DerivIndex index = suffix_index(suffix, suffix_at);
      if (name == "u") return P::u(index);
      if (is_function_name(name)) return P::func(std::string(name), index);
      throw ParseError("only u and function symbols take derivative suffixes", start);
    }
    if (name == "t") return P::t();
    if (name == "x") return P::x();
    if (name == "a") return P::a();
    if (name == "b") return P::b();
    if (name == "u") return P::u();
    auto all_digits = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(),
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (name.size() > 1 && name[0] == 'y' && all_digits(name.substr(1))) {
      return P::y(y_index(name.substr(1), start + 1));
    }
    if (name.size() > 1 && name[0] == 'f' && all_digits(name.substr(1))) {
      if (name.size() > 7) throw ParseError("f-derivative order too large", start);
      return P::f(std::stoi(std::string(name.substr(1))));
    }
    if (is_function_name(name)) return P::func(std::string(name));
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// JSON

json index_json(const std::vector<int>& entries, int n) {
  std::vector<int> v(static_cast<std::size_t>(2 + n), 0);
  if (entries.size() > v.size()) v.resize(entries.size(), 0);
  std::copy(entries.begin(), entries.end(), v.begin());
  return v;
}

std::string rational_text(const Rational& q) { return q.get_str(); }

Rational rational_from_text(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw DomainError("invalid rational '" + s + "'");
  if (q.get_den() == 0) throw DivisionByZeroError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

}  // namespace

DiffPolynomial parse(std::string_view text, int n) {
  if (n < 1) throw DomainError("n must be a positive integer");
  return Parser(text, n).run();
}

std::string to_plain(const DiffPolynomial& p) {
  return render_sum(p, plain_factors, [](const Rational& q) { return q.get_str(); }, "*");
}

std::string to_latex(const DiffPolynomial& p) { return render_sum(p, latex_factors, latex_rational, " "); }

nlohmann::json to_json(const DiffPolynomial& p, int n) {
  json terms = json::array();
  for (const auto& [key, c] : p.terms()) {
    json t;
    t["coeff"] = rational_text(c);
    t["a"] = key.pa;
    t["b"] = key.pb;
    int ny = std::max(n, key.base.max_y());
    std::vector<int> y(static_cast<std::size_t>(ny), 0);
    for (int j = 1; j <= key.base.max_y(); ++j) y[static_cast<std::size_t>(j - 1)] = key.base.y(j);
    t["base"] = {{"t", key.base.t()}, {"x", key.base.x()}, {"y", y}};
    json f = json::object();
    for (const auto& [order, e] : key.fsym) f[std::to_string(order)] = e;
    t["f"] = f;
    json jet = json::array();
    for (const auto& [index, e] : key.jet) jet.push_back({{"idx", index_json(index.entries(), n)}, {"exp", e}});
    t["jet"] = jet;
    json fn = json::array();
    for (const auto& [fk, e] : key.func) {
      fn.push_back({{"name", fk.name}, {"idx", index_json(fk.index.entries(), n)}, {"exp", e}});
    }
    t["fn"] = fn;
    terms.push_back(std::move(t));
  }
  return json{{"terms", terms}};
}

DiffPolynomial from_json(const nlohmann::json& j) {
  try {
    DiffPolynomial p;
    for (const auto& t : j.at("terms")) {
      MonomialKey key;
      key.pa = t.at("a").get<int>();
      key.pb = t.at("b").get<int>();
      const auto& base = t.at("base");
      key.base = BasePowers(base.at("t").get<int>(), base.at("x").get<int>(),
                            base.at("y").get<std::vector<int>>());
      for (const auto& [k, e] : t.at("f").items()) {
        int order = std::stoi(k);
        if (order < 0 || e.get<int>() <= 0) throw DomainError("invalid f entry in JSON");
        key.fsym[order] = e.get<int>();
      }
      for (const auto& jt : t.at("jet")) {
        if (jt.at("exp").get<int>() <= 0) throw DomainError("invalid jet exponent in JSON");
        key.jet[DerivIndex(jt.at("idx").get<std::vector<int>>())] = jt.at("exp").get<int>();
      }
      for (const auto& ft : t.at("fn")) {
        if (ft.at("exp").get<int>() <= 0) throw DomainError("invalid function exponent in JSON");
        key.func[FuncKey{ft.at("name").get<std::string>(), DerivIndex(ft.at("idx").get<std::vector<int>>())}] =
            ft.at("exp").get<int>();
      }
      p.add_term(key, rational_from_text(t.at("coeff").get<std::string>()));
    }
    return p;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed polynomial JSON: ") + e.what());
  }
}

std::string render(const DiffPolynomial& p, RenderTarget target, int n) {
  switch (target) {
    case RenderTarget::kPlain: return to_plain(p);
    case RenderTarget::kLatex: return to_latex(p);
    case RenderTarget::kJson: {
      json j = to_json(p, n);
      j["schema"] = 1;
      return j.dump();
    }
  }
  return {};
}

nlohmann::json to_json(const ConservationLaw& law, int n) {
  json zeta = json::array();
  for (const auto& z : law.zeta) zeta.push_back(to_json(z, n));
  return json{{"chi", to_json(law.chi.poly(), n)},
              {"rho", to_json(law.rho, n)},
              {"sigma", to_json(law.sigma, n)},
              {"zeta", zeta}};
}

std::string render(const ConservationLaw& law, RenderTarget target, int n) {
  if (target == RenderTarget::kJson) {
    json j = to_json(law, n);
    j["schema"] = 1;
    return j.dump();
  }
  std::ostringstream out;
  if (target == RenderTarget::kPlain) {
    out << "chi = " << to_plain(law.chi.poly()) << '\n';
    out << "rho = " << to_plain(law.rho) << '\n';
    out << "sigma = " << to_plain(law.sigma) << '\n';
    for (std::size_t j = 0; j < law.zeta.size(); ++j) {
      out << "zeta" << j + 1 << " = " << to_plain(law.zeta[j]) << '\n';
    }
  } else {
    out << "\\chi = " << to_latex(law.chi.poly()) << " \\\\\n";
    out << "\\rho = " << to_latex(law.rho) << " \\\\\n";
    out << "\\sigma = " << to_latex(law.sigma) << " \\\\\n";
    for (std::size_t j = 0; j < law.zeta.size(); ++j) {
      out << "\\zeta_{" << j + 1 << "} = " << to_latex(law.zeta[j]) << " \\\\\n";
    }
  }
  return out.str();
}

std::string render(const CharacteristicBasis& basis, RenderTarget target, int n) {
  if (target == RenderTarget::kJson) {
    json arr = json::array();
    for (const auto& c : basis.basis) arr.push_back(to_json(c, n));
    return json{{"schema", 1}, {"dimension", basis.dimension()}, {"basis", arr}}.dump();
  }
  std::ostringstream out;
  out << "dimension: " << basis.dimension() << '\n';
  for (std::size_t i = 0; i < basis.basis.size(); ++i) {
    out << '[' << i + 1 << "] "
        << (target == RenderTarget::kPlain ? to_plain(basis.basis[i]) : to_latex(basis.basis[i])) << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const ClassificationReport& report) {
  const auto& s = report.spec;
  json spec = {{"n", s.n},           {"deg_t", s.deg_t},
               {"deg_x", s.deg_x},   {"deg_y", s.deg_y},
               {"a", rational_text(s.a)}, {"b", rational_text(s.b)},
               {"jet_degree", s.jets ? json(s.jets->degree) : json(nullptr)}};
  json basis = json::array();
  for (const auto& c : report.checks) {
    json e = {{"chi", to_json(c.multiplier, s.n)},
              {"depends_on_u", c.depends_on_u},
              {"residual_zero", c.residual_zero},
              {"flux_identity_zero", c.flux_identity_zero},
              {"t_degree_ok", c.t_degree_ok},
              {"sys_conditions_ok", c.sys_conditions_ok},
              {"verified", c.verified()}};
    if (c.law) e["fluxes"] = to_json(*c.law, s.n);
    basis.push_back(std::move(e));
  }
  json j = {{"schema", 1},
            {"spec", spec},
            {"unknowns", report.unknowns},
            {"equations", report.equations},
            {"rank", report.rank},
            {"dimension", report.dimension()},
            {"u_dependent", report.u_dependent},
            {"basis", basis},
            {"all_verified", report.all_verified()}};
  j["family_dimension"] = report.family_dimension ? json(*report.family_dimension) : json(nullptr);
  j["family_members_in_kernel"] =
      report.family_members_in_kernel ? json(*report.family_members_in_kernel) : json(nullptr);
  if (!report.note().empty()) j["note"] = report.note();
  return j;
}

std::string render(const ClassificationReport& report, RenderTarget target) {
  if (target == RenderTarget::kJson) return to_json(report).dump();
  const bool latex = target == RenderTarget::kLatex;
  std::ostringstream out;
  const auto& s = report.spec;
  out << "n = " << s.n << ", deg_t <= " << s.deg_t << ", deg_x <= " << s.deg_x << ", deg_y <= " << s.deg_y
      << ", a = " << s.a.get_str() << ", b = " << s.b.get_str();
  if (s.jets) out << ", jet degree <= " << s.jets->degree;
  out << '\n';
  out << "unknowns: " << report.unknowns << ", equations: " << report.equations << ", rank: " << report.rank
      << '\n';
  out << "dimension: " << report.dimension() << '\n';
  for (std::size_t i = 0; i < report.checks.size(); ++i) {
    const auto& c = report.checks[i];
    out << '[' << i + 1 << "] " << (latex ? to_latex(c.multiplier) : to_plain(c.multiplier))
        << (c.verified() ? "  (verified)" : "  (NOT verified)") << '\n';
  }
  if (report.family_dimension) {
    out << "explicit family dimension: " << *report.family_dimension << '\n';
    out << "family members in kernel: " << (*report.family_members_in_kernel ? "yes" : "no") << '\n';
  }
  out << "u-dependent multipliers: " << report.u_dependent << '\n';
  out << "all verified: " << (report.all_verified() ? "yes" : "no") << '\n';
  if (!report.note().empty()) out << "note: " << report.note() << '\n';
  return out.str();
}

RenderTarget parse_render_target(std::string_view name) {
  if (name == "plain") return RenderTarget::kPlain;
  if (name == "latex") return RenderTarget::kLatex;
  if (name == "json") return RenderTarget::kJson;
  throw DomainError("unknown render target '" + std::string(name) + "'");
}

}  // namespace gnpwe
