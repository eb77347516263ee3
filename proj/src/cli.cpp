#include "gnpwe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>

#include "gnpwe/determining.hpp"
#include "gnpwe/errors.hpp"
#include "gnpwe/expr_io.hpp"
#include "gnpwe/fd.hpp"
#include "gnpwe/field_io.hpp"
#include "gnpwe/manufactured.hpp"
#include "gnpwe/march.hpp"
#include "gnpwe/model.hpp"

namespace gnpwe::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SharedFlags {
  int n = 1;
  std::string a = "1";
  std::string b = "1";
  std::string format = "plain";
  std::string out;
  std::vector<CLI::Option*> a_opts;
  std::vector<CLI::Option*> b_opts;

  static bool given(const std::vector<CLI::Option*>& opts) {
    return std::any_of(opts.begin(), opts.end(), [](const CLI::Option* o) { return o->count() > 0; });
  }
};

struct GridFlags {
  int nt = 32;
  int ny = 33;
  int nx = 17;
  double lx = 1.0;
  double ly = 4.0;
  int stencil_order = 2;
  std::string f = "u^2";
  double amplitude = 1.0;
  std::string profile = "gaussian";

  fd::GridSpec spec(int n) const {
    fd::GridSpec g;
    g.n = n;
    g.nt = nt;
    g.ny = ny;
    g.nx = nx;
    g.lx = lx;
    g.ly = ly;
    g.stencil_order = stencil_order;
    return g;
  }
};

void add_shared(CLI::App* cmd, SharedFlags& s, const std::string& formats) {
  cmd->add_option("--n", s.n, "number of transverse variables y1..yn")->check(CLI::PositiveNumber);
  s.a_opts.push_back(cmd->add_option("--a", s.a, "coefficient a as p/q"));
  s.b_opts.push_back(cmd->add_option("--b", s.b, "coefficient b as p/q, nonzero"));
  cmd->add_option("--format", s.format, "output format: " + formats);
  cmd->add_option("--out", s.out, "write output to FILE instead of stdout");
}

void add_grid(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--nt", g.nt, "points in t (periodic)");
  cmd->add_option("--ny", g.ny, "points in each y");
  cmd->add_option("--nx", g.nx, "points in x");
  cmd->add_option("--lx", g.lx, "x-domain length");
  cmd->add_option("--ly", g.ly, "y-domain half width");
  cmd->add_option("--stencil-order", g.stencil_order, "2 or 4");
  cmd->add_option("--f", g.f, "nonlinearity as a polynomial in u");
  cmd->add_option("--amplitude", g.amplitude, "amplitude of the manufactured field");
  cmd->add_option("--profile", g.profile, "y profile: gaussian or parabolic");
}

Rational parse_rational(const std::string& flag, const std::string& text) {
  static const std::regex pattern(R"([+-]?[0-9]+(/[0-9]+)?)");
  if (!std::regex_match(text, pattern)) {
    throw UsageError(flag + " expects an integer or p/q rational, got '" + text + "'");
  }
  const auto slash = text.find('/');
  if (slash != std::string::npos && std::stoll(text.substr(slash + 1)) == 0) {
    throw UsageError(flag + " has a zero denominator");
  }
  Rational q(text);
  q.canonicalize();
  return q;
}

struct Params {
  Rational a;
  Rational b;
  bool a_given;
  bool b_given;
};

Params read_params(const SharedFlags& s) {
  Params p{parse_rational("--a", s.a), parse_rational("--b", s.b), SharedFlags::given(s.a_opts),
            SharedFlags::given(s.b_opts)};
  if (p.b == 0) throw UsageError("--b must be nonzero");
  return p;
}

Rational pow_rational(const Rational& q, int e) {
  Rational out = 1;
  for (int i = 0; i < std::abs(e); ++i) out *= q;
  return e < 0 ? Rational(1 / out) : out;
}

/// Substitutes only the parameters given on the command line.
DiffPolynomial apply_params(const DiffPolynomial& p, const Params& prm) {
  if (!prm.a_given && !prm.b_given) return p;
  DiffPolynomial out;
  for (const auto& [key, coeff] : p.terms()) {
    MonomialKey k = key;
    Rational c = coeff;
    if (prm.a_given) {
      c *= pow_rational(prm.a, k.pa);
      k.pa = 0;
    }
    if (prm.b_given) {
      c *= pow_rational(prm.b, k.pb);
      k.pb = 0;
    }
    out.add_term(k, c);
  }
  return out;
}

ConservationLaw apply_params(const ConservationLaw& law, const Params& prm) {
  ConservationLaw out;
  out.chi = Characteristic(apply_params(law.chi.poly(), prm));
  out.rho = apply_params(law.rho, prm);
  out.sigma = apply_params(law.sigma, prm);
  for (const auto& z : law.zeta) out.zeta.push_back(apply_params(z, prm));
  return out;
}

DiffPolynomial parse_expr(const std::string& flag, const std::string& text, int n) {
  try {
    return parse(text, n);
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

RenderTarget symbolic_target(const std::string& format) {
  if (format == "plain") return RenderTarget::kPlain;
  if (format == "latex") return RenderTarget::kLatex;
  if (format == "json") return RenderTarget::kJson;
  throw UsageError("--format must be plain, latex or json for this command, got '" + format + "'");
}

enum class TableFormat { kPlain, kCsv, kJson };

TableFormat table_target(const std::string& format) {
  if (format == "plain") return TableFormat::kPlain;
  if (format == "csv") return TableFormat::kCsv;
  if (format == "json") return TableFormat::kJson;
  throw UsageError("--format must be plain, csv or json for this command, got '" + format + "'");
}

std::string number(double v) {
  std::ostringstream out;
  out << std::scientific << std::setprecision(6) << v;
  return out.str();
}

std::string render_poly(const DiffPolynomial& p, RenderTarget target) {
  return target == RenderTarget::kLatex ? to_latex(p) : to_plain(p);
}

fd::ManufacturedField::Profile parse_profile(const std::string& name) {
  if (name == "gaussian") return fd::ManufacturedField::Profile::kGaussian;
  if (name == "parabolic") return fd::ManufacturedField::Profile::kParabolic;
  throw UsageError("--profile must be gaussian or parabolic, got '" + name + "'");
}

fd::FModel parse_f(const std::string& text) {
  return fd::FModel::from_polynomial(parse_expr("--f", text, 1));
}

void validate_grid(const fd::GridSpec& g) {
  try {
    g.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// ---- symbolic commands -------------------------------------------------

std::string cmd_derive_adjoint(const SharedFlags& s) {
  const Params prm = read_params(s);
  const GnpweEquation eq(s.n);
  const auto chi = abstract_characteristic();
  const DiffPolynomial adjoint = apply_params(adjoint_residual(eq, chi), prm);
  const bool agrees = adjoint == apply_params(characteristic_residual(eq, chi), prm);
  const auto target = symbolic_target(s.format);
  if (target == RenderTarget::kJson) {
    return json{{"schema", 1}, {"n", s.n}, {"residual", to_json(adjoint, s.n)}, {"matches_direct", agrees}}
               .dump() +
           "\n";
  }
  return render_poly(adjoint, target) + " = 0\n";
}

struct ClassifyFlags {
  int deg_t = 1;
  int deg_x = 0;
  int deg_y = 0;
  std::optional<int> jet_deg;
};

std::string cmd_classify(const SharedFlags& s, const ClassifyFlags& c) {
  const Params prm = read_params(s);
  const auto target = symbolic_target(s.format);
  if (c.deg_t < 0 || c.deg_x < 0 || c.deg_y < 0) throw UsageError("degree caps must be nonnegative");
  if (c.jet_deg && *c.jet_deg < 0) throw UsageError("--jet-deg must be nonnegative");
  AnsatzSpec spec;
  spec.n = s.n;
  spec.deg_t = c.deg_t;
  spec.deg_x = c.deg_x;
  spec.deg_y = c.deg_y;
  spec.a = prm.a;
  spec.b = prm.b;
  if (c.jet_deg) spec.jets = JetAnsatz::first_order(s.n, *c.jet_deg);
  const auto report = classify(spec);
  std::string text = render(report, target);
  if (target == RenderTarget::kJson) text += '\n';
  return text;
}

Characteristic read_chi(const std::string& text, int n) {
  DiffPolynomial p = parse_expr("--chi", text, n);
  return Characteristic(std::move(p));
}

std::string cmd_fluxes(const SharedFlags& s, const std::string& chi_text) {
  const Params prm = read_params(s);
  const auto target = symbolic_target(s.format);
  const GnpweEquation eq(s.n);
  const auto chi = read_chi(chi_text, s.n);
  const ConservationLaw law = build_fluxes(eq, chi);
  const DiffPolynomial residual = apply_params(divergence_residual(eq, law), prm);
  const ConservationLaw shown = apply_params(law, prm);
  if (target == RenderTarget::kJson) {
    json j = to_json(shown, s.n);
    j["schema"] = 1;
    j["residual"] = to_json(residual, s.n);
    return j.dump() + "\n";
  }
  std::string text = render(shown, target, s.n);
  text += (target == RenderTarget::kLatex ? "\\mathrm{residual} = " : "residual = ") + render_poly(residual, target) +
          "\n";
  return text;
}

std::string cmd_verify(const SharedFlags& s, const std::string& chi_text) {
  const Params prm = read_params(s);
  const auto target = symbolic_target(s.format);
  const GnpweEquation eq(s.n);
  const auto chi = read_chi(chi_text, s.n);
  const DiffPolynomial residual = apply_params(characteristic_residual(eq, chi), prm);
  const DiffPolynomial flux_residual = apply_params(divergence_residual(eq, build_fluxes(eq, chi)), prm);
  const bool verified = residual.is_zero() && flux_residual.is_zero();
  if (target == RenderTarget::kJson) {
    return json{{"schema", 1},
                {"chi", to_json(chi.poly(), s.n)},
                {"residual", to_json(residual, s.n)},
                {"divergence_residual", to_json(flux_residual, s.n)},
                {"verified", verified}}
               .dump() +
           "\n";
  }
  std::ostringstream out;
  out << "residual = " << render_poly(residual, target) << '\n';
  out << "divergence residual = " << render_poly(flux_residual, target) << '\n';
  out << "verified = " << (verified ? "true" : "false") << '\n';
  return out.str();
}

struct FamilyFlags {
  std::string eta0 = "0";
  std::string eta1 = "0";
  std::string xi0 = "0";
  std::string xi1 = "0";
};

DiffPolynomial parse_x_polynomial(const std::string& flag, const std::string& text) {
  DiffPolynomial p = parse_expr(flag, text, 1);
  for (const auto& [key, coeff] : p.terms()) {
    (void)coeff;
    if (key.degree() != key.base[Direction::x()] || key.pa != 0 || key.pb != 0) {
      throw UsageError(flag + " must be a polynomial in x with rational coefficients");
    }
  }
  return p;
}

std::string cmd_n1_family(const SharedFlags& s, const FamilyFlags& f) {
  if (s.n != 1) throw UsageError("n1-family requires --n 1");
  const Params prm = read_params(s);
  const auto target = symbolic_target(s.format);
  N1FamilyInput input{parse_x_polynomial("--eta0", f.eta0), parse_x_polynomial("--eta1", f.eta1),
                      parse_x_polynomial("--xi0", f.xi0), parse_x_polynomial("--xi1", f.xi1)};
  const Characteristic chi =
      prm.b_given ? n1_explicit_characteristic(input, prm.b) : n1_family_symbolic(input);
  const GnpweEquation eq(1);
  const DiffPolynomial residual = apply_params(characteristic_residual(eq, chi), prm);
  const bool verified = residual.is_zero();
  if (target == RenderTarget::kJson) {
    return json{{"schema", 1},
                {"chi", to_json(chi.poly(), 1)},
                {"residual", to_json(residual, 1)},
                {"verified", verified}}
               .dump() +
           "\n";
  }
  std::ostringstream out;
  out << (target == RenderTarget::kLatex ? "\\chi = " : "chi = ") << render_poly(chi.poly(), target) << '\n';
  out << "residual = " << render_poly(residual, target) << '\n';
  out << "verified = " << (verified ? "true" : "false") << '\n';
  return out.str();
}

// ---- numerical commands ------------------------------------------------

struct FdFlags {
  std::string chi = "t";
  std::string field;
  bool against_closed_form = false;
};

fd::GridField manufactured_field(const GridFlags& g, const fd::GridSpec& grid) {
  const fd::ManufacturedField m(g.amplitude, parse_profile(g.profile), grid.ly, grid.n);
  return m.sample(grid);
}

fd::GridField fd_check_residual(const SharedFlags& s, const GridFlags& g, const FdFlags& f,
                               const fd::GridSpec& grid) {
  const Params prm = read_params(s);
  const GnpweEquation eq(s.n);
  const auto chi = read_chi(f.chi, s.n);
  const fd::FModel fm = parse_f(g.f);
  const fd::GridField u = f.field.empty() ? manufactured_field(g, grid) : fd::load_field(f.field);
  if (u.grid().n != s.n) throw DomainError("field dimension does not match --n");
  if (f.against_closed_form) {
    const DiffPolynomial expected = substitute_params(closed_form_residual(eq, chi), prm.a, prm.b);
    return fd::fd_residual_against(chi, u, fm, prm.a, prm.b, expected).field;
  }
  return fd::fd_divergence_residual(chi, u, fm, prm.a, prm.b).field;
}

std::string norms_output(const std::vector<std::pair<std::string, double>>& values, TableFormat target) {
  std::ostringstream out;
  if (target == TableFormat::kJson) {
    json j = {{"schema", 1}};
    for (const auto& [k, v] : values) j[k] = v;
    return j.dump() + "\n";
  }
  if (target == TableFormat::kCsv) {
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i].first;
    out << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << number(values[i].second);
    out << '\n';
    return out.str();
  }
  for (const auto& [k, v] : values) out << k << " = " << number(v) << '\n';
  return out.str();
}

std::string cmd_fd_check(const SharedFlags& s, const GridFlags& g, const FdFlags& f) {
  const auto target = table_target(s.format);
  const fd::GridSpec grid = g.spec(s.n);
  if (f.field.empty()) validate_grid(grid);
  const fd::Norms norms = fd::interior_norms(fd_check_residual(s, g, f, grid));
  return norms_output({{"max_norm", norms.max_norm}, {"l2_norm", norms.l2_norm}}, target);
}

struct SolveFlags {
  bool manufactured = false;
  std::string field_out;
};

struct SolveResult {
  fd::GridField u;
  /// u - u* for a manufactured run, the chi = t flux divergence otherwise.
  fd::GridField check;
};

SolveResult run_solver(const SharedFlags& s, const GridFlags& g, bool manufactured, const fd::GridSpec& grid) {
  if (s.n != 1) throw UsageError("solve requires --n 1");
  const Params prm = read_params(s);
  const fd::FModel fm = parse_f(g.f);
  const fd::ManufacturedField m(g.amplitude, parse_profile(g.profile), grid.ly, 1);
  const auto initial = m.initial_slice(grid);
  const fd::Forcing forcing = manufactured ? m.forcing(fm, prm.a, prm.b) : fd::Forcing{};
  fd::GridField u = fd::march_solver_n1(fm, prm.a, prm.b, initial, grid, forcing);
  if (manufactured) {
    fd::GridField error = m.sample(grid);
    auto e = error.values();
    const auto v = u.values();
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = v[i] - e[i];
    return SolveResult{std::move(u), std::move(error)};
  }
  fd::GridField check = fd::fd_flux_divergence(Characteristic(DiffPolynomial::t()), u, fm, prm.a, prm.b).field;
  return SolveResult{std::move(u), std::move(check)};
}

std::string cmd_solve(const SharedFlags& s, const GridFlags& g, const SolveFlags& f) {
  const auto target = table_target(s.format);
  const fd::GridSpec grid = g.spec(s.n);
  validate_grid(grid);
  const SolveResult r = run_solver(s, g, f.manufactured, grid);
  if (!f.field_out.empty()) fd::save_field(r.u, f.field_out);
  double peak = 0.0;
  for (double v : r.u.values()) peak = std::max(peak, std::abs(v));
  std::vector<std::pair<std::string, double>> values{{"max_abs_u", peak}};
  if (f.manufactured) {
    const fd::Norms e = fd::difference_norms(r.check, fd::GridField(grid));
    values.emplace_back("error_max", e.max_norm);
    values.emplace_back("error_l2", e.l2_norm);
  } else {
    const fd::Norms c = fd::interior_norms(r.check);
    values.emplace_back("flux_divergence_max", c.max_norm);
    values.emplace_back("flux_divergence_l2", c.l2_norm);
  }
  return norms_output(values, target);
}

struct ConvergenceFlags {
  std::string target = "fd-check";
  int levels = 3;
};

// Doubles the resolution of every axis, or of x alone. With explicit_x the
// x spacing shrinks like the square of the others, as the explicit march
// requires for stability.
fd::GridSpec refine(fd::GridSpec g, int level, bool x_only, bool explicit_x) {
  const int factor = 1 << level;
  g.nx = (g.nx - 1) * (explicit_x ? factor * factor : factor) + 1;
  if (!x_only) {
    g.nt *= factor;
    g.ny = (g.ny - 1) * factor + 1;
  }
  return g;
}

std::string cmd_convergence(const SharedFlags& s, const GridFlags& g, const FdFlags& fdf, const SolveFlags& sf,
                            const ConvergenceFlags& c) {
  const auto target = table_target(s.format);
  if (c.levels < 3) throw UsageError("--levels must be at least 3");
  if (c.levels > 8) throw UsageError("--levels must be at most 8");
  if (!fdf.field.empty()) throw UsageError("convergence samples its own fields; --field is not accepted");
  const bool solve = c.target == "solve";
  if (!solve && c.target != "fd-check") throw UsageError("--target must be fd-check or solve");
  const fd::GridSpec base = g.spec(s.n);
  validate_grid(base);
  read_params(s);
  // A manufactured solve only has the march error (t is spectral and the y
  // profile is resolved), so x alone is refined. The unforced conservation
  // check refines everything and is measured against ht.
  const bool x_only = solve && sf.manufactured;
  const auto table = fd::convergence_study(
      [&](int level) {
        const fd::GridSpec grid = refine(base, level, x_only, solve && !x_only);
        const fd::GridField check =
            solve ? run_solver(s, g, sf.manufactured, grid).check : fd_check_residual(s, g, fdf, grid);
        return std::make_pair(x_only || !solve ? grid.hx() : grid.ht(), fd::nested_norms(check, base));
      },
      c.levels);
  if (target == TableFormat::kJson) {
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"level", r.level},
                      {"h", r.h},
                      {"max_norm", r.max_norm},
                      {"l2_norm", r.l2_norm},
                      {"observed_order", r.observed_order ? json(*r.observed_order) : json(nullptr)}});
    }
    return json{{"schema", 1}, {"target", c.target}, {"monotone", table.monotone}, {"rows", rows}}.dump() + "\n";
  }
  std::string text = table.to_csv();
  if (target == TableFormat::kPlain && !table.monotone) text += "# norms are not monotone\n";
  return text;
}

void emit(const SharedFlags& s, const std::string& text, std::ostream& out) {
  if (s.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(s.out, std::ios::binary);
  if (!file) throw DomainError("cannot open '" + s.out + "' for writing");
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conservation-law toolkit for u_tx + (f(u))_tt + a u_ttt + b Laplacian_y u = 0", "gnpwe"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every command");

  SharedFlags shared;
  GridFlags grid;
  ClassifyFlags classify_flags;
  FamilyFlags family;
  FdFlags fd_flags;
  SolveFlags solve_flags;
  ConvergenceFlags conv;
  std::string chi_text;

  auto* derive = app.add_subcommand("derive-adjoint", "E_u(chi * Delta) for an abstract chi(t, x, y)");
  add_shared(derive, shared, "plain|latex|json");

  auto* classify_cmd = app.add_subcommand("classify", "bounded-degree classification of characteristics");
  add_shared(classify_cmd, shared, "plain|latex|json");
  classify_cmd->add_option("--deg-t", classify_flags.deg_t, "degree cap in t");
  classify_cmd->add_option("--deg-x", classify_flags.deg_x, "degree cap in x");
  classify_cmd->add_option("--deg-y", classify_flags.deg_y, "total degree cap in y1..yn");
  classify_cmd->add_option("--jet-deg", classify_flags.jet_deg, "allow u and its first derivatives up to this degree");

  auto* fluxes = app.add_subcommand("fluxes", "flux tuple of a characteristic and its divergence residual");
  add_shared(fluxes, shared, "plain|latex|json");
  fluxes->add_option("--chi", chi_text, "characteristic expression")->required();

  auto* verify = app.add_subcommand("verify", "characteristic residual of --chi");
  add_shared(verify, shared, "plain|latex|json");
  verify->add_option("--chi", chi_text, "characteristic expression")->required();

  auto* family_cmd = app.add_subcommand("n1-family", "explicit characteristic for n = 1");
  add_shared(family_cmd, shared, "plain|latex|json");
  family_cmd->add_option("--eta0", family.eta0, "polynomial in x");
  family_cmd->add_option("--eta1", family.eta1, "polynomial in x");
  family_cmd->add_option("--xi0", family.xi0, "polynomial in x");
  family_cmd->add_option("--xi1", family.xi1, "polynomial in x");

  auto* fd_cmd = app.add_subcommand("fd-check", "finite-difference divergence residual on a sampled field");
  add_shared(fd_cmd, shared, "plain|csv|json");
  add_grid(fd_cmd, grid);
  fd_cmd->add_option("--chi", fd_flags.chi, "characteristic expression");
  fd_cmd->add_option("--field", fd_flags.field, "read u from a field file instead of sampling");
  fd_cmd->add_flag("--against-closed-form", fd_flags.against_closed_form,
                   "subtract the exact residual of a non-characteristic chi");

  auto* solve_cmd = app.add_subcommand("solve", "x-marching solver for n = 1");
  add_shared(solve_cmd, shared, "plain|csv|json");
  add_grid(solve_cmd, grid);
  solve_cmd->add_flag("--manufactured", solve_flags.manufactured, "add forcing so the initial profile is exact");
  solve_cmd->add_option("--field-out", solve_flags.field_out, "write the solution field (.csv or binary)");

  auto* conv_cmd = app.add_subcommand("convergence", "refinement study of fd-check or solve");
  add_shared(conv_cmd, shared, "plain|csv|json");
  add_grid(conv_cmd, grid);
  conv_cmd->add_option("--target", conv.target, "fd-check or solve");
  conv_cmd->add_option("--levels", conv.levels, "number of refinement levels (>= 3)");
  conv_cmd->add_option("--chi", fd_flags.chi, "characteristic expression (fd-check)");
  conv_cmd->add_flag("--against-closed-form", fd_flags.against_closed_form,
                     "subtract the exact residual of a non-characteristic chi (fd-check)");
  conv_cmd->add_flag("--manufactured", solve_flags.manufactured, "forced manufactured solution (solve)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::string text;
    if (derive->parsed()) {
      text = cmd_derive_adjoint(shared);
    } else if (classify_cmd->parsed()) {
      text = cmd_classify(shared, classify_flags);
    } else if (fluxes->parsed()) {
      text = cmd_fluxes(shared, chi_text);
    } else if (verify->parsed()) {
      text = cmd_verify(shared, chi_text);
    } else if (family_cmd->parsed()) {
      text = cmd_n1_family(shared, family);
    } else if (fd_cmd->parsed()) {
      text = cmd_fd_check(shared, grid, fd_flags);
    } else if (solve_cmd->parsed()) {
      text = cmd_solve(shared, grid, solve_flags);
    } else {
      text = cmd_convergence(shared, grid, fd_flags, solve_flags, conv);
    }
    emit(shared, text, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace gnpwe::cli
