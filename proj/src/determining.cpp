#include "gnpwe/determining.hpp"

#include <functional>
#include <map>
#include <set>

#include "gnpwe/errors.hpp"

namespace gnpwe {

namespace {

using P = DiffPolynomial;

// All exponent vectors of length `vars` with total degree <= cap.
void compositions(int vars, int cap, std::vector<int>& current,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(current.size()) == vars) {
    emit(current);
    return;
  }
  for (int e = 0; e <= cap; ++e) {
    current.push_back(e);
    compositions(vars, cap - e, current, emit);
    current.pop_back();
  }
}

std::vector<P> jet_monomials(const JetAnsatz& jets) {
  std::vector<P> out;
  std::vector<int> current;
  compositions(static_cast<int>(jets.vars.size()), jets.degree, current,
               [&](const std::vector<int>& exps) {
                 P m(1);
                 for (std::size_t i = 0; i < exps.size(); ++i) {
                   if (exps[i] > 0) m *= P::u(jets.vars[i]).pow(exps[i]);
                 }
                 out.push_back(m);
               });
  return out;
}

const MonomialKey& single_key(const P& monomial) { return monomial.terms().begin()->first; }

void require_x_polynomial(const P& p, const char* what) {
  for (const auto& [key, c] : p.terms()) {
    bool ok = !key.depends_on_u() && key.func.empty() && key.pa == 0 && key.pb == 0 &&
              key.base.t() == 0 && key.base.max_y() == 0;
    if (!ok) throw DomainError(std::string(what) + " must be a polynomial in x alone");
  }
}

}  // namespace

JetAnsatz JetAnsatz::first_order(int n, int degree) {
  JetAnsatz j;
  j.degree = degree;
  j.vars.push_back(DerivIndex{});
  j.vars.push_back(DerivIndex(1, 0));
  j.vars.push_back(DerivIndex(0, 1));
  for (int k = 1; k <= n; ++k) j.vars.push_back(DerivIndex().added(Direction::y(k)));
  return j;
}

void AnsatzSpec::validate() const {
  if (n < 1) throw DomainError("n must be a positive integer");
  if (deg_t < 0 || deg_x < 0 || deg_y < 0) throw DomainError("degree caps must be >= 0");
  if (b == 0) throw DomainError("b must be nonzero");
  if (jets) {
    if (jets->degree < 0) throw DomainError("jet degree cap must be >= 0");
    for (const auto& v : jets->vars) {
      if (v.max_y() > n) throw DomainError("jet variable references y beyond n");
    }
  }
}

std::vector<P> base_monomials(int n, int deg_t, int deg_x, int deg_y) {
  std::vector<P> out;
  std::vector<int> current;
  std::vector<std::vector<int>> y_parts;
  compositions(n, deg_y, current, [&](const std::vector<int>& e) { y_parts.push_back(e); });
  for (int i = 0; i <= deg_t; ++i) {
    for (int k = 0; k <= deg_x; ++k) {
      for (const auto& ye : y_parts) {
        MonomialKey key;
        key.base = BasePowers(i, k, ye);
        out.push_back(P::monomial(key));
      }
    }
  }
  return out;
}

DeterminingSystem assemble_determining_system(const AnsatzSpec& spec) {
  spec.validate();
  const GnpweEquation eq(spec.n);

  std::set<MonomialKey, CanonicalOrder> keys;
  const auto base = base_monomials(spec.n, spec.deg_t, spec.deg_x, spec.deg_y);
  const auto jets = spec.jets ? jet_monomials(*spec.jets) : std::vector<P>{P(1)};
  for (const auto& bm : base) {
    for (const auto& jm : jets) keys.insert(single_key(bm * jm));
  }
  if (keys.empty()) throw EmptySystemError("the ansatz contains no monomials");

  DeterminingSystem sys;
  sys.n = spec.n;
  std::map<MonomialKey, std::vector<std::pair<std::size_t, Rational>>, CanonicalOrder> rows;
  for (const auto& key : keys) {
    const std::size_t col = sys.ansatz.size();
    P m = P::monomial(key);
    P residual = spec.jets ? adjoint_residual(eq, m)
                           : characteristic_residual(eq, Characteristic(m));
    const P concrete = substitute_params(residual, spec.a, spec.b);
    for (const auto& [rk, c] : concrete.terms()) {
      rows[rk].emplace_back(col, c);
    }
    sys.ansatz.push_back(std::move(m));
  }

  sys.matrix = linalg::SparseMatrix(sys.ansatz.size());
  for (const auto& [rk, entries] : rows) {
    sys.row_keys.push_back(rk);
    sys.matrix.add_row(entries);
  }
  return sys;
}

std::optional<std::vector<Rational>> DeterminingSystem::coordinates(const P& p) const {
  std::map<MonomialKey, std::size_t, CanonicalOrder> index;
  for (std::size_t i = 0; i < ansatz.size(); ++i) index.emplace(single_key(ansatz[i]), i);
  std::vector<Rational> v(ansatz.size(), Rational(0));
  for (const auto& [key, c] : p.terms()) {
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    v[it->second] = c;
  }
  return v;
}

P DeterminingSystem::combine(const std::vector<Rational>& v) const {
  P out;
  for (std::size_t i = 0; i < v.size() && i < ansatz.size(); ++i) {
    if (v[i] != 0) out.add_term(single_key(ansatz[i]), v[i]);
  }
  return out;
}

bool DeterminingSystem::contains(const P& p) const {
  auto coords = coordinates(p);
  if (!coords) return false;
  for (const auto& r : matrix.apply(*coords)) {
    if (r != 0) return false;
  }
  return true;
}

CharacteristicBasis null_space(const DeterminingSystem& sys) {
  CharacteristicBasis out;
  for (const auto& v : linalg::null_space(sys.matrix)) out.basis.push_back(sys.combine(v));
  return out;
}

bool solve_sys_conditions(const P& phi0, const P& phi1, int n, const Rational& b_val) {
  if (b_val == 0) throw DomainError("b must be nonzero");
  for (const P* p : {&phi0, &phi1}) {
    if (!p->is_base_only() || p->has_functions()) {
      throw DomainError("phi0, phi1 must be polynomials in x and y");
    }
    for (const auto& [key, c] : p->terms()) {
      if (key.pa != 0) throw DomainError("phi0, phi1 must not contain a");
      if (key.base.t() != 0) throw DomainError("phi0, phi1 must not depend on t");
    }
  }
  auto lap = [n](const P& p) {
    P out;
    for (int j = 1; j <= n; ++j) {
      out += total_derivative(p, DerivIndex().added(Direction::y(j), 2));
    }
    return out;
  };
  P first = substitute_params(lap(phi1), 1, b_val);
  P second = substitute_params(P::b() * lap(phi0) + total_derivative(phi1, Direction::x()), 1, b_val);
  return first.is_zero() && second.is_zero();
}

std::optional<std::pair<P, P>> split_in_t(const P& chi) {
  if (chi.degree_in(Direction::t()) > 1) return std::nullopt;
  P phi0;
  P phi1;
  for (const auto& [key, c] : chi.terms()) {
    if (key.base.t() == 0) {
      phi0.add_term(key, c);
    } else {
      MonomialKey k = key;
      k.base = key.base.added(Direction::t(), -1);
      phi1.add_term(k, c);
    }
  }
  return std::make_pair(phi0, phi1);
}

Characteristic n1_family_symbolic(const N1FamilyInput& input) {
  require_x_polynomial(input.eta0, "eta0");
  require_x_polynomial(input.eta1, "eta1");
  require_x_polynomial(input.xi0, "xi0");
  require_x_polynomial(input.xi1, "xi1");
  const P y = P::y(1);
  const P phi1 = input.xi0 + y * input.xi1;
  P phi0 = input.eta0 + input.eta1 * y;
  phi0 -= total_derivative(input.xi0, Direction::x()) * P::y(1, 2) * P::b(-1) * P(Rational(1, 2));
  phi0 -= total_derivative(input.xi1, Direction::x()) * P::y(1, 3) * P::b(-1) * P(Rational(1, 6));
  return Characteristic(phi0 + P::t() * phi1);
}

Characteristic n1_explicit_characteristic(const N1FamilyInput& input, const Rational& b_val) {
  if (b_val == 0) throw DivisionByZeroError("b must be nonzero");
  return Characteristic(substitute_params(n1_family_symbolic(input).poly(), 1, b_val));
}

std::size_t explicit_family_dimension(const AnsatzSpec& spec) {
  return explicit_family_generators(spec).size();
}

std::vector<Characteristic> explicit_family_generators(const AnsatzSpec& spec) {
  spec.validate();
  const int k_cap = spec.deg_x;
  const int d = spec.deg_y;
  std::vector<Characteristic> out;
  auto add = [&](int slot, int max_power) {
    for (int k = 0; k <= max_power; ++k) {
      N1FamilyInput in{P(0), P(0), P(0), P(0)};
      P xk = k == 0 ? P(1) : P::x(k);
      switch (slot) {
        case 0: in.eta0 = xk; break;
        case 1: in.eta1 = xk; break;
        case 2: in.xi0 = xk; break;
        default: in.xi1 = xk; break;
      }
      out.push_back(n1_explicit_characteristic(in, spec.b));
    }
  };
  add(0, k_cap);
  if (d >= 1) add(1, k_cap);
  if (spec.deg_t >= 1) {
    // (xi0)_x feeds a y^2 term and (xi1)_x a y^3 term; without room for them
    // the corresponding xi must be constant.
    add(2, d >= 2 ? k_cap : 0);
    if (d >= 1) add(3, d >= 3 ? k_cap : 0);
  }
  return out;
}

bool ClassificationReport::all_verified() const {
  for (const auto& c : checks) {
    if (!c.verified()) return false;
  }
  if (family_dimension && *family_dimension != dimension()) return false;
  if (family_members_in_kernel && !*family_members_in_kernel) return false;
  return true;
}

std::string ClassificationReport::note() const {
  if (!spec.jets) return {};
  return "jet-ansatz run: the absence of u-dependent multipliers is a bounded-order witness "
         "that characteristics depend on t, x, y only; it is not a proof";
}

ClassificationReport classify(const AnsatzSpec& spec) {
  ClassificationReport report;
  report.spec = spec;
  const DeterminingSystem sys = assemble_determining_system(spec);
  const GnpweEquation eq(spec.n);
  report.unknowns = sys.unknowns();
  report.equations = sys.equations();
  report.basis = null_space(sys);
  report.rank = report.unknowns - report.basis.dimension();

  for (const auto& m : report.basis.basis) {
    BasisCheck check;
    check.multiplier = m;
    check.depends_on_u = !m.is_base_only();
    if (check.depends_on_u) {
      ++report.u_dependent;
      check.residual_zero = substitute_params(adjoint_residual(eq, m), spec.a, spec.b).is_zero();
      report.checks.push_back(std::move(check));
      continue;
    }
    const Characteristic chi(m);
    check.residual_zero =
        substitute_params(characteristic_residual(eq, chi), spec.a, spec.b).is_zero();
    ConservationLaw law = build_fluxes(eq, chi);
    check.flux_identity_zero =
        substitute_params(divergence_residual(eq, law), spec.a, spec.b).is_zero();
    if (auto parts = split_in_t(m)) {
      check.t_degree_ok = true;
      check.sys_conditions_ok = solve_sys_conditions(parts->first, parts->second, spec.n, spec.b);
    }
    check.law = substitute_params(law, spec.a, spec.b);
    report.checks.push_back(std::move(check));
  }

  if (spec.n == 1) {
    const auto generators = explicit_family_generators(spec);
    report.family_dimension = generators.size();
    bool all_in = true;
    for (const auto& g : generators) all_in = all_in && sys.contains(g.poly());
    report.family_members_in_kernel = all_in;
  }
  return report;
}

}  // namespace gnpwe
