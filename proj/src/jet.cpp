#include "gnpwe/jet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "gnpwe/errors.hpp"

namespace gnpwe {

namespace {

constexpr int kMaxExponent = 1 << 20;
constexpr std::size_t kMaxCoefficientBits = std::size_t{1} << 20;

int checked_add(int lhs, int rhs) {
  long long sum = static_cast<long long>(lhs) + rhs;
  if (sum > kMaxExponent || sum < -kMaxExponent) {
    throw CapacityError("exponent out of range: " + std::to_string(sum));
  }
  return static_cast<int>(sum);
}

void check_coefficient(const Rational& c) {
  if (mpz_sizeinbase(c.get_num_mpz_t(), 2) > kMaxCoefficientBits ||
      mpz_sizeinbase(c.get_den_mpz_t(), 2) > kMaxCoefficientBits) {
    throw CapacityError("rational coefficient exceeds configured width");
  }
}

template <class K>
void bump(std::map<K, int>& powers, const K& key, int delta) {
  auto [it, inserted] = powers.try_emplace(key, 0);
  it->second = checked_add(it->second, delta);
  if (it->second == 0) powers.erase(it);
}

template <class K>
void merge_powers(std::map<K, int>& into, const std::map<K, int>& from) {
  for (const auto& [k, e] : from) bump(into, k, e);
}

}  // namespace

// ---------------------------------------------------------------------------
// Direction / DirectionTuple

Direction Direction::y(int j) {
  if (j < 1) throw DomainError("y index must be >= 1, got " + std::to_string(j));
  return Direction(1 + j);
}

Direction Direction::from_index(int index) {
  if (index < 0) throw DomainError("negative direction index");
  return Direction(index);
}

std::string Direction::name() const {
  if (index_ == 0) return "t";
  if (index_ == 1) return "x";
  return "y" + std::to_string(y_index());
}

std::vector<Direction> all_directions(int n) {
  std::vector<Direction> dirs{Direction::t(), Direction::x()};
  for (int j = 1; j <= n; ++j) dirs.push_back(Direction::y(j));
  return dirs;
}

template <class Tag>
DirectionTuple<Tag>::DirectionTuple(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) throw DomainError("negative entry in direction tuple");
  }
  trim();
}

template <class Tag>
DirectionTuple<Tag>::DirectionTuple(int t, int x, std::vector<int> y) {
  entries_.reserve(2 + y.size());
  entries_.push_back(t);
  entries_.push_back(x);
  entries_.insert(entries_.end(), y.begin(), y.end());
  for (int e : entries_) {
    if (e < 0) throw DomainError("negative entry in direction tuple");
  }
  trim();
}

template <class Tag>
int DirectionTuple<Tag>::total() const {
  int sum = 0;
  for (int e : entries_) sum += e;
  return sum;
}

template <class Tag>
int DirectionTuple<Tag>::max_y() const {
  return entries_.size() > 2 ? static_cast<int>(entries_.size()) - 2 : 0;
}

template <class Tag>
DirectionTuple<Tag> DirectionTuple<Tag>::added(Direction d, int delta) const {
  DirectionTuple out = *this;
  auto i = static_cast<std::size_t>(d.index());
  if (out.entries_.size() <= i) out.entries_.resize(i + 1, 0);
  out.entries_[i] = checked_add(out.entries_[i], delta);
  if (out.entries_[i] < 0) throw DomainError("negative entry in direction tuple");
  out.trim();
  return out;
}

template <class Tag>
void DirectionTuple<Tag>::trim() {
  while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
}

template class DirectionTuple<DerivIndexTag>;
template class DirectionTuple<BasePowersTag>;

// ---------------------------------------------------------------------------
// MonomialKey

int MonomialKey::degree() const {
  int d = base.total();
  for (const auto& [k, e] : fsym) d += e;
  for (const auto& [k, e] : jet) d += e;
  for (const auto& [k, e] : func) d += e;
  return d;
}

MonomialKey operator*(const MonomialKey& lhs, const MonomialKey& rhs) {
  MonomialKey out = lhs;
  out.pa = checked_add(lhs.pa, rhs.pa);
  out.pb = checked_add(lhs.pb, rhs.pb);
  std::vector<int> base = lhs.base.entries();
  const auto& rb = rhs.base.entries();
  if (base.size() < rb.size()) base.resize(rb.size(), 0);
  for (std::size_t i = 0; i < rb.size(); ++i) base[i] = checked_add(base[i], rb[i]);
  out.base = BasePowers(std::move(base));
  merge_powers(out.fsym, rhs.fsym);
  merge_powers(out.jet, rhs.jet);
  merge_powers(out.func, rhs.func);
  return out;
}

bool CanonicalOrder::operator()(const MonomialKey& lhs, const MonomialKey& rhs) const {
  int dl = lhs.degree();
  int dr = rhs.degree();
  if (dl != dr) return dl > dr;
  return std::tie(rhs.base, rhs.jet, rhs.fsym, rhs.func, rhs.pa, rhs.pb) <
         std::tie(lhs.base, lhs.jet, lhs.fsym, lhs.func, lhs.pa, lhs.pb);
}

// ---------------------------------------------------------------------------
// DiffPolynomial

DiffPolynomial::DiffPolynomial(const Rational& c) { add_term(MonomialKey{}, c); }

DiffPolynomial DiffPolynomial::monomial(const MonomialKey& key, const Rational& coeff) {
  DiffPolynomial p;
  p.add_term(key, coeff);
  return p;
}

DiffPolynomial DiffPolynomial::t(int power) {
  MonomialKey k;
  k.base = BasePowers(power, 0);
  return monomial(k);
}

DiffPolynomial DiffPolynomial::x(int power) {
  MonomialKey k;
  k.base = BasePowers(0, power);
  return monomial(k);
}

DiffPolynomial DiffPolynomial::y(int j, int power) {
  MonomialKey k;
  k.base = BasePowers().added(Direction::y(j), power);
  return monomial(k);
}

DiffPolynomial DiffPolynomial::a(int power) {
  MonomialKey k;
  k.pa = power;
  return monomial(k);
}

DiffPolynomial DiffPolynomial::b(int power) {
  MonomialKey k;
  k.pb = power;
  return monomial(k);
}

DiffPolynomial DiffPolynomial::f(int k) {
  if (k < 0) throw DomainError("negative f-derivative order");
  MonomialKey key;
  key.fsym[k] = 1;
  return monomial(key);
}

DiffPolynomial DiffPolynomial::u(const DerivIndex& index) {
  MonomialKey key;
  key.jet[index] = 1;
  return monomial(key);
}

DiffPolynomial DiffPolynomial::func(const std::string& name, const DerivIndex& index) {
  MonomialKey key;
  key.func[FuncKey{name, index}] = 1;
  return monomial(key);
}

std::vector<JetMonomial> DiffPolynomial::monomials() const {
  std::vector<JetMonomial> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) out.push_back(JetMonomial{c, k});
  return out;
}

Rational DiffPolynomial::constant_term() const { return coefficient(MonomialKey{}); }

Rational DiffPolynomial::coefficient(const MonomialKey& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool DiffPolynomial::is_base_only() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const auto& kv) { return kv.first.depends_on_u(); });
}

bool DiffPolynomial::has_functions() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return !kv.first.func.empty(); });
}

bool DiffPolynomial::has_params() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return kv.first.pa != 0 || kv.first.pb != 0; });
}

int DiffPolynomial::max_y_index() const {
  int m = 0;
  for (const auto& [k, c] : terms_) {
    m = std::max(m, k.base.max_y());
    for (const auto& [j, e] : k.jet) m = std::max(m, j.max_y());
    for (const auto& [fk, e] : k.func) m = std::max(m, fk.index.max_y());
  }
  return m;
}

int DiffPolynomial::degree_in(Direction d) const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, k.base[d]);
  return m;
}

std::set<DerivIndex> DiffPolynomial::jets() const {
  std::set<DerivIndex> out;
  for (const auto& [k, c] : terms_) {
    for (const auto& [j, e] : k.jet) out.insert(j);
  }
  return out;
}

int DiffPolynomial::max_f_order() const {
  int m = -1;
  for (const auto& [k, c] : terms_) {
    if (!k.fsym.empty()) m = std::max(m, k.fsym.rbegin()->first);
  }
  return m;
}

DiffPolynomial DiffPolynomial::pow(int exponent) const {
  if (exponent < 0) throw DomainError("negative power of a polynomial");
  DiffPolynomial result(1);
  DiffPolynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    exponent >>= 1;
    if (exponent > 0) base *= base;
  }
  return result;
}

void DiffPolynomial::add_term(const MonomialKey& key, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) {
      terms_.erase(it);
      return;
    }
  }
  check_coefficient(it->second);
}

DiffPolynomial& DiffPolynomial::operator+=(const DiffPolynomial& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k, c);
  return *this;
}

DiffPolynomial& DiffPolynomial::operator-=(const DiffPolynomial& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k, -c);
  return *this;
}

DiffPolynomial operator*(const DiffPolynomial& lhs, const DiffPolynomial& rhs) {
  DiffPolynomial out;
  for (const auto& [kl, cl] : lhs.terms_) {
    for (const auto& [kr, cr] : rhs.terms_) {
      out.add_term(kl * kr, Rational(cl * cr));
    }
  }
  return out;
}

DiffPolynomial& DiffPolynomial::operator*=(const DiffPolynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

DiffPolynomial& DiffPolynomial::operator*=(const Rational& rhs) {
  if (rhs == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) {
    c *= rhs;
    check_coefficient(c);
  }
  return *this;
}

DiffPolynomial DiffPolynomial::operator-() const {
  DiffPolynomial out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

bool DiffPolynomial::operator==(const DiffPolynomial& rhs) const {
  if (terms_.size() != rhs.terms_.size()) return false;
  return std::equal(terms_.begin(), terms_.end(), rhs.terms_.begin(),
                    [](const auto& l, const auto& r) {
                      return l.first == r.first && l.second == r.second;
                    });
}

DiffPolynomial normalize(const std::vector<JetMonomial>& raw) {
  DiffPolynomial p;
  for (const auto& m : raw) p.add_term(m.key, m.coeff);
  return p;
}

// ---------------------------------------------------------------------------
// Derivatives

namespace {

// Leibniz rule on a single monomial; results accumulated into `out`.
void differentiate_monomial(const MonomialKey& key, const Rational& coeff, Direction dir,
                            DiffPolynomial& out) {
  // base variable
  if (int e = key.base[dir]; e > 0) {
    MonomialKey k = key;
    k.base = key.base.added(dir, -1);
    out.add_term(k, coeff * e);
  }
  // f^(k)^e -> e f^(k)^(e-1) f^(k+1) u_dir
  for (const auto& [order, e] : key.fsym) {
    MonomialKey k = key;
    bump(k.fsym, order, -1);
    bump(k.fsym, order + 1, 1);
    bump(k.jet, DerivIndex().added(dir), 1);
    out.add_term(k, coeff * e);
  }
  // u_J^e -> e u_J^(e-1) u_{J+dir}
  for (const auto& [index, e] : key.jet) {
    MonomialKey k = key;
    bump(k.jet, index, -1);
    bump(k.jet, index.added(dir), 1);
    out.add_term(k, coeff * e);
  }
  for (const auto& [fk, e] : key.func) {
    MonomialKey k = key;
    bump(k.func, fk, -1);
    bump(k.func, FuncKey{fk.name, fk.index.added(dir)}, 1);
    out.add_term(k, coeff * e);
  }
}

}  // namespace

DiffPolynomial total_derivative(const DiffPolynomial& p, Direction dir) {
  DiffPolynomial out;
  for (const auto& [k, c] : p.terms()) differentiate_monomial(k, c, dir, out);
  return out;
}

DiffPolynomial total_derivative(const DiffPolynomial& p, const DerivIndex& index) {
  DiffPolynomial out = p;
  const auto& orders = index.entries();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    for (int r = 0; r < orders[i]; ++r) {
      if (out.is_zero()) return out;
      out = total_derivative(out, Direction::from_index(static_cast<int>(i)));
    }
  }
  return out;
}

DiffPolynomial partial_jet(const DiffPolynomial& p, const DerivIndex& index) {
  DiffPolynomial out;
  for (const auto& [key, c] : p.terms()) {
    if (auto it = key.jet.find(index); it != key.jet.end()) {
      MonomialKey k = key;
      bump(k.jet, index, -1);
      out.add_term(k, c * it->second);
    }
    if (index.is_zero()) {
      for (const auto& [order, e] : key.fsym) {
        MonomialKey k = key;
        bump(k.fsym, order, -1);
        bump(k.fsym, order + 1, 1);
        out.add_term(k, c * e);
      }
    }
  }
  return out;
}

DiffPolynomial euler_operator(const DiffPolynomial& p) {
  std::set<DerivIndex> indices = p.jets();
  indices.insert(DerivIndex{});
  DiffPolynomial out;
  for (const auto& index : indices) {
    DiffPolynomial term = total_derivative(partial_jet(p, index), index);
    if (index.total() % 2 == 1) {
      out -= term;
    } else {
      out += term;
    }
  }
  return out;
}

DiffPolynomial substitute_params(const DiffPolynomial& p, const Rational& a, const Rational& b) {
  auto power = [](const Rational& base, int e, const char* name) {
    if (e < 0 && base == 0) {
      throw DivisionByZeroError(std::string("negative power of ") + name + " with " + name + " = 0");
    }
    Rational r = 1;
    Rational f = e < 0 ? Rational(1 / base) : base;
    for (int i = 0; i < std::abs(e); ++i) r *= f;
    return r;
  };
  DiffPolynomial out;
  for (const auto& [key, c] : p.terms()) {
    MonomialKey k = key;
    k.pa = 0;
    k.pb = 0;
    out.add_term(k, c * power(a, key.pa, "a") * power(b, key.pb, "b"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate_at_point(const DiffPolynomial& p, const PointBinding& binding) {
  double total = 0.0;
  for (const auto& [key, c] : p.terms()) {
    if (key.pa != 0 || key.pb != 0) {
      throw IncompleteBindingError("parameters a, b must be substituted before evaluation");
    }
    double term = c.get_d();
    const auto& base = key.base.entries();
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] == 0) continue;
      if (i >= binding.base.size()) {
        throw IncompleteBindingError("no value for base variable " +
                                     Direction::from_index(static_cast<int>(i)).name());
      }
      term *= std::pow(binding.base[i], base[i]);
    }
    for (const auto& [index, e] : key.jet) {
      auto it = binding.jet.find(index);
      if (it == binding.jet.end()) throw IncompleteBindingError("no value for a jet coordinate");
      term *= std::pow(it->second, e);
    }
    if (!key.fsym.empty()) {
      auto u = binding.jet.find(DerivIndex{});
      if (!binding.f || u == binding.jet.end()) {
        throw IncompleteBindingError("f-symbols need both an f model and a value of u");
      }
      for (const auto& [order, e] : key.fsym) term *= std::pow(binding.f(order, u->second), e);
    }
    for (const auto& [fk, e] : key.func) {
      auto it = binding.funcs.find(fk);
      if (it == binding.funcs.end()) {
        throw IncompleteBindingError("no value for function symbol " + fk.name);
      }
      term *= std::pow(it->second, e);
    }
    total += term;
  }
  return total;
}

CompiledPolynomial::CompiledPolynomial(const DiffPolynomial& p) {
  std::map<DerivIndex, int> jet_slot;
  for (const auto& index : p.jets()) {
    jet_slot.emplace(index, static_cast<int>(jets_.size()));
    jets_.push_back(index);
  }
  for (const auto& [key, c] : p.terms()) {
    if (key.pa != 0 || key.pb != 0) {
      throw IncompleteBindingError("parameters a, b must be substituted before compiling");
    }
    if (!key.func.empty()) {
      throw IncompleteBindingError("abstract function symbols cannot be compiled");
    }
    Term term{c.get_d(), factors_.size(), 0};
    const auto& base = key.base.entries();
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (base[i] == 0) continue;
      factors_.push_back(Factor{Kind::kBase, static_cast<int>(i), base[i]});
      base_count_ = std::max(base_count_, static_cast<int>(i) + 1);
    }
    for (const auto& [index, e] : key.jet) {
      factors_.push_back(Factor{Kind::kJet, jet_slot.at(index), e});
    }
    for (const auto& [order, e] : key.fsym) {
      factors_.push_back(Factor{Kind::kF, order, e});
      max_f_order_ = std::max(max_f_order_, order);
    }
    term.end = factors_.size();
    terms_.push_back(term);
  }
}

double CompiledPolynomial::operator()(std::span<const double> base, std::span<const double> jets,
                                      std::span<const double> fvals) const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double v = term.coeff;
    for (std::size_t i = term.begin; i < term.end; ++i) {
      const Factor& fac = factors_[i];
      double value = 0.0;
      switch (fac.kind) {
        case Kind::kBase: value = base[static_cast<std::size_t>(fac.slot)]; break;
        case Kind::kJet: value = jets[static_cast<std::size_t>(fac.slot)]; break;
        case Kind::kF: value = fvals[static_cast<std::size_t>(fac.slot)]; break;
      }
      for (int r = 0; r < fac.power; ++r) v *= value;
    }
    total += v;
  }
  return total;
}

}  // namespace gnpwe
