#pragma once

// Differential polynomials on the jet space of a single dependent variable u
// over the base variables t, x, y1..yn.
//
// A polynomial is an exact sparse sum of monomials in
//   - the parameters a and b (integer exponents, b may be inverted),
//   - the base variables t, x, y_j,
//   - the symbols f^(k) = d^k f / du^k evaluated at u (f^(0) = f),
//   - the jet coordinates u_J,
//   - abstract functions of the base variables only (chi, phi0, ...), each
//     carrying its own derivative index.
// The f^(k) are algebraically independent, so splitting a polynomial into its
// monomial coefficients is valid for every f with f'' != 0.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace gnpwe {

using Rational = mpq_class;

/// Differentiation direction: t, x or y_j (1-based j).
class Direction {
 public:
  static constexpr Direction t() { return Direction(0); }
  static constexpr Direction x() { return Direction(1); }
  static Direction y(int j);
  /// 0 = t, 1 = x, 1 + j = y_j.
  static Direction from_index(int index);

  constexpr int index() const { return index_; }
  constexpr bool is_y() const { return index_ >= 2; }
  constexpr int y_index() const { return index_ - 1; }
  std::string name() const;

  auto operator<=>(const Direction&) const = default;

 private:
  explicit constexpr Direction(int index) : index_(index) {}
  int index_;
};

/// t, x, y1, ..., yn.
std::vector<Direction> all_directions(int n);

/// Non-negative integers indexed by direction, trailing zeros trimmed so that
/// two tuples compare equal iff they are componentwise equal.
template <class Tag>
class DirectionTuple {
 public:
  DirectionTuple() = default;
  explicit DirectionTuple(std::vector<int> entries);
  DirectionTuple(int t, int x, std::vector<int> y = {});

  int operator[](Direction d) const {
    auto i = static_cast<std::size_t>(d.index());
    return i < entries_.size() ? entries_[i] : 0;
  }
  int t() const { return (*this)[Direction::t()]; }
  int x() const { return (*this)[Direction::x()]; }
  int y(int j) const { return (*this)[Direction::y(j)]; }

  int total() const;
  bool is_zero() const { return entries_.empty(); }
  /// Largest j with a nonzero y_j entry, 0 if none.
  int max_y() const;
  const std::vector<int>& entries() const { return entries_; }

  DirectionTuple added(Direction d, int delta = 1) const;

  auto operator<=>(const DirectionTuple&) const = default;

 private:
  void trim();
  std::vector<int> entries_;
};

struct DerivIndexTag {};
struct BasePowersTag {};

/// Multi-order J of a derivative u_J or chi_J.
using DerivIndex = DirectionTuple<DerivIndexTag>;
/// Exponents of t, x, y1..yn in a monomial.
using BasePowers = DirectionTuple<BasePowersTag>;

/// An abstract function of the base variables with a derivative index.
struct FuncKey {
  std::string name;
  DerivIndex index;
  auto operator<=>(const FuncKey&) const = default;
};

/// Exponent signature of a monomial.
struct MonomialKey {
  int pa = 0;
  int pb = 0;
  BasePowers base;
  std::map<int, int> fsym;         // k -> power of f^(k)
  std::map<DerivIndex, int> jet;   // J -> power of u_J
  std::map<FuncKey, int> func;     // (name, J) -> power

  /// Sum of all exponents except those of a and b.
  int degree() const;
  bool depends_on_u() const { return !fsym.empty() || !jet.empty(); }

  bool operator==(const MonomialKey&) const = default;
  auto operator<=>(const MonomialKey&) const = default;
};

MonomialKey operator*(const MonomialKey& lhs, const MonomialKey& rhs);

/// Canonical term order: higher degree first, ties broken lexicographically
/// (descending) on base, jet, f, function and parameter exponents.
struct CanonicalOrder {
  bool operator()(const MonomialKey& lhs, const MonomialKey& rhs) const;
};

struct JetMonomial {
  Rational coeff;
  MonomialKey key;
};

class DiffPolynomial {
 public:
  using TermMap = std::map<MonomialKey, Rational, CanonicalOrder>;

  DiffPolynomial() = default;
  DiffPolynomial(const Rational& c);  // NOLINT: constants convert implicitly
  DiffPolynomial(long c) : DiffPolynomial(Rational(c)) {}  // NOLINT
  DiffPolynomial(int c) : DiffPolynomial(Rational(c)) {}   // NOLINT

  static DiffPolynomial monomial(const MonomialKey& key, const Rational& coeff = 1);
  static DiffPolynomial t(int power = 1);
  static DiffPolynomial x(int power = 1);
  static DiffPolynomial y(int j, int power = 1);
  static DiffPolynomial a(int power = 1);
  static DiffPolynomial b(int power = 1);
  /// f^(k)(u).
  static DiffPolynomial f(int k);
  /// u_J; u itself for the zero index.
  static DiffPolynomial u(const DerivIndex& index = {});
  static DiffPolynomial func(const std::string& name, const DerivIndex& index = {});

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }
  std::vector<JetMonomial> monomials() const;

  /// Constant term coefficient (zero if absent).
  Rational constant_term() const;
  /// Coefficient of a given signature (zero if absent).
  Rational coefficient(const MonomialKey& key) const;

  /// No jet coordinates and no f-symbols.
  bool is_base_only() const;
  bool has_functions() const;
  bool has_params() const;
  /// Largest y index referenced anywhere (base, jets, functions).
  int max_y_index() const;
  /// Largest exponent of the base variable in direction d.
  int degree_in(Direction d) const;
  std::set<DerivIndex> jets() const;
  /// Highest f-derivative order, -1 when no f-symbol occurs.
  int max_f_order() const;

  DiffPolynomial pow(int exponent) const;

  DiffPolynomial& operator+=(const DiffPolynomial& rhs);
  DiffPolynomial& operator-=(const DiffPolynomial& rhs);
  DiffPolynomial& operator*=(const DiffPolynomial& rhs);
  DiffPolynomial& operator*=(const Rational& rhs);

  friend DiffPolynomial operator+(DiffPolynomial lhs, const DiffPolynomial& rhs) { return lhs += rhs; }
  friend DiffPolynomial operator-(DiffPolynomial lhs, const DiffPolynomial& rhs) { return lhs -= rhs; }
  friend DiffPolynomial operator*(const DiffPolynomial& lhs, const DiffPolynomial& rhs);
  DiffPolynomial operator-() const;

  bool operator==(const DiffPolynomial& rhs) const;

  /// Adds coeff * key, merging like terms and dropping zeros.
  void add_term(const MonomialKey& key, const Rational& coeff);

 private:
  TermMap terms_;
};

/// Merge like terms, drop zeros, sort canonically.
DiffPolynomial normalize(const std::vector<JetMonomial>& raw);

/// Total derivative D_dir: u_J -> u_{J+dir}, f^(k) -> f^(k+1) u_dir,
/// base variables by calculus, abstract functions bump their index.
DiffPolynomial total_derivative(const DiffPolynomial& p, Direction dir);
/// D^J = D_t^{J_t} D_x^{J_x} D_{y1}^{J_y1} ...
DiffPolynomial total_derivative(const DiffPolynomial& p, const DerivIndex& index);

/// Partial derivative with respect to the jet coordinate u_J. For J = 0 the
/// chain rule through the f-symbols applies: d f^(k) / du = f^(k+1).
DiffPolynomial partial_jet(const DiffPolynomial& p, const DerivIndex& index);

/// Variational derivative E_u(p) = sum_J (-D)^J dp/du_J.
DiffPolynomial euler_operator(const DiffPolynomial& p);

/// Replace a and b by rationals.
DiffPolynomial substitute_params(const DiffPolynomial& p, const Rational& a, const Rational& b);

/// Values for floating evaluation of a parameter-free polynomial.
struct PointBinding {
  std::vector<double> base;                   // t, x, y1, ..., yn
  std::map<DerivIndex, double> jet;           // u_J, with u at the zero index
  std::function<double(int k, double u)> f;   // f^(k)(u)
  std::map<FuncKey, double> funcs;
};

double evaluate_at_point(const DiffPolynomial& p, const PointBinding& binding);

/// Flattened form of a parameter-free, function-free polynomial for fast
/// repeated evaluation on grids.
class CompiledPolynomial {
 public:
  explicit CompiledPolynomial(const DiffPolynomial& p);

  /// Jet slots, in the order expected by operator().
  const std::vector<DerivIndex>& jet_slots() const { return jets_; }
  int max_f_order() const { return max_f_order_; }
  /// Number of base values read (t, x, y1.. up to the largest used).
  int base_count() const { return base_count_; }

  double operator()(std::span<const double> base, std::span<const double> jets,
                    std::span<const double> fvals) const;

 private:
  enum class Kind : unsigned char { kBase, kJet, kF };
  struct Factor {
    Kind kind;
    int slot;
    int power;
  };
  struct Term {
    double coeff;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<DerivIndex> jets_;
  std::vector<Factor> factors_;
  std::vector<Term> terms_;
  int max_f_order_ = -1;
  int base_count_ = 0;
};

}  // namespace gnpwe
