#include "gnpwe/linalg.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "gnpwe/errors.hpp"

namespace gnpwe::linalg {

namespace {

using IntRow = std::vector<std::pair<std::size_t, mpz_class>>;

IntRow to_primitive_integers(const SparseRow& row) {
  mpz_class lcm = 1;
  for (const auto& [c, v] : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den_mpz_t());
  IntRow out;
  out.reserve(row.size());
  mpz_class g = 0;
  for (const auto& [c, v] : row) {
    mpz_class num = v.get_num() * (lcm / v.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    out.emplace_back(c, std::move(num));
  }
  if (g > 1) {
    for (auto& [c, v] : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

void make_primitive(IntRow& row) {
  mpz_class g = 0;
  for (const auto& [c, v] : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& [c, v] : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
}

const mpz_class* entry(const IntRow& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  return (it != row.end() && it->first == col) ? &it->second : nullptr;
}

// row <- p * row - q * pivot, then divide out the content.
void eliminate(IntRow& row, const IntRow& pivot, const mpz_class& p, const mpz_class& q) {
  IntRow out;
  out.reserve(row.size() + pivot.size());
  auto i = row.begin();
  auto j = pivot.begin();
  while (i != row.end() || j != pivot.end()) {
    if (j == pivot.end() || (i != row.end() && i->first < j->first)) {
      out.emplace_back(i->first, p * i->second);
      ++i;
    } else if (i == row.end() || j->first < i->first) {
      out.emplace_back(j->first, -q * j->second);
      ++j;
    } else {
      mpz_class v = p * i->second - q * j->second;
      if (v != 0) out.emplace_back(i->first, std::move(v));
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  row = std::move(out);
}

}  // namespace

void SparseMatrix::add_row(const std::vector<std::pair<std::size_t, Rational>>& entries) {
  std::map<std::size_t, Rational> merged;
  for (const auto& [c, v] : entries) {
    if (c >= cols_) throw DomainError("column index out of range");
    merged[c] += v;
  }
  SparseRow row;
  for (auto& [c, v] : merged) {
    if (v != 0) row.emplace_back(c, v);
  }
  rows_.push_back(std::move(row));
}

std::vector<Rational> SparseMatrix::apply(std::span<const Rational> x) const {
  if (x.size() != cols_) throw DomainError("vector length does not match column count");
  std::vector<Rational> out;
  out.reserve(rows_.size());
  for (const auto& row : rows_) {
    Rational s = 0;
    for (const auto& [c, v] : row) s += v * x[c];
    out.push_back(s);
  }
  return out;
}

RowEchelon reduce(const SparseMatrix& m) {
  std::vector<IntRow> active;
  active.reserve(m.rows());
  for (const auto& row : m.row_data()) {
    if (!row.empty()) active.push_back(to_primitive_integers(row));
  }

  RowEchelon out;
  out.cols = m.cols();
  for (std::size_t col = 0; col < m.cols() && !active.empty(); ++col) {
    std::size_t best = active.size();
    std::size_t best_bits = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < active.size(); ++r) {
      // Earlier columns are already eliminated, so a nonzero entry at col
      // is the leading entry.
      if (active[r].front().first != col) continue;
      std::size_t bits = mpz_sizeinbase(active[r].front().second.get_mpz_t(), 2);
      if (bits < best_bits || (bits == best_bits && active[r].size() < active[best].size())) {
        best = r;
        best_bits = bits;
      }
    }
    if (best == active.size()) continue;

    IntRow pivot = std::move(active[best]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
    if (pivot.front().second < 0) {
      for (auto& [c, v] : pivot) v = -v;
    }
    const mpz_class p = pivot.front().second;

    auto clear = [&](IntRow& row) {
      if (const mpz_class* q = entry(row, col)) {
        mpz_class qq = *q;
        eliminate(row, pivot, p, qq);
      }
    };
    for (auto& row : active) clear(row);
    for (auto& row : out.rows) clear(row);
    active.erase(std::remove_if(active.begin(), active.end(),
                                [](const IntRow& r) { return r.empty(); }),
                 active.end());

    out.pivot_columns.push_back(col);
    out.rows.push_back(std::move(pivot));
  }
  return out;
}

std::size_t rank(const SparseMatrix& m) { return reduce(m).rank(); }

std::vector<std::vector<Rational>> null_space(const SparseMatrix& m) {
  const RowEchelon ech = reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : ech.pivot_columns) is_pivot[c] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < ech.rows.size(); ++i) {
      if (const mpz_class* coef = entry(ech.rows[i], free)) {
        const mpz_class& p = ech.rows[i].front().second;
        Rational val(-*coef, p);
        val.canonicalize();
        v[ech.pivot_columns[i]] = val;
      }
    }
    auto lead = std::find_if(v.begin(), v.end(), [](const Rational& q) { return q != 0; });
    Rational scale = 1 / *lead;
    for (auto& q : v) q *= scale;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace gnpwe::linalg
