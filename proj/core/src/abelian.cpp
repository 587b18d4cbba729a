#include "ainfty/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ainfty {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("IntMatrix: entry count does not match shape");
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t rows, const std::vector<Vec>& columns) {
  IntMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) {
      throw std::invalid_argument("IntMatrix::from_columns: column length mismatch");
    }
    for (std::size_t i = 0; i < rows; ++i) {
      m(i, j) = columns[j][i];
    }
  }
  return m;
}

Vec IntMatrix::column(std::size_t j) const {
  Vec v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    v[i] = (*this)(i, j);
  }
  return v;
}

Vec IntMatrix::row(std::size_t i) const {
  return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
             data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vec IntMatrix::apply(const Vec& x) const {
  if (x.size() != cols_) {
    throw std::invalid_argument("IntMatrix::apply: dimension mismatch");
  }
  Vec y(rows_, Int(0));
  for (std::size_t j = 0; j < cols_; ++j) {
    if (x[j] == 0) {
      continue;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      const Int& a = (*this)(i, j);
      if (a != 0) {
        y[i] += a * x[j];
      }
    }
  }
  return y;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& v) { return v == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw std::invalid_argument("IntMatrix: product shape mismatch");
  }
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Int& aik = a(i, k);
      if (aik == 0) {
        continue;
      }
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Int& bkj = b(k, j);
        if (bkj != 0) {
          c(i, j) += aik * bkj;
        }
      }
    }
  }
  return c;
}

// ------------------------------------------------------------------- Smith

std::vector<Int> SmithDecomposition::diagonal() const {
  std::vector<Int> d;
  const std::size_t n = std::min(S.rows(), S.cols());
  d.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.push_back(S(i, i));
  }
  return d;
}

namespace {

struct SmithWork {
  IntMatrix s, u, u_inv, v, v_inv;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < s.cols(); ++c) std::swap(s(i, c), s(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u(i, c), u(j, c));
    for (std::size_t r = 0; r < u_inv.rows(); ++r) std::swap(u_inv(r, i), u_inv(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < s.rows(); ++r) std::swap(s(r, i), s(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, j));
    for (std::size_t c = 0; c < v_inv.cols(); ++c) std::swap(v_inv(i, c), v_inv(j, c));
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < s.cols(); ++c) {
      if (s(j, c) != 0) s(i, c) += q * s(j, c);
    }
    for (std::size_t c = 0; c < u.cols(); ++c) {
      if (u(j, c) != 0) u(i, c) += q * u(j, c);
    }
    for (std::size_t r = 0; r < u_inv.rows(); ++r) {
      if (u_inv(r, i) != 0) u_inv(r, j) -= q * u_inv(r, i);
    }
  }
  // col_i += q * col_j
  void add_col(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < s.rows(); ++r) {
      if (s(r, j) != 0) s(r, i) += q * s(r, j);
    }
    for (std::size_t r = 0; r < v.rows(); ++r) {
      if (v(r, j) != 0) v(r, i) += q * v(r, j);
    }
    for (std::size_t c = 0; c < v_inv.cols(); ++c) {
      if (v_inv(i, c) != 0) v_inv(j, c) -= q * v_inv(i, c);
    }
  }
  // rows (i, j) <- [[a, b], [c, d]] (rows i, j), ad - bc = 1
  void combine_rows(std::size_t i, std::size_t j, const Int& a, const Int& b, const Int& c, const Int& d) {
    auto mix = [&](IntMatrix& x) {
      for (std::size_t col = 0; col < x.cols(); ++col) {
        Int xi = x(i, col), xj = x(j, col);
        x(i, col) = a * xi + b * xj;
        x(j, col) = c * xi + d * xj;
      }
    };
    mix(s);
    mix(u);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) {
      Int xi = u_inv(r, i), xj = u_inv(r, j);
      u_inv(r, i) = d * xi - c * xj;
      u_inv(r, j) = a * xj - b * xi;
    }
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < s.cols(); ++c) s(i, c) = -s(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) = -u(i, c);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, i) = -u_inv(r, i);
  }
  // S^T = V^T A^T U^T: column steps become row steps on the transpose
  void transpose() {
    s = s.transpose();
    IntMatrix nu = v.transpose(), nu_inv = v_inv.transpose();
    v = u.transpose();
    v_inv = u_inv.transpose();
    u = std::move(nu);
    u_inv = std::move(nu_inv);
  }
};

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }


}  // namespace

SmithDecomposition smith(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  SmithWork w{a, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
              IntMatrix::identity(n)};

  // Zeroes s(i, c) against the pivot s(r, c) with one unimodular 2x2 row step.
  auto clear_below = [&](std::size_t r, std::size_t i, std::size_t c) {
    const Int p = w.s(r, c), b = w.s(i, c);
    if (b % p == 0) {
      w.add_row(i, r, Int(-(b / p)));
      return;
    }
    ExtendedGcd e = extended_gcd(p, b);
    w.combine_rows(r, i, e.s, e.t, Int(-(b / e.g)), Int(p / e.g));
  };
  // Row Hermite form, built one row at a time (Kannan-Bachem order). After
  // each row the entries above every pivot are reduced into [0, pivot);
  // eliminating whole columns at once instead lets the entries explode.
  auto row_hermite = [&]() {
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (column, row), by column
    auto reduce_above = [&](std::size_t k) {
      const auto [c, r] = pivots[k];
      const Int& p = w.s(r, c);
      for (std::size_t l = 0; l < k; ++l) {
        const std::size_t i = pivots[l].second;
        Int q = w.s(i, c) / p;
        if (w.s(i, c) - q * p < 0) --q;
        w.add_row(i, r, Int(-q));
      }
    };
    for (std::size_t i = 0; i < w.s.rows(); ++i) {
      auto lead = [&] {
        std::size_t c = 0;
        while (c < w.s.cols() && w.s(i, c) == 0) ++c;
        return c;
      };
      for (const auto& [c, r] : pivots) {
        const std::size_t l = lead();
        if (l < c) break;  // row i opens a new pivot column
        if (l > c) continue;
        clear_below(r, i, c);
        if (w.s(r, c) < 0) w.negate_row(r);
      }
      const std::size_t c = lead();
      if (c < w.s.cols()) {
        if (w.s(i, c) < 0) w.negate_row(i);
        pivots.insert(std::lower_bound(pivots.begin(), pivots.end(), std::pair{c, i}), {c, i});
      }
      for (std::size_t k = 0; k < pivots.size(); ++k) reduce_above(k);
    }
    // pivot rows first, in column order
    std::vector<std::size_t> at(w.s.rows()), row_of(w.s.rows());
    std::iota(at.begin(), at.end(), 0);
    std::iota(row_of.begin(), row_of.end(), 0);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const std::size_t from = at[pivots[k].second];
      w.swap_rows(k, from);
      std::swap(row_of[k], row_of[from]);
      at[row_of[from]] = from;
      at[row_of[k]] = k;
    }
  };
  auto at_most_one_per_row = [&]() {
    for (std::size_t i = 0; i < w.s.rows(); ++i) {
      int count = 0;
      for (std::size_t j = 0; j < w.s.cols(); ++j) count += w.s(i, j) != 0;
      if (count > 1) return false;
    }
    return true;
  };

  // After a row pass the columns hold at most one pivot each; done once the
  // rows do too.
  for (bool transposed = false;; transposed = !transposed) {
    row_hermite();
    if (at_most_one_per_row()) {
      if (transposed) w.transpose();
      break;
    }
    w.transpose();
  }

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    bool found = false;
    for (std::size_t i = t; i < m && !found; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        if (w.s(i, j) == 0) continue;
        w.swap_rows(t, i);
        w.swap_cols(t, j);
        found = true;
        break;
      }
    }
    if (!found) break;
    if (w.s(t, t) < 0) w.negate_row(t);
  }

  // diag(d_i, d_j) -> diag(gcd, lcm) until d_1 | d_2 | ...
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      if (w.s(j, j) % w.s(i, i) == 0) continue;
      w.add_col(i, j, Int(1));
      clear_below(i, j, i);
      w.add_col(j, i, Int(-(w.s(i, j) / w.s(i, i))));
      if (w.s(j, j) < 0) w.negate_row(j);
    }
  }

  SmithDecomposition result;
  result.U = std::move(w.u);
  result.S = std::move(w.s);
  result.V = std::move(w.v);
  result.U_inverse = std::move(w.u_inv);
  result.V_inverse = std::move(w.v_inv);
  result.rank = t;
  return result;
}

Int determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("determinant: matrix is not square");
  }
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination
  IntMatrix m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(swap, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

// ----------------------------------------------------------------- Lattice

namespace {

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) s.emplace_back(i, v[i]);
  }
  return s;
}

// a*x + b*y
SparseVec combine(const Int& a, const SparseVec& x, const Int& b, const SparseVec& y) {
  SparseVec out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      Int v = a * x[i].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      Int v = b * y[j].second;
      if (v != 0) out.emplace_back(y[j].first, std::move(v));
      ++j;
    } else {
      Int v = a * x[i].second + b * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

const Int* entry_at(const SparseVec& v, std::size_t col) {
  auto it = std::lower_bound(v.begin(), v.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  if (it != v.end() && it->first == col) return &it->second;
  return nullptr;
}

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

void Lattice::add(const Vec& v) {
  if (v.size() != dimension_) {
    throw std::invalid_argument("Lattice::add: dimension mismatch");
  }
  add(to_sparse(v));
}

void Lattice::add(SparseVec v) {
  std::erase_if(v, [](const auto& e) { return e.second == 0; });
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  while (!v.empty()) {
    const std::size_t p = v.front().first;
    if (p >= dimension_) {
      throw std::invalid_argument("Lattice::add: index out of range");
    }
    Int a = v.front().second;
    auto it = rows_.find(p);
    if (it == rows_.end()) {
      if (a < 0) {
        for (auto& e : v) e.second = -e.second;
      }
      rows_.emplace(p, std::move(v));
      return;
    }
    SparseVec& row = it->second;
    const Int h = row.front().second;
    if (a % h == 0) {
      v = combine(Int(1), v, Int(-(a / h)), row);
      continue;
    }
    ExtendedGcd eg = extended_gcd(h, a);
    SparseVec new_row = combine(eg.s, row, eg.t, v);
    v = combine(Int(h / eg.g), v, Int(-(a / eg.g)), row);
    row = std::move(new_row);
  }
}

Vec Lattice::reduce(Vec v) const {
  if (v.size() != dimension_) {
    throw std::invalid_argument("Lattice::reduce: dimension mismatch");
  }
  for (const auto& [p, row] : rows_) {
    if (v[p] == 0) continue;
    const Int& h = row.front().second;
    Int q = floor_div(v[p], h);
    if (q == 0) continue;
    for (const auto& [c, x] : row) {
      v[c] -= q * x;
    }
  }
  return v;
}

bool Lattice::contains(const Vec& v) const {
  Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
}

void Lattice::normalize() {
  for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
    SparseVec& row = it->second;
    const std::size_t p = it->first;
    for (auto below = rows_.upper_bound(p); below != rows_.end(); ++below) {
      const Int* e = entry_at(row, below->first);
      if (e == nullptr) continue;
      Int q = floor_div(*e, below->second.front().second);
      if (q != 0) {
        row = combine(Int(1), row, Int(-q), below->second);
      }
    }
  }
}

// ----------------------------------------------------------------- FpGroup

FpGroup::FpGroup(std::vector<Int> orders, std::vector<std::string> labels)
    : orders_(std::move(orders)), labels_(std::move(labels)) {
  for (const Int& o : orders_) {
    if (o < 0) throw std::invalid_argument("FpGroup: negative order");
  }
  if (!labels_.empty() && labels_.size() != orders_.size()) {
    throw std::invalid_argument("FpGroup: label count does not match rank");
  }
}

FpGroup FpGroup::free(std::size_t rank) { return FpGroup(std::vector<Int>(rank, Int(0))); }

FpGroup FpGroup::cyclic(const Int& order) { return FpGroup(std::vector<Int>{order}); }

std::string FpGroup::label(std::size_t i) const {
  if (i < labels_.size()) return labels_[i];
  return "e" + std::to_string(i);
}

FpGroup FpGroup::relabeled(std::vector<std::string> labels) const {
  return FpGroup(orders_, std::move(labels));
}

Vec FpGroup::generator(std::size_t i) const {
  Vec v = zero();
  v.at(i) = 1;
  return reduce(std::move(v));
}

Vec FpGroup::reduce(Vec v) const {
  if (v.size() != rank()) {
    throw std::invalid_argument("FpGroup::reduce: element has wrong length");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = reduce_mod(v[i], orders_[i]);
  }
  return v;
}

bool FpGroup::is_zero(const Vec& v) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (reduce_mod(v[i], orders_[i]) != 0) return false;
  }
  return true;
}

bool FpGroup::equal(const Vec& a, const Vec& b) const { return reduce(a) == reduce(b); }

bool FpGroup::is_finite() const {
  return std::none_of(orders_.begin(), orders_.end(), [](const Int& o) { return o == 0; });
}

bool FpGroup::is_trivial() const {
  return std::all_of(orders_.begin(), orders_.end(), [](const Int& o) { return o == 1; });
}

Int FpGroup::cardinality() const {
  if (!is_finite()) throw std::logic_error("FpGroup::cardinality: infinite group");
  Int n = 1;
  for (const Int& o : orders_) n *= o;
  return n;
}

std::vector<Vec> FpGroup::elements() const {
  if (!is_finite()) throw std::logic_error("FpGroup::elements: infinite group");
  std::vector<Vec> out;
  Vec cur = zero();
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < rank()) {
      cur[i] += 1;
      if (cur[i] < orders_[i]) break;
      cur[i] = 0;
      ++i;
    }
    if (i == rank()) break;
  }
  return out;
}

std::vector<Int> FpGroup::invariant_factors() const {
  // Split every finite order into powers of pairwise coprime bases: small
  // primes by trial division, leftover cofactors made gcd-free.
  std::map<Int, std::size_t> counts;
  std::size_t free_rank = 0;
  for (const Int& o : orders_) {
    if (o == 0) ++free_rank;
    else if (o != 1) ++counts[o];
  }
  std::map<Int, std::vector<std::pair<Int, std::size_t>>> split;  // order -> (base, exponent)
  std::vector<Int> leftovers;
  for (const auto& [o, n] : counts) {
    Int r = o;
    for (long p = 2; p < 65536 && Int(p) * p <= r; ++p) {
      std::size_t e = 0;
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      if (e) split[o].emplace_back(Int(p), e);
    }
    if (r > 1) leftovers.push_back(r);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(leftovers.begin(), leftovers.end());
    leftovers.erase(std::unique(leftovers.begin(), leftovers.end()), leftovers.end());
    for (std::size_t i = 0; i < leftovers.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < leftovers.size() && !changed; ++j) {
        Int g = order_gcd(leftovers[i], leftovers[j]);
        if (g == 1) continue;
        Int a = leftovers[i] / g, b = leftovers[j] / g;
        leftovers.erase(leftovers.begin() + static_cast<std::ptrdiff_t>(j));
        leftovers.erase(leftovers.begin() + static_cast<std::ptrdiff_t>(i));
        for (const Int& x : {g, a, b}) {
          if (x > 1) leftovers.push_back(x);
        }
        changed = true;
      }
    }
  }
  for (const auto& [o, n] : counts) {
    Int r = o;
    for (const auto& [p, e] : split[o]) {
      for (std::size_t k = 0; k < e; ++k) r /= p;
    }
    for (const Int& base : leftovers) {
      std::size_t e = 0;
      while (r % base == 0) {
        r /= base;
        ++e;
      }
      if (e) split[o].emplace_back(base, e);
    }
  }
  std::map<Int, std::vector<std::size_t>> exponents;  // base -> exponents, one per summand
  for (const auto& [o, n] : counts) {
    for (const auto& [p, e] : split[o]) exponents[p].insert(exponents[p].end(), n, e);
  }
  std::size_t length = 0;
  for (auto& [p, es] : exponents) {
    std::sort(es.begin(), es.end(), std::greater<>());
    length = std::max(length, es.size());
  }
  std::vector<Int> torsion(length, Int(1));  // torsion[0] is the largest factor
  for (const auto& [p, es] : exponents) {
    for (std::size_t j = 0; j < es.size(); ++j) {
      for (std::size_t k = 0; k < es[j]; ++k) torsion[j] *= p;
    }
  }
  std::reverse(torsion.begin(), torsion.end());
  torsion.insert(torsion.end(), free_rank, Int(0));
  return torsion;
}

bool FpGroup::isomorphic_to(const FpGroup& other) const {
  return invariant_factors() == other.invariant_factors();
}

Lattice FpGroup::relation_lattice() const {
  Lattice l(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    if (orders_[i] != 0) l.add(SparseVec{{i, orders_[i]}});
  }
  return l;
}

std::string describe_invariants(const std::vector<Int>& factors) {
  if (factors.empty()) return "0";
  // runs of equal factors print as powers: Z2^3
  std::string out;
  for (std::size_t i = 0; i < factors.size();) {
    std::size_t j = i;
    while (j < factors.size() && factors[j] == factors[i]) ++j;
    if (!out.empty()) out += " + ";
    out += (factors[i] == 0) ? std::string("Z") : "Z" + to_string(factors[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string FpGroup::describe() const {
  std::vector<Int> nontrivial;
  for (const Int& o : orders_) {
    if (o != 1) nontrivial.push_back(o);
  }
  return describe_invariants(nontrivial);
}

// ---------------------------------------------------------------- GroupHom

GroupHom::GroupHom(FpGroup source, FpGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != target_.rank() || matrix_.cols() != source_.rank()) {
    throw std::invalid_argument("GroupHom: matrix shape does not match groups");
  }
  for (std::size_t j = 0; j < source_.rank(); ++j) {
    for (std::size_t i = 0; i < target_.rank(); ++i) {
      matrix_(i, j) = reduce_mod(matrix_(i, j), target_.order(i));
    }
    const Int& o = source_.order(j);
    if (o == 0) continue;
    for (std::size_t i = 0; i < target_.rank(); ++i) {
      if (reduce_mod(o * matrix_(i, j), target_.order(i)) != 0) {
        throw std::invalid_argument("GroupHom: image of generator " + source_.label(j) +
                                    " violates its order");
      }
    }
  }
}

GroupHom GroupHom::zero(const FpGroup& source, const FpGroup& target) {
  return GroupHom(source, target, IntMatrix(target.rank(), source.rank()));
}

GroupHom GroupHom::identity(const FpGroup& group) {
  return GroupHom(group, group, IntMatrix::identity(group.rank()));
}

Vec GroupHom::operator()(const Vec& x) const { return target_.reduce(matrix_.apply(x)); }

GroupHom GroupHom::after(const GroupHom& inner) const {
  if (inner.target_.orders() != source_.orders()) {
    throw std::invalid_argument("GroupHom::after: groups do not match");
  }
  return GroupHom(inner.source_, target_, matrix_ * inner.matrix_);
}

GroupHom GroupHom::operator+(const GroupHom& other) const {
  if (!(source_ == other.source_) || !(target_ == other.target_)) {
    throw std::invalid_argument("GroupHom::operator+: groups do not match");
  }
  IntMatrix m = matrix_;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += other.matrix_(i, j);
  }
  return GroupHom(source_, target_, std::move(m));
}

GroupHom GroupHom::operator-() const {
  IntMatrix m = matrix_;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
  }
  return GroupHom(source_, target_, std::move(m));
}

bool GroupHom::is_zero() const { return matrix_.is_zero(); }

bool operator==(const GroupHom& a, const GroupHom& b) {
  return a.source_ == b.source_ && a.target_ == b.target_ && a.matrix_ == b.matrix_;
}

// ------------------------------------------------------------ Presentation

Presentation present(Lattice relations) {
  relations.normalize();
  const std::size_t n = relations.dimension();
  const auto& rows = relations.rows();

  std::vector<bool> unit_pivot(n, false);
  for (const auto& [p, row] : rows) {
    if (row.front().second == 1) unit_pivot[p] = true;
  }
  std::vector<std::size_t> kept;  // surviving coordinates J
  std::vector<std::size_t> kept_index(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    if (!unit_pivot[c]) {
      kept_index[c] = kept.size();
      kept.push_back(c);
    }
  }

  // projection P : Z^n -> Z^J eliminating unit-pivot coordinates
  IntMatrix proj(kept.size(), n);
  for (std::size_t c : kept) proj(kept_index[c], c) = 1;
  std::vector<SparseVec> rel;  // relations in J coordinates
  for (const auto& [p, row] : rows) {
    if (unit_pivot[p]) {
      for (const auto& [c, x] : row) {
        if (c == p) continue;
        proj(kept_index[c], p) = -x;
      }
    } else {
      SparseVec r;
      for (const auto& [c, x] : row) r.emplace_back(kept_index[c], x);
      rel.push_back(std::move(r));
    }
  }

  // relations touching a single, otherwise untouched coordinate split off
  std::vector<int> touch(kept.size(), 0);
  for (const auto& r : rel) {
    for (const auto& e : r) touch[e.first] += 1;
  }
  std::vector<Int> direct_order(kept.size(), Int(-1));
  std::vector<std::size_t> coupled_rel;
  for (std::size_t k = 0; k < rel.size(); ++k) {
    if (rel[k].size() == 1 && touch[rel[k].front().first] == 1) {
      direct_order[rel[k].front().first] = abs_int(rel[k].front().second);
    } else {
      coupled_rel.push_back(k);
    }
  }
  std::vector<std::size_t> coupled_coord;
  std::vector<std::size_t> coupled_pos(kept.size(), kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (touch[j] > 0 && direct_order[j] < 0) {
      coupled_pos[j] = coupled_coord.size();
      coupled_coord.push_back(j);
    }
  }

  std::vector<Int> orders;
  std::vector<Vec> to_rows;     // each of length |J|
  std::vector<Vec> from_cols;   // each of length n

  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (touch[j] > 0 && direct_order[j] < 0) continue;
    Int order = touch[j] == 0 ? Int(0) : direct_order[j];
    if (order == 1) continue;
    Vec tr(kept.size(), Int(0));
    tr[j] = 1;
    Vec fc(n, Int(0));
    fc[kept[j]] = 1;
    orders.push_back(order);
    to_rows.push_back(std::move(tr));
    from_cols.push_back(std::move(fc));
  }

  if (!coupled_coord.empty()) {
    IntMatrix block(coupled_coord.size(), coupled_rel.size());
    for (std::size_t k = 0; k < coupled_rel.size(); ++k) {
      for (const auto& [j, x] : rel[coupled_rel[k]]) block(coupled_pos[j], k) = x;
    }
    SmithDecomposition snf = smith(block);
    for (std::size_t i = 0; i < coupled_coord.size(); ++i) {
      Int d = i < snf.rank ? snf.S(i, i) : Int(0);
      if (d == 1) continue;
      Vec tr(kept.size(), Int(0));
      for (std::size_t c = 0; c < coupled_coord.size(); ++c) tr[coupled_coord[c]] = snf.U(i, c);
      Vec fc(n, Int(0));
      for (std::size_t c = 0; c < coupled_coord.size(); ++c) {
        fc[kept[coupled_coord[c]]] = snf.U_inverse(c, i);
      }
      orders.push_back(d);
      to_rows.push_back(std::move(tr));
      from_cols.push_back(std::move(fc));
    }
  }

  Presentation out;
  const std::size_t r = orders.size();
  out.to_group = IntMatrix(r, n);
  out.from_group = IntMatrix(n, r);
  for (std::size_t g = 0; g < r; ++g) {
    Vec full_row(n, Int(0));
    for (std::size_t c = 0; c < n; ++c) {
      Int acc = 0;
      for (std::size_t j = 0; j < kept.size(); ++j) {
        if (to_rows[g][j] != 0 && proj(j, c) != 0) acc += to_rows[g][j] * proj(j, c);
      }
      full_row[c] = acc;
    }
    // canonical generator: pick the sign with the smaller canonical lift
    Vec lift = relations.reduce(from_cols[g]);
    Vec neg = from_cols[g];
    for (auto& x : neg) x = -x;
    neg = relations.reduce(std::move(neg));
    if (orders[g] != 2 && lex_less(neg, lift)) {
      lift = std::move(neg);
      for (auto& x : full_row) x = -x;
    }
    for (std::size_t c = 0; c < n; ++c) {
      out.to_group(g, c) = reduce_mod(full_row[c], orders[g]);
      out.from_group(c, g) = lift[c];
    }
  }
  out.group = FpGroup(std::move(orders));
  return out;
}

// --------------------------------------------------------------- HomSolver

HomSolver::HomSolver(const GroupHom& h) : hom_(h) {
  const std::size_t t = h.target().rank();
  const std::size_t s = h.source().rank();
  lattice_ = Lattice(t + s);
  for (std::size_t j = 0; j < t; ++j) {
    if (h.target().order(j) != 0) lattice_.add(SparseVec{{j, h.target().order(j)}});
  }
  for (std::size_t i = 0; i < s; ++i) {
    if (h.source().order(i) != 0) lattice_.add(SparseVec{{t + i, h.source().order(i)}});
  }
  for (std::size_t i = 0; i < s; ++i) {
    SparseVec row;
    for (std::size_t j = 0; j < t; ++j) {
      if (h.matrix()(j, i) != 0) row.emplace_back(j, h.matrix()(j, i));
    }
    row.emplace_back(t + i, Int(1));
    lattice_.add(std::move(row));
  }
  lattice_.normalize();
}

std::optional<Vec> HomSolver::solve(const Vec& y) const {
  const std::size_t t = hom_.target().rank();
  const std::size_t s = hom_.source().rank();
  if (y.size() != t) throw std::invalid_argument("HomSolver::solve: wrong target length");
  Vec v(t + s, Int(0));
  for (std::size_t j = 0; j < t; ++j) v[j] = y[j];
  Vec r = lattice_.reduce(std::move(v));
  for (std::size_t j = 0; j < t; ++j) {
    if (r[j] != 0) return std::nullopt;
  }
  Vec w(t + s, Int(0));
  for (std::size_t i = 0; i < s; ++i) w[t + i] = -r[t + i];
  w = lattice_.reduce(std::move(w));
  Vec x(w.begin() + static_cast<std::ptrdiff_t>(t), w.end());
  return hom_.source().reduce(std::move(x));
}

std::vector<Vec> HomSolver::kernel_generators() const {
  const std::size_t t = hom_.target().rank();
  const std::size_t s = hom_.source().rank();
  std::vector<Vec> out;
  for (const auto& [p, row] : lattice_.rows()) {
    if (p < t) continue;
    Vec x(s, Int(0));
    for (const auto& [c, v] : row) x[c - t] = v;
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<Vec> solve(const GroupHom& h, const Vec& y) { return HomSolver(h).solve(h.target().reduce(y)); }

// ----------------------------------------------------- subgroups & quotients

Subgroup subgroup(const FpGroup& ambient, const std::vector<Vec>& generators) {
  const std::size_t n = ambient.rank();
  const std::size_t k = generators.size();
  Lattice l(n + k);
  for (std::size_t j = 0; j < n; ++j) {
    if (ambient.order(j) != 0) l.add(SparseVec{{j, ambient.order(j)}});
  }
  for (std::size_t i = 0; i < k; ++i) {
    SparseVec row;
    for (std::size_t j = 0; j < n; ++j) {
      if (generators[i][j] != 0) row.emplace_back(j, generators[i][j]);
    }
    row.emplace_back(n + i, Int(1));
    l.add(std::move(row));
  }
  Lattice rel(k);
  for (const auto& [p, row] : l.rows()) {
    if (p < n) continue;
    SparseVec r;
    for (const auto& [c, v] : row) r.emplace_back(c - n, v);
    rel.add(std::move(r));
  }
  Presentation pres = present(std::move(rel));
  IntMatrix gens = IntMatrix::from_columns(n, generators);
  IntMatrix inc = gens * pres.from_group;
  return Subgroup{pres.group, GroupHom(pres.group, ambient, std::move(inc))};
}

Subgroup kernel(const GroupHom& h) {
  HomSolver solver(h);
  return subgroup(h.source(), solver.kernel_generators());
}

ImageResult image(const GroupHom& h) {
  const FpGroup& target = h.target();
  const std::size_t n = target.rank();
  const std::size_t k = h.source().rank();
  std::vector<Vec> gens;
  gens.reserve(k);
  for (std::size_t i = 0; i < k; ++i) gens.push_back(h.matrix().column(i));
  Lattice l(n + k);
  for (std::size_t j = 0; j < n; ++j) {
    if (target.order(j) != 0) l.add(SparseVec{{j, target.order(j)}});
  }
  for (std::size_t i = 0; i < k; ++i) {
    SparseVec row;
    for (std::size_t j = 0; j < n; ++j) {
      if (gens[i][j] != 0) row.emplace_back(j, gens[i][j]);
    }
    row.emplace_back(n + i, Int(1));
    l.add(std::move(row));
  }
  Lattice rel(k);
  for (const auto& [p, row] : l.rows()) {
    if (p < n) continue;
    SparseVec r;
    for (const auto& [c, v] : row) r.emplace_back(c - n, v);
    rel.add(std::move(r));
  }
  Presentation pres = present(std::move(rel));
  IntMatrix inc = h.matrix() * pres.from_group;
  GroupHom inclusion(pres.group, target, std::move(inc));
  GroupHom core(h.source(), pres.group, pres.to_group);
  return ImageResult{pres.group, std::move(inclusion), std::move(core)};
}

Vec Quotient::section(const Vec& cls) const {
  if (cls.size() != group.rank()) throw std::invalid_argument("Quotient::section: wrong length");
  return lattice.reduce(from_group.apply(cls));
}

Quotient quotient(const FpGroup& g, const std::vector<Vec>& elements) {
  Lattice l = g.relation_lattice();
  for (const Vec& e : elements) l.add(e);
  l.normalize();
  Presentation pres = present(l);
  GroupHom proj(g, pres.group, pres.to_group);
  return Quotient{pres.group, std::move(proj), std::move(l), std::move(pres.from_group)};
}

// ---------------------------------------------------------------- HomGroup

HomGroup hom_group(const FpGroup& g, const FpGroup& h) {
  HomGroup out;
  out.source = g;
  out.target = h;
  std::vector<Int> orders;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    for (std::size_t j = 0; j < h.rank(); ++j) {
      const Int& a = g.order(i);
      const Int& b = h.order(j);
      if (a == 0) {
        if (b == 1) continue;
        out.basis.push_back({i, j, Int(1)});
        orders.push_back(b);
      } else if (b != 0) {
        Int d = order_gcd(a, b);
        if (d == 1) continue;
        out.basis.push_back({i, j, Int(b / d)});
        orders.push_back(d);
      }
    }
  }
  out.group = FpGroup(std::move(orders));
  return out;
}

IntMatrix HomGroup::matrix(const Vec& coordinates) const {
  IntMatrix m(target.rank(), source.rank());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Entry& e = basis[k];
    m(e.target_generator, e.source_generator) += coordinates[k] * e.value;
  }
  return m;
}

GroupHom HomGroup::hom(const Vec& coordinates) const {
  return GroupHom(source, target, matrix(coordinates));
}

std::optional<Vec> HomGroup::coordinates(const IntMatrix& m) const {
  if (m.rows() != target.rank() || m.cols() != source.rank()) {
    throw std::invalid_argument("HomGroup::coordinates: shape mismatch");
  }
  IntMatrix reduced = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = reduce_mod(m(i, j), target.order(i));
  }
  Vec coords(basis.size(), Int(0));
  IntMatrix covered(m.rows(), m.cols());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Entry& e = basis[k];
    const Int& x = reduced(e.target_generator, e.source_generator);
    if (x % e.value != 0) return std::nullopt;
    coords[k] = reduce_mod(x / e.value, group.order(k));
    covered(e.target_generator, e.source_generator) = 1;
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (covered(i, j) == 0 && reduced(i, j) != 0) return std::nullopt;
    }
  }
  return coords;
}

// ---------------------------------------------------------------- Homology

Homology::Homology(const GroupHom& f, const GroupHom& g) : middle_(f.target()) {
  if (!(f.target() == g.source())) {
    throw std::invalid_argument("Homology: maps are not composable");
  }
  if (!g.after(f).is_zero()) {
    throw std::invalid_argument("Homology: g∘f is not zero");
  }
  cycles_ = kernel(g);
  cycle_solver_ = std::make_shared<HomSolver>(cycles_.inclusion);
  std::vector<Vec> boundary_classes;
  boundaries_ = middle_.relation_lattice();
  for (std::size_t i = 0; i < f.source().rank(); ++i) {
    Vec col = f(f.source().generator(i));
    boundaries_.add(col);
    auto k = cycle_solver_->solve(col);
    if (!k) throw std::logic_error("Homology: boundary is not a cycle");
    boundary_classes.push_back(std::move(*k));
  }
  boundaries_.normalize();
  quotient_ = quotient(cycles_.group, boundary_classes);
}

std::optional<Vec> Homology::class_of(const Vec& element) const {
  auto k = cycle_solver_->solve(middle_.reduce(element));
  if (!k) return std::nullopt;
  return quotient_.projection(*k);
}

Vec Homology::representative(const Vec& cls) const {
  Vec b = cycles_.inclusion(quotient_.section(cls));
  return middle_.reduce(boundaries_.reduce(std::move(b)));
}

bool Homology::is_boundary(const Vec& element) const { return boundaries_.contains(element); }

}  // namespace ainfty
