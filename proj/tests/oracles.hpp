#pragma once

// Independent brute-force oracles shared by the unit and acceptance tests.
// Nothing here calls into the smith/lattice machinery of the library.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "ainfty/abelian.hpp"

namespace ainfty::oracle {

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int bound) {
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = static_cast<int>(rng() % static_cast<unsigned>(2 * bound + 1)) - bound;
    }
  }
  return m;
}

inline Int laplace_det(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Int total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    Int term = a(0, j) * laplace_det(minor);
    total += (j % 2 == 0) ? term : Int(-term);
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out,
                    std::vector<std::size_t>& cur, std::size_t start = 0) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, out, cur, i + 1);
    cur.pop_back();
  }
}

/// Smith diagonal from gcds of k x k minors.
inline std::vector<Int> determinantal_invariants(const IntMatrix& a) {
  const std::size_t r = std::min(a.rows(), a.cols());
  std::vector<Int> out;
  Int prev = 1;
  for (std::size_t k = 1; k <= r; ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(a.rows(), k, rs, cur);
    subsets(a.cols(), k, cs, cur);
    Int g = 0;
    for (const auto& ri : rs) {
      for (const auto& ci : cs) {
        IntMatrix m(k, k);
        for (std::size_t x = 0; x < k; ++x) {
          for (std::size_t y = 0; y < k; ++y) m(x, y) = a(ri[x], ci[y]);
        }
        g = boost::multiprecision::gcd(g, laplace_det(m));
      }
    }
    if (g == 0) {
      out.resize(r, Int(0));
      return out;
    }
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

inline std::vector<Vec> enumerate(const FpGroup& g) {
  std::vector<Vec> out{Vec(g.rank(), Int(0))};
  for (std::size_t i = 0; i < g.rank(); ++i) {
    std::vector<Vec> next;
    for (const Vec& v : out) {
      for (Int k = 0; k < g.order(i); ++k) {
        Vec w = v;
        w[i] = k;
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline FpGroup random_finite_group(std::mt19937& rng, int max_order) {
  static const int choices[] = {1, 2, 2, 2, 3, 4, 4, 5, 6, 8, 9, 12};
  std::vector<Int> orders;
  int total = 1;
  int rank = static_cast<int>(rng() % 4);
  for (int i = 0; i < rank; ++i) {
    int o = choices[rng() % (sizeof(choices) / sizeof(int))];
    if (total * o > max_order) break;
    total *= o;
    orders.push_back(o);
  }
  return FpGroup(orders);
}

inline GroupHom random_hom(std::mt19937& rng, const FpGroup& a, const FpGroup& b) {
  IntMatrix m(b.rank(), a.rank());
  for (std::size_t j = 0; j < a.rank(); ++j) {
    for (std::size_t i = 0; i < b.rank(); ++i) {
      if (b.order(i) == 0) {
        m(i, j) = a.order(j) == 0 ? Int(static_cast<int>(rng() % 7) - 3) : Int(0);
        continue;
      }
      Int step = b.order(i) / boost::multiprecision::gcd(a.order(j), b.order(i));
      m(i, j) = step * static_cast<int>(rng() % 5);
    }
  }
  return GroupHom(a, b, m);
}

inline Int element_order(const FpGroup& g, const Vec& v) {
  Vec acc = g.zero();
  for (Int k = 1;; ++k) {
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    if (g.is_zero(acc)) return k;
  }
}

struct RandomComplex {
  GroupHom f;
  GroupHom g;
};

/// A -f-> B -g-> C with g f = 0, |A| |B| |C| <= bound; f is built from
/// kernel elements found by enumeration.
inline RandomComplex random_complex(std::mt19937& rng, int bound) {
  FpGroup b = random_finite_group(rng, bound / 2 > 1 ? bound / 2 : 2);
  int rest = bound / static_cast<int>(std::max<Int>(Int(1), b.cardinality()));
  FpGroup c = random_finite_group(rng, std::max(rest, 1));
  GroupHom g = random_hom(rng, b, c);
  std::vector<Vec> ker;
  for (const Vec& v : enumerate(b)) {
    if (c.is_zero(g(v))) ker.push_back(v);
  }
  int left = std::max(1, rest / static_cast<int>(std::max<Int>(Int(1), c.cardinality())));
  std::vector<Int> orders;
  std::vector<Vec> cols;
  int total = 1;
  int count = static_cast<int>(rng() % 4);
  for (int i = 0; i < count; ++i) {
    const Vec& y = ker[rng() % ker.size()];
    Int o = element_order(b, y);
    if (o == 1 || total * static_cast<int>(o) > left) continue;
    total *= static_cast<int>(o);
    orders.push_back(o);
    cols.push_back(y);
  }
  FpGroup a(orders);
  GroupHom f(a, b, IntMatrix::from_columns(b.rank(), cols));
  return {f, g};
}

/// Invariant factors of a finite abelian group from its k-torsion counts.
inline std::vector<Int> invariants_from_torsion_counts(const std::map<Int, Int>& count_killed_by,
                                                       const Int& exponent_bound) {
  // prime factorization of candidate exponents
  std::map<Int, std::vector<int>> exps;  // prime -> exponent list (desc)
  Int n = exponent_bound;
  for (Int p = 2; p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    std::vector<Int> ranks;  // m_e for e = 1, 2, ...
    Int pe = p;
    Int prev = 1;
    for (;;) {
      auto it = count_killed_by.find(pe);
      if (it == count_killed_by.end()) break;
      Int ratio = it->second / prev;
      int m = 0;
      while (ratio > 1) {
        ratio /= p;
        ++m;
      }
      if (m == 0) break;
      ranks.push_back(m);
      prev = it->second;
      pe *= p;
    }
    std::vector<int> list;
    for (std::size_t e = 0; e < ranks.size(); ++e) {
      Int next = e + 1 < ranks.size() ? ranks[e + 1] : Int(0);
      for (Int k = 0; k < ranks[e] - next; ++k) list.push_back(static_cast<int>(e + 1));
    }
    std::sort(list.rbegin(), list.rend());
    if (!list.empty()) exps[p] = list;
  }
  std::size_t len = 0;
  for (const auto& [p, l] : exps) len = std::max(len, l.size());
  std::vector<Int> out(len, Int(1));
  for (const auto& [p, l] : exps) {
    for (std::size_t i = 0; i < l.size(); ++i) {
      for (int e = 0; e < l[i]; ++e) out[i] *= p;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Int> brute_homology_invariants(const GroupHom& f, const GroupHom& g) {
  const FpGroup& b = g.source();
  std::set<Vec> im;
  for (const Vec& a : enumerate(f.source())) im.insert(b.reduce(f(a)));
  std::vector<Vec> ker;
  for (const Vec& v : enumerate(b)) {
    if (g.target().is_zero(g(v))) ker.push_back(v);
  }
  Int total = static_cast<long>(ker.size()) / static_cast<long>(im.size());
  std::map<Int, Int> counts;
  for (Int k = 1; k <= total; ++k) {
    Int c = 0;
    for (const Vec& v : ker) {
      Vec w = v;
      for (auto& x : w) x *= k;
      if (im.count(b.reduce(w))) ++c;
    }
    counts[k] = c / static_cast<long>(im.size());
  }
  return invariants_from_torsion_counts(counts, total);
}

/// Number of order-compatible matrices between finite groups.
inline Int count_homs(const FpGroup& a, const FpGroup& b) {
  Int n = 1;
  for (std::size_t j = 0; j < a.rank(); ++j) {
    for (std::size_t i = 0; i < b.rank(); ++i) {
      Int c = 0;
      for (Int x = 0; x < b.order(i); ++x) {
        if ((a.order(j) * x) % b.order(i) == 0) ++c;
      }
      n *= c;
    }
  }
  return n;
}

}  // namespace ainfty::oracle
