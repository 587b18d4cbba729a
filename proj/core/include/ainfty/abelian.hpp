#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ainfty/integer.hpp"

namespace ainfty {

using Vec = std::vector<Int>;
using SparseVec = std::vector<std::pair<std::size_t, Int>>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_columns(std::size_t rows, const std::vector<Vec>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec column(std::size_t j) const;
  Vec row(std::size_t i) const;
  Vec apply(const Vec& x) const;
  IntMatrix transpose() const;
  bool is_zero() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// U * A * V == S with U, V unimodular and S diagonal, d1 | d2 | ..., d_i >= 0.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  IntMatrix U_inverse;
  IntMatrix V_inverse;
  std::size_t rank = 0;

  std::vector<Int> diagonal() const;
};

SmithDecomposition smith(const IntMatrix& a);

Int determinant(const IntMatrix& a);

/// A sublattice of Z^n kept in row echelon (Hermite) form with positive
/// pivots. reduce() returns the lexicographically smallest coset
/// representative whose pivot coordinates lie in [0, pivot).
class Lattice {
 public:
  explicit Lattice(std::size_t dimension = 0) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t rank() const { return rows_.size(); }

  void add(const Vec& v);
  void add(SparseVec v);

  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const;

  /// Reduce every row against the rows below it; afterwards each entry
  /// at another row's pivot column lies in [0, that pivot).
  void normalize();

  const std::map<std::size_t, SparseVec>& rows() const { return rows_; }

 private:
  std::size_t dimension_;
  std::map<std::size_t, SparseVec> rows_;
};

/// Finitely generated abelian group given as a direct sum of cyclic groups;
/// an order of 0 is an infinite cyclic summand.
class FpGroup {
 public:
  FpGroup() = default;
  explicit FpGroup(std::vector<Int> orders, std::vector<std::string> labels = {});

  static FpGroup free(std::size_t rank);
  static FpGroup cyclic(const Int& order);

  std::size_t rank() const { return orders_.size(); }
  const std::vector<Int>& orders() const { return orders_; }
  const Int& order(std::size_t i) const { return orders_[i]; }
  std::string label(std::size_t i) const;
  const std::vector<std::string>& labels() const { return labels_; }
  FpGroup relabeled(std::vector<std::string> labels) const;

  Vec zero() const { return Vec(rank(), 0); }
  Vec generator(std::size_t i) const;
  Vec reduce(Vec v) const;
  bool is_zero(const Vec& v) const;
  bool equal(const Vec& a, const Vec& b) const;

  bool is_finite() const;
  bool is_trivial() const;
  Int cardinality() const;
  std::vector<Vec> elements() const;

  /// Invariant factors d1 | d2 | ... (units dropped) followed by zeros.
  std::vector<Int> invariant_factors() const;
  bool isomorphic_to(const FpGroup& other) const;

  Lattice relation_lattice() const;
  std::string describe() const;

  friend bool operator==(const FpGroup& a, const FpGroup& b) { return a.orders_ == b.orders_; }

 private:
  std::vector<Int> orders_;
  std::vector<std::string> labels_;
};

std::string describe_invariants(const std::vector<Int>& factors);

class GroupHom {
 public:
  GroupHom() = default;
  /// Columns of `matrix` are the images of the source generators.
  GroupHom(FpGroup source, FpGroup target, IntMatrix matrix);

  static GroupHom zero(const FpGroup& source, const FpGroup& target);
  static GroupHom identity(const FpGroup& group);

  const FpGroup& source() const { return source_; }
  const FpGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  Vec operator()(const Vec& x) const;
  GroupHom after(const GroupHom& inner) const;
  GroupHom operator+(const GroupHom& other) const;
  GroupHom operator-() const;
  bool is_zero() const;

  friend bool operator==(const GroupHom& a, const GroupHom& b);

 private:
  FpGroup source_;
  FpGroup target_;
  IntMatrix matrix_;
};

/// Z^n modulo a lattice, with explicit coordinate changes both ways.
struct Presentation {
  FpGroup group;
  IntMatrix to_group;    // group.rank() x n
  IntMatrix from_group;  // n x group.rank()
};

Presentation present(Lattice relations);

/// Precomputed echelon data for repeated solving of h(x) = y.
class HomSolver {
 public:
  explicit HomSolver(const GroupHom& h);

  /// Canonical solution: the lexicographically smallest representative of
  /// the solution coset, or nullopt when y is not in the image.
  std::optional<Vec> solve(const Vec& y) const;
  /// Lifts of generators of the kernel (not necessarily independent).
  std::vector<Vec> kernel_generators() const;
  const GroupHom& hom() const { return hom_; }

 private:
  GroupHom hom_;
  Lattice lattice_;  // in Z^{target rank + source rank}
};

std::optional<Vec> solve(const GroupHom& h, const Vec& y);

struct Subgroup {
  FpGroup group;
  GroupHom inclusion;
};

/// The subgroup generated by `generators`, presented canonically.
Subgroup subgroup(const FpGroup& ambient, const std::vector<Vec>& generators);

Subgroup kernel(const GroupHom& h);

struct ImageResult {
  FpGroup group;
  GroupHom inclusion;
  GroupHom corestriction;  // inclusion.after(corestriction) == h
};

ImageResult image(const GroupHom& h);

struct Quotient {
  FpGroup group;
  GroupHom projection;
  Lattice lattice;         // relations of the quotient inside Z^{ambient rank}
  IntMatrix from_group;

  Vec section(const Vec& cls) const;
};

Quotient quotient(const FpGroup& g, const std::vector<Vec>& elements);

/// Hom(G, H) with a basis of elementary homomorphisms: each basis element
/// sends one source generator to a multiple of one target generator.
struct HomGroup {
  struct Entry {
    std::size_t source_generator;
    std::size_t target_generator;
    Int value;
  };

  FpGroup source;
  FpGroup target;
  FpGroup group;
  std::vector<Entry> basis;

  IntMatrix matrix(const Vec& coordinates) const;
  GroupHom hom(const Vec& coordinates) const;
  std::optional<Vec> coordinates(const IntMatrix& m) const;
};

HomGroup hom_group(const FpGroup& g, const FpGroup& h);

/// ker(g) / im(f) for a composable pair with g∘f = 0.
class Homology {
 public:
  Homology(const GroupHom& f, const GroupHom& g);

  const FpGroup& group() const { return quotient_.group; }
  const Subgroup& cycles() const { return cycles_; }

  std::optional<Vec> class_of(const Vec& element) const;
  /// Canonical cocycle representative of a class.
  Vec representative(const Vec& cls) const;
  bool is_boundary(const Vec& element) const;

 private:
  Subgroup cycles_;
  std::shared_ptr<HomSolver> cycle_solver_;
  Quotient quotient_;
  Lattice boundaries_;  // im f plus the relations of the middle group
  FpGroup middle_;
};

}  // namespace ainfty
