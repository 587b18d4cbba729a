#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ainfty/abelian.hpp"

namespace ainfty {

/// Cochain complex of f.g. abelian groups over the window [0, D]; d raises degree.
class Complex {
 public:
  using Formatter = std::function<std::string(int degree, const Vec& element)>;

  Complex() = default;
  explicit Complex(int max_degree);

  int max_degree() const { return max_degree_; }
  bool in_window(int degree) const { return degree >= 0 && degree <= max_degree_; }

  /// The trivial group outside the window.
  const FpGroup& group(int degree) const;
  /// d: degree -> degree + 1; requires 0 <= degree < max_degree.
  const GroupHom& differential(int degree) const;
  bool zero_differential() const;

  void set_group(int degree, FpGroup g);
  void set_differential(int degree, GroupHom d);
  void set_formatter(Formatter f) { formatter_ = std::move(f); }

  /// Degrees k with d_{k+1} d_k != 0.
  std::vector<int> check_d_squared() const;

  /// Requires degree < max_degree.
  Homology homology(int degree) const;

  std::string format(int degree, const Vec& element) const;

 private:
  int max_degree_ = 0;
  std::vector<FpGroup> groups_;
  std::vector<GroupHom> diffs_;
  Formatter formatter_;
};

struct TensorFactor {
  int degree;
  std::size_t generator;
  friend auto operator<=>(const TensorFactor&, const TensorFactor&) = default;
};
using TensorIndex = std::vector<TensorFactor>;

int total_degree(const TensorIndex& t);

class TensorPower;

/// Hom(Z_o, C) for one degree of a tensor power, with the induced differential.
struct HomDegree {
  HomGroup hom;   // Hom(Z_o, C_t)
  HomGroup next;  // Hom(Z_o, C_{t+1}); trivial past the window edge
  GroupHom d;
  std::shared_ptr<HomSolver> solver;
};

/// The complex Hom(Z_o, C) around degree t and its homology at t.
struct Slice {
  std::shared_ptr<const HomDegree> below;
  std::shared_ptr<const HomDegree> here;
  std::shared_ptr<Homology> homology;
};

/// Degreewise basis of the n-fold tensor power of a complex. Basis elements
/// are tuples of base generators and a tuple's order is the gcd of the
/// factor orders. Degrees above the base window are dropped.
class TensorPower {
 public:
  TensorPower(const Complex& base, int arity);

  int arity() const { return arity_; }
  int max_degree() const { return base_->max_degree(); }

  const FpGroup& group(int degree) const;
  const std::vector<TensorIndex>& basis(int degree) const;
  std::optional<std::size_t> index_of(const TensorIndex& t) const;

  /// Element of degree+1; requires degree < max_degree.
  Vec differential_apply(int degree, const Vec& x) const;
  /// Sparse form of differential_apply on a single basis element.
  SparseVec differential_of(int degree, std::size_t i) const;

  std::string label(const TensorIndex& t) const;
  std::string format(int degree, const Vec& x) const;
  /// Inverse of format: "2*u|v + w|u" with labels compared ignoring spaces.
  /// Throws std::invalid_argument on unknown labels.
  Vec parse(int degree, const std::string& text) const;

  /// Whether d out of `degree` is known: inside the window, or at the top
  /// degree of a complex with zero differential.
  bool differential_known(int degree) const;

  /// Hom(Z_o, C_t) with its differential; requires differential_known(t).
  std::shared_ptr<const HomDegree> hom_degree(const Int& order, int degree) const;
  /// Homology of Hom(Z_o, C) at t; requires differential_known(t).
  const Slice& slice(const Int& order, int degree) const;

 private:
  const Complex* base_;
  int arity_;
  std::vector<std::vector<TensorIndex>> basis_;
  std::vector<FpGroup> groups_;
  std::map<TensorIndex, std::size_t> lookup_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<Int, int>, std::shared_ptr<const HomDegree>> hom_cache_;
  mutable std::map<std::pair<Int, int>, std::unique_ptr<Slice>> slice_cache_;
};

/// A complex together with its lazily built tensor powers.
class Space {
 public:
  explicit Space(Complex base, std::string name = {});

  const Complex& base() const { return base_; }
  const std::string& name() const { return name_; }
  int max_degree() const { return base_.max_degree(); }
  const TensorPower& power(int arity) const;

 private:
  Complex base_;
  std::string name_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<TensorPower>> powers_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// How a source tensor power is read in Hom: Exact uses the groups as they
/// are, Free uses the free abelian group on the same basis tuples.
enum class SourceModel { Exact, Free };

/// Degree-homogeneous multilinear map X^{⊗m} -> Y^{⊗n} of a fixed shift,
/// stored as sparse columns per source degree. Columns are values on basis
/// tuples; they need not respect tuple orders (see respects_orders). Source degrees whose values
/// depend on data outside a window are recorded as truncated.
class MultiMap {
 public:
  MultiMap() = default;
  MultiMap(SpacePtr source, SpacePtr target, int inputs, int outputs, int shift);

  static MultiMap identity(SpacePtr space, int arity);
  static MultiMap differential(SpacePtr space, int arity);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int inputs() const { return inputs_; }
  int outputs() const { return outputs_; }
  int shift() const { return shift_; }
  const TensorPower& source_power() const { return source_->power(inputs_); }
  const TensorPower& target_power() const { return target_->power(outputs_); }

  /// Source degrees whose target degree lies inside the target window.
  bool has_block(int degree) const;
  std::vector<int> degrees() const;

  const SparseVec& column(int degree, std::size_t i) const;
  void set_column(int degree, std::size_t i, SparseVec value);
  void set_column(int degree, std::size_t i, const Vec& value);
  /// Value on a basis tuple; zero if it is out of range.
  Vec value(const TensorIndex& e) const;
  Vec apply(int degree, const Vec& x) const;

  bool is_zero() const;
  bool is_zero_at(int degree) const;
  /// Whether every column is killed by the order of its source tuple.
  bool respects_orders() const;

  const std::set<int>& truncated() const { return truncated_; }
  void mark_truncated(int degree) { truncated_.insert(degree); }
  bool interior(int degree) const { return !truncated_.contains(degree); }

  MultiMap operator+(const MultiMap& other) const;
  MultiMap operator-(const MultiMap& other) const;
  MultiMap operator-() const;
  MultiMap scaled(const Int& factor) const;

  /// Agreement on all blocks outside the union of truncated degrees.
  bool equal_interior(const MultiMap& other) const;
  friend bool operator==(const MultiMap& a, const MultiMap& b);

  /// "u|w -> cac; w|u -> cac" style listing of the nonzero values.
  std::string describe() const;

 private:
  void check_compatible(const MultiMap& other) const;

  SpacePtr source_;
  SpacePtr target_;
  int inputs_ = 1;
  int outputs_ = 1;
  int shift_ = 0;
  std::map<int, std::vector<SparseVec>> columns_;
  std::set<int> truncated_;
};

/// outer ∘ inner.
MultiMap compose(const MultiMap& outer, const MultiMap& inner);
/// f ⊗ h with (f⊗h)(a⊗b) = (-1)^{|h||a|} f(a) ⊗ h(b).
MultiMap tensor(const MultiMap& f, const MultiMap& h);
MultiMap tensor(const std::vector<MultiMap>& factors);
/// ∇f = d_Y f - (-1)^{|f|} f d_X.
MultiMap nabla(const MultiMap& f);
/// g^{⊗n} for a map g of arity (1,1).
MultiMap tensor_power(const MultiMap& g, int n);
/// g^{⊗n} ∘ u.
MultiMap g_tilde(const MultiMap& g, const MultiMap& u);
/// Canonical permutation (X^{⊗p})^{⊗q} -> (X^{⊗q})^{⊗p} with Koszul signs.
MultiMap sigma(SpacePtr space, int p, int q);

/// Homology of Hom^shift(X^{⊗m}, Y^{⊗n}) for a source with zero
/// differential. It splits as a product over the source basis of the
/// homology of Hom(Z_o, Y^{⊗n}) at degree |e| + shift.
class HomHomology {
 public:
  /// Target degrees above `target_degree_cap` are skipped as well.
  HomHomology(SpacePtr source, SpacePtr target, int inputs, int outputs, int shift,
              std::optional<int> target_degree_cap = std::nullopt, SourceModel model = SourceModel::Exact);

  struct Part {
    int source_degree;
    std::size_t source_index;
    int target_degree;
    const Slice* slice;
    std::size_t offset;  // into the concatenated class vector
  };

  const FpGroup& group() const { return group_; }
  const std::vector<Part>& parts() const { return parts_; }
  int shift() const { return shift_; }
  SourceModel model() const { return model_; }

  /// Class of a cocycle, or nullopt if some component is not a cocycle.
  std::optional<Vec> class_of(const MultiMap& cocycle) const;
  MultiMap representative(const Vec& cls) const;
  /// Canonical b with ∇b = z (z of shift+1), or nullopt when [z] != 0.
  std::optional<MultiMap> solve_coboundary(const MultiMap& z) const;
  /// Source degrees skipped because the target degree leaves the window.
  const std::set<int>& skipped_degrees() const { return skipped_; }

 private:
  SpacePtr source_;
  SpacePtr target_;
  int inputs_;
  int outputs_;
  int shift_;
  SourceModel model_;
  std::vector<Part> parts_;
  FpGroup group_;
  std::set<int> skipped_;

  Int source_order(int degree, std::size_t i) const;
};

/// The map induced by g̃ = g^{⊗n}∘- on Hom-homology at one shift, for a
/// chain map g: A -> B where A has zero differential.
class InducedMap {
 public:
  InducedMap(const MultiMap& g, int inputs, int outputs, int shift, SourceModel model = SourceModel::Exact);

  const HomHomology& domain() const { return domain_; }
  const HomHomology& codomain() const { return codomain_; }

  bool injective() const;
  bool surjective() const;
  bool is_isomorphism() const { return injective() && surjective(); }

  /// Canonical cocycle u in the domain with g̃_*[u] = [target], or nullopt
  /// when the class is not in the image.
  std::optional<MultiMap> preimage(const MultiMap& target_cocycle) const;

 private:
  struct Block {
    GroupHom map;
    std::shared_ptr<HomSolver> solver;
    bool injective = false;
    bool surjective = false;
  };

  MultiMap g_;
  HomHomology domain_;
  HomHomology codomain_;
  std::map<std::pair<const Slice*, const Slice*>, Block> blocks_;
  std::vector<const Block*> part_blocks_;  // one per part
};

/// Hom^s(X^{⊗m}, Y^{⊗n}) as explicit groups with ∇ as a group homomorphism.
/// Only for small spaces; used as a cross-check of the sliced route.
class DenseHomComplex {
 public:
  DenseHomComplex(SpacePtr source, SpacePtr target, int inputs, int outputs);

  const FpGroup& group(int shift) const;
  /// ∇: shift -> shift + 1.
  const GroupHom& nabla(int shift) const;
  MultiMap to_map(int shift, const Vec& coords) const;
  std::optional<Vec> coordinates(const MultiMap& f) const;
  Homology homology(int shift) const;

 private:
  struct Carrier {
    std::vector<std::pair<int, HomGroup>> blocks;  // source degree, Hom(X_k, Y_{k+s})
    FpGroup group;
  };
  const Carrier& carrier(int shift) const;

  SpacePtr source_;
  SpacePtr target_;
  int inputs_;
  int outputs_;
  mutable std::map<int, Carrier> carriers_;
  mutable std::map<int, GroupHom> nablas_;
};

}  // namespace ainfty
