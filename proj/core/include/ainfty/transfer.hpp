#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ainfty/bar.hpp"
#include "ainfty/graded.hpp"
#include "ainfty/tensoralg.hpp"

namespace ainfty {

/// Shape of an operation or homotopy: `inputs` in, `outputs` out.
struct Arity {
  int inputs;
  int outputs;
  friend auto operator<=>(const Arity&, const Arity&) = default;
};

std::string arity_name(const Arity& a);  // "21" for two inputs, one output

/// Strict DG (bi)algebra the structure is transferred from.
struct TargetAlgebra {
  SpacePtr space;
  MultiMap product;                   // (2,1), degree 0
  std::optional<MultiMap> coproduct;  // (1,2), degree 0
  Int characteristic = 0;             // 0 for ℤ, 2 for ℤ2
  /// Element of the arity-fold tensor power in a degree.
  std::function<Vec(int arity, int degree, const std::string&)> parse;
  /// A single element whose degree is read off the expression.
  std::function<std::pair<int, Vec>(const std::string&)> parse_element;
};

TargetAlgebra target_from_quotient(const QuotientDGA& algebra, bool reduced, const std::string& name = "B");
TargetAlgebra target_from_bar(std::shared_ptr<const BarConstruction> bar, const std::string& name = "BA");

/// A choice made while running the algorithm, pinned or canonical.
struct Choice {
  std::string name;
  std::string value;
  bool pinned = false;
  std::string note;
};

/// name -> (argument label -> value). "g" pins cocycle representatives of
/// homology classes by class name; "gMN" pins the homotopy with M inputs
/// and N outputs; "bMN" pins the cochain b of the same step.
using Pins = std::map<std::string, std::map<std::string, std::string>>;

/// Everything one induction step computed.
struct StepResult {
  Arity arity;
  MultiMap z;           // obstruction on the homology side
  MultiMap b;           // solution of ∇b = z
  MultiMap phi;         // lower-order terms on the target side
  MultiMap correction;  // cocycle u with g̃_*[u] = [g̃(b) - φ]
  MultiMap omega;       // b - u
  MultiMap rhs;         // φ - g̃(ω), the right side for the homotopy
  MultiMap homotopy;
  std::optional<MultiMap> canonical_homotopy;
  bool homotopy_pinned = false;
};

struct CheckEntry {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct IsoReport {
  Arity arity;
  int shift;
  SourceModel model;
  bool injective;
  bool surjective;
  std::string domain;
  std::string codomain;
  std::vector<int> skipped_degrees;
  bool ok() const { return injective && surjective; }
};

struct InverseSearch {
  int degree;
  std::string element;
  std::size_t search_space = 0;
  std::size_t solutions = 0;
  bool exhaustive = true;
};

/// The Transfer Algorithm for a strict target: H = H(target) with a
/// cocycle-selecting map g, induced operations ω and homotopies g_m^n.
class Transfer {
 public:
  /// `model` fixes how maps out of tensor powers of H are read; Free matches
  /// maps given by their values on basis tuples.
  Transfer(TargetAlgebra target, const Pins& pins, SourceModel model = SourceModel::Free);

  const TargetAlgebra& target() const { return target_; }
  const SpacePtr& homology() const { return homology_; }
  const MultiMap& g() const { return g_; }
  const std::map<Arity, MultiMap>& operations() const { return ops_; }
  const std::map<Arity, MultiMap>& homotopies() const { return homotopies_; }
  const std::vector<Choice>& choices() const { return choices_; }
  const Pins& pins() const { return pins_; }
  SourceModel model() const { return model_; }

  /// Operation ω with the given arity, zero if not computed.
  MultiMap operation(const Arity& a) const;
  MultiMap homotopy(const Arity& a) const;

  /// A map on the homology (or into the target) from "label -> value".
  MultiMap map_from_table(const Arity& a, int shift, bool into_target,
                          const std::map<std::string, std::string>& table) const;

  /// μ_H and g_2^1.
  const StepResult& induce_product();
  /// Δ_H and g_1^2; requires a target coproduct.
  const StepResult& induce_coproduct();
  /// ω^{1,m} and g_m^1 for m >= 3.
  const StepResult& operadic_step(int m);
  /// ω^{2,2} and g_2^2 over ℤ2.
  const StepResult& omega22_step();
  const std::map<Arity, StepResult>& steps() const { return steps_; }

  /// The Stasheff obstruction for arity k from the stored operations.
  MultiMap stasheff_obstruction(int k) const;
  /// Target-side terms of the morphism identity at arity k (n = 1).
  MultiMap morphism_terms(int k) const;
  MultiMap g_tilde(const MultiMap& on_homology) const;

  std::vector<CheckEntry> a_infinity_check(int max_arity) const;
  std::vector<CheckEntry> morphism_check() const;
  IsoReport induced_iso_check(const Arity& a, int shift, SourceModel model) const;

 private:
  const StepResult& solve_step(const Arity& a, MultiMap z, MultiMap phi);
  const std::map<std::string, std::string>* pin(const std::string& name) const;
  void build_homology();

  TargetAlgebra target_;
  Pins pins_;
  SourceModel model_;
  SpacePtr homology_;
  MultiMap g_;
  std::map<Arity, MultiMap> ops_;
  std::map<Arity, MultiMap> homotopies_;
  std::map<Arity, StepResult> steps_;
  std::vector<Choice> choices_;
};

/// Exhaustive search for f: B^k -> H^k and s with x - g f(x) = s(dx) + d(s x).
InverseSearch no_homotopy_inverse_check(const Complex& target, const Complex& homology, const GroupHom& g_k,
                                        int degree, const Vec& x);

}  // namespace ainfty
