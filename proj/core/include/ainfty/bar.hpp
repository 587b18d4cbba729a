#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ainfty/graded.hpp"

namespace ainfty {

/// ℤ2 combination of basis indices of a truncated algebra.
using Z2Combo = std::set<std::size_t>;

/// Finite-dimensional DGA over ℤ2 given by tables, with a partial cup-one
/// product. Unspecified products, differentials and cup-one values are zero.
class TruncatedDga {
 public:
  struct Element {
    std::string name;
    int degree;
  };

  /// Adds the unit "1" in degree 0 as element 0.
  explicit TruncatedDga(int max_degree);

  std::size_t add_element(std::string name, int degree);
  void set_product(std::size_t x, std::size_t y, Z2Combo value);
  void set_differential(std::size_t x, Z2Combo value);
  void set_cup1(std::size_t x, std::size_t y, Z2Combo value);

  int max_degree() const { return max_degree_; }
  std::size_t unit() const { return 0; }
  std::size_t size() const { return elements_.size(); }
  const Element& element(std::size_t i) const { return elements_.at(i); }
  int degree(std::size_t i) const { return elements_.at(i).degree; }
  std::optional<std::size_t> find(const std::string& name) const;

  Z2Combo product(std::size_t x, std::size_t y) const;
  Z2Combo product(const Z2Combo& x, const Z2Combo& y) const;
  Z2Combo differential(std::size_t x) const;
  Z2Combo differential(const Z2Combo& x) const;
  Z2Combo cup1(std::size_t x, std::size_t y) const;

  /// Connectivity, degree, associativity, unit, Leibniz and d² diagnostics.
  std::vector<std::string> validate() const;

  std::string format(const Z2Combo& c) const;

 private:
  int max_degree_;
  std::vector<Element> elements_;
  std::map<std::pair<std::size_t, std::size_t>, Z2Combo> products_;
  std::map<std::size_t, Z2Combo> differentials_;
  std::map<std::pair<std::size_t, std::size_t>, Z2Combo> cup1_;
};

/// [x1|...|xn] as algebra basis indices; empty is [ ].
using BarWord = std::vector<std::size_t>;
/// ℤ2 combination of bar words.
using BarElement = std::set<BarWord>;
using BarPair = std::pair<BarWord, BarWord>;
/// ℤ2 combination in BA ⊗ BA.
using BarTensor = std::set<BarPair>;

void toggle(BarElement& acc, const BarWord& w);
void toggle(BarTensor& acc, const BarPair& p);
BarElement operator+(const BarElement& a, const BarElement& b);
BarTensor operator+(const BarTensor& a, const BarTensor& b);

/// Bar construction of a truncated DGA with deconcatenation coproduct and
/// the multiplication assembled from the cup-one table.
class BarConstruction {
 public:
  BarConstruction(TruncatedDga algebra, int max_degree);

  const TruncatedDga& algebra() const { return algebra_; }
  int max_degree() const { return max_degree_; }

  int degree(const BarWord& w) const;
  /// Basis words of a degree in the window, sorted.
  const std::vector<BarWord>& words(int degree) const;
  std::size_t index_of(const BarWord& w) const;

  BarElement diff(const BarWord& w) const;
  BarElement diff(const BarElement& e) const;
  BarTensor diff(const BarTensor& t) const;

  BarTensor coproduct(const BarWord& w) const;
  BarTensor coproduct(const BarElement& e) const;
  /// Δ minus the two counit terms.
  BarTensor reduced_coproduct(const BarWord& w) const;

  /// The algebra element attached to a pair of words: x for [x]⊗[ ] and
  /// [ ]⊗[x], the cup-one value for [x]⊗[y], zero otherwise.
  Z2Combo phi(const BarWord& u, const BarWord& v) const;

  BarElement mu(const BarWord& u, const BarWord& v) const;
  BarElement mu(const BarTensor& t) const;

  std::string format(const BarWord& w) const;
  std::string format(const BarElement& e) const;
  std::string format(const BarTensor& t) const;
  BarWord parse_word(const std::string& text) const;
  BarElement parse(const std::string& text) const;

  /// BA over the window as a complex of ℤ2-vector spaces.
  Complex complex() const;
  Vec to_vector(int degree, const BarElement& e) const;
  BarElement from_vector(int degree, const Vec& v) const;

  /// μ: BA⊗BA -> BA and Δ: BA -> BA⊗BA on a space built from complex().
  MultiMap mu_map(const SpacePtr& space) const;
  MultiMap coproduct_map(const SpacePtr& space) const;

  // Identity checks over all basis inputs of total degree <= bound.
  // Each returns human-readable violations.
  std::vector<std::string> check_d_squared(int bound) const;
  std::vector<std::string> check_coassociative(int bound) const;
  std::vector<std::string> check_counit(int bound) const;
  std::vector<std::string> check_coproduct_chain_map(int bound) const;
  std::vector<std::string> check_mu_unit(int bound) const;
  std::vector<std::string> check_mu_chain_map(int bound) const;
  std::vector<std::string> check_mu_associative(int bound) const;
  std::vector<std::string> check_hopf(int bound) const;
  std::vector<std::string> check_letters_primitive() const;

  /// Words of any degree <= bound (not limited by the window).
  std::vector<BarWord> words_up_to(int bound) const;

 private:
  void extend_words(int bound) const;

  TruncatedDga algebra_;
  int max_degree_;
  std::vector<std::size_t> letters_;
  mutable std::mutex mutex_;
  mutable std::deque<std::vector<BarWord>> words_;  // stable references
  mutable std::map<BarWord, std::size_t> index_;
  mutable std::map<BarPair, BarElement> mu_cache_;
};

}  // namespace ainfty
