#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ainfty/abelian.hpp"
#include "ainfty/graded.hpp"

namespace ainfty {

/// A word in the generators; the empty word is the unit.
using Word = std::vector<std::size_t>;
/// Integer combination of words (coefficients not yet reduced).
using AlgElement = std::map<Word, Int>;

void add_into(AlgElement& acc, const AlgElement& e, const Int& factor = 1);
AlgElement concatenate(const AlgElement& a, const AlgElement& b);
AlgElement unit_element();

struct GenSpec {
  std::string name;
  int degree = 0;
  Int order = 0;
  AlgElement differential;
};

struct Annihilator {
  enum class Side { Left, Right, Both };
  std::size_t generator = 0;
  /// Left: t·w lies in the ideal; Right: w·t; Both: either, for every |t| > 0.
  Side side = Side::Both;
};

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& text, std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Generators, relations and annihilation rules of a noncommutative DGA
/// over Z (unit_order 0) or Z_k.
class AlgebraPresentation {
 public:
  explicit AlgebraPresentation(Int unit_order = 0) : unit_order_(std::move(unit_order)) {}

  std::size_t add_generator(std::string name, int degree, const Int& order);
  void set_differential(std::size_t generator, AlgElement d);
  void add_relation(AlgElement r);
  void add_annihilator(std::size_t generator, Annihilator::Side side);

  const std::vector<GenSpec>& generators() const { return generators_; }
  const std::vector<AlgElement>& relations() const { return relations_; }
  const std::vector<Annihilator>& annihilators() const { return annihilators_; }
  const Int& unit_order() const { return unit_order_; }

  std::optional<std::size_t> find(const std::string& name) const;
  int degree(const Word& w) const;
  /// ℤ_{gcd of member orders}; 0 for ℤ.
  Int order(const Word& w) const;
  /// Common degree of the nonzero terms, nullopt if there are none.
  /// Throws on inhomogeneous input.
  std::optional<int> degree(const AlgElement& e) const;

  /// Parses "a^2 + x", "2c", "(ac+ca)^2", "1" with greedy name matching.
  AlgElement parse(const std::string& text) const;
  std::string format(const Word& w) const;
  std::string format(const AlgElement& e) const;

  /// Degree, homogeneity and order-compatibility diagnostics.
  std::vector<std::string> validate() const;

  /// Leibniz extension of the generator differentials (unreduced).
  AlgElement derivation(const AlgElement& e) const;

 private:
  Int unit_order_;
  std::vector<GenSpec> generators_;
  std::vector<AlgElement> relations_;
  std::vector<Annihilator> annihilators_;
};

struct ClosureViolation {
  int degree;
  std::string detail;
};

/// The quotient T(generators)/ideal realized degreewise over [0, D].
class QuotientDGA {
 public:
  QuotientDGA(AlgebraPresentation presentation, int max_degree);

  const AlgebraPresentation& presentation() const { return presentation_; }
  int max_degree() const { return max_degree_; }

  /// All words of the given degree in lexicographic order.
  std::vector<Word> free_basis(int degree) const;
  /// Words not killed outright by a monomial relation or an annihilator.
  const std::vector<Word>& live_words(int degree) const;
  bool is_dead(const Word& w) const;

  bool in_ideal(const AlgElement& e) const;
  const FpGroup& group(int degree) const;

  AlgElement normal_form(const AlgElement& e) const;
  Vec coordinates(const AlgElement& e) const;
  AlgElement lift(int degree, const Vec& coords) const;

  AlgElement multiply(const AlgElement& a, const AlgElement& b) const;
  AlgElement differential(const AlgElement& e) const;

  std::vector<ClosureViolation> check_ideal_closure() const;

  /// The quotient as a complex; `reduced` drops degree 0.
  Complex complex(bool reduced = false) const;
  /// The product as a (2,1) map on a space built from complex().
  MultiMap product(const SpacePtr& space) const;

 private:
  struct Degree {
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
    Lattice ideal;
    std::vector<AlgElement> ideal_generators;
    Presentation quotient;
  };

  Vec word_vector(int degree, const AlgElement& e) const;
  AlgElement from_word_vector(int degree, const Vec& v) const;
  const Degree& at(int degree) const;

  AlgebraPresentation presentation_;
  int max_degree_;
  std::vector<Word> dead_patterns_;
  std::vector<Degree> degrees_;
};

}  // namespace ainfty
