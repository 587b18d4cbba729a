#include "ainfty/tensoralg.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>

namespace ainfty {

void add_into(AlgElement& acc, const AlgElement& e, const Int& factor) {
  for (const auto& [w, c] : e) {
    Int& slot = acc[w];
    slot += factor * c;
    if (slot == 0) acc.erase(w);
  }
}

AlgElement concatenate(const AlgElement& a, const AlgElement& b) {
  AlgElement out;
  for (const auto& [u, x] : a) {
    for (const auto& [v, y] : b) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      Int& slot = out[w];
      slot += x * y;
      if (slot == 0) out.erase(w);
    }
  }
  return out;
}

AlgElement unit_element() { return AlgElement{{Word{}, Int(1)}}; }

ExpressionError::ExpressionError(const std::string& text, std::size_t position, const std::string& what)
    : std::invalid_argument("in \"" + text + "\" at position " + std::to_string(position) + ": " + what),
      position_(position) {}

// ---------------------------------------------------- AlgebraPresentation

std::size_t AlgebraPresentation::add_generator(std::string name, int degree, const Int& order) {
  if (name.empty()) throw std::invalid_argument("generator name is empty");
  if (find(name)) throw std::invalid_argument("generator " + name + " declared twice");
  if (degree <= 0) throw std::invalid_argument("generator " + name + " must have positive degree");
  if (order < 0) throw std::invalid_argument("generator " + name + " has negative order");
  generators_.push_back({std::move(name), degree, order, {}});
  return generators_.size() - 1;
}

void AlgebraPresentation::set_differential(std::size_t generator, AlgElement d) {
  generators_.at(generator).differential = std::move(d);
}

void AlgebraPresentation::add_relation(AlgElement r) { relations_.push_back(std::move(r)); }

void AlgebraPresentation::add_annihilator(std::size_t generator, Annihilator::Side side) {
  if (generator >= generators_.size()) throw std::out_of_range("annihilator: unknown generator");
  annihilators_.push_back({generator, side});
}

std::optional<std::size_t> AlgebraPresentation::find(const std::string& name) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].name == name) return i;
  }
  return std::nullopt;
}

int AlgebraPresentation::degree(const Word& w) const {
  int d = 0;
  for (std::size_t g : w) d += generators_.at(g).degree;
  return d;
}

Int AlgebraPresentation::order(const Word& w) const {
  Int o = unit_order_;
  for (std::size_t g : w) o = order_gcd(o, generators_.at(g).order);
  return o;
}

std::optional<int> AlgebraPresentation::degree(const AlgElement& e) const {
  std::optional<int> d;
  for (const auto& [w, c] : e) {
    if (c == 0) continue;
    int k = degree(w);
    if (d && *d != k) throw std::invalid_argument("element " + format(e) + " is not homogeneous");
    d = k;
  }
  return d;
}

namespace {

class ExpressionParser {
 public:
  ExpressionParser(const AlgebraPresentation& p, const std::string& text) : p_(p), s_(text) {}

  AlgElement parse() {
    AlgElement e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ExpressionError(s_, pos_, what); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return Int(s_.substr(start, pos_ - start));
  }

  AlgElement expr() {
    AlgElement acc;
    Int sign = 1;
    if (peek('+')) {
      ++pos_;
    } else if (peek('-')) {
      ++pos_;
      sign = -1;
    }
    add_into(acc, term(), sign);
    for (;;) {
      if (peek('+')) {
        ++pos_;
        add_into(acc, term(), 1);
      } else if (peek('-')) {
        ++pos_;
        add_into(acc, term(), -1);
      } else {
        return acc;
      }
    }
  }

  bool factor_ahead() {
    skip();
    if (pos_ >= s_.size()) return false;
    if (s_[pos_] == '(') return true;
    return match_name().has_value();
  }

  AlgElement term() {
    skip();
    Int coef = 1;
    bool have_coef = false;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      coef = integer();
      have_coef = true;
      if (peek('*')) ++pos_;
    }
    AlgElement e = unit_element();
    bool have_factor = false;
    while (factor_ahead()) {
      e = concatenate(e, factor());
      have_factor = true;
      if (peek('*')) {
        ++pos_;
        if (!factor_ahead()) fail("expected a factor after '*'");
      }
    }
    if (!have_coef && !have_factor) fail("expected a term");
    AlgElement out;
    add_into(out, e, coef);
    return out;
  }

  AlgElement factor() {
    AlgElement base;
    if (peek('(')) {
      ++pos_;
      base = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
    } else {
      auto m = match_name();
      if (!m) fail("unknown generator");
      pos_ += p_.generators()[*m].name.size();
      base = AlgElement{{Word{*m}, Int(1)}};
    }
    if (peek('^')) {
      ++pos_;
      Int n = integer();
      AlgElement out = unit_element();
      for (Int k = 0; k < n; ++k) out = concatenate(out, base);
      return out;
    }
    return base;
  }

  std::optional<std::size_t> match_name() const {
    std::optional<std::size_t> best;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < p_.generators().size(); ++i) {
      const std::string& n = p_.generators()[i].name;
      if (n.size() > best_len && s_.compare(pos_, n.size(), n) == 0) {
        best = i;
        best_len = n.size();
      }
    }
    return best;
  }

  const AlgebraPresentation& p_;
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

AlgElement AlgebraPresentation::parse(const std::string& text) const {
  return ExpressionParser(*this, text).parse();
}

std::string AlgebraPresentation::format(const Word& w) const {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    out += generators_.at(w[i]).name;
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string AlgebraPresentation::format(const AlgElement& e) const {
  std::string out;
  for (const auto& [w, c] : e) {
    if (c == 0) continue;
    Int a = c < 0 ? Int(-c) : c;
    if (!out.empty()) out += c < 0 ? "-" : "+";
    else if (c < 0) out += "-";
    if (a != 1) out += to_string(a);
    if (a == 1 || !w.empty()) out += (a != 1 && w.empty()) ? "" : format(w);
  }
  return out.empty() ? "0" : out;
}

AlgElement AlgebraPresentation::derivation(const AlgElement& e) const {
  AlgElement out;
  for (const auto& [w, c] : e) {
    int left = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const GenSpec& g = generators_.at(w[i]);
      const int sign = koszul_sign(left);
      for (const auto& [dw, dc] : g.differential) {
        Word nw(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        nw.insert(nw.end(), dw.begin(), dw.end());
        nw.insert(nw.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 1), w.end());
        Int& slot = out[nw];
        slot += sign * c * dc;
        if (slot == 0) out.erase(nw);
      }
      left += g.degree;
    }
  }
  return out;
}

std::vector<std::string> AlgebraPresentation::validate() const {
  std::vector<std::string> diags;
  for (const GenSpec& g : generators_) {
    try {
      auto d = degree(g.differential);
      if (d && *d != g.degree + 1) {
        diags.push_back("differential of " + g.name + " has degree " + std::to_string(*d) +
                        ", expected " + std::to_string(g.degree + 1));
      }
    } catch (const std::invalid_argument& e) {
      diags.push_back("differential of " + g.name + ": " + e.what());
    }
    if (g.order != 0) {
      for (const auto& [w, c] : g.differential) {
        Int o = order(w);
        if (o == 0 || reduce_mod(g.order * c, o) != 0) {
          diags.push_back("differential of " + g.name + " does not respect its order " +
                          to_string(g.order) + " (term " + format(w) + ")");
        }
      }
    }
  }
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    try {
      if (!degree(relations_[i])) diags.push_back("relation " + std::to_string(i) + " is zero");
    } catch (const std::invalid_argument& e) {
      diags.push_back("relation " + std::to_string(i) + ": " + e.what());
    }
  }
  return diags;
}

// ------------------------------------------------------------ QuotientDGA

namespace {

bool contains_pattern(const Word& w, const Word& pattern) {
  if (pattern.empty() || pattern.size() > w.size()) return false;
  return std::search(w.begin(), w.end(), pattern.begin(), pattern.end()) != w.end();
}

}  // namespace

QuotientDGA::QuotientDGA(AlgebraPresentation presentation, int max_degree)
    : presentation_(std::move(presentation)), max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("QuotientDGA: negative window");
  auto diags = presentation_.validate();
  if (!diags.empty()) throw std::invalid_argument("QuotientDGA: " + diags.front());

  std::vector<const AlgElement*> general;
  for (const AlgElement& r : presentation_.relations()) {
    if (r.size() == 1) {
      const auto& [w, c] = *r.begin();
      Int o = presentation_.order(w);
      Int g = order_gcd(c, o);
      if (g == 1) {
        dead_patterns_.push_back(w);
        continue;
      }
    }
    general.push_back(&r);
  }

  degrees_.resize(static_cast<std::size_t>(max_degree) + 1);
  const auto& gens = presentation_.generators();
  // live words by degree; a suffix of a live word is live, so prepending
  // letters to live words reaches every live word
  std::vector<std::vector<Word>> live(static_cast<std::size_t>(max_degree) + 1);
  live[0].push_back(Word{});
  for (int k = 1; k <= max_degree; ++k) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const int rest = k - gens[g].degree;
      if (rest < 0) continue;
      for (const Word& t : live[static_cast<std::size_t>(rest)]) {
        Word w{g};
        w.insert(w.end(), t.begin(), t.end());
        if (!is_dead(w)) live[static_cast<std::size_t>(k)].push_back(std::move(w));
      }
    }
  }
  for (int k = 0; k <= max_degree; ++k) {
    Degree& d = degrees_[static_cast<std::size_t>(k)];
    d.words = std::move(live[static_cast<std::size_t>(k)]);
    std::sort(d.words.begin(), d.words.end());
    for (std::size_t i = 0; i < d.words.size(); ++i) d.index.emplace(d.words[i], i);
    d.ideal = Lattice(d.words.size());
    for (std::size_t i = 0; i < d.words.size(); ++i) {
      Int o = presentation_.order(d.words[i]);
      if (o != 0) d.ideal.add(SparseVec{{i, o}});
    }
  }
  for (int k = 0; k <= max_degree; ++k) {
    Degree& d = degrees_[static_cast<std::size_t>(k)];
    for (const AlgElement* r : general) {
      const int dr = *presentation_.degree(*r);
      for (int i = 0; i + dr <= k; ++i) {
        for (const Word& u : degrees_[static_cast<std::size_t>(i)].words) {
          for (const Word& v : degrees_[static_cast<std::size_t>(k - dr - i)].words) {
            AlgElement inst = concatenate(concatenate(AlgElement{{u, Int(1)}}, *r),
                                          AlgElement{{v, Int(1)}});
            Vec vec = word_vector(k, inst);
            d.ideal.add(vec);
            d.ideal_generators.push_back(std::move(inst));
          }
        }
      }
    }
    d.ideal.normalize();
    d.quotient = present(d.ideal);
  }
}

bool QuotientDGA::is_dead(const Word& w) const {
  for (const Word& p : dead_patterns_) {
    if (contains_pattern(w, p)) return true;
  }
  for (const Annihilator& a : presentation_.annihilators()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != a.generator) continue;
      switch (a.side) {
        case Annihilator::Side::Both:
          if (w.size() >= 2) return true;
          break;
        case Annihilator::Side::Left:
          if (i > 0) return true;
          break;
        case Annihilator::Side::Right:
          if (i + 1 < w.size()) return true;
          break;
      }
    }
  }
  return false;
}

std::vector<Word> QuotientDGA::free_basis(int degree) const {
  std::vector<Word> out;
  if (degree < 0) return out;
  const auto& gens = presentation_.generators();
  std::function<void(Word&, int)> rec = [&](Word& cur, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (gens[g].degree > left) continue;
      cur.push_back(g);
      rec(cur, left - gens[g].degree);
      cur.pop_back();
    }
  };
  Word cur;
  rec(cur, degree);
  return out;
}

const std::vector<Word>& QuotientDGA::live_words(int degree) const { return at(degree).words; }

const QuotientDGA::Degree& QuotientDGA::at(int degree) const {
  if (degree < 0 || degree > max_degree_) {
    throw std::out_of_range("QuotientDGA: degree " + std::to_string(degree) + " outside window [0, " +
                            std::to_string(max_degree_) + "]");
  }
  return degrees_[static_cast<std::size_t>(degree)];
}

Vec QuotientDGA::word_vector(int degree, const AlgElement& e) const {
  const Degree& d = at(degree);
  Vec v(d.words.size(), Int(0));
  for (const auto& [w, c] : e) {
    if (c == 0) continue;
    if (presentation_.degree(w) != degree) {
      throw std::invalid_argument("element " + presentation_.format(e) + " is not homogeneous of degree " +
                                  std::to_string(degree));
    }
    auto it = d.index.find(w);
    if (it == d.index.end()) continue;  // dead word
    v[it->second] += c;
  }
  return v;
}

AlgElement QuotientDGA::from_word_vector(int degree, const Vec& v) const {
  const Degree& d = at(degree);
  AlgElement out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out.emplace(d.words[i], v[i]);
  }
  return out;
}

bool QuotientDGA::in_ideal(const AlgElement& e) const {
  auto k = presentation_.degree(e);
  if (!k) return true;
  return at(*k).ideal.contains(word_vector(*k, e));
}

const FpGroup& QuotientDGA::group(int degree) const { return at(degree).quotient.group; }

AlgElement QuotientDGA::normal_form(const AlgElement& e) const {
  auto k = presentation_.degree(e);
  if (!k) return {};
  return from_word_vector(*k, at(*k).ideal.reduce(word_vector(*k, e)));
}

Vec QuotientDGA::coordinates(const AlgElement& e) const {
  auto k = presentation_.degree(e);
  if (!k) throw std::invalid_argument("QuotientDGA::coordinates: zero element has no degree");
  const Degree& d = at(*k);
  return d.quotient.group.reduce(d.quotient.to_group.apply(word_vector(*k, e)));
}

AlgElement QuotientDGA::lift(int degree, const Vec& coords) const {
  const Degree& d = at(degree);
  return from_word_vector(degree, d.ideal.reduce(d.quotient.from_group.apply(coords)));
}

AlgElement QuotientDGA::multiply(const AlgElement& a, const AlgElement& b) const {
  AlgElement p = concatenate(a, b);
  auto k = presentation_.degree(p);
  if (k && *k > max_degree_) throw std::out_of_range("QuotientDGA::multiply: product leaves the window");
  return normal_form(p);
}

AlgElement QuotientDGA::differential(const AlgElement& e) const {
  auto k = presentation_.degree(e);
  if (k && *k >= max_degree_) throw std::out_of_range("QuotientDGA::differential: result leaves the window");
  return normal_form(presentation_.derivation(e));
}

std::vector<ClosureViolation> QuotientDGA::check_ideal_closure() const {
  std::vector<ClosureViolation> out;
  for (int k = 0; k < max_degree_; ++k) {
    const Degree& d = at(k);
    auto check = [&](const AlgElement& e, const std::string& what) {
      AlgElement de = presentation_.derivation(e);
      if (!in_ideal(de)) out.push_back({k, "d(" + what + ") = " + presentation_.format(de) + " is not in the ideal"});
    };
    for (const AlgElement& g : d.ideal_generators) check(g, presentation_.format(g));
    for (const Word& w : d.words) {
      Int o = presentation_.order(w);
      if (o != 0) check(AlgElement{{w, o}}, to_string(o) + presentation_.format(w));
    }
    for (const Word& w : free_basis(k)) {
      if (is_dead(w)) check(AlgElement{{w, Int(1)}}, presentation_.format(w));
    }
  }
  return out;
}

Complex QuotientDGA::complex(bool reduced) const {
  Complex c(max_degree_);
  for (int k = reduced ? 1 : 0; k <= max_degree_; ++k) {
    const FpGroup& g = group(k);
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < g.rank(); ++j) labels.push_back(presentation_.format(lift(k, g.generator(j))));
    c.set_group(k, g.relabeled(std::move(labels)));
  }
  for (int k = reduced ? 1 : 0; k < max_degree_; ++k) {
    const FpGroup& src = c.group(k);
    const FpGroup& dst = c.group(k + 1);
    IntMatrix m(dst.rank(), src.rank());
    for (std::size_t j = 0; j < src.rank(); ++j) {
      AlgElement de = presentation_.derivation(lift(k, src.generator(j)));
      if (de.empty()) continue;
      Vec col = coordinates(de);
      for (std::size_t i = 0; i < col.size(); ++i) m(i, j) = col[i];
    }
    c.set_differential(k, GroupHom(src, dst, std::move(m)));
  }
  auto self = std::make_shared<const QuotientDGA>(*this);
  c.set_formatter([self, reduced](int degree, const Vec& x) {
    if ((reduced && degree == 0) || !self->group(degree).rank()) return std::string("0");
    return self->presentation().format(self->lift(degree, x));
  });
  return c;
}

MultiMap QuotientDGA::product(const SpacePtr& space) const {
  MultiMap mu(space, space, 2, 1, 0);
  const TensorPower& p2 = space->power(2);
  for (int k = 0; k <= std::min(max_degree_, space->max_degree()); ++k) {
    const auto& basis = p2.basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const TensorIndex& t = basis[i];
      AlgElement a = lift(t[0].degree, space->base().group(t[0].degree).generator(t[0].generator));
      AlgElement b = lift(t[1].degree, space->base().group(t[1].degree).generator(t[1].generator));
      AlgElement ab = concatenate(a, b);
      if (!presentation_.degree(ab)) continue;
      mu.set_column(k, i, coordinates(ab));
    }
  }
  return mu;
}

}  // namespace ainfty
