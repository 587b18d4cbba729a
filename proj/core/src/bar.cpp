#include "ainfty/bar.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ainfty {

namespace {

void toggle(Z2Combo& acc, std::size_t i) {
  if (!acc.erase(i)) acc.insert(i);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

// ------------------------------------------------------------- TruncatedDga

TruncatedDga::TruncatedDga(int max_degree) : max_degree_(max_degree) {
  elements_.push_back({"1", 0});
}

std::size_t TruncatedDga::add_element(std::string name, int degree) {
  if (degree <= 0 || degree > max_degree_) {
    throw std::invalid_argument("element " + name + " has degree outside 1.." + std::to_string(max_degree_));
  }
  if (find(name)) throw std::invalid_argument("duplicate element " + name);
  elements_.push_back({std::move(name), degree});
  return elements_.size() - 1;
}

void TruncatedDga::set_product(std::size_t x, std::size_t y, Z2Combo value) {
  if (x == unit() || y == unit()) throw std::invalid_argument("products with the unit are fixed");
  products_[{x, y}] = std::move(value);
}

void TruncatedDga::set_differential(std::size_t x, Z2Combo value) { differentials_[x] = std::move(value); }

void TruncatedDga::set_cup1(std::size_t x, std::size_t y, Z2Combo value) { cup1_[{x, y}] = std::move(value); }

std::optional<std::size_t> TruncatedDga::find(const std::string& name) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].name == name) return i;
  }
  return std::nullopt;
}

Z2Combo TruncatedDga::product(std::size_t x, std::size_t y) const {
  if (x == unit()) return {y};
  if (y == unit()) return {x};
  auto it = products_.find({x, y});
  return it == products_.end() ? Z2Combo{} : it->second;
}

Z2Combo TruncatedDga::product(const Z2Combo& x, const Z2Combo& y) const {
  Z2Combo out;
  for (std::size_t i : x) {
    for (std::size_t j : y) {
      for (std::size_t k : product(i, j)) toggle(out, k);
    }
  }
  return out;
}

Z2Combo TruncatedDga::differential(std::size_t x) const {
  auto it = differentials_.find(x);
  return it == differentials_.end() ? Z2Combo{} : it->second;
}

Z2Combo TruncatedDga::differential(const Z2Combo& x) const {
  Z2Combo out;
  for (std::size_t i : x) {
    for (std::size_t k : differential(i)) toggle(out, k);
  }
  return out;
}

Z2Combo TruncatedDga::cup1(std::size_t x, std::size_t y) const {
  auto it = cup1_.find({x, y});
  return it == cup1_.end() ? Z2Combo{} : it->second;
}

std::vector<std::string> TruncatedDga::validate() const {
  std::vector<std::string> out;
  const std::size_t n = elements_.size();
  auto check_degree = [&](const Z2Combo& c, int expected, const std::string& what) {
    for (std::size_t k : c) {
      if (k >= n) {
        out.push_back(what + ": unknown element index");
      } else if (elements_[k].degree != expected) {
        out.push_back(what + ": " + elements_[k].name + " has degree " + std::to_string(elements_[k].degree) +
                      ", expected " + std::to_string(expected));
      }
    }
  };
  for (const auto& e : elements_) {
    if (e.degree == 1) out.push_back("element " + e.name + " in degree 1: not 1-connected");
  }
  for (const auto& [key, value] : products_) {
    check_degree(value, degree(key.first) + degree(key.second),
                 "product " + elements_[key.first].name + "*" + elements_[key.second].name);
  }
  for (const auto& [key, value] : differentials_) {
    check_degree(value, degree(key) + 1, "differential of " + elements_[key].name);
  }
  for (const auto& [key, value] : cup1_) {
    check_degree(value, degree(key.first) + degree(key.second) - 1,
                 "cup-one " + elements_[key.first].name + "," + elements_[key.second].name);
  }
  if (!out.empty()) return out;
  for (std::size_t x = 0; x < n; ++x) {
    if (!differential(differential(Z2Combo{x})).empty()) out.push_back("d^2 != 0 on " + elements_[x].name);
    for (std::size_t y = 0; y < n; ++y) {
      // Leibniz over ℤ2: d(xy) = (dx)y + x(dy)
      Z2Combo lhs = differential(product(x, y));
      Z2Combo rhs = product(differential(x), Z2Combo{y});
      for (std::size_t k : product(Z2Combo{x}, differential(y))) toggle(rhs, k);
      if (lhs != rhs) out.push_back("Leibniz fails on " + elements_[x].name + "," + elements_[y].name);
      for (std::size_t z = 0; z < n; ++z) {
        if (product(product(Z2Combo{x}, Z2Combo{y}), Z2Combo{z}) !=
            product(Z2Combo{x}, product(Z2Combo{y}, Z2Combo{z}))) {
          out.push_back("associativity fails on " + elements_[x].name + "," + elements_[y].name + "," +
                        elements_[z].name);
        }
      }
    }
  }
  return out;
}

std::string TruncatedDga::format(const Z2Combo& c) const {
  if (c.empty()) return "0";
  std::vector<std::string> parts;
  for (std::size_t i : c) parts.push_back(elements_.at(i).name);
  return join(parts, "+");
}

// ------------------------------------------------------------- bar elements

void toggle(BarElement& acc, const BarWord& w) {
  if (!acc.erase(w)) acc.insert(w);
}

void toggle(BarTensor& acc, const BarPair& p) {
  if (!acc.erase(p)) acc.insert(p);
}

BarElement operator+(const BarElement& a, const BarElement& b) {
  BarElement out = a;
  for (const auto& w : b) toggle(out, w);
  return out;
}

BarTensor operator+(const BarTensor& a, const BarTensor& b) {
  BarTensor out = a;
  for (const auto& p : b) toggle(out, p);
  return out;
}

// ---------------------------------------------------------- BarConstruction

BarConstruction::BarConstruction(TruncatedDga algebra, int max_degree)
    : algebra_(std::move(algebra)), max_degree_(max_degree) {
  for (std::size_t i = 0; i < algebra_.size(); ++i) {
    if (i == algebra_.unit()) continue;
    if (algebra_.degree(i) < 2) throw std::invalid_argument("bar construction needs a 1-connected algebra");
    letters_.push_back(i);
  }
  extend_words(max_degree_);
}

int BarConstruction::degree(const BarWord& w) const {
  int d = 0;
  for (std::size_t x : w) d += algebra_.degree(x) - 1;
  return d;
}

void BarConstruction::extend_words(int bound) const {
  std::lock_guard lock(mutex_);
  for (int k = static_cast<int>(words_.size()); k <= bound; ++k) {
    std::vector<BarWord> here;
    if (k == 0) here.push_back({});
    for (std::size_t x : letters_) {
      int rest = k - (algebra_.degree(x) - 1);
      if (rest < 0) continue;
      for (const BarWord& w : words_[rest]) {
        BarWord v{x};
        v.insert(v.end(), w.begin(), w.end());
        here.push_back(std::move(v));
      }
    }
    std::sort(here.begin(), here.end());
    for (std::size_t i = 0; i < here.size(); ++i) index_[here[i]] = i;
    words_.push_back(std::move(here));
  }
}

const std::vector<BarWord>& BarConstruction::words(int degree) const {
  if (degree < 0) throw std::out_of_range("negative bar degree");
  extend_words(degree);
  std::lock_guard lock(mutex_);
  return words_[degree];
}

std::vector<BarWord> BarConstruction::words_up_to(int bound) const {
  std::vector<BarWord> out;
  for (int k = 0; k <= bound; ++k) {
    const auto& w = words(k);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

std::size_t BarConstruction::index_of(const BarWord& w) const {
  extend_words(degree(w));
  std::lock_guard lock(mutex_);
  return index_.at(w);
}

BarElement BarConstruction::diff(const BarWord& w) const {
  BarElement out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t y : algebra_.differential(w[i])) {
      BarWord v = w;
      v[i] = y;
      toggle(out, v);
    }
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    for (std::size_t y : algebra_.product(w[i], w[i + 1])) {
      BarWord v(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      v.push_back(y);
      v.insert(v.end(), w.begin() + static_cast<std::ptrdiff_t>(i) + 2, w.end());
      toggle(out, v);
    }
  }
  return out;
}

BarElement BarConstruction::diff(const BarElement& e) const {
  BarElement out;
  for (const auto& w : e) out = out + diff(w);
  return out;
}

BarTensor BarConstruction::diff(const BarTensor& t) const {
  BarTensor out;
  for (const auto& [u, v] : t) {
    for (const auto& du : diff(u)) toggle(out, {du, v});
    for (const auto& dv : diff(v)) toggle(out, {u, dv});
  }
  return out;
}

BarTensor BarConstruction::coproduct(const BarWord& w) const {
  BarTensor out;
  for (std::size_t i = 0; i <= w.size(); ++i) {
    toggle(out, {BarWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)),
                 BarWord(w.begin() + static_cast<std::ptrdiff_t>(i), w.end())});
  }
  return out;
}

BarTensor BarConstruction::coproduct(const BarElement& e) const {
  BarTensor out;
  for (const auto& w : e) out = out + coproduct(w);
  return out;
}

BarTensor BarConstruction::reduced_coproduct(const BarWord& w) const {
  BarTensor out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    toggle(out, {BarWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)),
                 BarWord(w.begin() + static_cast<std::ptrdiff_t>(i), w.end())});
  }
  return out;
}

Z2Combo BarConstruction::phi(const BarWord& u, const BarWord& v) const {
  if (u.size() == 1 && v.empty()) return {u[0]};
  if (u.empty() && v.size() == 1) return {v[0]};
  if (u.size() == 1 && v.size() == 1) return algebra_.cup1(u[0], v[0]);
  return {};
}

// μ(u⊗v) sums, over splittings of u and v into k+1 consecutive block pairs
// (never both empty), the word of φ-values of the blocks. φ only sees blocks
// of total length 1, or [x]⊗[y], so the sum is a lattice-path recursion.
BarElement BarConstruction::mu(const BarWord& u, const BarWord& v) const {
  {
    std::lock_guard lock(mutex_);
    auto it = mu_cache_.find({u, v});
    if (it != mu_cache_.end()) return it->second;
  }
  const std::size_t n = u.size();
  const std::size_t m = v.size();
  std::vector<std::vector<BarElement>> table(n + 1, std::vector<BarElement>(m + 1));
  table[n][m] = {BarWord{}};
  auto prepend = [](BarElement& acc, std::size_t letter, const BarElement& rest) {
    for (const BarWord& w : rest) {
      BarWord x{letter};
      x.insert(x.end(), w.begin(), w.end());
      toggle(acc, x);
    }
  };
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) continue;
      BarElement& here = table[i][j];
      if (i < n) prepend(here, u[i], table[i + 1][j]);
      if (j < m) prepend(here, v[j], table[i][j + 1]);
      if (i < n && j < m) {
        for (std::size_t y : algebra_.cup1(u[i], v[j])) prepend(here, y, table[i + 1][j + 1]);
      }
    }
  }
  std::lock_guard lock(mutex_);
  return mu_cache_.emplace(BarPair{u, v}, table[0][0]).first->second;
}

BarElement BarConstruction::mu(const BarTensor& t) const {
  BarElement out;
  for (const auto& [u, v] : t) out = out + mu(u, v);
  return out;
}

std::string BarConstruction::format(const BarWord& w) const {
  if (w.empty()) return "[ ]";
  std::vector<std::string> parts;
  for (std::size_t x : w) parts.push_back(algebra_.element(x).name);
  return "[" + join(parts, "|") + "]";
}

std::string BarConstruction::format(const BarElement& e) const {
  if (e.empty()) return "0";
  std::vector<std::string> parts;
  for (const auto& w : e) parts.push_back(format(w));
  return join(parts, " + ");
}

std::string BarConstruction::format(const BarTensor& t) const {
  if (t.empty()) return "0";
  std::vector<std::string> parts;
  for (const auto& [u, v] : t) parts.push_back(format(u) + "⊗" + format(v));
  return join(parts, " + ");
}

BarWord BarConstruction::parse_word(const std::string& text) const {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw std::invalid_argument("bad bar word: " + text);
  std::string inner = trim(s.substr(1, s.size() - 2));
  BarWord w;
  if (inner.empty()) return w;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, '|')) {
    auto idx = algebra_.find(trim(item));
    if (!idx || *idx == algebra_.unit()) throw std::invalid_argument("unknown letter '" + trim(item) + "' in " + text);
    w.push_back(*idx);
  }
  return w;
}

BarElement BarConstruction::parse(const std::string& text) const {
  BarElement out;
  std::string s = trim(text);
  if (s == "0" || s.empty()) return out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto open = s.find('[', pos);
    if (open == std::string::npos) {
      if (!trim(s.substr(pos)).empty()) throw std::invalid_argument("bad bar element: " + text);
      break;
    }
    std::string between = trim(s.substr(pos, open - pos));
    if (!(between.empty() || between == "+")) throw std::invalid_argument("bad bar element: " + text);
    auto close = s.find(']', open);
    if (close == std::string::npos) throw std::invalid_argument("unterminated bar word: " + text);
    toggle(out, parse_word(s.substr(open, close - open + 1)));
    pos = close + 1;
  }
  return out;
}

Complex BarConstruction::complex() const {
  Complex c(max_degree_);
  for (int k = 0; k <= max_degree_; ++k) {
    std::vector<std::string> labels;
    for (const auto& w : words(k)) labels.push_back(format(w));
    c.set_group(k, FpGroup(std::vector<Int>(labels.size(), Int(2)), labels));
  }
  for (int k = 0; k < max_degree_; ++k) {
    const FpGroup& src = c.group(k);
    const FpGroup& dst = c.group(k + 1);
    IntMatrix m(dst.rank(), src.rank());
    const auto& ws = words(k);
    for (std::size_t j = 0; j < ws.size(); ++j) {
      for (const auto& w : diff(ws[j])) m(index_of(w), j) = 1;
    }
    c.set_differential(k, GroupHom(src, dst, std::move(m)));
  }
  return c;
}

Vec BarConstruction::to_vector(int degree, const BarElement& e) const {
  Vec v(words(degree).size());
  for (const auto& w : e) {
    if (this->degree(w) != degree) throw std::invalid_argument("bar element " + format(e) + " not of degree " + std::to_string(degree));
    v[index_of(w)] = 1;
  }
  return v;
}

BarElement BarConstruction::from_vector(int degree, const Vec& v) const {
  BarElement out;
  const auto& ws = words(degree);
  for (std::size_t i = 0; i < v.size() && i < ws.size(); ++i) {
    if (reduce_mod(v[i], Int(2)) != 0) out.insert(ws[i]);
  }
  return out;
}

MultiMap BarConstruction::mu_map(const SpacePtr& space) const {
  MultiMap m(space, space, 2, 1, 0);
  const TensorPower& p2 = space->power(2);
  for (int k = 0; k <= space->max_degree(); ++k) {
    const auto& basis = p2.basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const TensorIndex& t = basis[i];
      BarElement value = mu(words(t[0].degree)[t[0].generator], words(t[1].degree)[t[1].generator]);
      if (!value.empty()) m.set_column(k, i, to_vector(k, value));
    }
  }
  return m;
}

MultiMap BarConstruction::coproduct_map(const SpacePtr& space) const {
  MultiMap m(space, space, 1, 2, 0);
  const TensorPower& p2 = space->power(2);
  for (int k = 0; k <= space->max_degree(); ++k) {
    const auto& ws = words(k);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      Vec col(p2.basis(k).size());
      for (const auto& [u, v] : coproduct(ws[i])) {
        TensorIndex t{{degree(u), index_of(u)}, {degree(v), index_of(v)}};
        col[*p2.index_of(t)] = 1;
      }
      m.set_column(k, i, col);
    }
  }
  return m;
}

// ------------------------------------------------------------------ checks

namespace {

std::vector<BarPair> pairs_up_to(const BarConstruction& ba, int bound) {
  std::vector<BarPair> out;
  for (int k = 0; k <= bound; ++k) {
    for (int i = 0; i <= k; ++i) {
      for (const auto& u : ba.words(i)) {
        for (const auto& v : ba.words(k - i)) out.push_back({u, v});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> BarConstruction::check_d_squared(int bound) const {
  std::vector<std::string> out;
  for (const auto& w : words_up_to(bound)) {
    BarElement dd = diff(diff(w));
    if (!dd.empty()) out.push_back("d^2 " + format(w) + " = " + format(dd));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_coassociative(int bound) const {
  std::vector<std::string> out;
  for (const auto& w : words_up_to(bound)) {
    // compare (Δ⊗1)Δ and (1⊗Δ)Δ as sets of triples
    std::set<std::vector<BarWord>> left, right;
    auto flip = [](std::set<std::vector<BarWord>>& s, std::vector<BarWord> t) {
      if (!s.erase(t)) s.insert(std::move(t));
    };
    for (const auto& [a, b] : coproduct(w)) {
      for (const auto& [a1, a2] : coproduct(a)) flip(left, {a1, a2, b});
      for (const auto& [b1, b2] : coproduct(b)) flip(right, {a, b1, b2});
    }
    if (left != right) out.push_back("coassociativity fails on " + format(w));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_counit(int bound) const {
  std::vector<std::string> out;
  for (const auto& w : words_up_to(bound)) {
    BarElement left, right;
    for (const auto& [a, b] : coproduct(w)) {
      if (a.empty()) toggle(left, b);
      if (b.empty()) toggle(right, a);
    }
    if (left != BarElement{w} || right != BarElement{w}) out.push_back("counit fails on " + format(w));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_coproduct_chain_map(int bound) const {
  std::vector<std::string> out;
  for (const auto& w : words_up_to(bound)) {
    if (coproduct(diff(w)) != diff(coproduct(w))) out.push_back("Δd != dΔ on " + format(w));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_mu_unit(int bound) const {
  std::vector<std::string> out;
  for (const auto& w : words_up_to(bound)) {
    if (mu(BarWord{}, w) != BarElement{w} || mu(w, BarWord{}) != BarElement{w}) {
      out.push_back("[ ] is not a unit on " + format(w));
    }
  }
  return out;
}

std::vector<std::string> BarConstruction::check_mu_chain_map(int bound) const {
  std::vector<std::string> out;
  for (const auto& [u, v] : pairs_up_to(*this, bound)) {
    BarElement lhs = diff(mu(u, v));
    BarTensor dt = diff(BarTensor{{u, v}});
    if (lhs != mu(dt)) out.push_back("dμ != μd on " + format(u) + "⊗" + format(v));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_mu_associative(int bound) const {
  std::vector<std::string> out;
  for (int k = 0; k <= bound; ++k) {
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; i + j <= k; ++j) {
        for (const auto& u : words(i)) {
          for (const auto& v : words(j)) {
            BarElement uv = mu(u, v);
            for (const auto& w : words(k - i - j)) {
              BarElement left, right;
              for (const auto& x : uv) left = left + mu(x, w);
              for (const auto& x : mu(v, w)) right = right + mu(u, x);
              if (left != right) out.push_back("μ not associative on " + format(u) + "⊗" + format(v) + "⊗" + format(w));
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::string> BarConstruction::check_hopf(int bound) const {
  std::vector<std::string> out;
  for (const auto& [u, v] : pairs_up_to(*this, bound)) {
    BarTensor lhs = coproduct(mu(u, v));
    BarTensor rhs;
    for (const auto& [u1, u2] : coproduct(u)) {
      for (const auto& [v1, v2] : coproduct(v)) {
        BarElement left = mu(u1, v1);
        if (left.empty()) continue;
        BarElement right = mu(u2, v2);
        for (const auto& a : left) {
          for (const auto& b : right) toggle(rhs, {a, b});
        }
      }
    }
    if (lhs != rhs) out.push_back("Δμ != (μ⊗μ)σ(Δ⊗Δ) on " + format(u) + "⊗" + format(v));
  }
  return out;
}

std::vector<std::string> BarConstruction::check_letters_primitive() const {
  std::vector<std::string> out;
  for (std::size_t x : letters_) {
    BarTensor expected{{BarWord{}, BarWord{x}}, {BarWord{x}, BarWord{}}};
    if (coproduct(BarWord{x}) != expected) out.push_back(format(BarWord{x}) + " is not primitive");
  }
  return out;
}

}  // namespace ainfty
