#include "ainfty/graded.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <stdexcept>

namespace ainfty {

namespace {

const FpGroup& trivial_group() {
  static const FpGroup g;
  return g;
}

using Accumulator = std::map<std::size_t, Int>;

void axpy(Accumulator& acc, const Int& a, const SparseVec& v) {
  for (const auto& [i, x] : v) acc[i] += a * x;
}

SparseVec finish(const Accumulator& acc, const FpGroup& g) {
  SparseVec out;
  for (const auto& [i, x] : acc) {
    Int r = reduce_mod(x, g.order(i));
    if (r != 0) out.emplace_back(i, std::move(r));
  }
  return out;
}

Vec dense(const SparseVec& v, std::size_t n) {
  Vec out(n, Int(0));
  for (const auto& [i, x] : v) out[i] = x;
  return out;
}

SparseVec sparse(const Vec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) out.emplace_back(i, v[i]);
  }
  return out;
}

std::string default_format(const Vec& x, const std::function<std::string(std::size_t)>& label) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (x[i] != 1) out += to_string(x[i]) + "*";
    out += label(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

// ----------------------------------------------------------------- Complex

Complex::Complex(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("Complex: negative window");
  groups_.assign(static_cast<std::size_t>(max_degree) + 1, FpGroup());
  for (int k = 0; k < max_degree; ++k) diffs_.push_back(GroupHom::zero(FpGroup(), FpGroup()));
}

const FpGroup& Complex::group(int degree) const {
  if (!in_window(degree)) return trivial_group();
  return groups_[static_cast<std::size_t>(degree)];
}

const GroupHom& Complex::differential(int degree) const {
  if (degree < 0 || degree >= max_degree_) {
    throw std::out_of_range("Complex::differential: degree " + std::to_string(degree) +
                            " outside window");
  }
  return diffs_[static_cast<std::size_t>(degree)];
}

bool Complex::zero_differential() const {
  return std::all_of(diffs_.begin(), diffs_.end(), [](const GroupHom& d) { return d.is_zero(); });
}

void Complex::set_group(int degree, FpGroup g) {
  if (!in_window(degree)) throw std::out_of_range("Complex::set_group: degree outside window");
  groups_[static_cast<std::size_t>(degree)] = std::move(g);
  const FpGroup& here = groups_[static_cast<std::size_t>(degree)];
  if (degree > 0) diffs_[degree - 1] = GroupHom::zero(group(degree - 1), here);
  if (degree < max_degree_) diffs_[degree] = GroupHom::zero(here, group(degree + 1));
}

void Complex::set_differential(int degree, GroupHom d) {
  if (degree < 0 || degree >= max_degree_) {
    throw std::out_of_range("Complex::set_differential: degree outside window");
  }
  if (!(d.source() == group(degree)) || !(d.target() == group(degree + 1))) {
    throw std::invalid_argument("Complex::set_differential: groups do not match at degree " +
                                std::to_string(degree));
  }
  diffs_[static_cast<std::size_t>(degree)] = std::move(d);
}

std::vector<int> Complex::check_d_squared() const {
  std::vector<int> bad;
  for (int k = 0; k + 1 < max_degree_; ++k) {
    if (!differential(k + 1).after(differential(k)).is_zero()) bad.push_back(k);
  }
  return bad;
}

Homology Complex::homology(int degree) const {
  if (degree < 0 || degree >= max_degree_) {
    throw std::out_of_range("Complex::homology: degree outside the interior of the window");
  }
  GroupHom in = degree == 0 ? GroupHom::zero(FpGroup(), group(0)) : differential(degree - 1);
  return Homology(in, differential(degree));
}

std::string Complex::format(int degree, const Vec& element) const {
  if (formatter_) return formatter_(degree, element);
  const FpGroup& g = group(degree);
  return default_format(g.reduce(element), [&](std::size_t i) { return g.label(i); });
}

// ------------------------------------------------------------- TensorPower

int total_degree(const TensorIndex& t) {
  int d = 0;
  for (const auto& f : t) d += f.degree;
  return d;
}

namespace {

void enumerate_tuples(const Complex& base, int arity, int degree, TensorIndex& cur,
                      std::vector<TensorIndex>& out) {
  if (static_cast<int>(cur.size()) == arity) {
    if (degree == 0) out.push_back(cur);
    return;
  }
  for (int d = 0; d <= degree; ++d) {
    const FpGroup& g = base.group(d);
    for (std::size_t i = 0; i < g.rank(); ++i) {
      cur.push_back({d, i});
      enumerate_tuples(base, arity, degree - d, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

TensorPower::TensorPower(const Complex& base, int arity) : base_(&base), arity_(arity) {
  if (arity < 1) throw std::invalid_argument("TensorPower: arity must be positive");
  const int top = base.max_degree();
  for (int k = 0; k <= top; ++k) {
    std::vector<TensorIndex> tuples;
    TensorIndex cur;
    enumerate_tuples(base, arity, k, cur, tuples);
    std::vector<Int> orders;
    std::vector<std::string> labels;
    for (const auto& t : tuples) {
      Int o = 0;
      for (const auto& f : t) o = order_gcd(o, base.group(f.degree).order(f.generator));
      orders.push_back(o);
      labels.push_back(label(t));
      lookup_.emplace(t, orders.size() - 1);
    }
    basis_.push_back(std::move(tuples));
    groups_.emplace_back(std::move(orders), std::move(labels));
  }
}

const FpGroup& TensorPower::group(int degree) const {
  if (degree < 0 || degree > max_degree()) return trivial_group();
  return groups_[static_cast<std::size_t>(degree)];
}

const std::vector<TensorIndex>& TensorPower::basis(int degree) const {
  static const std::vector<TensorIndex> empty;
  if (degree < 0 || degree > max_degree()) return empty;
  return basis_[static_cast<std::size_t>(degree)];
}

std::optional<std::size_t> TensorPower::index_of(const TensorIndex& t) const {
  auto it = lookup_.find(t);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

SparseVec TensorPower::differential_of(int degree, std::size_t i) const {
  if (degree < 0 || degree >= max_degree()) {
    throw std::out_of_range("TensorPower::differential_of: degree outside window");
  }
  const TensorIndex& e = basis(degree)[i];
  Accumulator acc;
  int left = 0;
  for (std::size_t pos = 0; pos < e.size(); ++pos) {
    const int d = e[pos].degree;
    const GroupHom& dx = base_->differential(d);
    const int sign = koszul_sign(left);
    for (std::size_t c = 0; c < dx.target().rank(); ++c) {
      const Int& coef = dx.matrix()(c, e[pos].generator);
      if (coef == 0) continue;
      TensorIndex t = e;
      t[pos] = {d + 1, c};
      std::size_t j = lookup_.at(t);
      acc[j] += sign * coef;
    }
    left += d;
  }
  return finish(acc, group(degree + 1));
}

Vec TensorPower::differential_apply(int degree, const Vec& x) const {
  Accumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) axpy(acc, x[i], differential_of(degree, i));
  }
  const FpGroup& next = group(degree + 1);
  return dense(finish(acc, next), next.rank());
}

std::string TensorPower::label(const TensorIndex& t) const {
  std::vector<std::string> parts;
  bool bracketed = true;  // bar words read better joined by ⊗
  for (const auto& f : t) {
    Vec e = base_->group(f.degree).zero();
    e[f.generator] = 1;
    parts.push_back(base_->format(f.degree, e));
    bracketed = bracketed && parts.back().starts_with('[') && parts.back().ends_with(']');
  }
  std::string out;
  for (std::string& s : parts) {
    if (!out.empty()) out += bracketed ? "⊗" : "|";
    if (!bracketed && t.size() > 1 && s.find_first_of("+-") != std::string::npos) s = "(" + s + ")";
    out += s;
  }
  return out;
}

std::string TensorPower::format(int degree, const Vec& x) const {
  if (arity_ == 1) return base_->format(degree, x);
  const FpGroup& g = group(degree);
  return default_format(g.reduce(x), [&](std::size_t i) { return g.label(i); });
}

Vec TensorPower::parse(int degree, const std::string& text) const {
  auto squeeze = [](const std::string& s) {
    std::string out;
    for (char ch : s) {
      if (ch != ' ' && ch != '\t') out += ch;
    }
    return out;
  };
  const FpGroup& g = group(degree);
  std::map<std::string, std::size_t> labels;
  for (std::size_t i = 0; i < g.rank(); ++i) labels[squeeze(g.label(i))] = i;
  Vec out = g.zero();
  const std::string s = squeeze(text);
  if (s.empty() || s == "0") return out;
  // split at top-level signs
  std::vector<std::pair<int, std::string>> terms;
  int depth = 0;
  int sign = 1;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char ch = s[i];
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    bool split = depth == 0 && (ch == '+' || ch == '-') && !(i > 0 && s[i - 1] == '*');
    if (split) {
      if (!cur.empty()) terms.emplace_back(sign, cur);
      else if (i > 0) throw std::invalid_argument("empty term in '" + text + "'");
      sign = ch == '-' ? -1 : 1;
      cur.clear();
      continue;
    }
    cur += ch;
  }
  if (cur.empty()) throw std::invalid_argument("dangling sign in '" + text + "'");
  terms.emplace_back(sign, cur);
  for (auto& [sg, term] : terms) {
    Int coeff = sg;
    std::size_t pos = 0;
    while (pos < term.size() && std::isdigit(static_cast<unsigned char>(term[pos]))) ++pos;
    std::string label = term;
    if (pos > 0 && labels.find(term) == labels.end()) {
      coeff *= Int(term.substr(0, pos));
      label = term.substr(pos);
      if (!label.empty() && label.front() == '*') label.erase(0, 1);
    }
    auto it = labels.find(label);
    if (it == labels.end()) {
      throw std::invalid_argument("unknown basis element '" + label + "' in degree " + std::to_string(degree));
    }
    out[it->second] += coeff;
  }
  return g.reduce(out);
}

bool TensorPower::differential_known(int degree) const {
  if (degree < 0) return false;
  if (degree < max_degree()) return true;
  return degree == max_degree() && base_->zero_differential();
}

std::shared_ptr<const HomDegree> TensorPower::hom_degree(const Int& order, int degree) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto key = std::make_pair(order, degree);
  auto it = hom_cache_.find(key);
  if (it != hom_cache_.end()) return it->second;
  if (!differential_known(degree)) {
    throw std::out_of_range("TensorPower::hom_degree: differential unknown at degree " +
                            std::to_string(degree));
  }
  FpGroup source = FpGroup::cyclic(order);
  auto hd = std::make_shared<HomDegree>();
  hd->hom = hom_group(source, group(degree));
  const bool edge = degree == max_degree();
  hd->next = hom_group(source, edge ? FpGroup() : group(degree + 1));
  IntMatrix m(hd->next.group.rank(), hd->hom.group.rank());
  if (!edge) {
    for (std::size_t k = 0; k < hd->hom.group.rank(); ++k) {
      Vec coords = hd->hom.group.zero();
      coords[k] = 1;
      IntMatrix value = hd->hom.matrix(coords);
      Vec image = differential_apply(degree, value.column(0));
      auto c = hd->next.coordinates(IntMatrix::from_columns(image.size(), {image}));
      if (!c) throw std::logic_error("TensorPower::hom_degree: differential breaks torsion");
      for (std::size_t r = 0; r < c->size(); ++r) m(r, k) = (*c)[r];
    }
  }
  hd->d = GroupHom(hd->hom.group, hd->next.group, std::move(m));
  hd->solver = std::make_shared<HomSolver>(hd->d);
  hom_cache_.emplace(key, hd);
  return hd;
}

const Slice& TensorPower::slice(const Int& order, int degree) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = slice_cache_.find({order, degree});
    if (it != slice_cache_.end()) return *it->second;
  }
  auto s = std::make_unique<Slice>();
  s->here = hom_degree(order, degree);
  if (degree > 0) {
    s->below = hom_degree(order, degree - 1);
  } else {
    auto hd = std::make_shared<HomDegree>();
    hd->next = s->here->hom;
    hd->d = GroupHom::zero(FpGroup(), s->here->hom.group);
    hd->solver = std::make_shared<HomSolver>(hd->d);
    s->below = hd;
  }
  s->homology = std::make_shared<Homology>(s->below->d, s->here->d);
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = slice_cache_.emplace(std::make_pair(order, degree), std::move(s));
  return *it->second;
}

// ------------------------------------------------------------------- Space

Space::Space(Complex base, std::string name) : base_(std::move(base)), name_(std::move(name)) {}

const TensorPower& Space::power(int arity) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = powers_.find(arity);
  if (it == powers_.end()) {
    it = powers_.emplace(arity, std::make_unique<TensorPower>(base_, arity)).first;
  }
  return *it->second;
}

// ---------------------------------------------------------------- MultiMap

MultiMap::MultiMap(SpacePtr source, SpacePtr target, int inputs, int outputs, int shift)
    : source_(std::move(source)),
      target_(std::move(target)),
      inputs_(inputs),
      outputs_(outputs),
      shift_(shift) {
  if (!source_ || !target_) throw std::invalid_argument("MultiMap: null space");
  if (inputs < 1 || outputs < 1) throw std::invalid_argument("MultiMap: arities must be positive");
}

MultiMap MultiMap::identity(SpacePtr space, int arity) {
  MultiMap f(space, space, arity, arity, 0);
  const TensorPower& p = space->power(arity);
  for (int k = 0; k <= p.max_degree(); ++k) {
    for (std::size_t i = 0; i < p.basis(k).size(); ++i) {
      if (p.group(k).order(i) != 1) f.set_column(k, i, SparseVec{{i, Int(1)}});
    }
  }
  return f;
}

MultiMap MultiMap::differential(SpacePtr space, int arity) {
  MultiMap f(space, space, arity, arity, 1);
  const TensorPower& p = space->power(arity);
  for (int k = 0; k < p.max_degree(); ++k) {
    for (std::size_t i = 0; i < p.basis(k).size(); ++i) f.set_column(k, i, p.differential_of(k, i));
  }
  return f;
}

bool MultiMap::has_block(int degree) const {
  const int t = degree + shift_;
  return degree >= 0 && degree <= source_->max_degree() && t >= 0 && t <= target_->max_degree();
}

std::vector<int> MultiMap::degrees() const {
  std::vector<int> out;
  for (int k = 0; k <= source_->max_degree(); ++k) {
    if (has_block(k)) out.push_back(k);
  }
  return out;
}

const SparseVec& MultiMap::column(int degree, std::size_t i) const {
  static const SparseVec empty;
  auto it = columns_.find(degree);
  if (it == columns_.end() || i >= it->second.size()) return empty;
  return it->second[i];
}

void MultiMap::set_column(int degree, std::size_t i, SparseVec value) {
  if (!has_block(degree)) {
    throw std::out_of_range("MultiMap::set_column: no block at source degree " +
                            std::to_string(degree));
  }
  const TensorPower& sp = source_power();
  if (i >= sp.basis(degree).size()) throw std::out_of_range("MultiMap::set_column: bad index");
  const FpGroup& tg = target_power().group(degree + shift_);
  Accumulator acc;
  for (auto& [j, x] : value) {
    if (j >= tg.rank()) throw std::out_of_range("MultiMap::set_column: bad target index");
    acc[j] += x;
  }
  SparseVec col = finish(acc, tg);
  auto& block = columns_[degree];
  if (block.size() < sp.basis(degree).size()) block.resize(sp.basis(degree).size());
  block[i] = std::move(col);
}

void MultiMap::set_column(int degree, std::size_t i, const Vec& value) {
  set_column(degree, i, sparse(value));
}

Vec MultiMap::value(const TensorIndex& e) const {
  const int k = total_degree(e);
  const FpGroup& tg = target_power().group(k + shift_);
  auto i = source_power().index_of(e);
  if (!i) return tg.zero();
  return dense(column(k, *i), tg.rank());
}

Vec MultiMap::apply(int degree, const Vec& x) const {
  Accumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) axpy(acc, x[i], column(degree, i));
  }
  const FpGroup& tg = target_power().group(degree + shift_);
  return dense(finish(acc, tg), tg.rank());
}

bool MultiMap::respects_orders() const {
  const TensorPower& sp = source_power();
  const TensorPower& tp = target_power();
  for (const auto& [k, block] : columns_) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      const Int& o = sp.group(k).order(i);
      if (o == 0) continue;
      for (const auto& [j, x] : block[i]) {
        if (reduce_mod(o * x, tp.group(k + shift_).order(j)) != 0) return false;
      }
    }
  }
  return true;
}

bool MultiMap::is_zero() const {
  for (const auto& [k, block] : columns_) {
    for (const auto& c : block) {
      if (!c.empty()) return false;
    }
  }
  return true;
}

bool MultiMap::is_zero_at(int degree) const {
  auto it = columns_.find(degree);
  if (it == columns_.end()) return true;
  return std::all_of(it->second.begin(), it->second.end(), [](const SparseVec& c) { return c.empty(); });
}

void MultiMap::check_compatible(const MultiMap& other) const {
  if (source_ != other.source_ || target_ != other.target_ || inputs_ != other.inputs_ ||
      outputs_ != other.outputs_ || shift_ != other.shift_) {
    throw std::invalid_argument("MultiMap: incompatible operands");
  }
}

MultiMap MultiMap::operator+(const MultiMap& other) const {
  check_compatible(other);
  MultiMap out = *this;
  for (const auto& [k, block] : other.columns_) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i].empty()) continue;
      Accumulator acc;
      axpy(acc, Int(1), column(k, i));
      axpy(acc, Int(1), block[i]);
      out.set_column(k, i, finish(acc, target_power().group(k + shift_)));
    }
  }
  out.truncated_.insert(other.truncated_.begin(), other.truncated_.end());
  return out;
}

MultiMap MultiMap::operator-() const { return scaled(Int(-1)); }

MultiMap MultiMap::operator-(const MultiMap& other) const { return *this + (-other); }

MultiMap MultiMap::scaled(const Int& factor) const {
  MultiMap out(source_, target_, inputs_, outputs_, shift_);
  out.truncated_ = truncated_;
  for (const auto& [k, block] : columns_) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i].empty()) continue;
      SparseVec c = block[i];
      for (auto& e : c) e.second *= factor;
      out.set_column(k, i, std::move(c));
    }
  }
  return out;
}

bool MultiMap::equal_interior(const MultiMap& other) const {
  check_compatible(other);
  for (int k : degrees()) {
    if (truncated_.contains(k) || other.truncated_.contains(k)) continue;
    const std::size_t n = source_power().basis(k).size();
    for (std::size_t i = 0; i < n; ++i) {
      if (column(k, i) != other.column(k, i)) return false;
    }
  }
  return true;
}

bool operator==(const MultiMap& a, const MultiMap& b) {
  if (a.source_ != b.source_ || a.target_ != b.target_ || a.inputs_ != b.inputs_ ||
      a.outputs_ != b.outputs_ || a.shift_ != b.shift_ || a.truncated_ != b.truncated_) {
    return false;
  }
  for (int k : a.degrees()) {
    const std::size_t n = a.source_power().basis(k).size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.column(k, i) != b.column(k, i)) return false;
    }
  }
  return true;
}

std::string MultiMap::describe() const {
  std::string out;
  const TensorPower& sp = source_power();
  const TensorPower& tp = target_power();
  for (const auto& [k, block] : columns_) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i].empty()) continue;
      if (!out.empty()) out += "; ";
      out += sp.label(sp.basis(k)[i]) + " -> " +
             tp.format(k + shift_, dense(block[i], tp.group(k + shift_).rank()));
    }
  }
  return out.empty() ? "0" : out;
}

// ------------------------------------------------------------- operations

MultiMap compose(const MultiMap& outer, const MultiMap& inner) {
  if (outer.source() != inner.target() || outer.inputs() != inner.outputs()) {
    throw std::invalid_argument("compose: maps are not composable");
  }
  MultiMap out(inner.source(), outer.target(), inner.inputs(), outer.outputs(),
               inner.shift() + outer.shift());
  const TensorPower& sp = inner.source_power();
  for (int k : out.degrees()) {
    const int mid = k + inner.shift();
    const std::size_t n = sp.basis(k).size();
    if (n == 0) continue;
    if (mid > inner.target()->max_degree()) {
      out.mark_truncated(k);
      continue;
    }
    if (!inner.interior(k) || !outer.interior(mid)) out.mark_truncated(k);
    if (mid < 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const SparseVec& col = inner.column(k, i);
      if (col.empty()) continue;
      Accumulator acc;
      for (const auto& [j, x] : col) axpy(acc, x, outer.column(mid, j));
      out.set_column(k, i, finish(acc, out.target_power().group(k + out.shift())));
    }
  }
  return out;
}

MultiMap tensor(const MultiMap& f, const MultiMap& h) {
  if (f.source() != h.source() || f.target() != h.target()) {
    throw std::invalid_argument("tensor: factors must share source and target spaces");
  }
  const int m1 = f.inputs();
  const int n1 = f.outputs();
  MultiMap out(f.source(), f.target(), m1 + h.inputs(), n1 + h.outputs(), f.shift() + h.shift());
  const TensorPower& sp = out.source_power();
  const TensorPower& sf = f.source_power();
  const TensorPower& sh = h.source_power();
  const TensorPower& tf = f.target_power();
  const TensorPower& th = h.target_power();
  const TensorPower& tp = out.target_power();
  for (int k : out.degrees()) {
    const auto& basis = sp.basis(k);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      TensorIndex e1(basis[i].begin(), basis[i].begin() + m1);
      TensorIndex e2(basis[i].begin() + m1, basis[i].end());
      const int k1 = total_degree(e1);
      const int k2 = k - k1;
      if (!f.interior(k1) || !h.interior(k2)) out.mark_truncated(k);
      if (!f.has_block(k1) || !h.has_block(k2)) continue;
      const SparseVec& fc = f.column(k1, *sf.index_of(e1));
      const SparseVec& hc = h.column(k2, *sh.index_of(e2));
      if (fc.empty() || hc.empty()) continue;
      const int sign = koszul_sign(static_cast<long long>(h.shift()) * k1);
      const auto& fb = tf.basis(k1 + f.shift());
      const auto& hb = th.basis(k2 + h.shift());
      Accumulator acc;
      for (const auto& [a, x] : fc) {
        for (const auto& [b, y] : hc) {
          TensorIndex t = fb[a];
          t.insert(t.end(), hb[b].begin(), hb[b].end());
          acc[*tp.index_of(t)] += sign * x * y;
        }
      }
      out.set_column(k, i, finish(acc, tp.group(k + out.shift())));
    }
  }
  (void)n1;
  return out;
}

MultiMap tensor(const std::vector<MultiMap>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: no factors");
  MultiMap out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

MultiMap nabla(const MultiMap& f) {
  MultiMap out(f.source(), f.target(), f.inputs(), f.outputs(), f.shift() + 1);
  const TensorPower& sp = f.source_power();
  const TensorPower& tp = f.target_power();
  const bool source_closed = f.source()->base().zero_differential();
  const int s = f.shift();
  for (int k : out.degrees()) {
    const std::size_t n = sp.basis(k).size();
    if (n == 0) continue;
    if (!f.interior(k)) out.mark_truncated(k);
    const bool need_next = !source_closed;
    if (need_next) {
      if (k + 1 > sp.max_degree()) {
        out.mark_truncated(k);
      } else if (!f.interior(k + 1)) {
        out.mark_truncated(k);
      }
    }
    const FpGroup& tg = tp.group(k + s + 1);
    for (std::size_t i = 0; i < n; ++i) {
      Accumulator acc;
      if (k + s >= 0) {
        for (const auto& [j, x] : f.column(k, i)) axpy(acc, x, tp.differential_of(k + s, j));
      }
      if (need_next && k + 1 <= sp.max_degree()) {
        const Int sign = -koszul_sign(s);
        for (const auto& [j, x] : sp.differential_of(k, i)) {
          axpy(acc, sign * x, f.column(k + 1, j));
        }
      }
      SparseVec col = finish(acc, tg);
      if (!col.empty()) out.set_column(k, i, std::move(col));
    }
  }
  return out;
}

MultiMap tensor_power(const MultiMap& g, int n) {
  if (g.inputs() != 1 || g.outputs() != 1) throw std::invalid_argument("tensor_power: g must be (1,1)");
  if (n < 1) throw std::invalid_argument("tensor_power: n must be positive");
  std::vector<MultiMap> copies(static_cast<std::size_t>(n), g);
  return tensor(copies);
}

MultiMap g_tilde(const MultiMap& g, const MultiMap& u) {
  if (g.source() != u.target()) throw std::invalid_argument("g_tilde: g must start where u ends");
  return compose(tensor_power(g, u.outputs()), u);
}

MultiMap sigma(SpacePtr space, int p, int q) {
  const int n = p * q;
  MultiMap out(space, space, n, n, 0);
  const TensorPower& tp = space->power(n);
  // input position j*p + i (block j, slot i) moves to output position i*q + j
  std::vector<int> target_pos(static_cast<std::size_t>(n));
  for (int j = 0; j < q; ++j) {
    for (int i = 0; i < p; ++i) target_pos[static_cast<std::size_t>(j * p + i)] = i * q + j;
  }
  for (int k = 0; k <= tp.max_degree(); ++k) {
    const auto& basis = tp.basis(k);
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
      const TensorIndex& e = basis[idx];
      TensorIndex t(e.size());
      long long parity = 0;
      for (int a = 0; a < n; ++a) {
        t[static_cast<std::size_t>(target_pos[a])] = e[static_cast<std::size_t>(a)];
        for (int b = a + 1; b < n; ++b) {
          if (target_pos[a] > target_pos[b]) {
            parity += static_cast<long long>(e[a].degree) * e[b].degree;
          }
        }
      }
      out.set_column(k, idx, SparseVec{{*tp.index_of(t), Int(koszul_sign(parity))}});
    }
  }
  return out;
}

// ------------------------------------------------------------- HomHomology

namespace {

Vec hom_coordinates(const HomGroup& hg, const Vec& element) {
  auto c = hg.coordinates(IntMatrix::from_columns(element.size(), {element}));
  if (!c) throw std::logic_error("value is not killed by the order of its argument");
  return *c;
}

Vec hom_element(const HomGroup& hg, const Vec& coords) {
  return hg.matrix(coords).column(0);
}

}  // namespace

HomHomology::HomHomology(SpacePtr source, SpacePtr target, int inputs, int outputs, int shift,
                         std::optional<int> target_degree_cap, SourceModel model)
    : source_(std::move(source)),
      target_(std::move(target)),
      inputs_(inputs),
      outputs_(outputs),
      shift_(shift),
      model_(model) {
  if (!source_->base().zero_differential()) {
    throw std::invalid_argument("HomHomology: source must have zero differential");
  }
  const TensorPower& sp = source_->power(inputs_);
  const TensorPower& tp = target_->power(outputs_);
  std::vector<Int> orders;
  std::size_t offset = 0;
  for (int k = 0; k <= sp.max_degree(); ++k) {
    const auto& basis = sp.basis(k);
    if (basis.empty()) continue;
    const int t = k + shift_;
    if (t < 0) continue;
    if (!tp.differential_known(t) || (target_degree_cap && t > *target_degree_cap)) {
      skipped_.insert(k);
      continue;
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Slice& s = tp.slice(source_order(k, i), t);
      parts_.push_back({k, i, t, &s, offset});
      for (const Int& o : s.homology->group().orders()) orders.push_back(o);
      offset += s.homology->group().rank();
    }
  }
  group_ = FpGroup(std::move(orders));
}

Int HomHomology::source_order(int degree, std::size_t i) const {
  if (model_ == SourceModel::Free) return 0;
  return source_->power(inputs_).group(degree).order(i);
}

std::optional<Vec> HomHomology::class_of(const MultiMap& cocycle) const {
  if (cocycle.shift() != shift_ || cocycle.inputs() != inputs_ || cocycle.outputs() != outputs_) {
    throw std::invalid_argument("HomHomology::class_of: map has the wrong type");
  }
  Vec cls;
  cls.reserve(group_.rank());
  const TensorPower& tp = target_->power(outputs_);
  for (const Part& p : parts_) {
    Vec y = tp.group(p.target_degree).zero();
    for (const auto& [j, x] : cocycle.column(p.source_degree, p.source_index)) y[j] = x;
    auto c = p.slice->homology->class_of(hom_coordinates(p.slice->here->hom, y));
    if (!c) return std::nullopt;
    cls.insert(cls.end(), c->begin(), c->end());
  }
  return cls;
}

MultiMap HomHomology::representative(const Vec& cls) const {
  if (cls.size() != group_.rank()) throw std::invalid_argument("HomHomology::representative: bad class");
  MultiMap out(source_, target_, inputs_, outputs_, shift_);
  for (const Part& p : parts_) {
    const std::size_t r = p.slice->homology->group().rank();
    Vec sub(cls.begin() + static_cast<std::ptrdiff_t>(p.offset),
            cls.begin() + static_cast<std::ptrdiff_t>(p.offset + r));
    Vec coords = p.slice->homology->representative(sub);
    out.set_column(p.source_degree, p.source_index, hom_element(p.slice->here->hom, coords));
  }
  for (int k : skipped_) out.mark_truncated(k);
  return out;
}

std::optional<MultiMap> HomHomology::solve_coboundary(const MultiMap& z) const {
  if (z.shift() != shift_ + 1 || z.inputs() != inputs_ || z.outputs() != outputs_) {
    throw std::invalid_argument("HomHomology::solve_coboundary: map has the wrong type");
  }
  MultiMap out(source_, target_, inputs_, outputs_, shift_);
  const TensorPower& sp = source_->power(inputs_);
  const TensorPower& tp = target_->power(outputs_);
  for (int k = 0; k <= sp.max_degree(); ++k) {
    const auto& basis = sp.basis(k);
    const int t = k + shift_;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const SparseVec& zc = z.column(k, i);
      if (zc.empty()) continue;
      if (t < 0) return std::nullopt;
      if (!tp.differential_known(t)) {
        out.mark_truncated(k);
        continue;
      }
      auto hd = tp.hom_degree(source_order(k, i), t);
      Vec y = tp.group(t + 1).zero();
      for (const auto& [j, x] : zc) y[j] = x;
      auto x = hd->solver->solve(hom_coordinates(hd->next, y));
      if (!x) return std::nullopt;
      out.set_column(k, i, hom_element(hd->hom, *x));
    }
  }
  for (int k : z.truncated()) out.mark_truncated(k);
  return out;
}

// ------------------------------------------------------------- InducedMap

namespace {

int common_cap(const MultiMap& g) {
  auto last_known = [](const Complex& c) {
    return c.zero_differential() ? c.max_degree() : c.max_degree() - 1;
  };
  return std::min(last_known(g.source()->base()), last_known(g.target()->base()));
}

}  // namespace

InducedMap::InducedMap(const MultiMap& g, int inputs, int outputs, int shift, SourceModel model)
    : g_(g),
      domain_(g.source(), g.source(), inputs, outputs, shift, common_cap(g), model),
      codomain_(g.source(), g.target(), inputs, outputs, shift, common_cap(g), model) {
  if (g.inputs() != 1 || g.outputs() != 1 || g.shift() != 0) {
    throw std::invalid_argument("InducedMap: g must be a degree 0 map of arity (1,1)");
  }
  if (domain_.parts().size() != codomain_.parts().size()) {
    throw std::logic_error("InducedMap: domain and codomain windows differ");
  }
  MultiMap gpow = tensor_power(g, outputs);
  // g̃_* is block diagonal over source tuples; a block depends only on the
  // pair of slices, so equal slices share one block.
  for (std::size_t p = 0; p < domain_.parts().size(); ++p) {
    const auto& dp = domain_.parts()[p];
    const auto& cp = codomain_.parts()[p];
    auto key = std::make_pair(dp.slice, cp.slice);
    auto it = blocks_.find(key);
    if (it == blocks_.end()) {
      const Homology& dh = *dp.slice->homology;
      const Homology& ch = *cp.slice->homology;
      IntMatrix m(ch.group().rank(), dh.group().rank());
      for (std::size_t j = 0; j < dh.group().rank(); ++j) {
        Vec coords = dh.representative(dh.group().generator(j));
        Vec x = hom_element(dp.slice->here->hom, coords);
        Vec y = gpow.apply(dp.target_degree, x);
        auto c = ch.class_of(hom_coordinates(cp.slice->here->hom, y));
        if (!c) throw std::invalid_argument("InducedMap: g is not a chain map");
        for (std::size_t r = 0; r < c->size(); ++r) m(r, j) = (*c)[r];
      }
      Block blk;
      blk.map = GroupHom(dh.group(), ch.group(), std::move(m));
      blk.solver = std::make_shared<HomSolver>(blk.map);
      blk.injective = kernel(blk.map).group.is_trivial();
      std::vector<Vec> cols;
      for (std::size_t j = 0; j < blk.map.source().rank(); ++j) cols.push_back(blk.map.matrix().column(j));
      blk.surjective = quotient(blk.map.target(), cols).group.is_trivial();
      it = blocks_.emplace(key, std::move(blk)).first;
    }
    part_blocks_.push_back(&it->second);
  }
}

bool InducedMap::injective() const {
  for (const Block* b : part_blocks_) {
    if (!b->injective) return false;
  }
  return true;
}

bool InducedMap::surjective() const {
  for (const Block* b : part_blocks_) {
    if (!b->surjective) return false;
  }
  return true;
}

std::optional<MultiMap> InducedMap::preimage(const MultiMap& target_cocycle) const {
  auto cls = codomain_.class_of(target_cocycle);
  if (!cls) throw std::invalid_argument("InducedMap::preimage: argument is not a cocycle");
  Vec x(domain_.group().rank());
  for (std::size_t p = 0; p < part_blocks_.size(); ++p) {
    const Block& b = *part_blocks_[p];
    const auto& dp = domain_.parts()[p];
    const auto& cp = codomain_.parts()[p];
    const auto first = cls->begin() + static_cast<std::ptrdiff_t>(cp.offset);
    Vec y(first, first + static_cast<std::ptrdiff_t>(b.map.target().rank()));
    auto xp = b.solver->solve(y);
    if (!xp) return std::nullopt;
    std::copy(xp->begin(), xp->end(), x.begin() + static_cast<std::ptrdiff_t>(dp.offset));
  }
  return domain_.representative(x);
}

// --------------------------------------------------------- DenseHomComplex

DenseHomComplex::DenseHomComplex(SpacePtr source, SpacePtr target, int inputs, int outputs)
    : source_(std::move(source)), target_(std::move(target)), inputs_(inputs), outputs_(outputs) {}

const DenseHomComplex::Carrier& DenseHomComplex::carrier(int shift) const {
  auto it = carriers_.find(shift);
  if (it != carriers_.end()) return it->second;
  Carrier c;
  const TensorPower& sp = source_->power(inputs_);
  const TensorPower& tp = target_->power(outputs_);
  std::vector<Int> orders;
  for (int k = 0; k <= sp.max_degree(); ++k) {
    const int t = k + shift;
    if (t < 0 || t > tp.max_degree()) continue;
    HomGroup hg = hom_group(sp.group(k), tp.group(t));
    for (const Int& o : hg.group.orders()) orders.push_back(o);
    c.blocks.emplace_back(k, std::move(hg));
  }
  c.group = FpGroup(std::move(orders));
  return carriers_.emplace(shift, std::move(c)).first->second;
}

const FpGroup& DenseHomComplex::group(int shift) const { return carrier(shift).group; }

MultiMap DenseHomComplex::to_map(int shift, const Vec& coords) const {
  const Carrier& c = carrier(shift);
  MultiMap f(source_, target_, inputs_, outputs_, shift);
  std::size_t offset = 0;
  for (const auto& [k, hg] : c.blocks) {
    const std::size_t r = hg.group.rank();
    Vec sub(coords.begin() + static_cast<std::ptrdiff_t>(offset),
            coords.begin() + static_cast<std::ptrdiff_t>(offset + r));
    offset += r;
    IntMatrix m = hg.matrix(sub);
    for (std::size_t i = 0; i < m.cols(); ++i) f.set_column(k, i, m.column(i));
  }
  return f;
}

std::optional<Vec> DenseHomComplex::coordinates(const MultiMap& f) const {
  const Carrier& c = carrier(f.shift());
  Vec out;
  for (const auto& [k, hg] : c.blocks) {
    IntMatrix m(hg.target.rank(), hg.source.rank());
    for (std::size_t i = 0; i < hg.source.rank(); ++i) {
      for (const auto& [j, x] : f.column(k, i)) m(j, i) = x;
    }
    auto sub = hg.coordinates(m);
    if (!sub) return std::nullopt;
    out.insert(out.end(), sub->begin(), sub->end());
  }
  return out;
}

const GroupHom& DenseHomComplex::nabla(int shift) const {
  auto it = nablas_.find(shift);
  if (it != nablas_.end()) return it->second;
  const FpGroup& src = group(shift);
  const FpGroup& dst = group(shift + 1);
  IntMatrix m(dst.rank(), src.rank());
  for (std::size_t j = 0; j < src.rank(); ++j) {
    MultiMap nf = ainfty::nabla(to_map(shift, src.generator(j)));
    auto c = coordinates(nf);
    if (!c) throw std::logic_error("DenseHomComplex: ∇ left the Hom group");
    for (std::size_t r = 0; r < c->size(); ++r) m(r, j) = (*c)[r];
  }
  return nablas_.emplace(shift, GroupHom(src, dst, std::move(m))).first->second;
}

Homology DenseHomComplex::homology(int shift) const { return Homology(nabla(shift - 1), nabla(shift)); }

}  // namespace ainfty
