#include "ainfty/transfer.hpp"

#include <stdexcept>

namespace ainfty {

namespace {

std::string squeeze(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch != ' ' && ch != '\t') out += ch;
  }
  return out;
}

// 0 for an element of infinite order.
Int element_order(const FpGroup& g, const Vec& x) {
  Int out = 1;
  const Vec r = g.reduce(x);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Int& o = g.order(i);
    const Int& xi = r[i];
    if (xi == 0) continue;
    if (o == 0) return 0;
    out = boost::multiprecision::lcm(out, Int(o / order_gcd(o, xi)));
  }
  return out;
}

bool odd(int n) { return n % 2 != 0; }

std::string class_label(const std::string& rep) {
  bool single_word = rep.starts_with("[") && rep.find(" + ") == std::string::npos;
  return single_word ? "cls" + rep : "cls(" + rep + ")";
}

}  // namespace

std::string arity_name(const Arity& a) { return std::to_string(a.inputs) + std::to_string(a.outputs); }

// ----------------------------------------------------------------- targets

TargetAlgebra target_from_quotient(const QuotientDGA& algebra, bool reduced, const std::string& name) {
  auto q = std::make_shared<const QuotientDGA>(algebra);
  TargetAlgebra t;
  t.space = std::make_shared<Space>(q->complex(reduced), name);
  t.product = q->product(t.space);
  t.characteristic = q->presentation().unit_order();
  SpacePtr space = t.space;
  t.parse = [q, space](int arity, int degree, const std::string& text) -> Vec {
    if (arity != 1) return space->power(arity).parse(degree, text);
    AlgElement e = q->normal_form(q->presentation().parse(text));
    const FpGroup& g = space->base().group(degree);
    if (e.empty()) return g.zero();
    auto k = q->presentation().degree(e);
    if (*k != degree) {
      throw std::invalid_argument("'" + text + "' has degree " + std::to_string(*k) + ", expected " +
                                  std::to_string(degree));
    }
    if (g.rank() == 0) return g.zero();
    return q->coordinates(e);
  };
  t.parse_element = [q, space](const std::string& text) -> std::pair<int, Vec> {
    AlgElement e = q->presentation().parse(text);
    auto k = q->presentation().degree(e);
    if (!k) throw std::invalid_argument("cannot infer the degree of '" + text + "'");
    e = q->normal_form(e);
    const FpGroup& g = space->base().group(*k);
    if (e.empty() || g.rank() == 0) return {*k, g.zero()};
    return {*k, q->coordinates(e)};
  };
  return t;
}

TargetAlgebra target_from_bar(std::shared_ptr<const BarConstruction> bar, const std::string& name) {
  TargetAlgebra t;
  t.space = std::make_shared<Space>(bar->complex(), name);
  t.product = bar->mu_map(t.space);
  t.coproduct = bar->coproduct_map(t.space);
  t.characteristic = 2;
  SpacePtr space = t.space;
  t.parse = [bar, space](int arity, int degree, const std::string& text) -> Vec {
    if (arity != 1) return space->power(arity).parse(degree, text);
    return bar->to_vector(degree, bar->parse(text));
  };
  t.parse_element = [bar](const std::string& text) -> std::pair<int, Vec> {
    BarElement e = bar->parse(text);
    if (e.empty()) throw std::invalid_argument("cannot infer the degree of '" + text + "'");
    int k = bar->degree(*e.begin());
    return {k, bar->to_vector(k, e)};
  };
  return t;
}

// ---------------------------------------------------------------- Transfer

Transfer::Transfer(TargetAlgebra target, const Pins& pins, SourceModel model)
    : target_(std::move(target)), pins_(pins), model_(model) {
  build_homology();
}

const std::map<std::string, std::string>* Transfer::pin(const std::string& name) const {
  auto it = pins_.find(name);
  return it == pins_.end() ? nullptr : &it->second;
}

void Transfer::build_homology() {
  const Complex& b = target_.space->base();
  const int top = b.max_degree() - 1;
  if (top < 0) throw std::invalid_argument("target window too small for homology");

  std::map<int, std::vector<std::pair<std::string, Vec>>> pinned;
  if (const auto* table = pin("g")) {
    for (const auto& [label, text] : *table) {
      auto [k, v] = target_.parse_element(text);
      if (k > top) throw std::invalid_argument("pin g[" + label + "] lies above the homology window");
      pinned[k].emplace_back(label, v);
    }
  }

  Complex h(top);
  std::vector<std::vector<Vec>> cocycles(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) {
    Homology hk = b.homology(k);
    std::vector<std::string> labels;
    std::vector<Vec> classes;
    auto& reps = cocycles[static_cast<std::size_t>(k)];
    for (const auto& [label, v] : pinned[k]) {
      auto cls = hk.class_of(v);
      if (!cls) throw std::invalid_argument("pin g[" + label + "] is not a cocycle");
      labels.push_back(label);
      classes.push_back(*cls);
      reps.push_back(v);
      choices_.push_back({"g[" + label + "]", b.format(k, v), true, {}});
    }
    for (std::size_t j = 0; j < hk.group().rank(); ++j) {
      Quotient q = quotient(hk.group(), classes);
      if (q.group.is_trivial()) break;
      Vec cand = hk.group().generator(j);
      if (q.group.is_zero(q.projection(cand))) continue;
      Vec rep = hk.representative(cand);
      labels.push_back(class_label(b.format(k, rep)));
      classes.push_back(cand);
      reps.push_back(rep);
      choices_.push_back({"g[" + labels.back() + "]", b.format(k, rep), false, {}});
    }
    std::vector<Int> orders;
    for (const Vec& c : classes) orders.push_back(element_order(hk.group(), c));
    FpGroup free_part(orders, labels);
    IntMatrix m = IntMatrix::from_columns(hk.group().rank(), classes);
    GroupHom to_homology(free_part, hk.group(), m);
    bool iso = kernel(to_homology).group.is_trivial() && quotient(hk.group(), classes).group.is_trivial();
    if (!iso) {
      throw std::invalid_argument("pinned classes in degree " + std::to_string(k) + " do not form a basis of " +
                                  hk.group().describe());
    }
    h.set_group(k, free_part);
  }
  homology_ = std::make_shared<Space>(std::move(h), "H");
  g_ = MultiMap(homology_, target_.space, 1, 1, 0);
  for (int k = 0; k <= top; ++k) {
    const auto& reps = cocycles[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < reps.size(); ++i) g_.set_column(k, i, reps[i]);
  }
}

MultiMap Transfer::operation(const Arity& a) const {
  auto it = ops_.find(a);
  if (it != ops_.end()) return it->second;
  return MultiMap(homology_, homology_, a.inputs, a.outputs, 3 - a.inputs - a.outputs);
}

MultiMap Transfer::homotopy(const Arity& a) const {
  if (a == Arity{1, 1}) return g_;
  auto it = homotopies_.find(a);
  if (it != homotopies_.end()) return it->second;
  return MultiMap(homology_, target_.space, a.inputs, a.outputs, 2 - a.inputs - a.outputs);
}

MultiMap Transfer::map_from_table(const Arity& a, int shift, bool into_target,
                                  const std::map<std::string, std::string>& table) const {
  SpacePtr tgt = into_target ? target_.space : homology_;
  MultiMap f(homology_, tgt, a.inputs, a.outputs, shift);
  const TensorPower& sp = homology_->power(a.inputs);
  for (const auto& [key, text] : table) {
    const std::string want = squeeze(key);
    bool found = false;
    for (int k = 0; k <= sp.max_degree() && !found; ++k) {
      const auto& basis = sp.basis(k);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (squeeze(sp.label(basis[i])) != want) continue;
        found = true;
        if (!f.has_block(k)) throw std::invalid_argument("value for '" + key + "' lies outside the window");
        Vec v = into_target ? target_.parse(a.outputs, k + shift, text)
                            : homology_->power(a.outputs).parse(k + shift, text);
        f.set_column(k, i, v);
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown argument '" + key + "'");
  }
  return f;
}

MultiMap Transfer::g_tilde(const MultiMap& on_homology) const { return ainfty::g_tilde(g_, on_homology); }

namespace {

MultiMap insert(const MultiMap& op, int before, int after) {
  if (before == 0 && after == 0) return op;
  MultiMap id = MultiMap::identity(op.source(), 1);
  std::vector<MultiMap> factors(static_cast<std::size_t>(before), id);
  factors.push_back(op);
  for (int i = 0; i < after; ++i) factors.push_back(id);
  return tensor(factors);
}

}  // namespace

// z_k = -Σ (-1)^{r+st} ω_{r+1+t}(1^r ⊗ ω_s ⊗ 1^t) over 2 <= s <= k-1
MultiMap Transfer::stasheff_obstruction(int k) const {
  MultiMap z(homology_, homology_, k, 1, 3 - k);
  for (int s = 2; s <= k - 1; ++s) {
    MultiMap inner = operation({s, 1});
    if (inner.is_zero()) continue;
    for (int r = 0; r + s <= k; ++r) {
      const int t = k - s - r;
      MultiMap outer = operation({r + 1 + t, 1});
      if (outer.is_zero()) continue;
      MultiMap term = compose(outer, insert(inner, r, t));
      z = odd(r + s * t) ? z + term : z - term;
    }
  }
  return z;
}

// With f_1 = g and f_j = -g_j:
// φ_k = -Σ (-1)^{r+st} f_{r+1+t}(1^r ⊗ ω_s ⊗ 1^t) + Σ (-1)^{i-1} μ(f_i ⊗ f_{k-i}).
MultiMap Transfer::morphism_terms(int k) const {
  auto f = [&](int j) { return j == 1 ? g_ : -homotopy({j, 1}); };
  MultiMap phi(homology_, target_.space, k, 1, 2 - k);
  for (int s = 2; s <= k - 1; ++s) {
    MultiMap inner = operation({s, 1});
    if (inner.is_zero()) continue;
    for (int r = 0; r + s <= k; ++r) {
      const int t = k - s - r;
      MultiMap term = compose(f(r + 1 + t), insert(inner, r, t));
      phi = odd(r + s * t) ? phi + term : phi - term;
    }
  }
  for (int i = 1; i < k; ++i) {
    MultiMap term = compose(target_.product, tensor(f(i), f(k - i)));
    phi = odd(i - 1) ? phi - term : phi + term;
  }
  return phi;
}

const StepResult& Transfer::solve_step(const Arity& a, MultiMap z, MultiMap phi) {
  const int shift = 3 - a.inputs - a.outputs;
  const std::string name = arity_name(a);
  for (int k : z.degrees()) {
    if (z.interior(k) && !z.is_zero_at(k)) {
      throw std::runtime_error("step " + name + ": obstruction on homology is nonzero: " + z.describe());
    }
  }
  StepResult res{a, z, {}, phi, {}, {}, {}, {}, std::nullopt, false};
  if (const auto* table = pin("b" + name)) {
    res.b = map_from_table(a, shift, false, *table);
    choices_.push_back({"b" + name, res.b.describe(), true, {}});
  } else {
    res.b = MultiMap(homology_, homology_, a.inputs, a.outputs, shift);
  }
  InducedMap induced(g_, a.inputs, a.outputs, shift, model_);
  auto u = induced.preimage(g_tilde(res.b) - phi);
  if (!u) throw std::runtime_error("step " + name + ": class not in the image of g̃_*");
  res.correction = *u;
  choices_.push_back({"correction" + name, res.correction.describe(), false, {}});
  res.omega = res.b - res.correction;
  res.rhs = phi - g_tilde(res.omega);

  HomHomology hh(homology_, target_.space, a.inputs, a.outputs, shift - 1, std::nullopt, model_);
  res.canonical_homotopy = hh.solve_coboundary(res.rhs);
  if (const auto* table = pin("g" + name)) {
    // pinned arguments override the canonical solution
    if (!res.canonical_homotopy) throw std::runtime_error("step " + name + ": right side is not a coboundary");
    MultiMap pinned = map_from_table(a, shift - 1, true, *table);
    res.homotopy = *res.canonical_homotopy;
    const TensorPower& sp = homology_->power(a.inputs);
    std::vector<std::string> differs;
    for (const auto& [key, text] : *table) {
      for (int k : pinned.degrees()) {
        for (std::size_t i = 0; i < sp.basis(k).size(); ++i) {
          if (squeeze(sp.label(sp.basis(k)[i])) != squeeze(key)) continue;
          if (res.homotopy.column(k, i) != pinned.column(k, i)) differs.push_back(key);
          res.homotopy.set_column(k, i, pinned.column(k, i));
        }
      }
    }
    res.homotopy_pinned = true;
    if (!nabla(res.homotopy).equal_interior(res.rhs)) {
      throw std::runtime_error("step " + name + ": pinned homotopy does not solve its equation");
    }
    std::string note = "canonical solution agrees on pinned arguments";
    if (!differs.empty()) {
      note = "canonical solution differs on";
      for (const auto& d : differs) note += " " + d;
      note += "; canonical: " + res.canonical_homotopy->describe();
    }
    choices_.push_back({"g" + name, res.homotopy.describe(), true, note});
  } else {
    if (!res.canonical_homotopy) throw std::runtime_error("step " + name + ": right side is not a coboundary");
    res.homotopy = *res.canonical_homotopy;
    choices_.push_back({"g" + name, res.homotopy.describe(), false, {}});
  }
  ops_[a] = res.omega;
  homotopies_[a] = res.homotopy;
  return steps_[a] = std::move(res);
}

const StepResult& Transfer::induce_product() {
  return solve_step({2, 1}, MultiMap(homology_, homology_, 2, 1, 1), morphism_terms(2));
}

const StepResult& Transfer::induce_coproduct() {
  if (!target_.coproduct) throw std::invalid_argument("target has no coproduct");
  return solve_step({1, 2}, MultiMap(homology_, homology_, 1, 2, 1), compose(*target_.coproduct, g_));
}

const StepResult& Transfer::operadic_step(int m) {
  if (m < 3) throw std::invalid_argument("operadic_step needs arity >= 3");
  for (int j = 2; j < m; ++j) {
    if (!steps_.contains({j, 1})) throw std::logic_error("operadic_step: lower arities missing");
  }
  return solve_step({m, 1}, stasheff_obstruction(m), morphism_terms(m));
}

namespace {

// Relation (1) without the ω^{2,2} and g_2^2 terms, over ℤ2.
MultiMap hopf_terms(const Transfer& t) {
  const MultiMap& g = t.g();
  const MultiMap& mu = t.target().product;
  const MultiMap& delta = *t.target().coproduct;
  MultiMap mu_h = t.operation({2, 1});
  MultiMap delta_h = t.operation({1, 2});
  MultiMap g21 = t.homotopy({2, 1});
  MultiMap g12 = t.homotopy({1, 2});
  MultiMap gg = tensor_power(g, 2);

  MultiMap inner1 = tensor(compose(delta, g), g12) + tensor(g12, compose(gg, delta_h));
  MultiMap t1 = compose(tensor(mu, mu), compose(sigma(t.target().space, 2, 2), inner1));
  MultiMap outer2 = tensor(compose(mu, gg), g21) + tensor(g21, compose(g, mu_h));
  MultiMap t2 = compose(outer2, compose(sigma(t.homology(), 2, 2), tensor(delta_h, delta_h)));
  return t1 + t2 + compose(delta, g21) + compose(g12, mu_h);
}

MultiMap hopf_obstruction(const Transfer& t) {
  MultiMap mu_h = t.operation({2, 1});
  MultiMap delta_h = t.operation({1, 2});
  MultiMap pushed = compose(tensor(mu_h, mu_h), compose(sigma(t.homology(), 2, 2), tensor(delta_h, delta_h)));
  return compose(delta_h, mu_h) + pushed;
}

}  // namespace

const StepResult& Transfer::omega22_step() {
  if (target_.characteristic != 2) throw std::invalid_argument("the (2,2) step is implemented over ℤ2 only");
  if (!steps_.contains({2, 1})) induce_product();
  if (!steps_.contains({1, 2})) induce_coproduct();
  return solve_step({2, 2}, hopf_obstruction(*this), hopf_terms(*this));
}

std::vector<CheckEntry> Transfer::a_infinity_check(int max_arity) const {
  std::vector<CheckEntry> out;
  for (int k = 3; k <= max_arity; ++k) {
    MultiMap z = stasheff_obstruction(k);
    bool ok = true;
    for (int d : z.degrees()) ok = ok && (!z.interior(d) || z.is_zero_at(d));
    out.push_back({"stasheff" + std::to_string(k), ok, ok ? "zero residual" : z.describe()});
  }
  return out;
}

std::vector<CheckEntry> Transfer::morphism_check() const {
  std::vector<CheckEntry> out;
  MultiMap dg = nabla(g_);
  bool chain = true;
  for (int d : dg.degrees()) chain = chain && (!dg.interior(d) || dg.is_zero_at(d));
  out.push_back({"g11", chain, chain ? "g is a chain map" : dg.describe()});
  for (const auto& [a, h] : homotopies_) {
    MultiMap phi;
    if (a.outputs == 1) {
      phi = morphism_terms(a.inputs);
    } else if (a == Arity{1, 2}) {
      phi = compose(*target_.coproduct, g_);
    } else if (a == Arity{2, 2}) {
      phi = hopf_terms(*this);
    } else {
      continue;
    }
    MultiMap residual = nabla(h) - (phi - g_tilde(operation(a)));
    bool ok = true;
    for (int d : residual.degrees()) ok = ok && (!residual.interior(d) || residual.is_zero_at(d));
    out.push_back({"g" + arity_name(a), ok, ok ? "zero residual" : residual.describe()});
  }
  return out;
}

IsoReport Transfer::induced_iso_check(const Arity& a, int shift, SourceModel model) const {
  InducedMap induced(g_, a.inputs, a.outputs, shift, model);
  IsoReport r{a, shift, model, induced.injective(), induced.surjective(),
              describe_invariants(induced.domain().group().invariant_factors()),
              describe_invariants(induced.codomain().group().invariant_factors()), {}};
  std::set<int> skipped = induced.domain().skipped_degrees();
  skipped.insert(induced.codomain().skipped_degrees().begin(), induced.codomain().skipped_degrees().end());
  r.skipped_degrees.assign(skipped.begin(), skipped.end());
  return r;
}

// ----------------------------------------------------- homotopy inverse

InverseSearch no_homotopy_inverse_check(const Complex& target, const Complex& homology, const GroupHom& g_k,
                                        int degree, const Vec& x) {
  InverseSearch out{degree, target.format(degree, x), 0, 0, true};
  const FpGroup& bk = target.group(degree);
  HomGroup fs = hom_group(bk, homology.group(degree));
  HomGroup s_up = hom_group(target.group(degree + 1), bk);
  HomGroup s_here = hom_group(bk, target.group(degree - 1));
  for (const HomGroup* h : {&fs, &s_up, &s_here}) {
    if (!h->group.is_finite()) throw std::invalid_argument("homotopy inverse search space is infinite");
  }
  const Vec dx = target.differential(degree)(x);
  const auto f_all = fs.group.elements();
  const auto up_all = s_up.group.elements();
  const auto here_all = s_here.group.elements();
  out.search_space = f_all.size() * up_all.size() * here_all.size();
  for (const Vec& fc : f_all) {
    Vec lhs = bk.reduce(x);
    Vec gfx = g_k(fs.hom(fc)(x));
    for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= gfx[i];
    lhs = bk.reduce(lhs);
    for (const Vec& uc : up_all) {
      Vec sdx = s_up.hom(uc)(dx);
      for (const Vec& hc : here_all) {
        Vec dsx = degree > 0 ? target.differential(degree - 1)(s_here.hom(hc)(x)) : bk.zero();
        Vec rhs = sdx;
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += dsx[i];
        if (bk.equal(lhs, rhs)) ++out.solutions;
      }
    }
  }
  return out;
}

}  // namespace ainfty
