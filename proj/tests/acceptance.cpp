// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>

#include "ainfty/pipeline.hpp"

using namespace ainfty;
using nlohmann::json;

namespace {

const std::string kProblems = AINFTY_PROBLEMS_DIR;

struct Outcome {
  bool ok = false;
  std::string detail;
};

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

json load_doc(const std::string& file) {
  std::ifstream in(kProblems + "/" + file);
  return json::parse(in);
}

json run_doc(const json& doc) { return run_problem(parse_problem(doc)).report; }

json torsion_homology_doc() {
  json doc = load_doc("torsion_quotient.json");
  doc["pipeline"] = "homology";
  doc["max_degree"] = 13;  // H^n needs d out of degree n, so n <= 12 needs a window of 13
  doc.erase("expect");
  doc["parameters"].erase("evaluate");
  return doc;
}

json cup1_bar_doc() {
  json doc = load_doc("cup1_bar.json");
  doc["pipeline"] = "bar";
  doc.erase("expect");
  return doc;
}

json cup1_transfer_doc() {
  json doc = load_doc("cup1_bar.json");
  doc["pipeline"] = "transfer";
  doc.erase("expect");
  doc["parameters"].erase("evaluate");
  return doc;
}

bool check_ok(const json& report, const std::string& name) {
  return report["checks"].contains(name) && report["checks"][name]["ok"].get<bool>();
}

const QuotientDGA& torsion_algebra() {
  static const QuotientDGA q = [] {
    Problem p = parse_problem(load_doc("torsion_quotient.json"));
    return QuotientDGA(std::get<AlgebraInput>(p.input).presentation, p.max_degree);
  }();
  return q;
}

Pins torsion_pins() { return parse_problem(load_doc("torsion_quotient.json")).pins; }

// ------------------------------------------------------------ criterion 9 oracle

struct RandomComplex {
  Complex complex;
  int top;
};

// Finite cyclic groups in degrees 0..top with total order <= 64 and random
// homomorphisms; d_{k+1} is resampled until d_{k+1} d_k = 0.
RandomComplex random_complex(std::mt19937& rng) {
  static const std::vector<int> orders{2, 3, 4, 5, 6, 8, 9, 12, 16};
  std::uniform_int_distribution<int> top_dist(2, 4);
  int top = top_dist(rng);
  Complex c(top);
  long budget = 64;
  for (int k = 0; k <= top; ++k) {
    std::vector<Int> os;
    std::uniform_int_distribution<int> count(0, 2);
    for (int n = count(rng); n > 0; --n) {
      std::vector<int> fits;
      for (int o : orders) {
        if (o <= budget) fits.push_back(o);
      }
      if (fits.empty()) break;
      int o = fits[std::uniform_int_distribution<std::size_t>(0, fits.size() - 1)(rng)];
      budget /= o;
      os.push_back(o);
    }
    c.set_group(k, FpGroup(os));
  }
  for (int k = 0; k < top; ++k) {
    const FpGroup& src = c.group(k);
    const FpGroup& dst = c.group(k + 1);
    for (int attempt = 0;; ++attempt) {
      IntMatrix m(dst.rank(), src.rank());
      if (attempt < 40) {
        for (std::size_t i = 0; i < dst.rank(); ++i) {
          for (std::size_t j = 0; j < src.rank(); ++j) {
            // a multiple of o_i / gcd(o_i, o_j) is a well-defined map Z_{o_j} -> Z_{o_i}
            Int step = dst.order(i) / order_gcd(dst.order(i), src.order(j));
            long reps = static_cast<long>(dst.order(i) / step);
            m(i, j) = step * std::uniform_int_distribution<long>(0, reps - 1)(rng);
          }
        }
      }
      GroupHom d(src, dst, m);
      if (k == 0 || d.after(c.differential(k - 1)).is_zero() || attempt >= 40) {
        c.set_differential(k, d);
        break;
      }
    }
  }
  return {c, top};
}

// Number of elements killed by n, per n up to the exponent: determines a finite abelian group.
std::vector<std::size_t> torsion_profile(const std::vector<Vec>& elements, const std::function<bool(const Vec&)>& is_zero,
                                         int max_n) {
  std::vector<std::size_t> out;
  for (int n = 1; n <= max_n; ++n) {
    std::size_t c = 0;
    for (const Vec& x : elements) {
      Vec y = x;
      for (auto& v : y) v *= n;
      if (is_zero(y)) ++c;
    }
    out.push_back(c);
  }
  return out;
}

Outcome criterion9() {
  std::mt19937 rng(20240611);
  std::size_t groups_checked = 0, solves_checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomComplex rc = random_complex(rng);
    const Complex& c = rc.complex;
    for (int k = 0; k < rc.top; ++k) {
      const FpGroup& ck = c.group(k);
      const GroupHom& d_out = c.differential(k);
      GroupHom d_in = k == 0 ? GroupHom::zero(FpGroup(), ck) : c.differential(k - 1);

      // brute force: cycles and boundaries by enumeration
      std::vector<Vec> all = ck.elements();
      std::vector<Vec> cycles;
      for (const Vec& x : all) {
        if (c.group(k + 1).is_zero(d_out(x))) cycles.push_back(ck.reduce(x));
      }
      std::set<Vec> boundaries;
      for (const Vec& y : d_in.source().elements()) boundaries.insert(ck.reduce(d_in(y)));
      auto in_b = [&](const Vec& v) { return boundaries.contains(ck.reduce(v)); };

      Homology h = c.homology(k);
      const FpGroup& hg = h.group();
      require(hg.is_finite(), "random complex has infinite homology");
      std::size_t brute = cycles.size() / boundaries.size();
      require(cycles.size() % boundaries.size() == 0, "boundaries do not divide cycles");
      require(hg.cardinality() == brute, "trial " + std::to_string(trial) + " degree " + std::to_string(k) +
                                             ": |H| = " + to_string(hg.cardinality()) + ", enumeration gives " +
                                             std::to_string(brute));
      // isomorphism type: elements of Z/B killed by n, counted as cosets
      std::vector<std::size_t> library = torsion_profile(hg.elements(), [&](const Vec& v) { return hg.is_zero(v); }, 64);
      std::vector<std::size_t> oracle;
      for (int n = 1; n <= 64; ++n) {
        std::size_t killed = 0;
        for (const Vec& z : cycles) {
          Vec y = z;
          for (auto& v : y) v *= n;
          if (in_b(y)) ++killed;
        }
        oracle.push_back(killed / boundaries.size());
      }
      require(library == oracle, "trial " + std::to_string(trial) + " degree " + std::to_string(k) +
                                     ": homology group type differs from enumeration");
      // class map: two cycles share a class iff they differ by a boundary
      for (std::size_t i = 0; i < cycles.size(); ++i) {
        require(h.is_boundary(cycles[i]) == in_b(cycles[i]), "is_boundary disagrees with enumeration");
        auto ci = h.class_of(cycles[i]);
        require(ci.has_value(), "class_of rejected a cycle");
        require(in_b(h.representative(*ci)) == hg.is_zero(*ci), "representative of the zero class is not a boundary");
        for (std::size_t j = i + 1; j < cycles.size() && j < i + 8; ++j) {
          Vec diff = cycles[i];
          for (std::size_t t = 0; t < diff.size(); ++t) diff[t] -= cycles[j][t];
          require(hg.equal(*ci, *h.class_of(cycles[j])) == in_b(diff), "class_of disagrees with enumeration");
        }
      }
      ++groups_checked;

      // solve d x = y for every y in the next group
      HomSolver solver(d_out);
      std::set<Vec> image;
      for (const Vec& x : all) image.insert(c.group(k + 1).reduce(d_out(x)));
      for (const Vec& y : c.group(k + 1).elements()) {
        auto x = solver.solve(y);
        require(x.has_value() == image.contains(c.group(k + 1).reduce(y)), "solve existence disagrees with enumeration");
        if (x) require(c.group(k + 1).equal(d_out(*x), y), "solve returned a non-solution");
        ++solves_checked;
      }
    }
  }
  return {true, "100 random complexes: " + std::to_string(groups_checked) + " homology groups and " +
                    std::to_string(solves_checked) + " solves match enumeration"};
}

}  // namespace

int main() {
  std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria;
  std::map<std::string, json> reports;  // first runs, reused by the determinism check
  auto report = [&](const std::string& key, const std::function<json()>& make) -> const json& {
    if (!reports.contains(key)) reports[key] = make();
    return reports[key];
  };
  auto tq_homology = [&]() -> const json& { return report("tq_homology", [] { return run_doc(torsion_homology_doc()); }); };
  auto tq = [&]() -> const json& { return report("tq", [] { return run_doc(load_doc("torsion_quotient.json")); }); };
  auto cup_bar = [&]() -> const json& { return report("cup_bar", [] { return run_doc(cup1_bar_doc()); }); };
  auto cup_tr = [&]() -> const json& { return report("cup_tr", [] { return run_doc(cup1_transfer_doc()); }); };

  criteria[1] = {"homology table of the torsion quotient", [&] {
                   const json& r = tq_homology();
                   std::string table;
                   for (int n = 0; n <= 12; ++n) {
                     std::string expected = n == 0 ? "Z" : (n == 2 || n == 5 || n == 7) ? "Z2" : "0";
                     std::string got = r["homology"][n]["group"];
                     require(got == expected, "H^" + std::to_string(n) + " = " + got + ", expected " + expected);
                     if (got != "0") table += (table.empty() ? "" : ", ") + ("H^" + std::to_string(n) + "=" + got);
                   }
                   return Outcome{true, table + ", all other H^n = 0 for n <= 12"};
                 }};

  criteria[2] = {"obstruction cocycle mu(g x g) - g mu_H", [&] {
                   Transfer t(target_from_quotient(torsion_algebra(), true), torsion_pins());
                   const StepResult& s = t.induce_product();
                   // recomputed from the primitives, not from the step
                   MultiMap z = compose(t.target().product, tensor_power(t.g(), 2)) - compose(t.g(), s.omega);
                   MultiMap expected = t.map_from_table({2, 1}, 0, true,
                                                     {{"u|u", "a^2"}, {"u|w", "a^3c+ca^3"}, {"w|u", "a^3c+ca^3"}});
                   require(z.equal_interior(expected), "z = " + z.describe());
                   require(s.rhs.equal_interior(expected), "step right side = " + s.rhs.describe());
                   const json& r = tq();
                   require(r["transfer"]["steps"]["21"]["rhs"] == map_values(expected), "report disagrees");
                   return Outcome{true, "z = " + z.describe() + " (normal form of a^2 and a^3c+ca^3)"};
                 }};

  criteria[3] = {"induced operations and Stasheff identities", [&] {
                   const json& r = tq();
                   const json& ops = r["transfer"]["operations"];
                   require(ops["21"]["values"] == json({{"u|v", "w"}, {"v|u", "w"}}), "mu_H = " + ops["21"]["values"].dump());
                   require(ops["31"]["values"] == json({{"u|u|u", "v"}}), "mu3 = " + ops["31"]["values"].dump());
                   require(ops["41"]["values"].empty() && ops["51"]["values"].empty(), "mu4 or mu5 nonzero");
                   for (int k = 3; k <= 5; ++k) require(check_ok(r, "stasheff.stasheff" + std::to_string(k)), "Stasheff " + std::to_string(k));
                   require(r["truncation"]["max_degree"] == 16, "window");
                   return Outcome{true, "uv = vu = w, mu3(u|u|u) = v, mu4 = mu5 = 0, Stasheff residuals zero for arities 3-5, H through degree 15"};
                 }};

  criteria[4] = {"homotopy g2 solves nabla g2 = z", [&] {
                   Transfer t(target_from_quotient(torsion_algebra(), true), torsion_pins());
                   const StepResult& s = t.induce_product();
                   require(nabla(s.homotopy).equal_interior(s.rhs), "nabla g2 != z");
                   MultiMap expected = t.map_from_table({2, 1}, -1, true, {{"u|u", "c"}, {"u|w", "cac"}, {"w|u", "cac"}});
                   require(s.canonical_homotopy && s.canonical_homotopy->equal_interior(expected), "canonical g2 differs");
                   Pins pins = torsion_pins();
                   pins["g21"] = {{"u|u", "c"}, {"u|w", "cac"}, {"w|u", "cac"}};
                   Transfer pinned(target_from_quotient(torsion_algebra(), true), pins);
                   const StepResult& sp = pinned.induce_product();
                   require(sp.homotopy_pinned, "pin not applied");
                   MultiMap pinned_expected = pinned.map_from_table({2, 1}, -1, true, {{"u|u", "c"}, {"u|w", "cac"}, {"w|u", "cac"}});
                   require(sp.homotopy.equal_interior(pinned_expected), "pinned g2 = " + sp.homotopy.describe());
                   require(nabla(sp.homotopy).equal_interior(sp.rhs), "pinned g2 does not solve");
                   for (int m = 3; m <= 5; ++m) pinned.operadic_step(m);
                   for (const auto& c : pinned.morphism_check()) require(c.ok, c.name + ": " + c.detail);
                   require(check_ok(tq(), "morphism.g21"), "report morphism check");
                   return Outcome{true, "canonical solution equals c d_{u|u} + cac (d_{u|w} + d_{w|u}); pinned run has zero morphism residual"};
                 }};

  criteria[5] = {"no homotopy inverse at b", [&] {
                   const json& s = tq()["transfer"]["inverse_search"];
                   require(s["solutions"] == 0, "solutions found");
                   require(s["exhaustive"] == true, "search not exhaustive");
                   return Outcome{true, "x - g f x = s d x + d s x has no solution at b over all " +
                                            s["search_space"].dump() + " (f, s, s') triples"};
                 }};

  criteria[6] = {"bar construction identities through degree 12", [&] {
                   const json& r = cup_bar();
                   for (const char* c : {"bar.d_squared", "bar.coassociative", "bar.counit", "bar.coproduct_chain_map",
                                         "bar.mu_unit", "bar.mu_chain_map", "bar.mu_associative", "bar.hopf"}) {
                     require(check_ok(r, c), std::string(c) + ": " + r["checks"][c]["detail"].get<std::string>());
                   }
                   require(r["values"]["mu([b], [b])"] == "[a2a3]", "mu([b],[b]) = " + r["values"]["mu([b], [b])"].dump());
                   require(r["values"]["d([a2|a3])"] == "[a2a3]", "d[a2|a3] = " + r["values"]["d([a2|a3])"].dump());
                   return Outcome{true, "d^2 = 0, coassociative, mu([b],[b]) = [a2a3], d[a2|a3] = [a2a3], mu chain map, associative, Hopf compatible"};
                 }};

  criteria[7] = {"omega22(beta x beta) = alpha2 x alpha3", [&] {
                   const json& r = cup_tr();
                   std::string v = r["transfer"]["operations"]["22"]["values"]["beta|beta"];
                   require(v == "alpha2|alpha3", "omega22(beta|beta) = " + v);
                   require(check_ok(r, "morphism.g22"), "relation (2,2) residual has nonzero class");
                   json other = cup1_transfer_doc();
                   other["parameters"].erase("iso_checks");
                   other["pins"]["g21"]["beta|beta"] = "[a3|a2]";
                   std::string w = run_doc(other)["transfer"]["operations"]["22"]["values"]["beta|beta"];
                   require(w == "alpha3|alpha2", "other pin gives " + w);
                   return Outcome{true, "alpha2|alpha3 with g21(beta|beta) = [a2|a3] (alpha3|alpha2 with [a3|a2]); (2,2) residual class zero"};
                 }};

  criteria[8] = {"induced maps on Hom homology are isomorphisms", [&] {
                   std::size_t n = 0;
                   for (const json* r : {&tq(), &cup_tr()}) {
                     for (const auto& row : (*r)["transfer"]["iso_checks"]) {
                       require(row["injective"] == true && row["surjective"] == true,
                               "arity " + row["arity"].get<std::string>() + " shift " + row["shift"].dump() + " " +
                                   row["model"].get<std::string>());
                       ++n;
                     }
                   }
                   // with two outputs the torsion example is outside the hypotheses (H is not free)
                   Transfer t(target_from_quotient(torsion_algebra(), true), torsion_pins());
                   std::string finding;
                   for (Arity a : {Arity{1, 2}, Arity{2, 2}}) {
                     for (int shift : {3 - a.inputs - a.outputs, 4 - a.inputs - a.outputs}) {
                       IsoReport rep = t.induced_iso_check(a, shift, SourceModel::Free);
                       if (!rep.ok()) finding += " " + arity_name(a) + "@" + std::to_string(shift);
                     }
                   }
                   return Outcome{true, std::to_string(n) + " (arity, shift, model) checks pass: torsion example at every arity and shift "
                                        "its steps use, cup-one example at 21/12/31/22 in both models" +
                                            (finding.empty() ? "" : "; unused two-output arities of the torsion example are not surjective:" + finding)};
                 }};

  criteria[9] = {"homology and solve against enumeration", criterion9};

  criteria[10] = {"byte-identical reports across runs", [&] {
                    std::vector<std::pair<std::string, std::function<json()>>> again{
                        {"tq_homology", [] { return run_doc(torsion_homology_doc()); }},
                        {"tq", [] { return run_doc(load_doc("torsion_quotient.json")); }},
                        {"cup_bar", [] { return run_doc(cup1_bar_doc()); }},
                        {"cup_tr", [] { return run_doc(cup1_transfer_doc()); }}};
                    std::size_t bytes = 0;
                    for (auto& [key, make] : again) {
                      std::string first = dump_report(report(key, make));
                      std::string second = dump_report(make());
                      require(first == second, key + " differs between runs");
                      bytes += first.size();
                    }
                    return Outcome{true, "4 reports, " + std::to_string(bytes) + " bytes, identical on rerun"};
                  }};

  int failures = 0;
  for (auto& [n, entry] : criteria) {
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, e.what()};
    }
    if (!o.ok) ++failures;
    std::printf("%s criterion %2d: %s -- %s\n", o.ok ? "PASS" : "FAIL", n, entry.first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
