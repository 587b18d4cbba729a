#include "ainfty/pipeline.hpp"

#include <sstream>

namespace ainfty {

using nlohmann::json;

namespace {

std::string str(const Int& x) { return to_string(x); }

json invariants(const FpGroup& g) {
  json a = json::array();
  for (const Int& f : g.invariant_factors()) a.push_back(str(f));
  return a;
}

json homology_table(const Complex& c) {
  json rows = json::array();
  for (int k = 0; k < c.max_degree(); ++k) {
    Homology h = c.homology(k);
    const FpGroup& g = h.group();
    rows.push_back({{"degree", k}, {"group", describe_invariants(g.invariant_factors())}, {"invariant_factors", invariants(g)}});
  }
  return rows;
}

Vec densify(const SparseVec& s, std::size_t rank) {
  Vec v(rank, Int(0));
  for (const auto& [i, x] : s) v[i] = x;
  return v;
}

GroupHom degree_block(const MultiMap& f, int degree) {
  const FpGroup& src = f.source_power().group(degree);
  const FpGroup& dst = f.target_power().group(degree + f.shift());
  IntMatrix m(dst.rank(), src.rank());
  for (std::size_t j = 0; j < src.rank(); ++j) {
    for (const auto& [i, x] : f.column(degree, j)) m(i, j) = x;
  }
  return GroupHom(src, dst, m);
}

json map_entry(const MultiMap& f) {
  json truncated = json::array();
  for (int k : f.truncated()) truncated.push_back(k);
  return {{"shift", f.shift()}, {"values", map_values(f)}, {"truncated_degrees", truncated}};
}

// keyed by name so report diffs point at the choice that moved
json choices_json(const std::vector<Choice>& choices) {
  json a = json::object();
  for (const auto& c : choices) a[c.name] = {{"value", c.value}, {"pinned", c.pinned}, {"note", c.note}};
  return a;
}

const char* model_name(SourceModel m) { return m == SourceModel::Free ? "free" : "exact"; }

struct Run {
  const Problem& p;
  json report;
  json checks = json::object();
  bool ok = true;

  void check(const std::string& name, bool passed, const std::string& detail = {}) {
    checks[name] = {{"ok", passed}, {"detail", detail}};
    ok = ok && passed;
  }
  void check_list(const std::string& name, const std::vector<std::string>& violations) {
    std::string detail;
    for (std::size_t i = 0; i < violations.size() && i < 5; ++i) detail += (i ? "; " : "") + violations[i];
    if (violations.size() > 5) detail += "; ... (" + std::to_string(violations.size()) + " total)";
    check(name, violations.empty(), detail);
  }

  bool wants_homology() const { return p.pipeline == Pipeline::Homology || p.pipeline == Pipeline::Verify; }
  bool wants_bar() const { return p.pipeline == Pipeline::Bar || p.pipeline == Pipeline::Verify; }
  bool wants_transfer() const { return p.pipeline == Pipeline::Transfer || p.pipeline == Pipeline::Verify; }

  void run_complex(const ComplexInput& in) {
    Complex c = build_complex(in, p.max_degree);
    check("d_squared", c.check_d_squared().empty());
    report["homology"] = homology_table(c);
  }

  void run_algebra(const AlgebraInput& in) {
    QuotientDGA q(in.presentation, p.max_degree);
    if (wants_homology() || p.pipeline == Pipeline::Transfer) {
      // the table is of B itself; the transfer reads the reduced complex when asked
      Complex full = q.complex(false);
      check("d_squared", full.check_d_squared().empty());
      std::vector<std::string> closure;
      for (const auto& v : q.check_ideal_closure()) closure.push_back("degree " + std::to_string(v.degree) + ": " + v.detail);
      check_list("ideal_closure", closure);
      report["homology"] = homology_table(full);
    }
    evaluate_algebra(q);
    if (wants_transfer()) run_transfer(target_from_quotient(q, in.reduced), p.max_degree);
  }

  void evaluate_algebra(const QuotientDGA& q) {
    json values = json::object();
    for (const Evaluation& e : p.evaluate) {
      std::string key = e.op + "(" + join(e.args) + ")";
      try {
        const AlgebraPresentation& ap = q.presentation();
        AlgElement r;
        if (e.op == "product") r = q.multiply(q.normal_form(ap.parse(e.args[0])), q.normal_form(ap.parse(e.args[1])));
        else if (e.op == "d") r = q.differential(q.normal_form(ap.parse(e.args[0])));
        else if (e.op == "normal_form") r = q.normal_form(ap.parse(e.args[0]));
        else throw std::invalid_argument(e.op + " is not defined on an algebra input");
        values[key] = ap.format(q.normal_form(r));
      } catch (const std::invalid_argument& ex) {
        throw ProblemError(kExitValidation, {{"/parameters/evaluate", key + ": " + ex.what()}});
      }
    }
    if (!values.empty()) report["values"] = values;
  }

  void run_dga(const DgaInput& in) {
    std::shared_ptr<const BarConstruction> bar;
    if (wants_homology() || wants_bar()) {
      bar = std::make_shared<const BarConstruction>(in.dga, p.max_degree);
    }
    if (wants_homology()) report["homology"] = homology_table(bar->complex());
    if (wants_bar()) {
      const int bound = p.max_degree;
      check_list("bar.d_squared", bar->check_d_squared(bound));
      check_list("bar.coassociative", bar->check_coassociative(bound));
      check_list("bar.counit", bar->check_counit(bound));
      check_list("bar.coproduct_chain_map", bar->check_coproduct_chain_map(bound));
      check_list("bar.mu_unit", bar->check_mu_unit(bound));
      check_list("bar.mu_chain_map", bar->check_mu_chain_map(bound));
      check_list("bar.mu_associative", bar->check_mu_associative(bound));
      check_list("bar.hopf", bar->check_hopf(bound));
      check_list("bar.letters_primitive", bar->check_letters_primitive());
      evaluate_bar(*bar);
    }
    if (wants_transfer()) {
      int window = p.transfer_max_degree.value_or(p.max_degree);
      auto small = std::make_shared<const BarConstruction>(in.dga, window);
      run_transfer(target_from_bar(small), window);
    }
  }

  void evaluate_bar(const BarConstruction& bar) {
    json values = json::object();
    for (const Evaluation& e : p.evaluate) {
      std::string key = e.op + "(" + join(e.args) + ")";
      try {
        if (e.op == "mu") {
          BarElement x = bar.parse(e.args[0]), y = bar.parse(e.args[1]);
          BarTensor t;
          for (const auto& u : x) {
            for (const auto& v : y) toggle(t, {u, v});
          }
          values[key] = bar.format(bar.mu(t));
        } else if (e.op == "d") {
          values[key] = bar.format(bar.diff(bar.parse(e.args[0])));
        } else if (e.op == "coproduct") {
          values[key] = bar.format(bar.coproduct(bar.parse(e.args[0])));
        } else {
          throw std::invalid_argument(e.op + " is not defined on a bar construction");
        }
      } catch (const std::invalid_argument& ex) {
        throw ProblemError(kExitValidation, {{"/parameters/evaluate", key + ": " + ex.what()}});
      }
    }
    if (!values.empty()) report["values"] = values;
  }

  void run_transfer(TargetAlgebra target, int window) {
    std::optional<Transfer> t;
    try {
      t.emplace(std::move(target), p.pins);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(kExitValidation, {{"/pins", e.what()}});
    }
    json& out = report["transfer"];
    out["window"] = window;
    json classes = json::array();
    const Complex& h = t->homology()->base();
    for (int k = 0; k <= h.max_degree(); ++k) {
      for (std::size_t i = 0; i < h.group(k).rank(); ++i) {
        classes.push_back({{"degree", k}, {"name", h.group(k).label(i)}, {"order", str(h.group(k).order(i))}});
      }
    }
    out["classes"] = classes;
    out["representatives"] = map_values(t->g());

    bool steps_ok = run_steps(*t);
    json steps = json::object();
    for (const auto& [a, s] : t->steps()) {
      json e = {{"obstruction", map_values(s.z)},
                {"b", map_values(s.b)},
                {"phi", map_values(s.phi)},
                {"correction", map_values(s.correction)},
                {"rhs", map_values(s.rhs)},
                {"homotopy_pinned", s.homotopy_pinned}};
      if (s.canonical_homotopy) e["canonical_homotopy"] = map_values(*s.canonical_homotopy);
      steps[arity_name(a)] = e;
    }
    out["steps"] = steps;
    json ops = json::object(), homs = json::object();
    for (const auto& [a, f] : t->operations()) ops[arity_name(a)] = map_entry(f);
    for (const auto& [a, f] : t->homotopies()) homs[arity_name(a)] = map_entry(f);
    out["operations"] = ops;
    out["homotopies"] = homs;
    out["choices"] = choices_json(t->choices());

    if (steps_ok) {
      for (const auto& c : t->a_infinity_check(p.max_arity)) check("stasheff." + c.name, c.ok, c.detail);
      for (const auto& c : t->morphism_check()) check("morphism." + c.name, c.ok, c.detail);
    }
    run_iso_checks(*t);
    run_inverse_search(*t);
  }

  bool run_steps(Transfer& t) {
    std::string current = "21";
    try {
      t.induce_product();
      check("step.21", true);
      if (t.target().coproduct) {
        current = "12";
        t.induce_coproduct();
        check("step.12", true);
      }
      for (int m = 3; m <= p.max_arity; ++m) {
        current = std::to_string(m) + "1";
        t.operadic_step(m);
        check("step." + current, true);
      }
      if (p.omega22) {
        current = "22";
        t.omega22_step();
        check("step.22", true);
      }
    } catch (const std::invalid_argument& e) {
      throw ProblemError(kExitValidation, {{"/pins", "step " + current + ": " + e.what()}});
    } catch (const std::runtime_error& e) {
      check("step." + current, false, e.what());
      return false;
    }
    return true;
  }

  void run_iso_checks(const Transfer& t) {
    if (p.iso_checks.empty()) return;
    json rows = json::array();
    for (const IsoRequest& r : p.iso_checks) {
      for (int shift : r.shifts) {
        for (SourceModel m : r.models) {
          IsoReport rep = t.induced_iso_check(r.arity, shift, m);
          json skipped = json::array();
          for (int k : rep.skipped_degrees) skipped.push_back(k);
          rows.push_back({{"arity", arity_name(r.arity)},
                          {"shift", shift},
                          {"model", model_name(m)},
                          {"injective", rep.injective},
                          {"surjective", rep.surjective},
                          {"domain", rep.domain},
                          {"codomain", rep.codomain},
                          {"skipped_degrees", skipped}});
          check("iso." + arity_name(r.arity) + ".shift" + std::to_string(shift) + "." + model_name(m), rep.ok(),
                std::string(rep.injective ? "" : "not injective ") + (rep.surjective ? "" : "not surjective"));
        }
      }
    }
    report["transfer"]["iso_checks"] = rows;
  }

  void run_inverse_search(const Transfer& t) {
    if (!p.inverse_search) return;
    const InverseRequest& r = *p.inverse_search;
    Vec x;
    try {
      x = t.target().parse(1, r.degree, r.element);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(kExitValidation, {{"/parameters/inverse_search/element", e.what()}});
    }
    const Complex& target = t.target().space->base();
    if (r.degree < 0 || r.degree >= target.max_degree() || !t.g().has_block(r.degree)) {
      throw ProblemError(kExitValidation, {{"/parameters/inverse_search/degree", "outside the window"}});
    }
    InverseSearch s;
    try {
      s = no_homotopy_inverse_check(target, t.homology()->base(), degree_block(t.g(), r.degree), r.degree, x);
    } catch (const std::invalid_argument& e) {
      throw ProblemError(kExitValidation, {{"/parameters/inverse_search", e.what()}});
    }
    report["transfer"]["inverse_search"] = {{"degree", s.degree},
                                            {"element", r.element},
                                            {"search_space", s.search_space},
                                            {"solutions", s.solutions},
                                            {"exhaustive", s.exhaustive}};
    check("no_homotopy_inverse", s.exhaustive && s.solutions == 0,
          std::to_string(s.solutions) + " solutions in " + std::to_string(s.search_space) + " candidates");
  }

  void run_expectations() {
    json rows = json::object();
    for (const Expectation& e : p.expect) {
      json::json_pointer ptr(e.path);
      bool present = report.contains(ptr);
      json actual = present ? report.at(ptr) : json();
      bool match = present && actual == e.value;
      rows[e.path] = {{"expected", e.value}, {"actual", actual}, {"ok", match}};
      check("expect." + e.path, match, present ? "" : "no such field");
    }
    if (!rows.empty()) report["expectations"] = rows;
  }

  static std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
  }
};

}  // namespace

json map_values(const MultiMap& f) {
  json out = json::object();
  const TensorPower& src = f.source_power();
  const TensorPower& dst = f.target_power();
  for (int k : f.degrees()) {
    const FpGroup& target = dst.group(k + f.shift());
    for (std::size_t i = 0; i < src.basis(k).size(); ++i) {
      Vec v = target.reduce(densify(f.column(k, i), target.rank()));
      if (target.is_zero(v)) continue;
      out[src.label(src.basis(k)[i])] = dst.format(k + f.shift(), v);
    }
  }
  return out;
}

RunResult run_problem(const Problem& problem) {
  std::vector<Diagnostic> diags = validate_problem(problem);
  if (!diags.empty()) throw ProblemError(kExitValidation, std::move(diags));

  Run r{problem, json::object()};
  json pins = json::object();
  for (const auto& [name, table] : problem.pins) pins[name] = table;
  std::string input = std::holds_alternative<ComplexInput>(problem.input)   ? "complex"
                      : std::holds_alternative<AlgebraInput>(problem.input) ? "algebra"
                                                                            : "dga";
  r.report["problem"] = {{"name", problem.name},
                         {"pipeline", pipeline_name(problem.pipeline)},
                         {"coefficients", problem.characteristic == 2 ? "Z2" : "Z"},
                         {"input", input},
                         {"pins", pins},
                         {"max_arity", problem.max_arity}};
  r.report["truncation"] = {{"max_degree", problem.max_degree},
                            {"homology_degrees", {0, problem.max_degree - 1}},
                            {"transfer_max_degree", problem.transfer_max_degree.value_or(problem.max_degree)}};

  std::visit(
      [&](const auto& in) {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, ComplexInput>) r.run_complex(in);
        else if constexpr (std::is_same_v<T, AlgebraInput>) r.run_algebra(in);
        else r.run_dga(in);
      },
      problem.input);

  // expectations read the report as built so far, so they come last
  r.report["checks"] = r.checks;
  r.run_expectations();
  r.report["checks"] = r.checks;
  r.report["ok"] = r.ok;

  RunResult out;
  out.report = std::move(r.report);
  out.text = render_text(out.report);
  out.exit_code = r.ok ? kExitOk : kExitVerification;
  return out;
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

namespace {

constexpr std::size_t kTextEntries = 12;

std::string clip(const std::string& s, std::size_t width = 160) {
  return s.size() <= width ? s : s.substr(0, width) + " ...";
}

void render_values(std::ostringstream& os, const std::string& title, const json& values) {
  if (values.empty()) return;
  os << "  " << title << ":\n";
  std::size_t n = 0;
  for (const auto& [arg, v] : values.items()) {
    if (n++ == kTextEntries) {
      os << "    ... " << values.size() - kTextEntries << " more in the JSON report\n";
      break;
    }
    os << "    " << arg << " -> " << clip(v.get<std::string>()) << "\n";
  }
}

}  // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  const json& pr = report.at("problem");
  os << "problem " << pr.at("name").get<std::string>() << " (" << pr.at("pipeline").get<std::string>() << ", "
     << pr.at("input").get<std::string>() << " over " << pr.at("coefficients").get<std::string>() << ")\n";
  const json& tr = report.at("truncation");
  os << "window: degrees 0.." << tr.at("max_degree").get<int>() << "\n";

  if (report.contains("homology")) {
    os << "\nhomology\n";
    for (const auto& row : report["homology"]) {
      os << "  H^" << row.at("degree").get<int>() << " = " << row.at("group").get<std::string>() << "\n";
    }
  }
  if (report.contains("values")) {
    os << "\nvalues\n";
    for (const auto& [k, v] : report["values"].items()) os << "  " << k << " = " << v.get<std::string>() << "\n";
  }
  if (report.contains("transfer")) {
    const json& t = report["transfer"];
    os << "\ntransfer (window " << t.at("window").get<int>() << ")\n";
    render_values(os, "representatives g", t.at("representatives"));
    for (const auto& [a, e] : t.at("operations").items()) {
      render_values(os, "operation " + a + " (shift " + std::to_string(e.at("shift").get<int>()) + ")", e.at("values"));
    }
    for (const auto& [a, e] : t.at("homotopies").items()) {
      render_values(os, "homotopy " + a + " (shift " + std::to_string(e.at("shift").get<int>()) + ")", e.at("values"));
    }
    for (const auto& [a, s] : t.at("steps").items()) {
      render_values(os, "step " + a + " obstruction on the target", s.at("rhs"));
      render_values(os, "step " + a + " correction", s.at("correction"));
    }
    os << "  choices:\n";
    for (const auto& [name, c] : t.at("choices").items()) {
      os << "    " << name << " = " << clip(c.at("value").get<std::string>())
         << (c.at("pinned").get<bool>() ? " [pinned]" : " [canonical]");
      const std::string note = c.at("note").get<std::string>();
      if (!note.empty()) os << " (" << note << ")";
      os << "\n";
    }
    if (t.contains("iso_checks")) {
      os << "  induced maps on Hom homology:\n";
      for (const auto& r : t["iso_checks"]) {
        os << "    " << r.at("arity").get<std::string>() << " shift " << r.at("shift").get<int>() << " "
           << r.at("model").get<std::string>() << ": " << r.at("domain").get<std::string>() << " -> "
           << r.at("codomain").get<std::string>() << (r.at("injective").get<bool>() ? "" : ", not injective")
           << (r.at("surjective").get<bool>() ? "" : ", not surjective") << "\n";
      }
    }
    if (t.contains("inverse_search")) {
      const json& s = t["inverse_search"];
      os << "  homotopy inverse search at " << s.at("element").get<std::string>() << ": "
         << s.at("solutions").get<std::size_t>() << " of " << s.at("search_space").get<std::size_t>() << "\n";
    }
  }
  os << "\nchecks\n";
  for (const auto& [name, c] : report.at("checks").items()) {
    os << "  " << (c.at("ok").get<bool>() ? "ok   " : "FAIL ") << name;
    const std::string d = c.at("detail").get<std::string>();
    if (!d.empty()) os << ": " << d;
    os << "\n";
  }
  os << "\nresult: " << (report.at("ok").get<bool>() ? "all checks passed" : "some checks failed") << "\n";
  return os.str();
}

json report_diff(const json& a, const json& b) { return json::diff(a, b); }

std::string render_diff(const json& diff) {
  std::ostringstream os;
  for (const auto& op : diff) {
    os << op.at("op").get<std::string>() << " " << op.at("path").get<std::string>();
    if (op.contains("value")) os << " = " << op["value"].dump();
    os << "\n";
  }
  return os.str();
}

}  // namespace ainfty
