#include "ainfty/problem.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ainfty {

using nlohmann::json;

ProblemError::ProblemError(int exit_code, std::vector<Diagnostic> diagnostics)
    : std::runtime_error(format_diagnostics(diagnostics)), exit_code_(exit_code), diagnostics_(std::move(diagnostics)) {}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "\n";
    out += (d.location.empty() ? std::string("/") : d.location) + ": " + d.message;
  }
  return out;
}

std::string pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::Homology: return "homology";
    case Pipeline::Bar: return "bar";
    case Pipeline::Transfer: return "transfer";
    case Pipeline::Verify: return "verify";
  }
  return "?";
}

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw ProblemError(kExitParse, {{where, what}});
}

std::string child(const std::string& path, const std::string& key) {
  std::string k;
  for (char ch : key) {
    if (ch == '~') k += "~0";
    else if (ch == '/') k += "~1";
    else k += ch;
  }
  return path + "/" + k;
}
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) parse_fail(path, "missing field '" + key + "'");
  return obj.at(key);
}

void expect_type(const json& v, const std::string& path, json::value_t type, const char* name) {
  bool ok = v.type() == type ||
            (type == json::value_t::number_integer && v.type() == json::value_t::number_unsigned);
  if (!ok) parse_fail(path, std::string("expected ") + name);
}

const json& object_at(const json& obj, const std::string& path, const std::string& key) {
  const json& v = require(obj, path, key);
  expect_type(v, child(path, key), json::value_t::object, "an object");
  return v;
}

int int_value(const json& v, const std::string& path) {
  expect_type(v, path, json::value_t::number_integer, "an integer");
  return v.get<int>();
}

std::string string_value(const json& v, const std::string& path) {
  expect_type(v, path, json::value_t::string, "a string");
  return v.get<std::string>();
}

bool bool_value(const json& v, const std::string& path) {
  expect_type(v, path, json::value_t::boolean, "a boolean");
  return v.get<bool>();
}

const json& array_value(const json& v, const std::string& path) {
  expect_type(v, path, json::value_t::array, "an array");
  return v;
}

// Orders and matrix entries may be JSON integers or decimal strings.
Int big_value(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Int(v.get<long long>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    bool digits = !s.empty() && std::all_of(s.begin() + (s[0] == '-' ? 1 : 0), s.end(),
                                            [](char c) { return c >= '0' && c <= '9'; });
    if (digits && s != "-") return Int(s);
  }
  parse_fail(path, "expected an integer");
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      parse_fail(child(path, k), "unknown field");
    }
  }
}

ComplexInput parse_complex(const json& c, const std::string& path) {
  check_keys(c, path, {"groups", "differentials"});
  ComplexInput in;
  const json& groups = array_value(require(c, path, "groups"), child(path, "groups"));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::string at = child(child(path, "groups"), i);
    expect_type(groups[i], at, json::value_t::object, "an object");
    check_keys(groups[i], at, {"degree", "orders", "labels"});
    int k = int_value(require(groups[i], at, "degree"), child(at, "degree"));
    std::vector<Int> orders;
    const json& os = array_value(require(groups[i], at, "orders"), child(at, "orders"));
    for (std::size_t j = 0; j < os.size(); ++j) {
      Int o = big_value(os[j], child(child(at, "orders"), j));
      if (o < 0) parse_fail(child(child(at, "orders"), j), "orders are nonnegative");
      orders.push_back(o);
    }
    std::vector<std::string> labels;
    if (groups[i].contains("labels")) {
      const json& ls = array_value(groups[i]["labels"], child(at, "labels"));
      for (std::size_t j = 0; j < ls.size(); ++j) labels.push_back(string_value(ls[j], child(child(at, "labels"), j)));
      if (labels.size() != orders.size()) parse_fail(child(at, "labels"), "one label per order expected");
    }
    if (in.groups.contains(k)) parse_fail(child(at, "degree"), "degree listed twice");
    in.groups.emplace(k, FpGroup(std::move(orders), std::move(labels)));
  }
  if (c.contains("differentials")) {
    const json& ds = array_value(c["differentials"], child(path, "differentials"));
    for (std::size_t i = 0; i < ds.size(); ++i) {
      std::string at = child(child(path, "differentials"), i);
      expect_type(ds[i], at, json::value_t::object, "an object");
      check_keys(ds[i], at, {"degree", "matrix"});
      int k = int_value(require(ds[i], at, "degree"), child(at, "degree"));
      const json& rows = array_value(require(ds[i], at, "matrix"), child(at, "matrix"));
      std::size_t ncols = rows.empty() ? 0 : array_value(rows[0], child(child(at, "matrix"), 0)).size();
      IntMatrix m(rows.size(), ncols);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        std::string rat = child(child(at, "matrix"), r);
        const json& row = array_value(rows[r], rat);
        if (row.size() != ncols) parse_fail(rat, "ragged matrix row");
        for (std::size_t j = 0; j < ncols; ++j) m(r, j) = big_value(row[j], child(rat, j));
      }
      if (in.differentials.contains(k)) parse_fail(child(at, "degree"), "degree listed twice");
      in.differentials.emplace(k, std::move(m));
    }
  }
  return in;
}

AlgElement parse_expression(const AlgebraPresentation& p, const std::string& text, const std::string& path) {
  try {
    return p.parse(text);
  } catch (const std::invalid_argument& e) {
    parse_fail(path, e.what());
  }
}

AlgebraInput parse_algebra(const json& a, const std::string& path, const Int& characteristic) {
  check_keys(a, path, {"generators", "differentials", "relations", "annihilators", "reduced"});
  AlgebraInput in;
  in.presentation = AlgebraPresentation(characteristic);
  AlgebraPresentation& p = in.presentation;
  const json& gens = array_value(require(a, path, "generators"), child(path, "generators"));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string at = child(child(path, "generators"), i);
    expect_type(gens[i], at, json::value_t::object, "an object");
    check_keys(gens[i], at, {"name", "degree", "order"});
    std::string name = string_value(require(gens[i], at, "name"), child(at, "name"));
    int degree = int_value(require(gens[i], at, "degree"), child(at, "degree"));
    Int order = gens[i].contains("order") ? big_value(gens[i]["order"], child(at, "order")) : Int(0);
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); })) {
      parse_fail(child(at, "name"), "generator names are nonempty and alphabetic");
    }
    if (p.find(name)) parse_fail(child(at, "name"), "duplicate generator '" + name + "'");
    if (degree <= 0) parse_fail(child(at, "degree"), "generator degrees are positive");
    if (order < 0) parse_fail(child(at, "order"), "orders are nonnegative");
    p.add_generator(name, degree, order);
  }
  if (a.contains("differentials")) {
    std::string at = child(path, "differentials");
    expect_type(a["differentials"], at, json::value_t::object, "an object");
    for (const auto& [name, v] : a["differentials"].items()) {
      auto g = p.find(name);
      if (!g) parse_fail(child(at, name), "unknown generator '" + name + "'");
      p.set_differential(*g, parse_expression(p, string_value(v, child(at, name)), child(at, name)));
    }
  }
  if (a.contains("relations")) {
    const json& rs = array_value(a["relations"], child(path, "relations"));
    for (std::size_t i = 0; i < rs.size(); ++i) {
      std::string at = child(child(path, "relations"), i);
      p.add_relation(parse_expression(p, string_value(rs[i], at), at));
    }
  }
  if (a.contains("annihilators")) {
    const json& as = array_value(a["annihilators"], child(path, "annihilators"));
    for (std::size_t i = 0; i < as.size(); ++i) {
      std::string at = child(child(path, "annihilators"), i);
      expect_type(as[i], at, json::value_t::object, "an object");
      check_keys(as[i], at, {"generator", "side"});
      std::string name = string_value(require(as[i], at, "generator"), child(at, "generator"));
      auto g = p.find(name);
      if (!g) parse_fail(child(at, "generator"), "unknown generator '" + name + "'");
      std::string side = as[i].contains("side") ? string_value(as[i]["side"], child(at, "side")) : "both";
      Annihilator::Side s;
      if (side == "left") s = Annihilator::Side::Left;
      else if (side == "right") s = Annihilator::Side::Right;
      else if (side == "both") s = Annihilator::Side::Both;
      else parse_fail(child(at, "side"), "side is left, right or both");
      p.add_annihilator(*g, s);
    }
  }
  if (a.contains("reduced")) in.reduced = bool_value(a["reduced"], child(path, "reduced"));
  return in;
}

Z2Combo parse_combo(const TruncatedDga& a, const std::string& text, const std::string& path) {
  Z2Combo c;
  std::string term;
  std::stringstream ss(text);
  bool any = false;
  while (std::getline(ss, term, '+')) {
    term.erase(std::remove_if(term.begin(), term.end(), [](unsigned char ch) { return std::isspace(ch); }), term.end());
    if (term.empty()) parse_fail(path, "empty term in '" + text + "'");
    any = true;
    if (term == "0") continue;
    auto x = a.find(term);
    if (!x) parse_fail(path, "unknown element '" + term + "'");
    if (!c.erase(*x)) c.insert(*x);
  }
  if (!any) parse_fail(path, "empty expression");
  return c;
}

DgaInput parse_dga(const json& d, const std::string& path) {
  check_keys(d, path, {"max_degree", "elements", "products", "differentials", "cup1"});
  DgaInput in;
  int top = int_value(require(d, path, "max_degree"), child(path, "max_degree"));
  if (top < 0) parse_fail(child(path, "max_degree"), "negative degree");
  in.dga = TruncatedDga(top);
  const json& es = array_value(require(d, path, "elements"), child(path, "elements"));
  for (std::size_t i = 0; i < es.size(); ++i) {
    std::string at = child(child(path, "elements"), i);
    expect_type(es[i], at, json::value_t::object, "an object");
    check_keys(es[i], at, {"name", "degree"});
    std::string name = string_value(require(es[i], at, "name"), child(at, "name"));
    int degree = int_value(require(es[i], at, "degree"), child(at, "degree"));
    if (name.empty() || name.find_first_of("+|[] ") != std::string::npos || name == "0") {
      parse_fail(child(at, "name"), "element names are nonempty and avoid '+', '|', brackets and spaces");
    }
    if (in.dga.find(name)) parse_fail(child(at, "name"), "duplicate element '" + name + "'");
    in.dga.add_element(name, degree);
  }
  auto element = [&](const json& v, const std::string& at) {
    std::string name = string_value(v, at);
    auto x = in.dga.find(name);
    if (!x) parse_fail(at, "unknown element '" + name + "'");
    return *x;
  };
  for (const char* table : {"products", "cup1"}) {
    if (!d.contains(table)) continue;
    const json& ps = array_value(d[table], child(path, table));
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::string at = child(child(path, table), i);
      expect_type(ps[i], at, json::value_t::object, "an object");
      check_keys(ps[i], at, {"left", "right", "value"});
      std::size_t x = element(require(ps[i], at, "left"), child(at, "left"));
      std::size_t y = element(require(ps[i], at, "right"), child(at, "right"));
      Z2Combo v = parse_combo(in.dga, string_value(require(ps[i], at, "value"), child(at, "value")), child(at, "value"));
      if (std::string(table) == "products") in.dga.set_product(x, y, v);
      else in.dga.set_cup1(x, y, v);
    }
  }
  if (d.contains("differentials")) {
    std::string at = child(path, "differentials");
    expect_type(d["differentials"], at, json::value_t::object, "an object");
    for (const auto& [name, v] : d["differentials"].items()) {
      std::size_t x = element(json(name), child(at, name));
      in.dga.set_differential(x, parse_combo(in.dga, string_value(v, child(at, name)), child(at, name)));
    }
  }
  return in;
}

Arity parse_arity(const json& v, const std::string& path) {
  std::string s = string_value(v, path);
  if (s.size() != 2 || s[0] < '1' || s[0] > '9' || s[1] < '1' || s[1] > '9') {
    parse_fail(path, "arity is two digits, inputs then outputs (\"21\")");
  }
  return {s[0] - '0', s[1] - '0'};
}

void parse_parameters(Problem& p, const json& ps, const std::string& path) {
  check_keys(ps, path, {"max_arity", "omega22", "transfer_max_degree", "iso_checks", "inverse_search", "evaluate"});
  if (ps.contains("max_arity")) {
    p.max_arity = int_value(ps["max_arity"], child(path, "max_arity"));
    if (p.max_arity < 2 || p.max_arity > 5) parse_fail(child(path, "max_arity"), "max_arity lies in [2, 5]");
  }
  if (ps.contains("omega22")) p.omega22 = bool_value(ps["omega22"], child(path, "omega22"));
  if (ps.contains("transfer_max_degree")) {
    p.transfer_max_degree = int_value(ps["transfer_max_degree"], child(path, "transfer_max_degree"));
  }
  if (ps.contains("iso_checks")) {
    const json& cs = array_value(ps["iso_checks"], child(path, "iso_checks"));
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string at = child(child(path, "iso_checks"), i);
      expect_type(cs[i], at, json::value_t::object, "an object");
      check_keys(cs[i], at, {"arity", "shifts", "models"});
      IsoRequest r;
      r.arity = parse_arity(require(cs[i], at, "arity"), child(at, "arity"));
      const json& shifts = array_value(require(cs[i], at, "shifts"), child(at, "shifts"));
      for (std::size_t j = 0; j < shifts.size(); ++j) r.shifts.push_back(int_value(shifts[j], child(child(at, "shifts"), j)));
      if (cs[i].contains("models")) {
        const json& ms = array_value(cs[i]["models"], child(at, "models"));
        for (std::size_t j = 0; j < ms.size(); ++j) {
          std::string m = string_value(ms[j], child(child(at, "models"), j));
          if (m == "free") r.models.push_back(SourceModel::Free);
          else if (m == "exact") r.models.push_back(SourceModel::Exact);
          else parse_fail(child(child(at, "models"), j), "model is free or exact");
        }
      } else {
        r.models = {SourceModel::Free};
      }
      p.iso_checks.push_back(std::move(r));
    }
  }
  if (ps.contains("inverse_search")) {
    std::string at = child(path, "inverse_search");
    const json& s = object_at(ps, path, "inverse_search");
    check_keys(s, at, {"degree", "element"});
    p.inverse_search = InverseRequest{int_value(require(s, at, "degree"), child(at, "degree")),
                                      string_value(require(s, at, "element"), child(at, "element"))};
  }
  if (ps.contains("evaluate")) {
    const json& es = array_value(ps["evaluate"], child(path, "evaluate"));
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string at = child(child(path, "evaluate"), i);
      expect_type(es[i], at, json::value_t::object, "an object");
      check_keys(es[i], at, {"op", "args"});
      Evaluation e;
      e.op = string_value(require(es[i], at, "op"), child(at, "op"));
      static const std::map<std::string, std::size_t> arities{
          {"mu", 2}, {"d", 1}, {"coproduct", 1}, {"product", 2}, {"normal_form", 1}};
      auto it = arities.find(e.op);
      if (it == arities.end()) parse_fail(child(at, "op"), "unknown operation '" + e.op + "'");
      const json& args = array_value(require(es[i], at, "args"), child(at, "args"));
      for (std::size_t j = 0; j < args.size(); ++j) e.args.push_back(string_value(args[j], child(child(at, "args"), j)));
      if (e.args.size() != it->second) parse_fail(child(at, "args"), e.op + " takes " + std::to_string(it->second) + " arguments");
      p.evaluate.push_back(std::move(e));
    }
  }
}

}  // namespace

void add_pin_override(Pins& pins, const std::string& text) {
  auto open = text.find('[');
  auto eq = text.find('=');
  std::size_t close = open == std::string::npos ? std::string::npos : text.find("]=", open);
  if (open == std::string::npos || close == std::string::npos || open == 0) {
    throw std::invalid_argument("pin '" + text + "' is not of the form name[argument]=value");
  }
  (void)eq;
  pins[text.substr(0, open)][text.substr(open + 1, close - open - 1)] = text.substr(close + 2);
}

Problem parse_problem(const json& doc) {
  const std::string root;
  expect_type(doc, root, json::value_t::object, "an object");
  check_keys(doc, root,
             {"name", "coefficients", "max_degree", "pipeline", "complex", "algebra", "dga", "pins", "parameters",
              "expect", "description"});
  Problem p;
  p.name = string_value(require(doc, root, "name"), "/name");
  if (p.name.empty() || p.name.find_first_of("/\\") != std::string::npos) parse_fail("/name", "name is a nonempty file stem");
  std::string coeff = doc.contains("coefficients") ? string_value(doc["coefficients"], "/coefficients") : "Z";
  if (coeff == "Z") p.characteristic = 0;
  else if (coeff == "Z2") p.characteristic = 2;
  else parse_fail("/coefficients", "coefficients are Z or Z2");
  p.max_degree = int_value(require(doc, root, "max_degree"), "/max_degree");
  if (p.max_degree < 1) parse_fail("/max_degree", "max_degree is at least 1");

  std::string pipe = string_value(require(doc, root, "pipeline"), "/pipeline");
  if (pipe == "homology") p.pipeline = Pipeline::Homology;
  else if (pipe == "bar") p.pipeline = Pipeline::Bar;
  else if (pipe == "transfer") p.pipeline = Pipeline::Transfer;
  else if (pipe == "verify") p.pipeline = Pipeline::Verify;
  else parse_fail("/pipeline", "pipeline is homology, bar, transfer or verify");

  int inputs = int(doc.contains("complex")) + int(doc.contains("algebra")) + int(doc.contains("dga"));
  if (inputs != 1) parse_fail(root, "exactly one of complex, algebra, dga is required");
  if (doc.contains("complex")) p.input = parse_complex(object_at(doc, root, "complex"), "/complex");
  else if (doc.contains("algebra")) p.input = parse_algebra(object_at(doc, root, "algebra"), "/algebra", p.characteristic);
  else p.input = parse_dga(object_at(doc, root, "dga"), "/dga");

  if (doc.contains("pins")) {
    const json& pins = object_at(doc, root, "pins");
    for (const auto& [name, table] : pins.items()) {
      std::string at = child("/pins", name);
      expect_type(table, at, json::value_t::object, "an object");
      for (const auto& [arg, value] : table.items()) p.pins[name][arg] = string_value(value, child(at, arg));
    }
  }
  if (doc.contains("parameters")) parse_parameters(p, object_at(doc, root, "parameters"), "/parameters");
  if (doc.contains("expect")) {
    const json& es = array_value(doc["expect"], "/expect");
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string at = child("/expect", i);
      expect_type(es[i], at, json::value_t::object, "an object");
      check_keys(es[i], at, {"path", "value"});
      std::string path = string_value(require(es[i], at, "path"), child(at, "path"));
      try {
        (void)json::json_pointer(path);
      } catch (const json::exception& e) {
        parse_fail(child(at, "path"), e.what());
      }
      p.expect.push_back({path, require(es[i], at, "value")});
    }
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError(kExitParse, {{"", "cannot open " + path.string()}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ProblemError(kExitParse, {{"", e.what()}});
  }
  return parse_problem(doc);
}

void apply_overrides(Problem& p, const Overrides& o) {
  if (o.max_degree) {
    if (*o.max_degree < 1) throw ProblemError(kExitValidation, {{"--max-degree", "must be at least 1"}});
    p.max_degree = *o.max_degree;
  }
  if (o.max_arity) {
    if (*o.max_arity < 2 || *o.max_arity > 5) throw ProblemError(kExitValidation, {{"--arity", "must lie in [2, 5]"}});
    p.max_arity = *o.max_arity;
  }
  for (const auto& [name, table] : o.pins) {
    for (const auto& [arg, value] : table) p.pins[name][arg] = value;
  }
}

Complex build_complex(const ComplexInput& in, int max_degree) {
  Complex c(max_degree);
  for (const auto& [k, g] : in.groups) {
    if (c.in_window(k)) c.set_group(k, g);
  }
  for (const auto& [k, m] : in.differentials) {
    if (k < 0 || k >= max_degree) continue;
    c.set_differential(k, GroupHom(c.group(k), c.group(k + 1), m));
  }
  return c;
}

std::vector<Diagnostic> validate_problem(const Problem& p) {
  std::vector<Diagnostic> out;
  if (p.transfer_max_degree && (*p.transfer_max_degree < 1 || *p.transfer_max_degree > p.max_degree)) {
    out.push_back({"/parameters/transfer_max_degree", "must lie in [1, max_degree]"});
  }
  if (p.omega22 && p.characteristic != 2) out.push_back({"/parameters/omega22", "the (2,2) step needs Z2 coefficients"});
  bool transfer = p.pipeline == Pipeline::Transfer || p.pipeline == Pipeline::Verify;

  if (const auto* in = std::get_if<ComplexInput>(&p.input)) {
    if (p.pipeline == Pipeline::Bar || transfer) out.push_back({"/pipeline", "a bare complex supports only the homology pipeline"});
    for (const auto& [k, g] : in->groups) {
      if (k < 0) out.push_back({"/complex/groups", "negative degree " + std::to_string(k)});
      if (p.characteristic == 2) {
        for (const Int& o : g.orders()) {
          if (o != 2) out.push_back({"/complex/groups", "Z2 coefficients need orders 2 in degree " + std::to_string(k)});
        }
      }
    }
    for (const auto& [k, m] : in->differentials) {
      std::string at = "/complex/differentials (degree " + std::to_string(k) + ")";
      auto rank = [&](int j) { return in->groups.contains(j) ? in->groups.at(j).rank() : std::size_t{0}; };
      if (m.rows() != rank(k + 1) || m.cols() != rank(k)) {
        out.push_back({at, "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                               std::to_string(rank(k + 1)) + "x" + std::to_string(rank(k))});
      }
    }
    if (!out.empty()) return out;
    try {
      Complex c = build_complex(*in, p.max_degree);
      for (int k : c.check_d_squared()) out.push_back({"/complex/differentials", "d∘d != 0 out of degree " + std::to_string(k)});
    } catch (const std::exception& e) {
      out.push_back({"/complex/differentials", e.what()});
    }
  } else if (const auto* in = std::get_if<AlgebraInput>(&p.input)) {
    const AlgebraPresentation& ap = in->presentation;
    if (p.pipeline == Pipeline::Bar) out.push_back({"/pipeline", "the bar pipeline needs a dga input"});
    if (p.omega22) out.push_back({"/parameters/omega22", "the (2,2) step needs a coproduct (dga input)"});
    for (std::size_t i = 0; i < ap.generators().size(); ++i) {
      const GenSpec& g = ap.generators()[i];
      std::string at = "/algebra/generators/" + std::to_string(i);
      if (p.characteristic == 2 && g.order != 2) out.push_back({at + "/order", "Z2 coefficients need order 2"});
      try {
        auto d = ap.degree(g.differential);
        if (d && *d != g.degree + 1) {
          out.push_back({"/algebra/differentials/" + g.name,
                         "has degree " + std::to_string(*d) + ", expected " + std::to_string(g.degree + 1)});
        }
      } catch (const std::invalid_argument& e) {
        out.push_back({"/algebra/differentials/" + g.name, e.what()});
      }
    }
    for (std::size_t i = 0; i < ap.relations().size(); ++i) {
      std::string at = "/algebra/relations/" + std::to_string(i);
      try {
        if (!ap.degree(ap.relations()[i])) out.push_back({at, "relation is zero"});
      } catch (const std::invalid_argument& e) {
        out.push_back({at, e.what()});
      }
    }
    for (const std::string& d : ap.validate()) {
      if (d.rfind("relation", 0) == 0 || d.find("has degree") != std::string::npos) continue;  // located above
      out.push_back({"/algebra", d});
    }
    if (!out.empty()) return out;
    try {
      QuotientDGA q(ap, p.max_degree);
      for (const auto& v : q.check_ideal_closure()) {
        out.push_back({"/algebra/relations", "ideal not closed under d in degree " + std::to_string(v.degree) + ": " + v.detail});
      }
      for (int k : q.complex(in->reduced).check_d_squared()) {
        out.push_back({"/algebra/differentials", "d∘d != 0 on the quotient out of degree " + std::to_string(k)});
      }
    } catch (const std::exception& e) {
      out.push_back({"/algebra", e.what()});
    }
  } else {
    const auto& dga = std::get<DgaInput>(p.input).dga;
    if (p.characteristic != 2) out.push_back({"/coefficients", "a dga with cup-one products is read over Z2"});
    for (const std::string& d : dga.validate()) {
      std::string at = "/dga";
      if (d.find("associativity") != std::string::npos || d.find("unit") != std::string::npos) at += "/products";
      else if (d.find("d^2") != std::string::npos || d.find("Leibniz") != std::string::npos) at += "/differentials";
      else if (d.find("degree") != std::string::npos) at += "/elements";
      out.push_back({at, d});
    }
  }
  return out;
}

}  // namespace ainfty
