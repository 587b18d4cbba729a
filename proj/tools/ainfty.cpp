#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ainfty/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int report_error(const ainfty::ProblemError& e) {
  std::cerr << (e.exit_code() == ainfty::kExitParse ? "parse error" : "validation error") << "\n"
            << e.what() << "\n";
  return e.exit_code();
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

std::optional<json> read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return std::nullopt;
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ainfty: transfer of A-infinity structures to homology"};
  app.require_subcommand(1);

  std::string problem_path;
  std::optional<int> max_degree, max_arity;
  std::vector<std::string> pins;
  std::string report_dir = ".";
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "run the problem's pipeline and write reports");
  run->add_option("problem", problem_path, "problem file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--max-degree", max_degree, "override the window D");
  run->add_option("--arity", max_arity, "override the maximal arity");
  run->add_option("--pin", pins, "override a pin, name[argument]=value");
  run->add_option("--report-dir", report_dir, "directory for <name>.json and <name>.txt");
  run->add_flag("-q,--quiet", quiet, "do not print the text report");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a problem file without running it");
  validate->add_option("problem", validate_path, "problem file (JSON)")->required()->check(CLI::ExistingFile);

  std::string diff_a, diff_b;
  CLI::App* diff = app.add_subcommand("diff", "field-level difference of two JSON reports");
  diff->add_option("a", diff_a, "first report")->required();
  diff->add_option("b", diff_b, "second report")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ainfty::kExitParse;
  }

  if (*run) {
    try {
      ainfty::Problem p = ainfty::load_problem(problem_path);
      ainfty::Overrides o{max_degree, max_arity, {}};
      for (const auto& pin : pins) {
        try {
          ainfty::add_pin_override(o.pins, pin);
        } catch (const std::invalid_argument& e) {
          throw ainfty::ProblemError(ainfty::kExitParse, {{"--pin", e.what()}});
        }
      }
      ainfty::apply_overrides(p, o);
      ainfty::RunResult r = ainfty::run_problem(p);
      fs::create_directories(report_dir);
      fs::path base = fs::path(report_dir) / p.name;
      if (!write_file(base.string() + ".json", ainfty::dump_report(r.report)) ||
          !write_file(base.string() + ".txt", r.text)) {
        std::cerr << "cannot write reports under " << report_dir << "\n";
        return ainfty::kExitValidation;
      }
      if (!quiet) std::cout << r.text;
      return r.exit_code;
    } catch (const ainfty::ProblemError& e) {
      return report_error(e);
    }
  }

  if (*validate) {
    try {
      ainfty::Problem p = ainfty::load_problem(validate_path);
      auto diags = ainfty::validate_problem(p);
      if (!diags.empty()) throw ainfty::ProblemError(ainfty::kExitValidation, diags);
      std::cout << validate_path << ": ok\n";
      return ainfty::kExitOk;
    } catch (const ainfty::ProblemError& e) {
      return report_error(e);
    }
  }

  auto a = read_report(diff_a);
  auto b = read_report(diff_b);
  if (!a || !b) return ainfty::kExitParse;
  json d = ainfty::report_diff(*a, *b);
  std::cout << ainfty::render_diff(d);
  return d.empty() ? 0 : 1;
}
