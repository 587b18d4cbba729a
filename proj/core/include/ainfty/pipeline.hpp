#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ainfty/problem.hpp"

namespace ainfty {

struct RunResult {
  nlohmann::json report;  // machine-readable, keys sorted
  std::string text;       // human-readable rendering of the same report
  int exit_code = kExitOk;
};

/// Runs the problem's pipeline. Validation failures and pins that do not
/// fit the computed homology throw ProblemError (kExitValidation); failed
/// verifications are report entries and give kExitVerification.
RunResult run_problem(const Problem& problem);

/// Stable serialization: two-space indent, trailing newline.
std::string dump_report(const nlohmann::json& report);
std::string render_text(const nlohmann::json& report);

/// Field-level difference as a JSON Patch turning `a` into `b`; empty iff equal.
nlohmann::json report_diff(const nlohmann::json& a, const nlohmann::json& b);
std::string render_diff(const nlohmann::json& diff);

/// The homology classes of a (m,1) or (1,n) map's values as "label -> value".
nlohmann::json map_values(const MultiMap& f);

}  // namespace ainfty
