#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ainfty/bar.hpp"
#include "ainfty/graded.hpp"
#include "ainfty/tensoralg.hpp"
#include "ainfty/transfer.hpp"

namespace ainfty {

enum ExitCode : int { kExitOk = 0, kExitVerification = 1, kExitParse = 2, kExitValidation = 3 };

/// A message tied to a JSON pointer into the problem file.
struct Diagnostic {
  std::string location;
  std::string message;
};

class ProblemError : public std::runtime_error {
 public:
  ProblemError(int exit_code, std::vector<Diagnostic> diagnostics);
  int exit_code() const { return exit_code_; }
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  int exit_code_;
  std::vector<Diagnostic> diagnostics_;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

/// Explicit cochain complex: groups by degree and differential matrices.
struct ComplexInput {
  std::map<int, FpGroup> groups;
  std::map<int, IntMatrix> differentials;  // degree -> matrix into degree + 1
};

struct AlgebraInput {
  AlgebraPresentation presentation;
  bool reduced = true;
};

struct DgaInput {
  TruncatedDga dga{0};
};

struct IsoRequest {
  Arity arity;
  std::vector<int> shifts;
  std::vector<SourceModel> models;
};

struct InverseRequest {
  int degree;
  std::string element;
};

/// A single value to report: op is "mu", "d", "coproduct", "product" or "normal_form".
struct Evaluation {
  std::string op;
  std::vector<std::string> args;
};

/// Expected value at a JSON pointer of the report.
struct Expectation {
  std::string path;
  nlohmann::json value;
};

enum class Pipeline { Homology, Bar, Transfer, Verify };

std::string pipeline_name(Pipeline p);

struct Problem {
  std::string name;
  Int characteristic = 0;  // 0 for ℤ, 2 for ℤ2
  int max_degree = 0;
  Pipeline pipeline = Pipeline::Homology;
  std::variant<ComplexInput, AlgebraInput, DgaInput> input;
  Pins pins;

  int max_arity = 2;
  bool omega22 = false;
  std::optional<int> transfer_max_degree;  // bar window for the transfer, default max_degree
  std::vector<IsoRequest> iso_checks;
  std::optional<InverseRequest> inverse_search;
  std::vector<Evaluation> evaluate;
  std::vector<Expectation> expect;
};

/// Command line overrides of the file contents.
struct Overrides {
  std::optional<int> max_degree;
  std::optional<int> max_arity;
  Pins pins;  // merged entrywise over the file pins
};

/// "g21[beta|beta]=[a3|a2]" -> pins["g21"]["beta|beta"] = "[a3|a2]".
void add_pin_override(Pins& pins, const std::string& text);

/// Throws ProblemError with exit code kExitParse on malformed input.
Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::filesystem::path& path);
void apply_overrides(Problem& p, const Overrides& o);

/// Semantic checks without running a pipeline: d² = 0, ideal closure,
/// DGA axioms. Empty when valid.
std::vector<Diagnostic> validate_problem(const Problem& p);

/// The cochain complex the problem describes, truncated to max_degree.
Complex build_complex(const ComplexInput& in, int max_degree);

}  // namespace ainfty
