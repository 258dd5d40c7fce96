#pragma once

// JSON front end: problem documents in, report documents out, and the
// golden reproduction suite behind `lattice-ist examples`.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lattice_ist {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitGoldenFailure = 1,
  kExitSchema = 2,
  kExitComputation = 3,
  kExitUnusual = 4,
  kExitInconsistent = 5,
};

/// Runs one invocation; `args` excludes the program name. Reads the input
/// document from `in` when no file (or "-") is given, writes JSON only to
/// `out` and diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

struct GoldenCheck {
  std::string what;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct GoldenCase {
  std::string name;         ///< "6.1" .. "6.7"
  std::string description;
  std::vector<GoldenCheck> checks;
  std::string error;        ///< set when the case threw
  bool passed() const;
};

std::vector<std::string> golden_case_names();

/// Runs the named cases (all when empty). `tol` replaces the tolerance of
/// every check except comparisons against rounded printed digits.
/// Throws InvalidArgument for an unknown name.
std::vector<GoldenCase> run_golden_cases(const std::vector<std::string>& only = {},
                                         std::optional<double> tol = std::nullopt);

}  // namespace lattice_ist
