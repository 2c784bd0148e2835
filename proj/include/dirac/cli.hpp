// Configuration parsing and the four subcommands of the diracspec tool.
//
// Config (JSON):
//   weights:   {"b1": -1, "b2": 1} or {"rational": [n1, n2, b0]}
//   bc:        {"canonical": {"a": .., "b": .., "c": .., "d": ..}} or {"raw": [[4 entries], [4 entries]]}
//   potential: {"kind": "zero"}
//              {"kind": "constant", "q12": z, "q21": z}
//              {"kind": "polynomial", "q12": [z0, z1, ..], "q21": [..]}
//              {"kind": "fourier", "q12": [{"c": z, "k": int}, ..], "q21": [..]}
//              {"kind": "sampled", "path": "file.csv"}
//   window:    {"n_side": 8} or {"re_range": [lo, hi]}
//   grid:      odd integer >= 5
//   tolerances: overrides of the Tolerances fields
//   string:    {"beta1", "beta2", "h0", "h1", "h2", "a1", "a2"}, profiles as z or {"polynomial": [..]}
// Complex numbers are plain numbers or [re, im].

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dirac/bc_algebra.hpp"
#include "dirac/det0_solver.hpp"
#include "dirac/perturbed_solver.hpp"
#include "dirac/string_transform.hpp"

namespace dirac::cli {

using json = nlohmann::json;

/// Carries the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

inline constexpr int kExitPanic = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotCanonicalizable = 3;
inline constexpr int kExitLocalization = 4;
inline constexpr int kExitNotStrictlyRegular = 5;
inline constexpr int kExitDegenerateBoundary = 6;

struct ProblemConfig {
  json source;  // normalized echo; parses back to the same config
  DiracWeights weights = DiracWeights::dirac();
  std::optional<RawBC> raw_bc;
  std::optional<CanonicalBC> canonical_bc;  // set unless the raw rows are not canonicalizable
  Potential potential;
  SpectrumWindow window = SpectrumWindow::symmetric(16);
  int grid = 1025;
  Tolerances tol;
  std::optional<StringProblem> string;
};

struct RunOptions {
  bool perturbed = false;
  double p = 2.0;
  std::optional<int> window;
  std::optional<int> grid;
};

Complex parse_complex(const json& j);
json complex_json(Complex z);

/// Throws CliError(kExitConfig) on malformed input. `base_dir` resolves
/// relative paths of sampled potential files.
ProblemConfig parse_config(const json& j, const std::string& base_dir = ".");
ProblemConfig load_config(const std::string& path);

/// Applies --window / --grid and returns the updated config (echo included).
ProblemConfig apply_options(ProblemConfig cfg, const RunOptions& opts);

/// Potential from the sampled CSV format x, Re q12, Im q12, Re q21, Im q21,
/// resampled onto a uniform grid of m points.
Potential read_sampled_potential(const std::string& path, int m);

/// {command, config, meta, payload}. SpectralErrors are mapped to CliError
/// with the documented exit codes.
json run_classify(const ProblemConfig& cfg);
json run_spectrum(const ProblemConfig& cfg, const RunOptions& opts);
json run_bari(const ProblemConfig& cfg, const RunOptions& opts);
json run_string(const ProblemConfig& cfg, const RunOptions& opts);

json run_command(const std::string& command, const ProblemConfig& cfg, const RunOptions& opts);

/// Payload as CSV. Contains no timing data.
std::string to_csv(const json& bundle);

/// Process exit code for a library error.
int exit_code(const SpectralError& e);

}  // namespace dirac::cli
