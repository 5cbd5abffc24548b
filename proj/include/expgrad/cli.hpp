#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "expgrad/diagnostics.hpp"
#include "expgrad/objectives.hpp"
#include "expgrad/solver.hpp"

namespace expgrad::cli {

/// Everything `run` needs; every field maps to a kebab-case flag and config key.
struct RunConfig {
  std::string objective = "qst";  // qst | hedged-qst | burg | poisson | quadratic
  std::string operators;          // ensemble file, or rows file for poisson
  std::optional<double> lambda;   // hedged-qst weight
  int dim = 0;                    // burg and quadratic
  double lipschitz = 1.0;         // quadratic scale
  SolverConfig solver;
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string summary_path;
};

struct RunSummary {
  SolveStatus status = SolveStatus::MaxIters;
  int iters = 0;
  double final_f = 0.0;
  double final_min_eig = 0.0;
  double wall_time_ms = 0.0;
  std::vector<IterationRecord> trace;
};

/// Ensemble of `num_ops` operators A^H A, A complex Gaussian from substream(seed, i).
MeasurementEnsemble generate_ensemble(int dim, int num_ops, std::uint64_t seed);
std::string ensemble_file_text(const MeasurementEnsemble& ensemble);

void cmd_gen(int dim, int num_ops, std::uint64_t seed, const std::string& out_path);

/// Solves from the maximally mixed state and writes the trace CSV and summary
/// JSON when the corresponding paths are set.
RunSummary cmd_run(const RunConfig& config);
std::string summary_json_text(const RunSummary& summary);

/// Runs a diagnostics suite and writes the report when `report_path` is non-empty.
std::vector<CheckRecord> cmd_diagnose(const std::string& suite, int samples, std::uint64_t seed,
                                      const std::string& report_path);

struct SweepRow {
  double lambda = 0.0;
  double hedged_value = 0.0;
  double f_value = 0.0;  // unhedged objective at the hedged minimizer
  SolveStatus status = SolveStatus::MaxIters;
  int iters = 0;
};

/// Hedged solves for a positive, strictly descending list of weights.
std::vector<SweepRow> cmd_lambda_sweep(const MeasurementEnsemble& ensemble, const std::vector<double>& lambdas,
                                       const SolverConfig& solver, int jobs = 1);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Command-line entry point. Exit codes: 0 success, 1 runtime or domain
/// error (JSON on stderr), 2 usage error.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expgrad::cli
