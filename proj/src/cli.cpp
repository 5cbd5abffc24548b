#include "expgrad/cli.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>

#include <CLI11.hpp>

#include "expgrad/error.hpp"
#include "expgrad/io.hpp"
#include "expgrad/random.hpp"

namespace expgrad::cli {

namespace {

std::string read_only_string(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i > 0) joined += ',';
      joined += read_only_string(value[i]);
    }
    return joined;
  }
  return value.dump();
}

// Prepends `--key value` pairs from a JSON config file right after the
// subcommand, so flags given on the command line come later and win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  const Json config = read_json_file(path);
  if (!config.is_object()) throw InvalidInput("config file must hold a JSON object");
  std::vector<std::string> expanded(args.begin(), args.begin() + 2);
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    expanded.push_back("--" + key);
    expanded.push_back(read_only_string(value));
  }
  expanded.insert(expanded.end(), args.begin() + 2, args.end());
  return expanded;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse '" + item + "' as a number");
    }
    if (used != item.size()) throw InvalidInput("cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  return out;
}

void add_solver_flags(CLI::App* cmd, SolverConfig& solver) {
  cmd->add_option("--alpha-bar", solver.alpha_bar, "initial trial step");
  cmd->add_option("--shrink", solver.shrink, "backtracking factor r in (0,1)");
  cmd->add_option("--tau", solver.tau, "Armijo sufficient-decrease parameter in (0,1)");
  cmd->add_option("--max-iter", solver.max_iters, "iteration cap");
  cmd->add_option("--max-backtracks", solver.max_backtracks, "backtracking cap per iteration");
  cmd->add_option("--tol", solver.stop_tol, "stopping tolerance");
  cmd->add_option("--eig-floor", solver.eig_floor, "eigenvalue floor used for flagging");
}

std::string trace_csv_text(const std::vector<IterationRecord>& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

}  // namespace

MeasurementEnsemble generate_ensemble(int dim, int num_ops, std::uint64_t seed) {
  if (dim < 2) throw InvalidInput("gen needs --dim >= 2");
  if (num_ops < 1) throw InvalidInput("gen needs --num-ops >= 1");
  std::vector<HermitianOperator> ops;
  ops.reserve(num_ops);
  for (int i = 0; i < num_ops; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    ops.push_back(random_psd(dim, rng));
  }
  return MeasurementEnsemble(dim, std::move(ops));
}

std::string ensemble_file_text(const MeasurementEnsemble& ensemble) { return ensemble_to_json(ensemble).dump(2) + "\n"; }

void cmd_gen(int dim, int num_ops, std::uint64_t seed, const std::string& out_path) {
  write_text_file(out_path, ensemble_file_text(generate_ensemble(dim, num_ops, seed)));
}

RunSummary cmd_run(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  config.solver.validate();
  RunSummary summary;
  const auto finish = [&](SolveStatus status, std::vector<IterationRecord> trace, double final_f, double min_eig) {
    summary.status = status;
    summary.iters = static_cast<int>(trace.size());
    summary.final_f = final_f;
    summary.final_min_eig = min_eig;
    summary.trace = std::move(trace);
  };

  const std::string& kind = config.objective;
  if (kind == "qst" || kind == "hedged-qst" || kind == "quadratic") {
    ObjectiveSpec f;
    if (kind == "quadratic") {
      if (config.dim < 1) throw InvalidInput("quadratic objective needs --dim >= 1");
      Rng rng = substream(config.seed, 0);
      f = quadratic_objective(config.lipschitz, random_density(config.dim, rng).matrix());
    } else {
      if (config.operators.empty()) throw InvalidInput(kind + " objective needs --operators FILE");
      MeasurementEnsemble ensemble = ensemble_from_json(read_json_file(config.operators));
      if (kind == "qst") {
        f = qst_objective(std::move(ensemble));
      } else {
        if (!config.lambda) throw InvalidInput("hedged-qst objective needs --lambda");
        f = hedged_qst_objective(std::move(ensemble), *config.lambda);
      }
    }
    const DensityState rho0 = DensityState::maximally_mixed(f.dim);
    SolveResult result = solve(rho0, f, config.solver);
    finish(result.status, std::move(result.trace), f.value(result.final_state), result.final_state.min_eigenvalue());
  } else if (kind == "burg" || kind == "poisson") {
    VectorObjective f;
    if (kind == "burg") {
      if (config.dim < 1) throw InvalidInput("burg objective needs --dim >= 1");
      f = burg_objective(config.dim);
    } else {
      if (config.operators.empty()) throw InvalidInput("poisson objective needs --operators FILE");
      f = poisson_linear_objective(rows_from_json(read_json_file(config.operators)));
    }
    const ProbabilityVector x0 = ProbabilityVector::uniform(f.dim);
    SimplexSolveResult result = solve_simplex(x0, f, config.solver);
    finish(result.status, std::move(result.trace), f.value(result.final_state), result.final_state.min_entry());
  } else {
    throw InvalidInput("unknown objective '" + kind + "'");
  }

  summary.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if (!config.trace_path.empty()) write_text_file(config.trace_path, trace_csv_text(summary.trace));
  if (!config.summary_path.empty()) write_text_file(config.summary_path, summary_json_text(summary));
  return summary;
}

std::string summary_json_text(const RunSummary& summary) {
  const Json j{{"status", to_string(summary.status)},
               {"iters", summary.iters},
               {"final_f", summary.final_f},
               {"final_min_eig", summary.final_min_eig},
               {"wall_time_ms", summary.wall_time_ms}};
  return j.dump(2) + "\n";
}

std::vector<CheckRecord> cmd_diagnose(const std::string& suite, int samples, std::uint64_t seed,
                                      const std::string& report_path) {
  if (samples < 1) throw InvalidInput("diagnose needs --samples >= 1");
  auto records = run_diagnostic_suite(suite, samples, seed);
  if (!report_path.empty()) write_text_file(report_path, report_to_json(records).dump(2) + "\n");
  return records;
}

std::vector<SweepRow> cmd_lambda_sweep(const MeasurementEnsemble& ensemble, const std::vector<double>& lambdas,
                                       const SolverConfig& solver, int jobs) {
  if (lambdas.empty()) throw InvalidInput("lambda sweep needs at least one weight");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0)) throw InvalidInput("lambda weights must be positive");
    if (i > 0 && !(lambdas[i] < lambdas[i - 1])) throw InvalidInput("lambda weights must be strictly descending");
  }
  solver.validate();
  const ObjectiveSpec unhedged = qst_objective(ensemble);
  const auto solve_one = [&](double lambda) {
    const ObjectiveSpec hedged = hedged_qst_objective(ensemble, lambda);
    const SolveResult result = solve(DensityState::maximally_mixed(ensemble.dim()), hedged, solver);
    return SweepRow{lambda, hedged.value(result.final_state), unhedged.value(result.final_state), result.status,
                    static_cast<int>(result.trace.size())};
  };

  std::vector<SweepRow> rows(lambdas.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < lambdas.size(); start += width) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t stop = std::min(lambdas.size(), start + width);
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, solve_one, lambdas[i]));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "lambda,hedged_value,f,status,iters\n";
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << format_double(r.hedged_value) << ',' << format_double(r.f_value) << ','
        << to_string(r.status) << ',' << r.iters << '\n';
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponentiated gradient with Armijo line search over density matrices and the simplex", "expgrad"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;

  int gen_dim = 0, gen_ops = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a random PSD measurement ensemble");
  gen->add_option("--dim", gen_dim, "matrix dimension (>= 2)")->required();
  gen->add_option("--num-ops", gen_ops, "number of operators (>= 1)")->required();
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--out", gen_out, "output file")->required();
  gen->add_option("--config", config_path, "JSON config file");

  RunConfig run_cfg;
  double run_lambda = 0.0;
  auto* run = app.add_subcommand("run", "solve one instance and write its trace");
  run->add_option("--objective", run_cfg.objective, "objective kind")
      ->check(CLI::IsMember({"qst", "hedged-qst", "burg", "poisson", "quadratic"}));
  run->add_option("--operators", run_cfg.operators, "ensemble (or rows) JSON file");
  auto* lambda_opt = run->add_option("--lambda", run_lambda, "hedging weight");
  run->add_option("--dim", run_cfg.dim, "dimension for burg and quadratic");
  run->add_option("--lipschitz", run_cfg.lipschitz, "quadratic scale");
  add_solver_flags(run, run_cfg.solver);
  run->add_option("--seed", run_cfg.seed, "seed");
  run->add_option("--trace", run_cfg.trace_path, "trace CSV output");
  run->add_option("--summary", run_cfg.summary_path, "summary JSON output");
  run->add_option("--config", config_path, "JSON config file");

  std::string suite = "all";
  int samples = 100;
  std::uint64_t diag_seed = 0;
  std::string report_path;
  auto* diagnose = app.add_subcommand("diagnose", "run a diagnostics suite over random probes");
  diagnose->add_option("--suite", suite, "suite name")->check(CLI::IsMember(diagnostic_suites()));
  diagnose->add_option("--samples", samples, "number of probes")->check(CLI::PositiveNumber);
  diagnose->add_option("--seed", diag_seed, "seed");
  diagnose->add_option("--report", report_path, "report JSON output");
  diagnose->add_option("--config", config_path, "JSON config file");

  std::string sweep_ops, sweep_lambdas, sweep_out;
  SolverConfig sweep_solver;
  int jobs = 1;
  std::uint64_t sweep_seed = 0;
  auto* sweep = app.add_subcommand("lambda-sweep", "hedged solves over descending weights");
  sweep->add_option("--operators", sweep_ops, "ensemble JSON file")->required();
  sweep->add_option("--lambdas", sweep_lambdas, "comma-separated descending weights")->required();
  add_solver_flags(sweep, sweep_solver);
  sweep->add_option("--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "seed (unused by deterministic sweeps)");
  sweep->add_option("--out", sweep_out, "table CSV output (stdout when omitted)");
  sweep->add_option("--config", config_path, "JSON config file");

  const auto error_json = [&err](const std::string& kind, const std::string& message) {
    err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
  };

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    error_json(to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::IoError ? 1 : 2;
  }

  try {
    if (*gen) {
      cmd_gen(gen_dim, gen_ops, gen_seed, gen_out);
    } else if (*run) {
      if (lambda_opt->count() > 0) run_cfg.lambda = run_lambda;
      const RunSummary s = cmd_run(run_cfg);
      if (run_cfg.summary_path.empty()) out << summary_json_text(s);
    } else if (*diagnose) {
      const auto records = cmd_diagnose(suite, samples, diag_seed, report_path);
      const bool ok = std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
      if (report_path.empty()) out << report_to_json(records).dump(2) << "\n";
      return ok ? 0 : 1;
    } else if (*sweep) {
      const auto ensemble = ensemble_from_json(read_json_file(sweep_ops));
      const auto rows = cmd_lambda_sweep(ensemble, parse_list(sweep_lambdas), sweep_solver, jobs);
      std::ostringstream table;
      write_sweep_csv(table, rows);
      if (sweep_out.empty()) {
        out << table.str();
      } else {
        write_text_file(sweep_out, table.str());
      }
    }
  } catch (const Error& e) {
    // Bad arguments or malformed inputs are usage errors; the rest are runtime failures.
    error_json(to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::InvalidInput ? 2 : 1;
  } catch (const std::exception& e) {
    error_json("RuntimeError", e.what());
    return 1;
  }
  return 0;
}

}  // namespace expgrad::cli
