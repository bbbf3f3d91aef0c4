#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gasdicke/gasdicke.hpp"

using namespace gasd;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

struct SolveArgs {
  std::string instance;
  std::string objective;
  std::string problem = "max-sum";
  std::string space = "dicke";
  int k = 2;
  double delta = 0.0;
  std::optional<double> lambda2;
  std::string backend = "analytic";
  std::uint64_t seed = 1;
  std::uint64_t max_qd = 10000;
  std::uint64_t max_cd = 1000000;
  double quantize_error = 1e-4;
  int max_failures = 0;
  bool stop_at_optimum = false;
  std::optional<double> target;
  std::string out_dir;
  std::string trace;
};

int cmd_solve(const SolveArgs& a) {
  if (a.instance.empty() == a.objective.empty()) throw CLI::ValidationError("solve needs exactly one of --instance or --objective");
  GasConfig cfg;
  cfg.backend = parse_backend(a.backend);
  cfg.seed = a.seed;
  cfg.max_quantum_queries = a.max_qd;
  cfg.max_classical_queries = a.max_cd;
  cfg.quantize_error = a.quantize_error;
  cfg.max_consecutive_failures = static_cast<std::uint64_t>(a.max_failures);
  cfg.target_value = a.target;

  Json out;
  auto solve = [&](const auto& obj, const SearchSpace& space) {
    if (a.stop_at_optimum) cfg.target_value = brute_force_minimum(obj, space).value;
    const GasResult r = run_gas(obj, space, cfg);
    out = gas_result_to_json(r, space.n());
    out["space"] = space.describe();
    out["backend"] = backend_name(cfg.backend);
    out["seed"] = cfg.seed;
    std::string trace_path = a.trace;
    if (trace_path.empty() && !a.out_dir.empty()) trace_path = (fs::path(a.out_dir) / "trace.csv").string();
    if (!trace_path.empty()) {
      auto os = open_out(trace_path);
      write_trace_csv(r.trace, os);
    }
    return r;
  };

  if (!a.objective.empty()) {
    const PolynomialObjective obj = objective_from_json(read_json_file(a.objective));
    const SearchSpace space = a.space == "hadamard" ? SearchSpace::hadamard(obj.n()) : SearchSpace::dicke(obj.n(), a.k);
    solve(obj, space);
  } else {
    const DistanceMatrix D = load_instance(a.instance);
    const Problem p = parse_problem(a.problem);
    const bool hadamard = a.space == "hadamard";
    DispersionObjective f;
    if (p == Problem::MaxSum) {
      f = max_sum_formulation(D, a.k, hadamard, a.lambda2);
    } else if (a.delta > 0.0) {
      const CompressionResult c = rank_compress(D, a.delta, a.k);
      f = max_min_formulation(c.compressed, a.k, hadamard, c.lambda1, a.lambda2);
    } else {
      f = max_min_formulation(D, a.k, hadamard, std::nullopt, a.lambda2);
    }
    const SearchSpace space = hadamard ? SearchSpace::hadamard(D.n()) : SearchSpace::dicke(D.n(), a.k);
    const GasResult r = solve(f, space);
    std::vector<int> subset;
    for (int i = 0; i < D.n(); ++i) {
      if (r.best >> i & 1) subset.push_back(i);
    }
    out["problem"] = problem_name(p);
    out["subset"] = subset;
    if (static_cast<int>(subset.size()) >= 2) {
      out["sum_distance"] = sum_distance(D, r.best);
      out["min_distance"] = min_distance(D, r.best);
    }
  }
  if (!a.out_dir.empty()) {
    auto os = open_out(fs::path(a.out_dir) / "result.json");
    os << out.dump(2) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
  std::optional<int> workers;
  std::string out_dir = "results";
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg = config_from_json(read_json_file(a.config));
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.seed = *a.seed;
  if (a.backend) cfg.backend = parse_backend(*a.backend);
  if (a.workers) cfg.workers = *a.workers;
  const ExperimentResult r = run_experiment(cfg);
  const fs::path dir(a.out_dir);
  {
    auto os = open_out(dir / "trajectories.csv");
    write_trajectories_csv(r.trajectories, os);
  }
  {
    auto os = open_out(dir / "cdf.csv");
    write_cdf_csv(r.cdf, os);
  }
  for (QueryDomain d : {QueryDomain::QD, QueryDomain::CD}) {
    const std::string tag = d == QueryDomain::QD ? "qd" : "cd";
    auto t = open_out(dir / ("trajectories_" + tag + ".svg"));
    write_trajectory_svg(r, d, t);
    auto c = open_out(dir / ("cdf_" + tag + ".svg"));
    write_cdf_svg(r, d, c);
  }
  Json summary{{"config", config_to_json(cfg)}, {"methods", Json::array()}};
  for (const auto& m : r.runs) {
    Json row{{"method", method_name(m.method)}, {"reached", m.reached()}, {"trials", m.trials.size()}};
    for (QueryDomain d : {QueryDomain::QD, QueryDomain::CD}) {
      const double med = median(m.to_optimum(d));
      row[std::string("median_") + domain_name(d) + "_to_optimum"] = std::isfinite(med) ? Json(med) : Json(nullptr);
    }
    summary["methods"].push_back(row);
  }
  {
    auto os = open_out(dir / "summary.json");
    os << summary.dump(2) << "\n";
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct DickeArgs {
  int n = 0;
  int k = 0;
  double threshold = 1e-12;
  std::string out_dir;
  bool circuit = false;
};

int cmd_dicke_dump(const DickeArgs& a) {
  const Circuit c = build_dicke_prep({a.n, a.k});
  const StateVector s = run(c);
  const GateCensus g = census(c);
  auto emit = [&](std::ostream& amp, std::ostream& cen, std::ostream* circ) {
    write_csv(s, amp, a.threshold);
    cen << "bucket,count\n";
    for (const auto& [bucket, count] : g.counts) cen << bucket << "," << count << "\n";
    cen << "total," << g.total() << "\n";
    if (circ) *circ << dump(c);
  };
  if (a.out_dir.empty()) {
    emit(std::cout, std::cout, a.circuit ? &std::cout : nullptr);
    return 0;
  }
  const fs::path dir(a.out_dir);
  auto amp = open_out(dir / "amplitudes.csv");
  auto cen = open_out(dir / "census.csv");
  std::ofstream circ;
  if (a.circuit) circ = open_out(dir / "circuit.txt");
  emit(amp, cen, a.circuit ? &circ : nullptr);
  return 0;
}

struct CodebookArgs {
  int length = 0;
  std::optional<int> weight;
  int K = 2;
  std::string solver = "exact";
  bool im = false;
  std::uint64_t seed = 1;
  std::string backend = "analytic";
  std::uint64_t max_qd = 20000;
  std::string out_dir;
};

int cmd_codebook(const CodebookArgs& a) {
  const CodeSpace space{a.length, a.weight, a.im};
  CodebookSolver solver;
  if (a.solver == "gas") {
    solver.kind = CodebookSolverKind::Gas;
    solver.gas.seed = a.seed;
    solver.gas.backend = parse_backend(a.backend);
    solver.gas.max_quantum_queries = a.max_qd;
  } else if (a.solver != "exact") {
    throw CLI::ValidationError("--solver must be exact or gas");
  }
  const Codebook cb = design_codebook(space, a.K, solver);
  const Json j = codebook_to_json(cb, space, a.solver);
  if (!a.out_dir.empty()) {
    auto os = open_out(fs::path(a.out_dir) / "codebook.json");
    os << j.dump(2) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grover adaptive search over Hadamard and Dicke search spaces"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Run GAS on one instance or objective");
  solve->add_option("--instance", sa.instance, "Distance matrix (.json or square .csv)");
  solve->add_option("--objective", sa.objective, "Polynomial objective JSON");
  solve->add_option("--problem", sa.problem, "max-sum or max-min")->check(CLI::IsMember({"max-sum", "max-min"}));
  solve->add_option("--space", sa.space, "dicke or hadamard")->check(CLI::IsMember({"dicke", "hadamard"}));
  solve->add_option("-k,--k", sa.k, "Subset size / Dicke weight");
  solve->add_option("--delta", sa.delta, "Rank compression step for max-min (0 disables)");
  solve->add_option("--lambda2", sa.lambda2, "Penalty weight for the Hadamard formulation");
  solve->add_option("--backend", sa.backend, "gate or analytic")->check(CLI::IsMember({"gate", "analytic"}));
  solve->add_option("--seed", sa.seed, "Random seed");
  solve->add_option("--max-qd", sa.max_qd, "Quantum query budget (0 disables)");
  solve->add_option("--max-cd", sa.max_cd, "Classical query budget (0 disables)");
  solve->add_option("--quantize-error", sa.quantize_error, "Relative rounding error per coefficient for the gate backend");
  solve->add_option("--max-failures", sa.max_failures, "Stop after this many non-improving iterations (0 disables)");
  solve->add_option("--target", sa.target, "Stop once the objective reaches this value");
  solve->add_flag("--stop-at-optimum", sa.stop_at_optimum, "Use the brute-force minimum as the target");
  solve->add_option("--trace", sa.trace, "Trace CSV path");
  solve->add_option("--out-dir", sa.out_dir, "Directory for result.json and trace.csv");

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "Run a query-complexity experiment from a JSON config");
  exp->add_option("config", ea.config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--trials", ea.trials, "Override the trial count");
  exp->add_option("--seed", ea.seed, "Override the seed");
  exp->add_option("--backend", ea.backend, "gate or analytic")->check(CLI::IsMember({"gate", "analytic"}));
  exp->add_option("--workers", ea.workers, "Worker threads");
  exp->add_option("--out-dir", ea.out_dir, "Output directory")->capture_default_str();

  DickeArgs da;
  auto* dk = app.add_subcommand("dicke-dump", "Dump a Dicke-state preparation as CSV");
  dk->add_option("--n", da.n, "Qubits")->required();
  dk->add_option("--k", da.k, "Hamming weight")->required();
  dk->add_option("--threshold", da.threshold, "Skip amplitudes at or below this modulus (0 keeps all)");
  dk->add_flag("--circuit", da.circuit, "Also dump the gate list");
  dk->add_option("--out-dir", da.out_dir, "Write amplitudes.csv and census.csv here instead of stdout");

  CodebookArgs ca;
  auto* cbk = app.add_subcommand("codebook", "Design a codebook with maximal minimum Hamming distance");
  cbk->add_option("--length", ca.length, "Codeword length")->required();
  cbk->add_option("--weight", ca.weight, "Constant weight (omit for unrestricted)");
  cbk->add_option("--K", ca.K, "Number of codewords")->required();
  cbk->add_option("--solver", ca.solver, "exact or gas")->check(CLI::IsMember({"exact", "gas"}));
  cbk->add_flag("--im", ca.im, "Index-modulation space (first 2^floor(log2 C(L,W)) words)");
  cbk->add_option("--seed", ca.seed, "Random seed for the gas solver");
  cbk->add_option("--backend", ca.backend, "gate or analytic")->check(CLI::IsMember({"gate", "analytic"}));
  cbk->add_option("--max-qd", ca.max_qd, "Quantum query budget for the gas solver");
  cbk->add_option("--out-dir", ca.out_dir, "Write codebook.json here");

  CLI11_PARSE(app, argc, argv);
  try {
    if (solve->parsed()) return cmd_solve(sa);
    if (exp->parsed()) return cmd_experiment(ea);
    if (dk->parsed()) return cmd_dicke_dump(da);
    if (cbk->parsed()) return cmd_codebook(ca);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
