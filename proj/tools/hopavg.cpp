// hopavg — asynchronous distributed-averaging simulator and rate-bound
// calculator. Subcommands: bounds, simulate, sweep. Exit codes: 0 on
// success/convergence, 2 when a simulation exhausts its budget, 1 on
// usage or configuration errors.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopavg/algorithms.hpp"
#include "hopavg/bounds.hpp"
#include "hopavg/graph.hpp"
#include "hopavg/harness.hpp"
#include "hopavg/hopwise.hpp"
#include "hopavg/rng.hpp"

namespace {

using namespace hopavg;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw CLI::ValidationError(what + ": '" + s + "' is not an integer");
  }
}

// Graph spec grammar:
//   family:path,N | family:cycle,N | family:complete,N |
//   family:kregular,N,K | family:petersen | geometric:N,AVGDEG | file:PATH
Graph parse_graph_spec(const std::string& spec, std::uint64_t seed,
                       const std::string& positions_path) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("graph spec '" + spec +
                               "' (want family:..., geometric:n,avgdeg or file:path)");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "family") {
    auto parts = split(rest, ',');
    if (parts.empty()) throw CLI::ValidationError("empty family spec");
    const std::string family = parts[0];
    if (family == "petersen") {
      if (parts.size() > 1) throw CLI::ValidationError("petersen takes no parameters");
      return build_petersen();
    }
    if (parts.size() < 2) throw CLI::ValidationError("family spec '" + rest + "' needs n");
    const int n = parse_int(parts[1], "family n");
    std::optional<int> k;
    if (parts.size() >= 3) k = parse_int(parts[2], "family k");
    return build_family(family, n, k);
  }
  if (kind == "geometric") {
    auto parts = split(rest, ',');
    if (parts.size() != 2)
      throw CLI::ValidationError("geometric spec wants geometric:n,avgdeg");
    const int n = parse_int(parts[0], "geometric n");
    const int deg = parse_int(parts[1], "geometric avgdeg");
    const long product = static_cast<long>(n) * deg;
    if (product % 2 != 0)
      throw CLI::ValidationError("geometric n*avgdeg must be even");
    Rng rng(derive_stream(seed, 0, 0));
    return build_random_geometric(n, static_cast<int>(product / 2), rng);
  }
  if (kind == "file") {
    Graph g = load_edge_list(rest);
    if (!positions_path.empty()) load_positions(g, positions_path);
    return g;
  }
  throw CLI::ValidationError("unknown graph spec kind '" + kind + "'");
}

struct BoundsRow {
  std::string family;
  int n = 0;
  std::optional<double> general, corollary, theorem3, icha, pa;
  std::string corollary_note, theorem3_note;
  std::optional<double> contraction;  // from the tightest available gamma
};

std::string cell(const std::optional<double>& v, const std::string& note) {
  if (v) return format_double(*v);
  return note.empty() ? "n/a" : "n/a (" + note + ")";
}

void print_bounds_table(const std::vector<BoundsRow>& rows) {
  std::printf("%-18s %6s %20s %22s %22s %20s %10s %20s\n", "family", "n", "gamma_general",
              "gamma_corollary", "gamma_theorem3", "gamma_icha", "gamma_pa", "contraction");
  for (const auto& r : rows) {
    std::printf("%-18s %6d %20s %22s %22s %20s %10s %20s\n", r.family.c_str(), r.n,
                cell(r.general, "").c_str(), cell(r.corollary, r.corollary_note).c_str(),
                cell(r.theorem3, r.theorem3_note).c_str(), cell(r.icha, "").c_str(),
                cell(r.pa, "").c_str(), cell(r.contraction, "").c_str());
  }
}

void write_bounds_csv(const std::vector<BoundsRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "family,n,gamma_general,gamma_corollary,gamma_theorem3,gamma_icha,gamma_pa,"
         "contraction\n";
  auto field = [](const std::optional<double>& v) { return v ? format_double(*v) : ""; };
  for (const auto& r : rows)
    out << r.family << ',' << r.n << ',' << field(r.general) << ',' << field(r.corollary) << ','
        << field(r.theorem3) << ',' << field(r.icha) << ',' << field(r.pa) << ','
        << field(r.contraction) << '\n';
}

struct BoundsOptions {
  std::string family;
  std::string n_list;
  int k = 0;
  int mu = 0;
  int lambda = -1;
  std::string graph_spec;
  std::string positions;
  std::uint64_t seed = 1;
  std::string csv_path;
};

BoundsRow bounds_row_for_graph(const Graph& g) {
  BoundsRow row;
  row.family = g.family ? to_string(*g.family) : "file";
  row.n = g.n;
  const Weights w = compute_weights(g);
  const GraphInvariants inv = graph_invariants(g);
  row.general = gamma_general(inv, w).value;

  ClosedParams params;
  std::optional<FamilyTag> fam = g.family;
  if (!fam) {
    // Arbitrary graphs from files still get the regular-graph forms when the
    // degree validator passes.
    if (auto k = regular_degree(g); k && *k >= 2) fam = FamilyTag::KRegular;
  }
  if (fam && *fam != FamilyTag::Geometric) {
    params.k = regular_degree(g).value_or(-1);
    params.diameter = inv.diameter;
    if (*fam == FamilyTag::StronglyRegular) {
      // Parameter-level support: the petersen fixture.
      params.lambda = 0;
      params.mu = 1;
    }
    const ClosedBounds cb = gamma_closed(*fam, g.n, params);
    if (cb.corollary) row.corollary = cb.corollary->value;
    row.corollary_note = cb.corollary_reason;
    if (cb.theorem3) row.theorem3 = cb.theorem3->value;
    row.theorem3_note = cb.theorem3_reason;
  }
  if (g.family == FamilyTag::Complete) row.pa = gamma_pa_complete(g.n);
  const double tightest =
      row.theorem3 ? *row.theorem3 : (row.corollary ? *row.corollary : *row.general);
  row.icha = gamma_two_iteration(tightest);
  row.contraction = 1.0 - 1.0 / tightest;
  return row;
}

int cmd_bounds(const BoundsOptions& opt) {
  std::vector<BoundsRow> rows;
  if (!opt.graph_spec.empty()) {
    rows.push_back(bounds_row_for_graph(parse_graph_spec(opt.graph_spec, opt.seed, opt.positions)));
  } else if (opt.family == "srg" || opt.family == "strongly-regular") {
    // Parameter-level evaluation, no concrete graph.
    for (const auto& ns : split(opt.n_list, ',')) {
      const int n = parse_int(ns, "--n");
      BoundsRow row;
      row.family = "strongly-regular";
      row.n = n;
      ClosedParams params;
      params.k = opt.k;
      params.mu = opt.mu;
      params.lambda = opt.lambda;
      const ClosedBounds cb = gamma_closed(FamilyTag::StronglyRegular, n, params);
      if (cb.theorem3) row.theorem3 = cb.theorem3->value;
      row.theorem3_note = cb.theorem3_reason;
      row.corollary_note = cb.corollary_reason;
      if (row.theorem3) {
        row.icha = gamma_two_iteration(*row.theorem3);
        row.contraction = 1.0 - 1.0 / *row.theorem3;
      }
      rows.push_back(row);
    }
  } else {
    for (const auto& ns : split(opt.n_list, ',')) {
      const int n = parse_int(ns, "--n");
      rows.push_back(bounds_row_for_graph(
          build_family(opt.family, n, opt.k > 0 ? std::optional<int>(opt.k) : std::nullopt)));
    }
  }
  print_bounds_table(rows);
  if (!opt.csv_path.empty()) write_bounds_csv(rows, opt.csv_path);
  return 0;
}

struct SimulateOptions {
  std::string algo;
  std::string graph_spec;
  std::string positions;
  std::string y_list;
  std::uint64_t seed = 1;
  long budget = 0;  // 0 = 3 n^2
  double tol = 0.005;
  std::string trace_path;
  std::string out_path;
  AlgorithmConfig params;
};

int cmd_simulate(const SimulateOptions& opt) {
  const auto kind = parse_algo(opt.algo);
  if (!kind) throw CLI::ValidationError("unknown algorithm '" + opt.algo + "'");
  AlgorithmConfig cfg = opt.params;
  cfg.kind = *kind;
  validate(cfg);

  Graph g = parse_graph_spec(opt.graph_spec, opt.seed, opt.positions);
  std::vector<double> y;
  if (!opt.y_list.empty()) {
    for (const auto& part : split(opt.y_list, ',')) {
      try {
        y.push_back(std::stod(part));
      } catch (...) {
        throw CLI::ValidationError("--y entry '" + part + "' is not a number");
      }
    }
    if (static_cast<int>(y.size()) != g.n)
      throw CLI::ValidationError("--y has " + std::to_string(y.size()) + " entries for " +
                                 std::to_string(g.n) + " nodes");
  } else {
    y = random_observations(g.n, opt.seed, 0);
  }
  const int n = g.n;
  const int l = g.link_count();
  Scenario sc = make_scenario(std::move(g), std::move(y), opt.seed, 0);
  const long budget = opt.budget > 0 ? opt.budget : default_budget(n);

  const RunResult res = run_once(sc, cfg, budget, opt.tol, !opt.trace_path.empty());

  std::printf("algorithm=%s n=%d l=%d seed=%llu budget=%ld tol=%s\n", to_string(cfg.kind).c_str(),
              n, l, static_cast<unsigned long long>(opt.seed), budget,
              format_double(opt.tol).c_str());
  std::printf("converged=%d transmissions=%ld iterations=%ld init_overhead=%ld\n",
              res.converged ? 1 : 0, res.transmissions_to_converge, res.iterations,
              res.init_overhead);

  if (!opt.trace_path.empty()) export_trace_csv(res.trace, opt.trace_path);
  if (!opt.out_path.empty()) {
    RunRow row;
    row.scenario_index = 0;
    row.algorithm = cfg.kind;
    row.n = n;
    row.l = l;
    row.seed = opt.seed;
    row.transmissions = res.transmissions_to_converge;
    row.converged = res.converged;
    export_runs_csv({row}, opt.out_path);
  }
  return res.converged ? 0 : 2;
}

struct SweepOptions {
  std::string n_list;
  std::string deg_list;
  int scenarios = 50;
  std::string algos;
  std::uint64_t seed = 1;
  long budget = 0;
  double tol = 0.005;
  int threads = 1;
  std::string out_path;
  AlgorithmConfig params;
};

int cmd_sweep(const SweepOptions& opt) {
  SweepConfig cfg;
  cfg.master_seed = opt.seed;
  for (const auto& ns : split(opt.n_list, ',')) cfg.n_values.push_back(parse_int(ns, "--n"));
  for (const auto& ds : split(opt.deg_list, ','))
    cfg.avg_degrees.push_back(parse_int(ds, "--avg-degree"));
  for (const auto& as : split(opt.algos, ',')) {
    const auto kind = parse_algo(as);
    if (!kind) throw CLI::ValidationError("unknown algorithm '" + as + "'");
    AlgorithmConfig acfg = opt.params;
    acfg.kind = *kind;
    validate(acfg);
    cfg.algorithms.push_back(acfg);
  }
  if (cfg.algorithms.empty()) throw CLI::ValidationError("--algos list is empty");
  cfg.scenarios = opt.scenarios;
  cfg.budget = opt.budget;
  cfg.tol = opt.tol;
  cfg.threads = opt.threads;

  const SweepTable table = run_sweep(cfg);
  export_sweep_csv(table, opt.out_path);
  std::printf("wrote %zu sweep cells to %s\n", table.cells.size(), opt.out_path.c_str());
  return 0;
}

void add_param_flags(CLI::App* cmd, AlgorithmConfig* params) {
  cmd->add_option("--cha-phi-c", params->cha_phi_c,
                  "CHA scheduling constant: Phi(v) = c/v (default 1)");
  cmd->add_option("--cha-eps", params->cha_eps, "CHA jitter constant >= 0 (default 0.001)");
  cmd->add_option("--cp-beta", params->cp_beta, "CP stiffness in (0, inf] (default 1e6)");
  cmd->add_option("--a2-gamma", params->a2_gamma, "A2 relaxation gain in (0,1) (default 0.3)");
  cmd->add_option("--a2-phi", params->a2_phi, "A2 flow gain in (0,0.5) (default 0.49)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopwise averaging simulator, baselines, and convergence-rate bounds"};
  app.require_subcommand(1);

  BoundsOptions bopt;
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate convergence-rate bounds");
  bounds_cmd->add_option("--family", bopt.family,
                         "path | cycle | complete | kregular | petersen | srg");
  bounds_cmd->add_option("--n", bopt.n_list, "node count, or comma list");
  bounds_cmd->add_option("--k", bopt.k, "degree for kregular/srg");
  bounds_cmd->add_option("--mu", bopt.mu, "common-neighbor count for srg (mu >= 1)");
  bounds_cmd->add_option("--lambda", bopt.lambda, "adjacent common-neighbor count for srg");
  bounds_cmd->add_option("--graph", bopt.graph_spec,
                         "concrete graph spec (family:..., geometric:n,avgdeg, file:path)");
  bounds_cmd->add_option("--positions", bopt.positions, "positions file for file: graphs");
  bounds_cmd->add_option("--seed", bopt.seed, "seed for geometric: specs (default 1)");
  bounds_cmd->add_option("--csv", bopt.csv_path, "also write the table as CSV");

  SimulateOptions sopt;
  auto* sim_cmd = app.add_subcommand("simulate", "run one algorithm on one network");
  sim_cmd->add_option("--algo", sopt.algo, "rha | icha | cha | pa | cp | a2 | drg")->required();
  sim_cmd->add_option("--graph", sopt.graph_spec,
                      "family:..., geometric:n,avgdeg or file:path")->required();
  sim_cmd->add_option("--positions", sopt.positions, "positions file for file: graphs");
  sim_cmd->add_option("--y", sopt.y_list,
                      "comma list of observations (default: uniform (0,1) from the seed)");
  sim_cmd->add_option("--seed", sopt.seed, "master seed (default 1)");
  sim_cmd->add_option("--budget", sopt.budget,
                      "transmission budget (default 3n^2; exit 2 when exhausted)");
  sim_cmd->add_option("--tol", sopt.tol, "convergence tolerance (default 0.005)");
  sim_cmd->add_option("--trace", sopt.trace_path, "write a per-iteration trace CSV");
  sim_cmd->add_option("--out", sopt.out_path, "write the run row CSV");
  add_param_flags(sim_cmd, &sopt.params);

  SweepOptions wopt;
  auto* sweep_cmd = app.add_subcommand("sweep", "multi-scenario benchmark over a grid");
  sweep_cmd->add_option("--n", wopt.n_list, "comma list of node counts")->required();
  sweep_cmd->add_option("--avg-degree", wopt.deg_list, "comma list of average degrees")
      ->required();
  sweep_cmd->add_option("--scenarios", wopt.scenarios, "scenarios per cell (default 50)");
  sweep_cmd->add_option("--algos", wopt.algos, "comma list of algorithms")->required();
  sweep_cmd->add_option("--seed", wopt.seed, "master seed (default 1)");
  sweep_cmd->add_option("--budget", wopt.budget, "transmission budget (default 3n^2 per cell)");
  sweep_cmd->add_option("--tol", wopt.tol, "convergence tolerance (default 0.005)");
  sweep_cmd->add_option("--threads", wopt.threads,
                        "worker threads (default 1; output independent of the count)");
  sweep_cmd->add_option("--out", wopt.out_path, "sweep CSV path")->required();
  add_param_flags(sweep_cmd, &wopt.params);

  try {
    app.parse(argc, argv);
    if (bounds_cmd->parsed()) {
      if (bopt.graph_spec.empty() && (bopt.family.empty() || bopt.n_list.empty()) &&
          bopt.family != "petersen")
        throw CLI::ValidationError("bounds needs --family with --n, or --graph");
      if (bopt.family == "petersen" && bopt.n_list.empty()) bopt.n_list = "10";
      return cmd_bounds(bopt);
    }
    if (sim_cmd->parsed()) return cmd_simulate(sopt);
    if (sweep_cmd->parsed()) return cmd_sweep(wopt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
