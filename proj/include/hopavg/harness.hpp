#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hopavg/algorithms.hpp"
#include "hopavg/graph.hpp"

namespace hopavg {

// One averaging task: a connected graph plus observations. All randomness is
// reproducible from (master_seed, index); the per-run algorithm streams are
// derived from the same pair, so adding algorithms never perturbs scenarios.
struct Scenario {
  Graph graph;
  std::vector<double> y;
  double x_star = 0.0;  // compensated-summation mean of y
  std::uint64_t master_seed = 0;
  std::uint64_t index = 0;
};

// Geometric scenario with l = n * avg_degree / 2 links and observations
// uniform in (0,1). n * avg_degree must be even.
Scenario generate_scenario(std::uint64_t master_seed, std::uint64_t index, int n, int avg_degree);
// Wraps an explicit graph and observation vector.
Scenario make_scenario(Graph g, std::vector<double> y, std::uint64_t master_seed,
                       std::uint64_t index);
// The observation stream of (master_seed, index) on its own.
std::vector<double> random_observations(int n, std::uint64_t master_seed, std::uint64_t index);

// True iff every estimate is within tol of x_star (closed condition).
bool check_convergence(std::span<const double> estimates, double x_star, double tol);

struct TraceRecord {
  long k = 0;
  int initiator = -1;
  long cum_transmissions = 0;
  double v = std::numeric_limits<double>::quiet_NaN();  // hopwise kinds only
  double max_abs_error = 0.0;
  double event_time = std::numeric_limits<double>::quiet_NaN();  // cha only
};

struct RunResult {
  AlgoKind algorithm = AlgoKind::Cha;
  // Cumulative transmissions (initialization overhead included) at the first
  // iteration boundary satisfying the criterion; the full budget when the
  // run never converged.
  long transmissions_to_converge = 0;
  bool converged = false;
  long init_overhead = 0;
  long iterations = 0;
  std::vector<TraceRecord> trace;  // filled when requested
};

// 3 n^2, three times what flooding needs.
long default_budget(int n);

// Runs one algorithm on one scenario until convergence, termination, or
// budget. Convergence is checked once after initialization and at every
// iteration boundary; the first satisfying boundary is recorded. A step is
// taken only when its worst-case cost still fits the budget.
RunResult run_once(const Scenario& sc, const AlgorithmConfig& cfg, long budget,
                   double tol = 0.005, bool record_trace = false);

struct SweepConfig {
  std::uint64_t master_seed = 0;
  std::vector<int> n_values;
  std::vector<int> avg_degrees;
  int scenarios = 1;
  std::vector<AlgorithmConfig> algorithms;
  long budget = 0;  // 0 = 3 n^2 per cell
  double tol = 0.005;
  int threads = 1;
};

struct SweepCell {
  int n = 0;
  int avg_degree = 0;
  AlgoKind algorithm = AlgoKind::Cha;
  int scenarios = 0;
  double mean_transmissions = 0.0;
  double std_transmissions = 0.0;  // sample standard deviation
  double converged_fraction = 0.0;
};

struct SweepTable {
  std::vector<SweepCell> cells;
};

// Every algorithm in a cell sees bit-identical scenarios (paired
// comparison). Scenario runs may execute on a worker pool; results merge in
// (n, avg_degree, algorithm, index) order, so the output is byte-identical
// regardless of thread count.
SweepTable run_sweep(const SweepConfig& cfg);

struct RunRow {
  std::uint64_t scenario_index = 0;
  AlgoKind algorithm = AlgoKind::Cha;
  int n = 0;
  int l = 0;
  std::uint64_t seed = 0;
  long transmissions = 0;
  bool converged = false;
};

// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double v);

// CSV columns:
//   runs:  scenario_index,algorithm,n,l,seed,transmissions,converged
//   sweep: n,avg_degree,algorithm,scenarios,mean_transmissions,
//          std_transmissions,converged_fraction
//   trace: k,initiator,cum_transmissions,V,max_abs_error,event_time
//          (V empty for baselines, event_time empty unless cha)
void export_runs_csv(const std::vector<RunRow>& rows, const std::string& path);
void export_sweep_csv(const SweepTable& table, const std::string& path);
void export_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path);

}  // namespace hopavg
