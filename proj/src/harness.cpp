#include "hopavg/harness.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "hopavg/rng.hpp"

namespace hopavg {

namespace {

constexpr std::uint64_t kGraphStream = 0;
constexpr std::uint64_t kObsStream = 1;

}  // namespace

std::vector<double> random_observations(int n, std::uint64_t master_seed, std::uint64_t index) {
  Rng rng(derive_stream(master_seed, index, kObsStream));
  std::vector<double> y(n);
  for (double& v : y) v = rng.uniform01();
  return y;
}

Scenario generate_scenario(std::uint64_t master_seed, std::uint64_t index, int n,
                           int avg_degree) {
  const long product = static_cast<long>(n) * avg_degree;
  if (product % 2 != 0)
    throw std::invalid_argument("n * avg_degree must be even to give an integer link count");
  Rng graph_rng(derive_stream(master_seed, index, kGraphStream));
  Scenario sc;
  sc.graph = build_random_geometric(n, static_cast<int>(product / 2), graph_rng);
  sc.y = random_observations(n, master_seed, index);
  sc.x_star = compensated_mean(sc.y);
  sc.master_seed = master_seed;
  sc.index = index;
  return sc;
}

Scenario make_scenario(Graph g, std::vector<double> y, std::uint64_t master_seed,
                       std::uint64_t index) {
  if (static_cast<int>(y.size()) != g.n)
    throw std::invalid_argument("observation vector has " + std::to_string(y.size()) +
                                " entries for " + std::to_string(g.n) + " nodes");
  Scenario sc;
  sc.graph = std::move(g);
  sc.y = std::move(y);
  sc.x_star = compensated_mean(sc.y);
  sc.master_seed = master_seed;
  sc.index = index;
  return sc;
}

bool check_convergence(std::span<const double> estimates, double x_star, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  for (double v : estimates)
    if (std::abs(v - x_star) > tol) return false;
  return true;
}

long default_budget(int n) { return 3L * n * n; }

RunResult run_once(const Scenario& sc, const AlgorithmConfig& cfg, long budget, double tol,
                   bool record_trace) {
  AlgorithmRun run(sc.graph, sc.y, cfg,
                   derive_stream(sc.master_seed, sc.index, algo_stream_tag(cfg.kind)));
  RunResult res;
  res.algorithm = cfg.kind;
  res.init_overhead = run.init_overhead();
  if (budget < res.init_overhead)
    throw std::invalid_argument("budget " + std::to_string(budget) +
                                " is below the initialization overhead of " +
                                std::to_string(res.init_overhead));

  long total = res.init_overhead;
  long k = 0;
  bool converged = check_convergence(run.estimates(), sc.x_star, tol);
  auto emit = [&](int initiator) {
    if (!record_trace) return;
    TraceRecord rec;
    rec.k = k;
    rec.initiator = initiator;
    rec.cum_transmissions = total;
    rec.v = run.lyapunov();
    rec.max_abs_error = run.max_abs_error(sc.x_star);
    rec.event_time = run.event_time();
    res.trace.push_back(rec);
  };
  emit(-1);

  while (!converged) {
    if (run.terminated()) break;
    const int cost = run.next_step_cost();
    if (total + cost > budget) break;
    const StepOutcome out = run.step();
    if (out.terminated && out.transmissions == 0) break;
    ++k;
    total += out.transmissions;
    converged = check_convergence(run.estimates(), sc.x_star, tol);
    emit(out.initiator);
  }

  res.iterations = k;
  res.converged = converged;
  res.transmissions_to_converge = converged ? total : budget;
  return res;
}

SweepTable run_sweep(const SweepConfig& cfg) {
  if (cfg.scenarios < 1) throw std::invalid_argument("sweep needs at least one scenario");
  if (cfg.algorithms.empty()) throw std::invalid_argument("sweep needs at least one algorithm");
  if (cfg.n_values.empty() || cfg.avg_degrees.empty())
    throw std::invalid_argument("sweep needs node counts and average degrees");

  SweepTable table;
  const int nalgo = static_cast<int>(cfg.algorithms.size());
  for (int n : cfg.n_values) {
    for (int deg : cfg.avg_degrees) {
      const long budget = cfg.budget > 0 ? cfg.budget : default_budget(n);
      std::vector<std::vector<RunResult>> results(
          cfg.scenarios, std::vector<RunResult>(nalgo));

      std::atomic<int> cursor{0};
      std::exception_ptr first_error;
      std::mutex error_mutex;
      auto worker = [&]() {
        for (;;) {
          const int sidx = cursor.fetch_add(1);
          if (sidx >= cfg.scenarios) return;
          try {
            const Scenario sc = generate_scenario(cfg.master_seed, sidx, n, deg);
            for (int a = 0; a < nalgo; ++a)
              results[sidx][a] = run_once(sc, cfg.algorithms[a], budget, cfg.tol, false);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      };
      const int nthreads = std::max(1, cfg.threads);
      if (nthreads == 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }
      if (first_error) std::rethrow_exception(first_error);

      // Aggregate in scenario-index order per algorithm, in listed order.
      for (int a = 0; a < nalgo; ++a) {
        SweepCell cell;
        cell.n = n;
        cell.avg_degree = deg;
        cell.algorithm = cfg.algorithms[a].kind;
        cell.scenarios = cfg.scenarios;
        double sum = 0.0;
        int nconv = 0;
        for (int s = 0; s < cfg.scenarios; ++s) {
          sum += static_cast<double>(results[s][a].transmissions_to_converge);
          nconv += results[s][a].converged ? 1 : 0;
        }
        cell.mean_transmissions = sum / cfg.scenarios;
        double ss = 0.0;
        for (int s = 0; s < cfg.scenarios; ++s) {
          const double d =
              static_cast<double>(results[s][a].transmissions_to_converge) - cell.mean_transmissions;
          ss += d * d;
        }
        cell.std_transmissions = cfg.scenarios > 1 ? std::sqrt(ss / (cfg.scenarios - 1)) : 0.0;
        cell.converged_fraction = static_cast<double>(nconv) / cfg.scenarios;
        table.cells.push_back(cell);
      }
    }
  }
  return table;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

void export_runs_csv(const std::vector<RunRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no run rows to export");
  auto out = open_out(path);
  out << "scenario_index,algorithm,n,l,seed,transmissions,converged\n";
  for (const auto& r : rows)
    out << r.scenario_index << ',' << to_string(r.algorithm) << ',' << r.n << ',' << r.l << ','
        << r.seed << ',' << r.transmissions << ',' << (r.converged ? 1 : 0) << '\n';
}

void export_sweep_csv(const SweepTable& table, const std::string& path) {
  if (table.cells.empty()) throw std::invalid_argument("no sweep cells to export");
  auto out = open_out(path);
  out << "n,avg_degree,algorithm,scenarios,mean_transmissions,std_transmissions,"
         "converged_fraction\n";
  for (const auto& c : table.cells)
    out << c.n << ',' << c.avg_degree << ',' << to_string(c.algorithm) << ',' << c.scenarios
        << ',' << format_double(c.mean_transmissions) << ',' << format_double(c.std_transmissions)
        << ',' << format_double(c.converged_fraction) << '\n';
}

void export_trace_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  if (trace.empty()) throw std::invalid_argument("no trace records to export");
  auto out = open_out(path);
  out << "k,initiator,cum_transmissions,V,max_abs_error,event_time\n";
  for (const auto& r : trace) {
    out << r.k << ',' << r.initiator << ',' << r.cum_transmissions << ',';
    if (!std::isnan(r.v)) out << format_double(r.v);
    out << ',' << format_double(r.max_abs_error) << ',';
    if (!std::isnan(r.event_time)) out << format_double(r.event_time);
    out << '\n';
  }
}

}  // namespace hopavg
