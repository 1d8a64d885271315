#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopavg/graph.hpp"
#include "hopavg/hopwise.hpp"
#include "hopavg/rng.hpp"

namespace hopavg {

enum class AlgoKind { Rha, Icha, Cha, Pa, Cp, A2, Drg };

std::string to_string(AlgoKind kind);
std::optional<AlgoKind> parse_algo(const std::string& name);
bool is_hopwise(AlgoKind kind);
// Stable RNG stream tag per algorithm (see derive_stream).
std::uint64_t algo_stream_tag(AlgoKind kind);

struct AlgorithmConfig {
  AlgoKind kind = AlgoKind::Cha;
  double cha_phi_c = 1.0;  // scheduling function Phi(v) = cha_phi_c / v
  double cha_eps = 0.001;  // constant collision-avoidance jitter, >= 0
  double cp_beta = 1e6;    // (0, inf]; +inf drops the 1/beta term
  double a2_gamma = 0.3;   // (0, 1)
  double a2_phi = 0.49;    // (0, 1/2)
};

// Throws std::invalid_argument naming the violated range.
void validate(const AlgorithmConfig& cfg);

// Discrete-event schedule for CHA. tau[i] = +inf means node i will not fire.
// Invariant: tau[i] >= t_now for all i.
struct ChaSchedule {
  std::vector<double> tau;
  double t_now = 0.0;
  bool all_infinite() const;
};

// Per-node (and per-directed-link, for CP and A2) baseline state. Directed
// link (from,to) over undirected link e is indexed 2e when from is the lower
// endpoint, 2e+1 otherwise.
struct BaselineState {
  AlgoKind kind = AlgoKind::Pa;
  std::vector<double> x_hat;
  std::vector<double> y;
  std::vector<double> cp_k;       // receiver-side K, per directed link
  std::vector<double> cp_mu;      // receiver-side mu, per directed link
  std::vector<double> a2_delta;   // sender-side delta, per directed link
  std::vector<double> a2_dsum;    // per-node running sum of outgoing deltas
};

BaselineState init_baseline(AlgoKind kind, const Graph& g, const std::vector<double>& y);

struct StepOutcome {
  // Real numbers sent this iteration: 1 for rha/icha/cha, 2 for pa/cp/a2,
  // |N_leader|+1 for drg. A terminated probe applies no iteration and
  // carries 0.
  int transmissions = 0;
  int initiator = -1;
  bool terminated = false;
  double event_time = std::numeric_limits<double>::quiet_NaN();  // cha only
};

// RNG draw order, part of the replay contract:
//   rha:  one node draw per step
//   icha: none
//   cha:  cha_schedule_init consumes one jitter draw per node in ascending id
//         order when eps > 0; each step consumes one tie-break draw only when
//         several taus attain the minimum, then (when eps > 0) one jitter
//         draw per neighbor of the initiator in ascending neighbor order
//   pa:   one link draw;  cp/a2: one directed-link draw;  drg: one node draw

StepOutcome step_rha(const Graph& g, const Weights& w, HopwiseState& s, Rng& rng);

// Greedy ideal iteration: initiator is the lowest-id node attaining the
// maximum drop. With all drops exactly zero the state is already the
// consensus; no update is applied and the outcome reports terminated.
StepOutcome step_icha(const Graph& g, const Weights& w, HopwiseState& s);

ChaSchedule cha_schedule_init(const HopwiseState& s, const AlgorithmConfig& cfg, Rng& rng);

// Advances time to the earliest event, fires that node (ties broken
// uniformly at random), and reschedules the initiator's neighborhood.
// Throws std::logic_error when called with every tau infinite.
StepOutcome step_cha(const Graph& g, const Weights& w, HopwiseState& s, ChaSchedule& sched,
                     const AlgorithmConfig& cfg, Rng& rng);

StepOutcome step_pa(const Graph& g, BaselineState& st, Rng& rng);
StepOutcome step_cp(const Graph& g, BaselineState& st, double beta, Rng& rng);
StepOutcome step_a2(const Graph& g, BaselineState& st, double gamma, double phi, Rng& rng);
StepOutcome step_drg(const Graph& g, BaselineState& st, Rng& rng);

// Deterministic variants with the random choice forced (used by the rng
// versions and by desk-check tests).
StepOutcome step_pa_at(const Graph& g, BaselineState& st, int link);
StepOutcome step_cp_at(const Graph& g, BaselineState& st, double beta, int from, int to);
StepOutcome step_a2_at(const Graph& g, BaselineState& st, double gamma, double phi, int from,
                       int to);
StepOutcome step_drg_at(const Graph& g, BaselineState& st, int leader);

// Uniform run wrapper consumed by the harness: initialize, step, snapshot.
class AlgorithmRun {
 public:
  AlgorithmRun(const Graph& g, std::vector<double> y, const AlgorithmConfig& cfg,
               std::uint64_t seed);

  AlgoKind kind() const { return cfg_.kind; }
  // 2n scalars (degree and observation per node) for hopwise kinds, 0 for
  // the baselines.
  long init_overhead() const;
  // Worst-case transmissions of the next step; for drg this draws (and
  // pins) the next leader so the cost is known before stepping.
  int next_step_cost();
  StepOutcome step();
  bool terminated() const;
  std::span<const double> estimates() const;
  double lyapunov() const;  // NaN for baselines
  double max_abs_error(double x_star) const;
  double event_time() const;  // cha: time of the latest event, else NaN

  const HopwiseState* hopwise() const { return hop_ ? &*hop_ : nullptr; }
  const Weights* weights() const { return hop_ ? &w_ : nullptr; }
  const ChaSchedule* schedule() const { return sched_ ? &*sched_ : nullptr; }

 private:
  const Graph* g_;
  AlgorithmConfig cfg_;
  Rng rng_;
  Weights w_;
  std::optional<HopwiseState> hop_;
  std::optional<ChaSchedule> sched_;
  std::optional<BaselineState> base_;
  int drg_pending_ = -1;
  double last_event_time_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace hopavg
