#include "hopavg/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hopavg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string to_string(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::Rha: return "rha";
    case AlgoKind::Icha: return "icha";
    case AlgoKind::Cha: return "cha";
    case AlgoKind::Pa: return "pa";
    case AlgoKind::Cp: return "cp";
    case AlgoKind::A2: return "a2";
    case AlgoKind::Drg: return "drg";
  }
  return "?";
}

std::optional<AlgoKind> parse_algo(const std::string& name) {
  if (name == "rha") return AlgoKind::Rha;
  if (name == "icha") return AlgoKind::Icha;
  if (name == "cha") return AlgoKind::Cha;
  if (name == "pa") return AlgoKind::Pa;
  if (name == "cp") return AlgoKind::Cp;
  if (name == "a2") return AlgoKind::A2;
  if (name == "drg") return AlgoKind::Drg;
  return std::nullopt;
}

bool is_hopwise(AlgoKind kind) {
  return kind == AlgoKind::Rha || kind == AlgoKind::Icha || kind == AlgoKind::Cha;
}

std::uint64_t algo_stream_tag(AlgoKind kind) {
  switch (kind) {
    case AlgoKind::Rha: return 10;
    case AlgoKind::Icha: return 11;
    case AlgoKind::Cha: return 12;
    case AlgoKind::Pa: return 13;
    case AlgoKind::Cp: return 14;
    case AlgoKind::A2: return 15;
    case AlgoKind::Drg: return 16;
  }
  return 0;
}

void validate(const AlgorithmConfig& cfg) {
  if (!(cfg.cha_phi_c > 0.0))
    throw std::invalid_argument("cha_phi_c must be > 0, got " + std::to_string(cfg.cha_phi_c));
  if (!(cfg.cha_eps >= 0.0))
    throw std::invalid_argument("cha_eps must be >= 0, got " + std::to_string(cfg.cha_eps));
  if (!(cfg.cp_beta > 0.0))
    throw std::invalid_argument("cp_beta must be in (0, inf], got " + std::to_string(cfg.cp_beta));
  if (!(cfg.a2_gamma > 0.0 && cfg.a2_gamma < 1.0))
    throw std::invalid_argument("a2_gamma must be in (0,1), got " + std::to_string(cfg.a2_gamma));
  if (!(cfg.a2_phi > 0.0 && cfg.a2_phi < 0.5))
    throw std::invalid_argument("a2_phi must be in (0,0.5), got " + std::to_string(cfg.a2_phi));
}

bool ChaSchedule::all_infinite() const {
  for (double t : tau)
    if (t != kInf) return false;
  return true;
}

namespace {

// Directed-link index for (from -> to) over undirected link e.
inline int dir_index(const Graph& g, int e, int from) {
  return 2 * e + (from == g.links[e].first ? 0 : 1);
}

}  // namespace

BaselineState init_baseline(AlgoKind kind, const Graph& g, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != g.n)
    throw std::invalid_argument("observation vector has " + std::to_string(y.size()) +
                                " entries for " + std::to_string(g.n) + " nodes");
  BaselineState st;
  st.kind = kind;
  st.x_hat = y;
  st.y = y;
  const int dl = 2 * g.link_count();
  if (kind == AlgoKind::Cp) {
    st.cp_k.assign(dl, 0.0);
    st.cp_mu.assign(dl, 0.0);
  } else if (kind == AlgoKind::A2) {
    st.a2_delta.assign(dl, 0.0);
    st.a2_dsum.assign(g.n, 0.0);
  }
  return st;
}

StepOutcome step_rha(const Graph& g, const Weights& w, HopwiseState& s, Rng& rng) {
  const int i = rng.uniform_int(g.n);
  hopwise_update(g, w, s, i);
  StepOutcome out;
  out.transmissions = 1;
  out.initiator = i;
  return out;
}

StepOutcome step_icha(const Graph& g, const Weights& w, HopwiseState& s) {
  int best = 0;
  for (int i = 1; i < g.n; ++i)
    if (s.delta_v[i] > s.delta_v[best]) best = i;
  StepOutcome out;
  if (s.delta_v[best] == 0.0) {
    out.terminated = true;
    return out;
  }
  hopwise_update(g, w, s, best);
  out.transmissions = 1;
  out.initiator = best;
  return out;
}

namespace {

inline double phi_of(double c_phi, double dv) { return dv > 0.0 ? c_phi / dv : kInf; }

}  // namespace

ChaSchedule cha_schedule_init(const HopwiseState& s, const AlgorithmConfig& cfg, Rng& rng) {
  ChaSchedule sched;
  sched.t_now = 0.0;
  const int n = static_cast<int>(s.delta_v.size());
  sched.tau.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = phi_of(cfg.cha_phi_c, s.delta_v[i]);
    if (cfg.cha_eps > 0.0) t += cfg.cha_eps * rng.uniform01();  // inf absorbs the jitter
    sched.tau[i] = t;
  }
  return sched;
}

StepOutcome step_cha(const Graph& g, const Weights& w, HopwiseState& s, ChaSchedule& sched,
                     const AlgorithmConfig& cfg, Rng& rng) {
  const int n = g.n;
  double tmin = kInf;
  for (int i = 0; i < n; ++i) tmin = std::min(tmin, sched.tau[i]);
  if (tmin == kInf)
    throw std::logic_error("step_cha called with every event time infinite; "
                           "check terminated() first");

  int initiator;
  {
    int count = 0, first = -1;
    for (int i = 0; i < n; ++i)
      if (sched.tau[i] == tmin) {
        if (first < 0) first = i;
        ++count;
      }
    if (count == 1) {
      initiator = first;
    } else {
      int pick = rng.uniform_int(count);
      initiator = -1;
      for (int i = 0; i < n && initiator < 0; ++i)
        if (sched.tau[i] == tmin && pick-- == 0) initiator = i;
    }
  }

  sched.t_now = tmin;
  hopwise_update(g, w, s, initiator);
  sched.tau[initiator] = kInf;
  for (auto [j, e] : g.adjacency[initiator]) {
    (void)e;
    double t = std::max(phi_of(cfg.cha_phi_c, s.delta_v[j]), tmin);
    if (cfg.cha_eps > 0.0) t += cfg.cha_eps * rng.uniform01();
    sched.tau[j] = t;
  }

  StepOutcome out;
  out.transmissions = 1;
  out.initiator = initiator;
  out.event_time = tmin;
  out.terminated = sched.all_infinite();
  return out;
}

StepOutcome step_pa_at(const Graph& g, BaselineState& st, int link) {
  auto [i, j] = g.links[link];
  const double m = 0.5 * (st.x_hat[i] + st.x_hat[j]);
  st.x_hat[i] = m;
  st.x_hat[j] = m;
  StepOutcome out;
  out.transmissions = 2;
  out.initiator = i;
  return out;
}

StepOutcome step_pa(const Graph& g, BaselineState& st, Rng& rng) {
  return step_pa_at(g, st, rng.uniform_int(g.link_count()));
}

StepOutcome step_cp_at(const Graph& g, BaselineState& st, double beta, int from, int to) {
  // Sender builds F and G from everything it has heard except over (to,from).
  double sk = 0.0, skm = 0.0;
  for (auto [l, e] : g.adjacency[from]) {
    if (l == to) continue;
    const int d = dir_index(g, e, l);
    sk += st.cp_k[d];
    skm += st.cp_k[d] * st.cp_mu[d];
  }
  const double f =
      std::isinf(beta) ? (1.0 + sk) : (1.0 + sk) / (1.0 + (1.0 + sk) / beta);
  const double gval = (st.y[from] + skm) / (1.0 + sk);
  const int e = g.link_id(from, to);
  const int dft = dir_index(g, e, from);
  st.cp_k[dft] = f;
  st.cp_mu[dft] = gval;
  // Receiver refreshes its estimate over all incoming messages.
  double sk2 = 0.0, skm2 = 0.0;
  for (auto [l, e2] : g.adjacency[to]) {
    const int d = dir_index(g, e2, l);
    sk2 += st.cp_k[d];
    skm2 += st.cp_k[d] * st.cp_mu[d];
  }
  st.x_hat[to] = (st.y[to] + skm2) / (1.0 + sk2);
  StepOutcome out;
  out.transmissions = 2;
  out.initiator = from;
  return out;
}

StepOutcome step_cp(const Graph& g, BaselineState& st, double beta, Rng& rng) {
  const int d = rng.uniform_int(2 * g.link_count());
  const int e = d / 2;
  const int from = (d % 2 == 0) ? g.links[e].first : g.links[e].second;
  const int to = (d % 2 == 0) ? g.links[e].second : g.links[e].first;
  return step_cp_at(g, st, beta, from, to);
}

StepOutcome step_a2_at(const Graph& g, BaselineState& st, double gamma, double phi, int from,
                       int to) {
  const double v = phi * (st.x_hat[from] - st.x_hat[to]);
  const int e = g.link_id(from, to);
  st.a2_delta[dir_index(g, e, to)] += v;
  st.a2_delta[dir_index(g, e, from)] -= v;
  st.a2_dsum[to] += v;
  st.a2_dsum[from] -= v;
  // Every node relaxes toward its observation plus accumulated flows; free
  // local computation, no transmissions.
  for (int l = 0; l < g.n; ++l)
    st.x_hat[l] += gamma / (g.degree(l) + 1.0) * (st.a2_dsum[l] + st.y[l] - st.x_hat[l]);
  StepOutcome out;
  out.transmissions = 2;
  out.initiator = from;
  return out;
}

StepOutcome step_a2(const Graph& g, BaselineState& st, double gamma, double phi, Rng& rng) {
  const int d = rng.uniform_int(2 * g.link_count());
  const int e = d / 2;
  const int from = (d % 2 == 0) ? g.links[e].first : g.links[e].second;
  const int to = (d % 2 == 0) ? g.links[e].second : g.links[e].first;
  return step_a2_at(g, st, gamma, phi, from, to);
}

StepOutcome step_drg_at(const Graph& g, BaselineState& st, int leader) {
  double sum = st.x_hat[leader];
  for (auto [j, e] : g.adjacency[leader]) {
    (void)e;
    sum += st.x_hat[j];
  }
  const double m = sum / (g.degree(leader) + 1.0);
  st.x_hat[leader] = m;
  for (auto [j, e] : g.adjacency[leader]) {
    (void)e;
    st.x_hat[j] = m;
  }
  StepOutcome out;
  // One value from each member plus the leader's broadcast of the mean; the
  // request message carries no real number.
  out.transmissions = g.degree(leader) + 1;
  out.initiator = leader;
  return out;
}

StepOutcome step_drg(const Graph& g, BaselineState& st, Rng& rng) {
  return step_drg_at(g, st, rng.uniform_int(g.n));
}

AlgorithmRun::AlgorithmRun(const Graph& g, std::vector<double> y, const AlgorithmConfig& cfg,
                           std::uint64_t seed)
    : g_(&g), cfg_(cfg), rng_(seed) {
  validate(cfg_);
  if (is_hopwise(cfg_.kind)) {
    w_ = compute_weights(g);
    hop_ = init_state(g, w_, y);
    if (cfg_.kind == AlgoKind::Cha) {
      sched_ = cha_schedule_init(*hop_, cfg_, rng_);
      last_event_time_ = 0.0;
    }
  } else {
    base_ = init_baseline(cfg_.kind, g, y);
  }
}

long AlgorithmRun::init_overhead() const { return is_hopwise(cfg_.kind) ? 2L * g_->n : 0L; }

int AlgorithmRun::next_step_cost() {
  switch (cfg_.kind) {
    case AlgoKind::Rha:
    case AlgoKind::Icha:
    case AlgoKind::Cha:
      return 1;
    case AlgoKind::Pa:
    case AlgoKind::Cp:
    case AlgoKind::A2:
      return 2;
    case AlgoKind::Drg:
      if (drg_pending_ < 0) drg_pending_ = rng_.uniform_int(g_->n);
      return g_->degree(drg_pending_) + 1;
  }
  return 0;
}

StepOutcome AlgorithmRun::step() {
  switch (cfg_.kind) {
    case AlgoKind::Rha:
      return step_rha(*g_, w_, *hop_, rng_);
    case AlgoKind::Icha:
      return step_icha(*g_, w_, *hop_);
    case AlgoKind::Cha: {
      StepOutcome out = step_cha(*g_, w_, *hop_, *sched_, cfg_, rng_);
      last_event_time_ = out.event_time;
      return out;
    }
    case AlgoKind::Pa:
      return step_pa(*g_, *base_, rng_);
    case AlgoKind::Cp:
      return step_cp(*g_, *base_, cfg_.cp_beta, rng_);
    case AlgoKind::A2:
      return step_a2(*g_, *base_, cfg_.a2_gamma, cfg_.a2_phi, rng_);
    case AlgoKind::Drg: {
      const int leader = drg_pending_ >= 0 ? drg_pending_ : rng_.uniform_int(g_->n);
      drg_pending_ = -1;
      return step_drg_at(*g_, *base_, leader);
    }
  }
  return {};
}

bool AlgorithmRun::terminated() const {
  if (cfg_.kind == AlgoKind::Icha) {
    for (double dv : hop_->delta_v)
      if (dv != 0.0) return false;
    return true;
  }
  if (cfg_.kind == AlgoKind::Cha) return sched_->all_infinite();
  return false;
}

std::span<const double> AlgorithmRun::estimates() const {
  return hop_ ? std::span<const double>(hop_->x_hat) : std::span<const double>(base_->x_hat);
}

double AlgorithmRun::lyapunov() const {
  if (!hop_) return std::numeric_limits<double>::quiet_NaN();
  return hopavg::lyapunov(*g_, w_, *hop_);
}

double AlgorithmRun::max_abs_error(double x_star) const {
  double worst = 0.0;
  for (double v : estimates()) worst = std::max(worst, std::abs(v - x_star));
  return worst;
}

double AlgorithmRun::event_time() const { return last_event_time_; }

}  // namespace hopavg
