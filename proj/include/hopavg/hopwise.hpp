#pragma once

#include <span>
#include <vector>

#include "hopavg/graph.hpp"

namespace hopavg {

// Per-link weights and the derived constants the rate bound needs.
// c is normalized so that sum(c) = n; b_i is the half-sum of weights
// incident to node i, and 2*b_i is the estimate denominator at node i.
struct Weights {
  std::vector<double> c;  // per link: 1/|N_u| + 1/|N_v|
  std::vector<double> b;  // per node
  double alpha = 0.0;     // max over links of (b_u + b_v) / c
  double beta = 0.0;      // sum_i sum_{j in N_i u {i}} b_i * b_j
};

// Link-state store for the hopwise algorithms. Each link keeps both endpoint
// copies explicitly (x_lo at the lower-indexed endpoint, x_hi at the higher);
// the update protocol assigns both from the same transmitted value, so they
// are bit-equal at every iteration boundary. x_hat and delta_v are caches,
// refreshed incrementally at the initiator and its neighbors; estimate() and
// delta_v() recompute them from scratch for validation.
struct HopwiseState {
  std::vector<double> y;
  std::vector<double> x_lo, x_hi;  // per link
  std::vector<double> x_hat;       // per node
  std::vector<double> delta_v;     // per node
  // True average, for instrumentation (convergence checks, traces) only.
  // No algorithm step reads it.
  double x_star = 0.0;
};

struct UpdateReceipt {
  int initiator = -1;
  double transmitted_value = 0.0;
  double v_drop = 0.0;  // the initiator's potential drop before the update
  int transmissions = 1;
};

Weights compute_weights(const Graph& g);

// Neumaier-compensated mean; the harness uses it for the true average.
double compensated_mean(std::span<const double> v);

// Spreads each observation over its incident links: both copies of link
// {u,v} start at (y_u/|N_u| + y_v/|N_v|) / c_{uv}. Fills the caches and the
// compensated-sum true average.
HopwiseState init_state(const Graph& g, const Weights& w, const std::vector<double>& y);

// Node i's local copy of link e.
double local_copy(const Graph& g, const HopwiseState& s, int i, int e);

// From-scratch estimate: convex combination of i's incident link states.
double estimate(const Graph& g, const Weights& w, const HopwiseState& s, int i);
// From-scratch potential drop: sum_j c_{ij} (x_{ij} - xhat_i)^2.
double delta_v(const Graph& g, const Weights& w, const HopwiseState& s, int i);

// Weighted squared deviation of the link states from the true average.
double lyapunov(const Graph& g, const Weights& w, const HopwiseState& s);
// sum over links of c * x; invariant under hopwise updates.
double conserved_sum(const Graph& g, const Weights& w, const HopwiseState& s);

// One hopwise iteration initiated at node i: every link incident to i gets
// x_hat[i] (both copies, bit-equal), the initiator's drop cache goes to zero
// with its estimate unchanged, and each neighbor's caches are refreshed.
// Costs one broadcast. Work is O(sum of neighbor degrees).
UpdateReceipt hopwise_update(const Graph& g, const Weights& w, HopwiseState& s, int i);

// Dense L-by-L iteration matrix of the update at node i: rows of links
// incident to i all hold the normalized incident-weight row, other rows are
// identity. Test support; refuses L > 64.
struct UpdateMatrix {
  int l = 0;
  std::vector<double> a;  // row-major
  double at(int r, int c) const { return a[static_cast<size_t>(r) * l + c]; }
  double& at(int r, int c) { return a[static_cast<size_t>(r) * l + c]; }
};

UpdateMatrix update_matrix(const Graph& g, const Weights& w, int i);
UpdateMatrix multiply(const UpdateMatrix& x, const UpdateMatrix& y);

}  // namespace hopavg
