#include "hopavg/hopwise.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

namespace hopavg {

Weights compute_weights(const Graph& g) {
  Weights w;
  const int l = g.link_count();
  w.c.resize(l);
  for (int e = 0; e < l; ++e) {
    auto [u, v] = g.links[e];
    w.c[e] = 1.0 / g.degree(u) + 1.0 / g.degree(v);
  }
  w.b.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    double sum = 0.0;
    for (auto [j, e] : g.adjacency[i]) {
      (void)j;
      sum += w.c[e];
    }
    w.b[i] = 0.5 * sum;
  }
  w.alpha = 0.0;
  for (int e = 0; e < l; ++e) {
    auto [u, v] = g.links[e];
    w.alpha = std::max(w.alpha, (w.b[u] + w.b[v]) / w.c[e]);
  }
  w.beta = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double neigh = w.b[i];
    for (auto [j, e] : g.adjacency[i]) {
      (void)e;
      neigh += w.b[j];
    }
    w.beta += w.b[i] * neigh;
  }
  return w;
}

double compensated_mean(std::span<const double> v) {
  // Neumaier summation: the compensation also survives |x| > |sum|.
  double sum = 0.0, comp = 0.0;
  for (double x : v) {
    const double next = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - next) + x;
    else
      comp += (x - next) + sum;
    sum = next;
  }
  return (sum + comp) / static_cast<double>(v.size());
}

HopwiseState init_state(const Graph& g, const Weights& w, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != g.n)
    throw std::invalid_argument("observation vector has " + std::to_string(y.size()) +
                                " entries for " + std::to_string(g.n) + " nodes");
  HopwiseState s;
  s.y = y;
  const int l = g.link_count();
  s.x_lo.resize(l);
  s.x_hi.resize(l);
  for (int e = 0; e < l; ++e) {
    auto [u, v] = g.links[e];
    const double x0 = (y[u] / g.degree(u) + y[v] / g.degree(v)) / w.c[e];
    s.x_lo[e] = x0;
    s.x_hi[e] = x0;
  }
  s.x_hat.resize(g.n);
  s.delta_v.resize(g.n);
  for (int i = 0; i < g.n; ++i) s.x_hat[i] = estimate(g, w, s, i);
  for (int i = 0; i < g.n; ++i) s.delta_v[i] = delta_v(g, w, s, i);
  s.x_star = compensated_mean(y);
  return s;
}

double local_copy(const Graph& g, const HopwiseState& s, int i, int e) {
  return i == g.links[e].first ? s.x_lo[e] : s.x_hi[e];
}

double estimate(const Graph& g, const Weights& w, const HopwiseState& s, int i) {
  double num = 0.0;
  for (auto [j, e] : g.adjacency[i]) {
    (void)j;
    num += w.c[e] * local_copy(g, s, i, e);
  }
  return num / (2.0 * w.b[i]);
}

double delta_v(const Graph& g, const Weights& w, const HopwiseState& s, int i) {
  const double xh = estimate(g, w, s, i);
  double sum = 0.0;
  for (auto [j, e] : g.adjacency[i]) {
    (void)j;
    const double d = local_copy(g, s, i, e) - xh;
    sum += w.c[e] * d * d;
  }
  return sum;
}

double lyapunov(const Graph& g, const Weights& w, const HopwiseState& s) {
  double sum = 0.0;
  for (int e = 0; e < g.link_count(); ++e) {
    const double d = s.x_lo[e] - s.x_star;
    sum += w.c[e] * d * d;
  }
  return sum;
}

double conserved_sum(const Graph& g, const Weights& w, const HopwiseState& s) {
  double sum = 0.0;
  for (int e = 0; e < g.link_count(); ++e) sum += w.c[e] * s.x_lo[e];
  return sum;
}

UpdateReceipt hopwise_update(const Graph& g, const Weights& w, HopwiseState& s, int i) {
  UpdateReceipt r;
  r.initiator = i;
  r.transmitted_value = s.x_hat[i];
  r.v_drop = s.delta_v[i];
  r.transmissions = 1;

  // Both endpoint copies of every incident link get the broadcast value.
  const double v = s.x_hat[i];
  for (auto [j, e] : g.adjacency[i]) {
    (void)j;
    s.x_lo[e] = v;
    s.x_hi[e] = v;
  }
  // The initiator's estimate is unchanged; its drop is now exactly zero.
  s.delta_v[i] = 0.0;
  // Neighbors refresh their caches over their incident links. Summation
  // order matches estimate()/delta_v(), keeping caches bit-equal to a
  // from-scratch recomputation.
  for (auto [j, e] : g.adjacency[i]) {
    (void)e;
    double num = 0.0;
    for (auto [j2, e2] : g.adjacency[j]) {
      (void)j2;
      num += w.c[e2] * local_copy(g, s, j, e2);
    }
    const double xh = num / (2.0 * w.b[j]);
    s.x_hat[j] = xh;
    double dv = 0.0;
    for (auto [j2, e2] : g.adjacency[j]) {
      (void)j2;
      const double d = local_copy(g, s, j, e2) - xh;
      dv += w.c[e2] * d * d;
    }
    s.delta_v[j] = dv;
  }
  return r;
}

UpdateMatrix update_matrix(const Graph& g, const Weights& w, int i) {
  const int l = g.link_count();
  if (l > 64)
    throw std::invalid_argument("update_matrix is test support for L <= 64, got L=" +
                                std::to_string(l));
  UpdateMatrix m;
  m.l = l;
  m.a.assign(static_cast<size_t>(l) * l, 0.0);
  for (int r = 0; r < l; ++r) m.at(r, r) = 1.0;
  const double den = 2.0 * w.b[i];
  for (auto [j, e] : g.adjacency[i]) {
    (void)j;
    for (int c = 0; c < l; ++c) m.at(e, c) = 0.0;
    for (auto [j2, f] : g.adjacency[i]) {
      (void)j2;
      m.at(e, f) = w.c[f] / den;
    }
  }
  return m;
}

UpdateMatrix multiply(const UpdateMatrix& x, const UpdateMatrix& y) {
  const int l = x.l;
  UpdateMatrix m;
  m.l = l;
  m.a.assign(static_cast<size_t>(l) * l, 0.0);
  for (int r = 0; r < l; ++r)
    for (int k = 0; k < l; ++k) {
      const double xv = x.at(r, k);
      if (xv == 0.0) continue;
      for (int c = 0; c < l; ++c) m.at(r, c) += xv * y.at(k, c);
    }
  return m;
}

}  // namespace hopavg
