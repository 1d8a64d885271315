#pragma once

#include <optional>
#include <string>

#include "hopavg/graph.hpp"
#include "hopavg/hopwise.hpp"

namespace hopavg {

enum class BoundSource { General, Corollary, Theorem3 };

// A convergence-rate constant gamma > 1: the Lyapunov value contracts by at
// least 1 - 1/gamma per controlled iteration.
struct GammaBound {
  double value = 0.0;
  BoundSource source = BoundSource::General;
  std::optional<FamilyTag> family;
  double contraction_factor() const { return 1.0 - 1.0 / value; }
};

// Extra inputs for the closed forms that need more than (family, n).
struct ClosedParams {
  int k = -1;         // regular degree
  int diameter = -1;  // needed by the k-regular forms
  int lambda = -1;    // strongly regular
  int mu = -1;        // strongly regular
};

struct ClosedBounds {
  std::optional<GammaBound> corollary;
  std::optional<GammaBound> theorem3;
  std::string corollary_reason;  // set when the slot is absent
  std::string theorem3_reason;
};

// gamma = n/2 + alpha + (n^2 - beta)(3(n-1) - D)(D+1) / (2n). Always in
// [n/2 + 1, n^3 - 2n^2 + n/2 + 1].
GammaBound gamma_general(const GraphInvariants& inv, const Weights& w);

// Closed forms per family. Out-of-range n leaves a slot empty with a reason.
ClosedBounds gamma_closed(FamilyTag family, int n, const ClosedParams& params = {});

// Two-iteration bound gamma^2 / (2 gamma - 1), so that
// 1 - 1/result = (1 - 1/gamma)^2. Normalizes one-transmission iterations
// against two-transmission pairwise gossip.
double gamma_two_iteration(double gamma);

// Pairwise-averaging rate constant; closed form known for complete graphs
// only (n - 1).
double gamma_pa_complete(int n);

struct ErrorEnvelope {
  double link_bound = 0.0;      // on ||x(k) - x* 1_L||
  double estimate_bound = 0.0;  // on ||xhat(k) - x* 1_N||
};

// Geometric envelopes after k iterations from an initial Lyapunov value v0.
ErrorEnvelope error_envelope(double v0, const GraphInvariants& inv, double gamma, int k);

}  // namespace hopavg
