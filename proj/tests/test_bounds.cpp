#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "hopavg/bounds.hpp"
#include "hopavg/graph.hpp"
#include "hopavg/hopwise.hpp"

using namespace hopavg;

namespace {

bool close(double a, double b, double rtol = 1e-12, double atol = 1e-15) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

double general_gamma(const Graph& g) {
  return gamma_general(graph_invariants(g), compute_weights(g)).value;
}

}  // namespace

TEST_CASE("general bound on the 3-path") { CHECK(close(general_gamma(build_path(3)), 5.25)); }

TEST_CASE("general bound collapses on complete graphs") {
  for (int n = 3; n <= 10; ++n)
    CHECK(close(general_gamma(build_complete(n)), 1.5 * n - 1.0));
}

TEST_CASE("general bound matches the closed forms on constructed graphs") {
  for (int n = 5; n <= 24; ++n) {
    const auto cb = gamma_closed(FamilyTag::Path, n);
    REQUIRE(cb.corollary.has_value());
    CHECK(close(general_gamma(build_path(n)), cb.corollary->value, 1e-9));
  }
  for (int n = 3; n <= 24; ++n) {
    const auto cb = gamma_closed(FamilyTag::Cycle, n);
    REQUIRE(cb.corollary.has_value());
    CHECK(close(general_gamma(build_cycle(n)), cb.corollary->value, 1e-9));
  }
  for (auto [n, k] : std::vector<std::pair<int, int>>{{12, 4}, {10, 5}, {8, 2}, {9, 4}}) {
    Graph g = build_circulant(n, k);
    ClosedParams p;
    p.k = k;
    p.diameter = diameter(g);
    const auto cb = gamma_closed(FamilyTag::KRegular, n, p);
    REQUIRE(cb.corollary.has_value());
    CHECK(close(general_gamma(g), cb.corollary->value, 1e-9));
  }
}

TEST_CASE("closed forms at pinned points") {
  const auto complete4 = gamma_closed(FamilyTag::Complete, 4);
  REQUIRE(complete4.corollary.has_value());
  CHECK(complete4.corollary->value == 5.0);
  CHECK(!complete4.theorem3.has_value());

  const auto path5 = gamma_closed(FamilyTag::Path, 5);
  REQUIRE(path5.corollary.has_value());
  REQUIRE(path5.theorem3.has_value());
  CHECK(close(path5.corollary->value, 48.75));
  CHECK(close(path5.theorem3->value, 13.0));

  const auto path4 = gamma_closed(FamilyTag::Path, 4);
  CHECK(!path4.corollary.has_value());
  CHECK(path4.corollary_reason == "needs n >= 5");
  REQUIRE(path4.theorem3.has_value());
  CHECK(close(path4.theorem3->value, 5.0));

  const auto path3 = gamma_closed(FamilyTag::Path, 3);
  CHECK(!path3.corollary.has_value());
  CHECK(!path3.theorem3.has_value());

  const auto cycle4 = gamma_closed(FamilyTag::Cycle, 4);
  REQUIRE(cycle4.theorem3.has_value());
  CHECK(close(cycle4.theorem3->value, 4.0));
  REQUIRE(cycle4.corollary.has_value());
  CHECK(close(cycle4.corollary->value, 14.5));

  const auto cycle3 = gamma_closed(FamilyTag::Cycle, 3);
  REQUIRE(cycle3.theorem3.has_value());
  CHECK(close(cycle3.theorem3->value, 4.0 / 3.0));

  ClosedParams petersen;
  petersen.k = 3;
  petersen.lambda = 0;
  petersen.mu = 1;
  petersen.diameter = 2;
  const auto srg = gamma_closed(FamilyTag::StronglyRegular, 10, petersen);
  REQUIRE(srg.theorem3.has_value());
  CHECK(close(srg.theorem3->value, 62.0));
}

TEST_CASE("tighter forms stay below the generic ones") {
  for (int n = 5; n <= 30; ++n) {
    const auto cb = gamma_closed(FamilyTag::Path, n);
    CHECK(cb.theorem3->value <= cb.corollary->value);
  }
  for (int n = 3; n <= 30; ++n) {
    const auto cb = gamma_closed(FamilyTag::Cycle, n);
    CHECK(cb.theorem3->value <= cb.corollary->value);
  }
}

TEST_CASE("two-iteration bound") {
  CHECK(close(gamma_two_iteration(5.0), 25.0 / 9.0));
  const double g = 48.75;
  const double two = gamma_two_iteration(g);
  CHECK(close(1.0 - 1.0 / two, (1.0 - 1.0 / g) * (1.0 - 1.0 / g)));
  CHECK_THROWS_AS(gamma_two_iteration(1.0), std::invalid_argument);
}

TEST_CASE("pairwise-averaging constant on complete graphs") {
  CHECK(gamma_pa_complete(10) == 9.0);
  CHECK(gamma_pa_complete(2) == 1.0);
  const double ratio1000 = gamma_two_iteration(1.5 * 1000 - 1) / gamma_pa_complete(1000);
  CHECK(ratio1000 >= 0.74);
  CHECK(ratio1000 <= 0.76);
  // Ratio decreases toward 3/4.
  double prev = 1e9;
  for (int n : {10, 100, 1000}) {
    const double r = gamma_two_iteration(1.5 * n - 1) / gamma_pa_complete(n);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("error envelope hand values") {
  Graph g = build_path(3);
  Weights w = compute_weights(g);
  const GraphInvariants inv = graph_invariants(g);
  HopwiseState s = init_state(g, w, {0.0, 1.0, 2.0});
  const double v0 = lyapunov(g, w, s);
  const double gamma = gamma_general(inv, w).value;
  const ErrorEnvelope env = error_envelope(v0, inv, gamma, 0);
  CHECK(close(env.link_bound, std::sqrt(4.0 / 3.0)));
  CHECK(close(env.estimate_bound, 4.0 / 3.0));
  double link_norm = 0.0, est_norm = 0.0;
  for (int e = 0; e < g.link_count(); ++e) {
    const double d = s.x_lo[e] - s.x_star;
    link_norm += d * d;
  }
  for (int i = 0; i < g.n; ++i) {
    const double d = s.x_hat[i] - s.x_star;
    est_norm += d * d;
  }
  CHECK(std::sqrt(link_norm) <= env.link_bound);
  CHECK(std::sqrt(est_norm) <= env.estimate_bound);

  const ErrorEnvelope zero = error_envelope(0.0, inv, gamma, 7);
  CHECK(zero.link_bound == 0.0);
  CHECK(zero.estimate_bound == 0.0);

  const ErrorEnvelope e2 = error_envelope(v0, inv, gamma, 2);
  CHECK(close(e2.link_bound, env.link_bound * (1.0 - 1.0 / gamma)));
  CHECK(close(e2.estimate_bound, env.estimate_bound * (1.0 - 1.0 / gamma)));
}

TEST_CASE("general bound stays in the stated range on random graphs") {
  Rng rng(4242);
  for (int t = 0; t < 25; ++t) {
    const int n = 5 + rng.uniform_int(46);
    const long max_links = static_cast<long>(n) * (n - 1) / 2;
    const int l = static_cast<int>(std::min<long>(3L * n, max_links));
    Graph g = build_random_geometric(n, l, rng);
    const double gamma = general_gamma(g);
    const double dn = n;
    CHECK(gamma >= dn / 2.0 + 1.0 - 1e-9);
    CHECK(gamma <= dn * dn * dn - 2.0 * dn * dn + dn / 2.0 + 1.0 + 1e-9);
  }
}

TEST_CASE("closed-form parameter validation") {
  CHECK_THROWS_AS(gamma_closed(FamilyTag::KRegular, 8, {}), std::invalid_argument);
  ClosedParams no_mu;
  no_mu.k = 3;
  CHECK_THROWS_AS(gamma_closed(FamilyTag::StronglyRegular, 10, no_mu), std::invalid_argument);
}
