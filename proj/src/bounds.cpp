#include "hopavg/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace hopavg {

GammaBound gamma_general(const GraphInvariants& inv, const Weights& w) {
  const double n = inv.n;
  const double d = inv.diameter;
  const double value =
      n / 2.0 + w.alpha + (n * n - w.beta) * (3.0 * (n - 1.0) - d) * (d + 1.0) / (2.0 * n);
  return {value, BoundSource::General, inv.family};
}

namespace {

GammaBound bound(double value, BoundSource source, FamilyTag family) {
  return {value, source, family};
}

}  // namespace

ClosedBounds gamma_closed(FamilyTag family, int n, const ClosedParams& p) {
  ClosedBounds out;
  const double dn = n;
  switch (family) {
    case FamilyTag::Path:
      if (n < 2) throw std::invalid_argument("path needs n >= 2");
      if (n >= 5)
        out.corollary = bound(dn * dn * dn - 4.0 * dn * dn + 4.5 * dn + 1.25,
                              BoundSource::Corollary, family);
      else
        out.corollary_reason = "needs n >= 5";
      if (n >= 4)
        out.theorem3 =
            bound(dn * dn * dn / 6.0 - 13.0 / 6.0 * dn + 3.0, BoundSource::Theorem3, family);
      else
        out.theorem3_reason = "needs n >= 4";
      break;
    case FamilyTag::Cycle:
      if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
      if (n % 2 == 1)
        out.corollary = bound(
            (5.0 * dn * dn * dn - 15.0 * dn * dn - dn + 31.0) / 8.0, BoundSource::Corollary, family);
      else
        out.corollary = bound(5.0 / 8.0 * dn * dn * dn - 11.0 / 8.0 * dn * dn - 2.5 * dn + 6.5,
                              BoundSource::Corollary, family);
      if (n % 2 == 1)
        out.theorem3 = bound(dn * dn * dn / 24.0 + 7.0 / 12.0 * dn - 2.0 + 11.0 / (8.0 * dn),
                             BoundSource::Theorem3, family);
      else
        out.theorem3 = bound(dn * dn * dn / 24.0 + 5.0 / 6.0 * dn - 3.0 + 4.0 / dn,
                             BoundSource::Theorem3, family);
      break;
    case FamilyTag::Complete:
      if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
      out.corollary = bound(1.5 * dn - 1.0, BoundSource::Corollary, family);
      out.theorem3_reason = "no tighter form";
      break;
    case FamilyTag::KRegular: {
      if (p.k < 2) throw std::invalid_argument("k-regular bounds need k >= 2");
      if (p.diameter < 1)
        throw std::invalid_argument("k-regular bounds need the graph diameter");
      const double k = p.k, d = p.diameter;
      out.corollary = bound(
          dn / 2.0 + k + (dn - k - 1.0) * (3.0 * (dn - 1.0) - d) * (d + 1.0) / 2.0,
          BoundSource::Corollary, family);
      out.theorem3 = bound(dn / 2.0 + k + k * d * (d + 1.0) * (dn - k - 1.0) / 2.0,
                           BoundSource::Theorem3, family);
      break;
    }
    case FamilyTag::StronglyRegular: {
      if (p.k < 2) throw std::invalid_argument("strongly regular bounds need k >= 2");
      if (p.mu < 1) throw std::invalid_argument("strongly regular bounds need mu >= 1");
      const double k = p.k, mu = p.mu;
      out.theorem3 = bound(dn / 2.0 + k + k * (mu + 2.0) * (dn - k - 1.0) / mu,
                           BoundSource::Theorem3, family);
      if (p.diameter >= 1) {
        const double d = p.diameter;
        out.corollary = bound(
            dn / 2.0 + k + (dn - k - 1.0) * (3.0 * (dn - 1.0) - d) * (d + 1.0) / 2.0,
            BoundSource::Corollary, family);
      } else {
        out.corollary_reason = "needs the graph diameter";
      }
      break;
    }
    case FamilyTag::Geometric:
      out.corollary_reason = "no closed form";
      out.theorem3_reason = "no closed form";
      break;
  }
  return out;
}

double gamma_two_iteration(double gamma) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("two-iteration bound needs gamma > 1, got " +
                                std::to_string(gamma));
  return gamma * gamma / (2.0 * gamma - 1.0);
}

double gamma_pa_complete(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  return n - 1.0;
}

ErrorEnvelope error_envelope(double v0, const GraphInvariants& inv, double gamma, int k) {
  if (v0 < 0.0) throw std::invalid_argument("initial Lyapunov value must be >= 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("envelope needs gamma > 1");
  if (k < 0) throw std::invalid_argument("iteration count must be >= 0");
  const double decay = std::pow(1.0 - 1.0 / gamma, 0.5 * k);
  ErrorEnvelope env;
  env.link_bound = std::sqrt(v0 * inv.max_degree / 2.0) * decay;
  env.estimate_bound =
      std::sqrt(2.0 * v0 * inv.max_degree / (inv.min_degree + inv.max_degree)) * decay;
  return env;
}

}  // namespace hopavg
