#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ribbon/certified.hpp"

namespace rib::bounds {

/// One evaluated inequality right-hand side. `bound` is outward-rounded, so
/// quoting bound.hi is always safe for the inequality direction; `exact` is
/// set when the value is an exact integer.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  cert::Interval bound;
  std::optional<mpz_class> exact;
  std::optional<double> measured;
  std::optional<bool> satisfied;
  bool boundary_warning = false;
};

mpz_class factorial(int n);
cert::Interval factorial_interval(int n);

/// lambda(J) <= delta!
BoundReport dilatation_arc_bound(int delta);

/// delta! / 2^((delta-1)/n); increases toward delta! as n grows.
cert::Interval eq1_rhs(int delta, int n);

/// vol <= 3*pi*(2g-1)*ln(delta!)
BoundReport volume_arc_bound(int g, int delta);

/// lambda(J) <= lambda(K)^g(K); requires lambda > 1.
BoundReport entropy_relation_bound(double lambda_k, int g_k);

/// c * lambda^(g*n)
cert::Interval cornish_growth_bound(double c, double lambda, int g, int n);

/// vol <= 3*pi*(2g-1)*ln(lambda); requires lambda > 1.
BoundReport kojima_mcshane_bound(int g, double lambda);
cert::Interval kojima_mcshane_interval(int g, cert::Interval log_lambda);

/// 3*pi*g*(2g-1)*b
cert::Interval volume_ratio_constant(int g, double b);

/// ln(lambda) <= b * vol, with outward rounding on the left.
bool kojima_entropy_bound_check(double lambda, double b, double vol);

/// Records measured vs bound with certified-fail semantics.
void attach_measured(BoundReport& report, double measured);

/// One line of the volume-comparison inequality chain. `violated` means even
/// the most favorable rounding cannot satisfy lhs <= rhs; `certified` means
/// the inequality holds under the least favorable rounding.
struct ChainLine {
  std::string label;
  cert::Interval lhs;
  cert::Interval rhs;
  bool certified = false;
  bool violated = false;
};

/// The six-line chain bounding vol(J) by c_{g,eps} * vol(K) for ribbon
/// concordant hyperbolic fibered knots, evaluated step by step.
std::vector<ChainLine> volume_chain_audit(int g_j, int g_k, double lambda_j, double lambda_k,
                                          double b, double vol_j, double vol_k);

}  // namespace rib::bounds
