#pragma once

#include <stdexcept>
#include <string>

namespace rib::cert {

/// Closed interval with outward-rounded endpoints. Transcendental steps are
/// evaluated in long double and bumped outward by a few double ulps, which
/// dominates the documented libm error by three orders of magnitude.
struct Interval {
  double lo = 0;
  double hi = 0;

  double width() const { return hi - lo; }
  double mid() const { return lo + (hi - lo) / 2; }
  bool operator==(const Interval&) const = default;
};

double bump_up(double x, int ulps);
double bump_down(double x, int ulps);

Interval exact(double x);
Interval hull(double lo, double hi);
Interval pi();

Interval add(Interval a, Interval b);
Interval sub(Interval a, Interval b);
Interval mul(Interval a, Interval b);
Interval div(Interval a, Interval b);   // throws if b straddles zero
Interval log_nat(Interval a);           // requires a.lo > 0
Interval exp_nat(Interval a);
Interval pow_int(Interval a, unsigned k);

/// Outcome of checking `value <= bound` where bound is an interval: the
/// failure side is certified, and a pass inside the interval is flagged.
enum class Cmp { PassCertified, PassBoundary, FailCertified };

Cmp compare_le(double value, Interval bound, double rel_slack = 1e-9);

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rib::cert
