#include "ribbon/certified.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rib::cert {

namespace {
constexpr int kLibmUlps = 4;  // glibc long double libm stays within 1-2 ulps
}

double bump_up(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return x;
}

double bump_down(double x, int ulps) {
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return x;
}

Interval exact(double x) { return {x, x}; }

Interval hull(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi};
}

Interval pi() {
  // M_PI is the correctly rounded double, within one ulp of the true value.
  return {bump_down(M_PI, 1), bump_up(M_PI, 1)};
}

Interval add(Interval a, Interval b) { return {bump_down(a.lo + b.lo, 1), bump_up(a.hi + b.hi, 1)}; }

Interval sub(Interval a, Interval b) { return {bump_down(a.lo - b.hi, 1), bump_up(a.hi - b.lo, 1)}; }

Interval mul(Interval a, Interval b) {
  double products[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = *std::min_element(products, products + 4);
  double hi = *std::max_element(products, products + 4);
  return {bump_down(lo, 1), bump_up(hi, 1)};
}

Interval div(Interval a, Interval b) {
  if (b.lo <= 0 && b.hi >= 0) throw DomainError("interval division by a range containing zero");
  double quotients[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  double lo = *std::min_element(quotients, quotients + 4);
  double hi = *std::max_element(quotients, quotients + 4);
  return {bump_down(lo, 1), bump_up(hi, 1)};
}

Interval log_nat(Interval a) {
  if (a.lo <= 0) throw DomainError("log requires a strictly positive interval");
  return {bump_down(static_cast<double>(logl(static_cast<long double>(a.lo))), kLibmUlps),
          bump_up(static_cast<double>(logl(static_cast<long double>(a.hi))), kLibmUlps)};
}

Interval exp_nat(Interval a) {
  return {bump_down(static_cast<double>(expl(static_cast<long double>(a.lo))), kLibmUlps),
          bump_up(static_cast<double>(expl(static_cast<long double>(a.hi))), kLibmUlps)};
}

Interval pow_int(Interval a, unsigned k) {
  Interval result = exact(1.0);
  Interval base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return result;
}

Cmp compare_le(double value, Interval bound, double rel_slack) {
  if (value > bound.hi) return Cmp::FailCertified;
  double slack = rel_slack * std::max({std::fabs(value), std::fabs(bound.hi), 1.0});
  if (value <= bound.lo - slack) return Cmp::PassCertified;
  return Cmp::PassBoundary;
}

}  // namespace rib::cert
