#include "ribbon/bounds.hpp"

#include <cmath>
#include <sstream>

namespace rib::bounds {

namespace {

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw cert::DomainError(message);
}

cert::Interval three_pi_times(int factor, cert::Interval rest) {
  return cert::mul(cert::mul(cert::exact(3.0 * factor), cert::pi()), rest);
}

}  // namespace

mpz_class factorial(int n) {
  require(n >= 0, "factorial of a negative number");
  mpz_class f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

cert::Interval factorial_interval(int n) {
  mpz_class f = factorial(n);
  double d = f.get_d();                   // truncates toward zero
  if (n <= 18) return cert::exact(d);     // 18! < 2^53, exactly representable
  return {d, cert::bump_up(d, 1)};
}

BoundReport dilatation_arc_bound(int delta) {
  require(delta >= 2, "arc index must be at least 2");
  BoundReport report;
  report.name = "dilatation-arc";
  report.inputs = {{"delta", std::to_string(delta)}};
  report.exact = factorial(delta);
  report.bound = factorial_interval(delta);
  return report;
}

cert::Interval eq1_rhs(int delta, int n) {
  require(delta >= 2, "arc index must be at least 2");
  require(n >= 1, "cover degree must be at least 1");
  // delta! / 2^((delta-1)/n) = exp(ln(delta!) - ((delta-1)/n) ln 2)
  cert::Interval log_fact = cert::log_nat(factorial_interval(delta));
  cert::Interval exponent = cert::div(cert::exact(delta - 1), cert::exact(n));
  cert::Interval log2 = cert::log_nat(cert::exact(2.0));
  return cert::exp_nat(cert::sub(log_fact, cert::mul(exponent, log2)));
}

cert::Interval kojima_mcshane_interval(int g, cert::Interval log_lambda) {
  return three_pi_times(1, cert::mul(cert::exact(2.0 * g - 1.0), log_lambda));
}

BoundReport volume_arc_bound(int g, int delta) {
  require(g >= 1, "genus must be at least 1");
  require(delta >= 2, "arc index must be at least 2");
  BoundReport report;
  report.name = "volume-arc";
  report.inputs = {{"g", std::to_string(g)}, {"delta", std::to_string(delta)}};
  report.bound = kojima_mcshane_interval(g, cert::log_nat(factorial_interval(delta)));
  return report;
}

BoundReport entropy_relation_bound(double lambda_k, int g_k) {
  require(lambda_k > 1.0, "dilatation must exceed 1 (pseudo-Anosov)");
  require(g_k >= 1, "genus must be at least 1");
  BoundReport report;
  report.name = "entropy-relation";
  report.inputs = {{"lambda", fmt(lambda_k)}, {"g", std::to_string(g_k)}};
  report.bound = cert::pow_int(cert::exact(lambda_k), static_cast<unsigned>(g_k));
  return report;
}

cert::Interval cornish_growth_bound(double c, double lambda, int g, int n) {
  require(c > 0, "constant must be positive");
  require(lambda > 1.0, "dilatation must exceed 1");
  require(g >= 1, "genus must be at least 1");
  require(n >= 1, "cover degree must be at least 1");
  return cert::mul(cert::exact(c),
                   cert::pow_int(cert::exact(lambda), static_cast<unsigned>(g) * static_cast<unsigned>(n)));
}

BoundReport kojima_mcshane_bound(int g, double lambda) {
  require(g >= 1, "genus must be at least 1");
  require(lambda > 1.0, "dilatation must exceed 1");
  BoundReport report;
  report.name = "kojima-mcshane";
  report.inputs = {{"g", std::to_string(g)}, {"lambda", fmt(lambda)}};
  report.bound = kojima_mcshane_interval(g, cert::log_nat(cert::exact(lambda)));
  return report;
}

cert::Interval volume_ratio_constant(int g, double b) {
  require(g >= 1, "genus must be at least 1");
  require(b > 0, "b must be positive");
  return three_pi_times(g, cert::mul(cert::exact(2.0 * g - 1.0), cert::exact(b)));
}

bool kojima_entropy_bound_check(double lambda, double b, double vol) {
  require(lambda > 1.0, "dilatation must exceed 1");
  require(b > 0 && vol > 0, "b and volume must be positive");
  cert::Interval lhs = cert::log_nat(cert::exact(lambda));
  cert::Interval rhs = cert::mul(cert::exact(b), cert::exact(vol));
  return lhs.hi <= rhs.lo;
}

void attach_measured(BoundReport& report, double measured) {
  report.measured = measured;
  switch (cert::compare_le(measured, report.bound)) {
    case cert::Cmp::PassCertified:
      report.satisfied = true;
      report.boundary_warning = false;
      break;
    case cert::Cmp::PassBoundary:
      report.satisfied = true;
      report.boundary_warning = true;
      break;
    case cert::Cmp::FailCertified:
      report.satisfied = false;
      report.boundary_warning = false;
      break;
  }
}

std::vector<ChainLine> volume_chain_audit(int g_j, int g_k, double lambda_j, double lambda_k,
                                          double b, double vol_j, double vol_k) {
  require(g_j >= 1 && g_k >= 1, "genus must be at least 1");
  require(g_j <= g_k, "genus of the predecessor cannot exceed the target genus");
  require(lambda_j > 1.0 && lambda_k > 1.0, "dilatations must exceed 1");
  require(b > 0 && vol_j > 0 && vol_k > 0, "b and volumes must be positive");

  cert::Interval log_j = cert::log_nat(cert::exact(lambda_j));
  cert::Interval log_k = cert::log_nat(cert::exact(lambda_k));

  cert::Interval line1_rhs = kojima_mcshane_interval(g_j, log_j);
  cert::Interval line2_rhs = kojima_mcshane_interval(g_k, log_j);
  cert::Interval line3_rhs = three_pi_times(g_k, cert::mul(cert::exact(2.0 * g_k - 1.0), log_k));
  cert::Interval line5_rhs = cert::mul(volume_ratio_constant(g_k, b), cert::exact(vol_k));

  std::vector<ChainLine> lines;
  auto push = [&](const std::string& label, cert::Interval lhs, cert::Interval rhs) {
    ChainLine line{label, lhs, rhs, lhs.hi <= rhs.lo, lhs.lo > rhs.hi};
    lines.push_back(line);
  };
  push("vol(J) <= 3pi(2g(J)-1)log(lambda(J))", cert::exact(vol_j), line1_rhs);
  push("<= 3pi(2g(K)-1)log(lambda(J))", line1_rhs, line2_rhs);
  push("<= 3pi g(K)(2g(K)-1)log(lambda(K))", line2_rhs, line3_rhs);
  push("= 3pi g(2g-1)log(lambda(K))", line3_rhs, line3_rhs);
  push("<= 3pi g(2g-1) b vol(K)", line3_rhs, line5_rhs);
  push("= c_{g,eps} vol(K)", line5_rhs, line5_rhs);
  return lines;
}

}  // namespace rib::bounds
