#include "ribbon/bounds.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace rib;

namespace {

bool contains(cert::Interval i, long double value) {
  return static_cast<long double>(i.lo) <= value && value <= static_cast<long double>(i.hi);
}

}  // namespace

TEST_CASE("interval primitives round outward") {
  auto pi = cert::pi();
  CHECK(contains(pi, 3.14159265358979323846L));
  CHECK(pi.width() < 1e-14);
  auto log720 = cert::log_nat(cert::exact(720.0));
  CHECK(contains(log720, logl(720.0L)));
  auto p = cert::pow_int(cert::exact(2.618034), 2);
  CHECK(contains(p, 2.618034L * 2.618034L));
  CHECK_THROWS_AS(cert::log_nat(cert::exact(0.0)), cert::DomainError);
  CHECK_THROWS_AS(cert::div(cert::exact(1.0), cert::hull(-1.0, 1.0)), cert::DomainError);
}

TEST_CASE("dilatation arc bound is the exact factorial") {
  auto r5 = bounds::dilatation_arc_bound(5);
  REQUIRE(r5.exact.has_value());
  CHECK(*r5.exact == 120);
  CHECK(contains(r5.bound, 120.0L));
  CHECK(*bounds::dilatation_arc_bound(2).exact == 2);
  CHECK(*bounds::dilatation_arc_bound(10).exact == 3628800);
  CHECK_THROWS_AS(bounds::dilatation_arc_bound(1), cert::DomainError);
}

TEST_CASE("eq1 right-hand side") {
  auto v = bounds::eq1_rhs(5, 1);
  CHECK(contains(v, 7.5L));
  CHECK(v.width() < 1e-12);
  CHECK(contains(bounds::eq1_rhs(2, 1), 1.0L));

  SUBCASE("strictly below delta! with gap closing along powers of two") {
    for (int delta : {2, 3, 5, 8}) {
      double fact = 1;
      for (int i = 2; i <= delta; ++i) fact *= i;
      double prev_hi = 0;
      for (int e = 0; e <= 10; ++e) {
        auto rhs = bounds::eq1_rhs(delta, 1 << e);
        CHECK(rhs.hi < fact);
        if (e > 0) CHECK(rhs.lo > prev_hi);  // strict certified increase
        prev_hi = rhs.hi;
      }
      CHECK(fact - bounds::eq1_rhs(delta, 1 << 10).lo <
            fact * 0.001 * (delta - 1));  // gap shrinks toward 0
    }
  }
}

TEST_CASE("volume arc bound values") {
  auto r = bounds::volume_arc_bound(1, 6);
  CHECK(contains(r.bound, 3.0L * 3.14159265358979323846L * logl(720.0L)));
  CHECK(r.bound.mid() == doctest::Approx(62.0077).epsilon(1e-4));
  bounds::attach_measured(r, 2.0299);  // figure-eight volume
  CHECK(r.satisfied == true);
  CHECK_FALSE(r.boundary_warning);

  auto small = bounds::volume_arc_bound(1, 2);
  CHECK(small.bound.mid() == doctest::Approx(6.5328).epsilon(1e-4));
}

TEST_CASE("volume arc bound is the kojima-mcshane bound at lambda = delta!") {
  for (int g = 1; g <= 5; ++g) {
    double fact = 1;
    for (int delta = 2; delta <= 18; ++delta) {
      fact = 1;
      for (int i = 2; i <= delta; ++i) fact *= i;
      auto lhs = bounds::volume_arc_bound(g, delta).bound;
      auto rhs = bounds::kojima_mcshane_bound(g, fact).bound;
      CHECK(lhs.lo == rhs.lo);  // identical code path, bit-exact
      CHECK(lhs.hi == rhs.hi);
    }
  }
}

TEST_CASE("entropy relation bound") {
  auto identity = bounds::entropy_relation_bound(2.618034, 1);
  CHECK(contains(identity.bound, 2.618034L));
  auto squared = bounds::entropy_relation_bound(2.618034, 2);
  CHECK(squared.bound.mid() == doctest::Approx(6.8541).epsilon(1e-4));
  CHECK_THROWS_AS(bounds::entropy_relation_bound(1.0, 3), cert::DomainError);
}

TEST_CASE("cornish growth bound") {
  CHECK(contains(bounds::cornish_growth_bound(1, 2, 1, 3), 8.0L));
  CHECK(bounds::cornish_growth_bound(2, 2.618034, 1, 2).mid() ==
        doctest::Approx(13.7082).epsilon(1e-4));
  CHECK_THROWS_AS(bounds::cornish_growth_bound(1, 2, 1, 0), cert::DomainError);
}

TEST_CASE("kojima-mcshane bound") {
  auto fig8 = bounds::kojima_mcshane_bound(1, 2.618034);
  CHECK(fig8.bound.mid() == doctest::Approx(3 * M_PI * std::log(2.618034)).epsilon(1e-12));
  bounds::attach_measured(fig8, 2.0299);
  CHECK(fig8.satisfied == true);

  auto degenerate = bounds::kojima_mcshane_bound(1, 1.0 + 1e-12);
  CHECK(degenerate.bound.hi < 1e-10);
  CHECK(degenerate.bound.lo >= 0.0);

  auto euler = bounds::kojima_mcshane_bound(2, std::exp(1.0));
  CHECK(euler.bound.mid() == doctest::Approx(9 * 3.14159265358979).epsilon(1e-12));
  CHECK_THROWS_AS(bounds::kojima_mcshane_bound(1, 0.5), cert::DomainError);
}

TEST_CASE("volume ratio constant") {
  CHECK(bounds::volume_ratio_constant(1, 1).mid() == doctest::Approx(3 * M_PI).epsilon(1e-14));
  CHECK(bounds::volume_ratio_constant(2, 1).mid() == doctest::Approx(18 * M_PI).epsilon(1e-14));
  CHECK(bounds::volume_ratio_constant(2, 0.5).mid() == doctest::Approx(9 * M_PI).epsilon(1e-14));

  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    int g = 1 + static_cast<int>(rng() % 6);
    double b = 0.01 + static_cast<double>(rng() % 100000) / 10000.0;
    long double reference = 3.0L * 3.14159265358979323846L * g * (2 * g - 1) * static_cast<long double>(b);
    auto v = bounds::volume_ratio_constant(g, b);
    CHECK(contains(v, reference));
    CHECK(std::fabs(static_cast<double>(v.mid() - reference)) <= 1e-12 * static_cast<double>(reference));
  }
}

TEST_CASE("kojima entropy check") {
  CHECK(bounds::kojima_entropy_bound_check(2.618034, 1.0, 2.0299));
  CHECK_FALSE(bounds::kojima_entropy_bound_check(std::exp(1.0), 0.1, 5.0));
  CHECK(bounds::kojima_entropy_bound_check(1.0 + 1e-9, 1.0, 0.1));
}

TEST_CASE("outward rounding never clips the true value") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    int g = 1 + static_cast<int>(rng() % 4);
    int delta = 2 + static_cast<int>(rng() % 9);
    long double truth = 3.0L * 3.14159265358979323846L * (2 * g - 1);
    long double lf = 0;
    for (int i = 2; i <= delta; ++i) lf += logl(static_cast<long double>(i));
    truth *= lf;
    CHECK(contains(bounds::volume_arc_bound(g, delta).bound, truth));
  }
}

TEST_CASE("volume chain audit holds on consistent random tuples") {
  std::mt19937_64 rng(67);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() % 1000000) / 1000000.0);
  };
  for (int trial = 0; trial < 100; ++trial) {
    int g_k = 1 + static_cast<int>(rng() % 6);
    int g_j = 1 + static_cast<int>(rng() % g_k);
    double lambda_k = uniform(1.05, 20.0);
    int g_prime = 1 + static_cast<int>(rng() % g_k);
    double r = uniform(0.2, 0.99);
    double lambda_j = std::max(std::pow(lambda_k, g_prime) * r, 1.0001);
    double b = uniform(0.1, 5.0);
    double vol_k = std::log(lambda_k) / b * uniform(1.01, 3.0);
    double vol_j = 3 * M_PI * (2 * g_j - 1) * std::log(lambda_j) * uniform(0.05, 0.99);

    auto lines = rib::bounds::volume_chain_audit(g_j, g_k, lambda_j, lambda_k, b, vol_j, vol_k);
    REQUIRE(lines.size() == 6);
    for (const auto& line : lines) CHECK_FALSE(line.violated);
    CHECK(lines[0].certified);  // strict-slack lines
    CHECK(lines[4].certified);
    // equality lines evaluate to identical intervals
    CHECK(lines[3].lhs == lines[3].rhs);
    CHECK(lines[5].lhs == lines[5].rhs);
  }
}
