#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kacpoly/errors.hpp"
#include "kacpoly/kacrice.hpp"
#include "kacpoly/quadrature.hpp"
#include "kacpoly/rootcount.hpp"
#include "kacpoly/sampler.hpp"
#include "oracles.hpp"

using namespace kacpoly;

namespace {

struct NaivePQR {
  long double p = 0, q = 0, r = 0;
};

// Full-length sums in extended precision, no truncation.
NaivePQR naive_pqr(const std::vector<double>& c, long double x) {
  NaivePQR out;
  long double pw = 1.0L;  // x^{i-1}
  for (std::size_t i = 0; i < c.size(); ++i) {
    const long double w = static_cast<long double>(c[i]) * c[i];
    const long double li = static_cast<long double>(i);
    if (i > 0) {
      out.q += li * li * w * pw * pw;
      out.r += li * w * pw * pw * x;
      pw *= x;
    }
    out.p += w * pw * pw;
  }
  return out;
}

double naive_density(const std::vector<double>& c, long double x) {
  const auto v = naive_pqr(c, x);
  return static_cast<double>(std::sqrt(std::max(0.0L, v.p * v.q - v.r * v.r)) / v.p /
                             std::numbers::pi_v<long double>);
}

// Oracle integral of the density over (0, b) using x = 1 - e^{-t} and Simpson.
double naive_integral(const std::vector<double>& c, double b, double t_end) {
  const double t_hi = b >= 1.0 ? t_end : -std::log1p(-b);
  return oracle::simpson(
      [&](double t) {
        const long double gap = std::exp(-static_cast<long double>(t));
        return naive_density(c, 1.0L - gap) * static_cast<double>(gap);
      },
      0.0, t_hi, 20000);
}

}  // namespace

TEST_CASE("quadrature on known integrals") {
  const double bp[] = {0.0, std::numbers::pi};
  const auto s = integrate_adaptive([](double x) { return std::sin(x); }, bp, 1e-13);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
  const double bp2[] = {0.0, 1.0};
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, bp2, 1e-9);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.error <= 1e-9);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return 1.0 / x; }, bp2, 1e-12, 50),
                  QuadratureFailure);
}

TEST_CASE("pqr examples") {
  const auto kac = coeff_vector(PowerLaw{0}, 50);
  const auto at0 = pqr(kac, 0.0);
  CHECK(at0.p == 1.0);
  CHECK(at0.q == 1.0);
  CHECK(at0.r == 0.0);
  const auto half = pqr(coeff_vector(PowerLaw{0}, 2000), 0.5);
  CHECK(half.p == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(pqr(kac, 1.0), DomainError);
  CHECK_THROWS_AS(pqr(kac, -1.5), DomainError);

  const auto center = coeff_vector(PerturbedCenter{}, 10000);
  const auto v = pqr(center, 0.99);
  const auto exact = naive_pqr(center.values, 0.99L);
  CHECK(v.p == doctest::Approx(static_cast<double>(exact.p)).epsilon(1e-13));
  CHECK(v.q == doctest::Approx(static_cast<double>(exact.q)).epsilon(1e-13));
  CHECK(v.r == doctest::Approx(static_cast<double>(exact.r)).epsilon(1e-13));
  CHECK(std::fabs(v.p / -std::log(1 - 0.99 * 0.99) - 1.0) <= 0.05);
  const auto neg = pqr(center, -0.99);
  CHECK(neg.p == v.p);
  CHECK(neg.r == -v.r);
}

TEST_CASE("Cauchy-Schwarz at sampled points") {
  for (const auto& scheme : {CoeffScheme(PowerLaw{0}), CoeffScheme(PerturbedCenter{}),
                             CoeffScheme(Lienard{}), CoeffScheme(PowerLaw{-1.0}),
                             CoeffScheme(PowerLaw{0.5})}) {
    const auto cv = coeff_vector(scheme, 500);
    for (int i = 0; i < 10000; ++i) {
      const double x = -0.9999 + 1.9998 * i / 9999.0;
      const auto v = pqr(cv, x);
      CHECK(v.p > 0.0);
      CHECK(v.p * v.q - v.r * v.r >= -1e-12 * v.p * v.q);
    }
  }
}

TEST_CASE("pointwise asymptotics inside the core interval at n = 1e6") {
  const std::size_t n = 1000000;
  const auto ci = core_interval(n);
  const double t_mid = 0.5 * (-std::log1p(-ci.lo) - std::log1p(-ci.hi));
  const double x = -std::expm1(-t_mid);
  const auto v = pqr(coeff_vector(PerturbedCenter{}, n), x);
  const double u = 1.0 - x * x;
  INFO("P ratio " << v.p / -std::log(u) << ", Q ratio " << v.q * u * u << ", R ratio "
                  << v.r * u / x);
  CHECK(std::fabs(v.p / -std::log(u) - 1.0) <= 0.05);
  CHECK(std::fabs(v.q * u * u - 1.0) <= 0.05);
  CHECK(std::fabs(v.r * u / x - 1.0) <= 0.05);
}

TEST_CASE("density against the naive oracle") {
  for (const auto& scheme : {CoeffScheme(PowerLaw{0}), CoeffScheme(PerturbedCenter{}),
                             CoeffScheme(PowerLaw{-1.0}), CoeffScheme(PowerLaw{1.0})}) {
    const auto cv = coeff_vector(scheme, 300);
    for (double x : {0.0, 0.01, 0.3, -0.5, 0.9, 0.99, 0.999, 0.99999}) {
      INFO(scheme.name() << " x = " << x);
      CHECK(kac_rice_density(cv, x) ==
            doctest::Approx(naive_density(cv.values, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("expected zeros against the naive oracle integral") {
  for (const auto& scheme : {CoeffScheme(PowerLaw{0}), CoeffScheme(PerturbedCenter{}),
                             CoeffScheme(PowerLaw{-1.0}), CoeffScheme(PowerLaw{0.5})}) {
    const auto cv = coeff_vector(scheme, 200);
    const double t_end = std::log(201.0) + 40.0;
    INFO(scheme.name());
    const auto inner = expected_roots_gaussian(cv, Interval::open(0, 1), 1e-10);
    CHECK(inner.value == doctest::Approx(naive_integral(cv.values, 1.0, t_end)).epsilon(1e-8));
    const auto part = expected_roots_gaussian(cv, Interval::open(0, 0.95), 1e-10);
    CHECK(part.value == doctest::Approx(naive_integral(cv.values, 0.95, t_end)).epsilon(1e-8));
    const auto rev = reversed(cv);
    const auto outer = expected_roots_gaussian(cv, Interval::open(1, INFINITY), 1e-10);
    CHECK(outer.value == doctest::Approx(naive_integral(rev.values, 1.0, t_end)).epsilon(1e-8));
  }
}

TEST_CASE("linear Gaussian polynomial has one real zero") {
  const CoeffVector one{{1.0, 1.0}, PowerLaw{0}};
  CHECK(expected_roots_gaussian(one, Interval::real_line()).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(expected_roots_gaussian(one, Interval::parse("(-inf,0)")).value ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK(expected_roots_gaussian(one, Interval::parse("(0,inf)")).value ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("symmetry, additivity and palindromes") {
  const auto cv = coeff_vector(PerturbedCenter{}, 1000);
  const double tol = 1e-10;
  const auto ab = expected_roots_gaussian(cv, Interval::open(0.2, 0.9), tol).value;
  const auto bc = expected_roots_gaussian(cv, Interval::open(0.9, 3.0), tol).value;
  const auto ac = expected_roots_gaussian(cv, Interval::open(0.2, 3.0), tol).value;
  CHECK(ab + bc == doctest::Approx(ac).epsilon(1e-9));
  CHECK(expected_roots_gaussian(cv, Interval::open(-3.0, -0.2), tol).value ==
        doctest::Approx(ac).epsilon(1e-12));
  CHECK(expected_roots_gaussian_reversed(cv, tol).value ==
        doctest::Approx(expected_roots_gaussian(cv, Interval::open(1, INFINITY), tol).value)
            .epsilon(1e-12));
  const auto kac = coeff_vector(PowerLaw{0}, 500);
  CHECK(expected_roots_gaussian_reversed(kac, tol).value ==
        doctest::Approx(expected_roots_gaussian(kac, Interval::open(0, 1), tol).value).epsilon(1e-10));
}

TEST_CASE("halving the tolerance moves the value by less than the error estimate") {
  for (std::size_t n : {100ul, 10000ul}) {
    const auto cv = coeff_vector(PerturbedCenter{}, n);
    for (double tol : {1e-4, 1e-6}) {
      const auto a = expected_roots_gaussian(cv, Interval::open(0, 1), tol);
      const auto b = expected_roots_gaussian(cv, Interval::open(0, 1), tol / 2);
      CHECK(a.error_estimate <= tol);
      CHECK(std::fabs(a.value - b.value) <= a.error_estimate);
    }
  }
}

TEST_CASE("core interval") {
  const auto c = core_interval(static_cast<std::size_t>(std::llround(std::exp(32.0))));
  CHECK(c.lo == doctest::Approx(1 - std::exp(-2.0)).epsilon(1e-6));
  CHECK(c.hi == doctest::Approx(1 - std::exp(2.0 - 32.0)).epsilon(1e-12));
  CHECK_FALSE(c.empty);
  CHECK(core_interval(2).empty);
  CHECK_FALSE(core_interval(16).empty);
  double prev_lo = 0, prev_hi = 0;
  for (std::size_t n = 16; n <= 10000000; n *= 3) {
    const auto ci = core_interval(n);
    CHECK(ci.lo > prev_lo);
    CHECK(ci.hi > prev_hi);
    CHECK(0.0 < ci.lo);
    CHECK(ci.lo < ci.hi);
    CHECK(ci.hi < 1.0);
    prev_lo = ci.lo;
    prev_hi = ci.hi;
  }
  CHECK_THROWS_AS(core_interval(1), DomainError);
}

TEST_CASE("asymptotic predictions") {
  const auto a = asymptotic_prediction(0.0, KacRegion::Outer, 10000);
  REQUIRE(a.value);
  CHECK(*a.value == doctest::Approx(1.4659).epsilon(1e-4));
  const auto b = asymptotic_prediction(-0.5, KacRegion::Inner, 10000);
  REQUIRE(b.value);
  CHECK(*b.value == doctest::Approx(0.9662).epsilon(1e-4));
  CHECK(b.regime == Regime::Critical);
  const auto c = asymptotic_prediction(-1.0, KacRegion::Inner, 10000);
  CHECK_FALSE(c.value);
  CHECK(c.formula == "bounded");
  const auto d = asymptotic_prediction(0.0, KacRegion::RealLine, 10000);
  CHECK(*d.value == doctest::Approx(2.0 / std::numbers::pi * std::log(10000.0)));
  const auto e = asymptotic_prediction(-0.5, KacRegion::RealLine, 10000);
  CHECK(*e.value == doctest::Approx(std::log(10000.0) / std::numbers::pi));
  for (auto r : {KacRegion::Inner, KacRegion::Outer, KacRegion::Symmetric, KacRegion::RealLine}) {
    CHECK(parse_kac_region(to_string(r)) == r);
  }
}

TEST_CASE("Kac-Rice matches Monte Carlo on the core interval") {
  const std::size_t n = 2000;
  const auto cv = coeff_vector(PerturbedCenter{}, n);
  const auto core = core_interval(n).interval();
  const double kr = expected_roots_gaussian(cv, core).value;
  const int trials = 3000;
  double s1 = 0, s2 = 0;
  for (int t = 0; t < trials; ++t) {
    const auto p = sample_polynomial(cv, NoiseDistribution::Gaussian,
                                     SeedSpec{17, 3, static_cast<std::uint32_t>(t), 0});
    const double k = static_cast<double>(count_in_interval(p.realized, core, RootMethod::Sweep).count);
    s1 += k;
    s2 += k * k;
  }
  const double mean = s1 / trials;
  const double se = std::sqrt((s2 / trials - mean * mean) / (trials - 1));
  INFO("kr " << kr << " mc " << mean << " +- " << se);
  CHECK(std::fabs(mean - kr) <= 3 * se);
}
