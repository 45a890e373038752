#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/errors.hpp"
#include "oracles.hpp"

using namespace kacpoly;

TEST_CASE("log_double_factorial small values") {
  CHECK(log_double_factorial(-1) == 0.0);
  CHECK(log_double_factorial(0) == 0.0);
  CHECK(log_double_factorial(1) == 0.0);
  CHECK(log_double_factorial(5) == doctest::Approx(std::log(15.0)).epsilon(1e-15));
}

TEST_CASE("log_double_factorial matches exact big-integer products up to 400") {
  for (std::int64_t k = 2; k <= 400; ++k) {
    const mpz_class exact = oracle::double_factorial(k);
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, exact.get_mpz_t());
    const double expected = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
    const double got = log_double_factorial(k);
    INFO("k = " << k);
    CHECK(std::fabs(got - expected) <= 1e-13 * std::fabs(expected));
  }
}

TEST_CASE("double factorial recurrence k!! = k (k-2)!!") {
  // Beyond k ~ 2400 the logarithm itself exceeds 8192 and one ulp is above 1e-12.
  for (std::int64_t k = 2; k <= 2000; ++k) {
    const double ratio = std::exp(log_double_factorial(k) - log_double_factorial(k - 2));
    INFO("k = " << k);
    CHECK(std::fabs(ratio / static_cast<double>(k) - 1.0) <= 1e-12);
  }
}

TEST_CASE("trig_moment against quadrature") {
  CHECK(trig_moment(1, 3) == 0.0);
  CHECK(trig_moment(0, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(trig_moment(2, 1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));

  for (int m = 0; m <= 6; ++m) {
    for (int k = 0; k <= 2 * m + 2; ++k) {
      const double q = oracle::simpson(
          [&](double t) { return std::pow(std::cos(t), 2 * m + 2 - k) * std::pow(std::sin(t), k); },
          0.0, 2.0 * std::numbers::pi, 4000);
      INFO("k = " << k << ", m = " << m);
      CHECK(trig_moment(k, m) == doctest::Approx(q).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("trig_moment domain errors") {
  CHECK_THROWS_AS(trig_moment(-1, 2), DomainError);
  CHECK_THROWS_AS(trig_moment(7, 2), DomainError);
  CHECK_THROWS_AS(trig_moment(0, -1), DomainError);
}

TEST_CASE("trig_moment extremal structure") {
  CHECK(trig_moment(0, 0) + trig_moment(2, 0) == doctest::Approx(2 * std::numbers::pi));
  for (int m = 1; m <= 60; ++m) {
    const double end_lo = trig_moment(0, m);
    const double end_hi = trig_moment(2 * m + 2, m);
    CHECK(end_lo + end_hi < 2.0 * std::numbers::pi);
    for (int k = 0; k <= 2 * m + 2; k += 2) {
      CHECK(trig_moment(k, m) > 0.0);
      CHECK(trig_moment(k, m) <= end_lo * (1 + 1e-14));
      CHECK(trig_moment(k, m) <= end_hi * (1 + 1e-14));
    }
  }
}

TEST_CASE("variance_center matches the exact rational sum for m <= 200") {
  for (std::int64_t m = 0; m <= 200; ++m) {
    const double expected = 0.5 * std::numbers::pi * oracle::center_variance_sum(m).get_d();
    INFO("m = " << m);
    CHECK(std::fabs(variance_center(static_cast<std::size_t>(m)) / expected - 1.0) <= 1e-12);
  }
}

TEST_CASE("variance_center examples and asymptotics") {
  CHECK(variance_center(0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(std::fabs(10 * variance_center(10) - 1.0) <= 0.25);
  const double big = 1e5;
  CHECK(std::fabs(big * variance_center(100000) - 1.0) <= 1e-3);
  // Envelope |m c_m^2 - 1| <= 2/m over the acceptance range, sampled.
  for (std::size_t m = 50; m <= 100000; m += (m < 1000 ? 1 : 97)) {
    const double md = static_cast<double>(m);
    INFO("m = " << m);
    CHECK(std::fabs(md * variance_center(m) - 1.0) <= 2.0 / md);
  }
}

TEST_CASE("variance_lienard") {
  CHECK(variance_lienard(0) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(variance_lienard(1) == doctest::Approx(9 * std::numbers::pi / 64).epsilon(1e-15));
  CHECK(std::fabs(1e4 * variance_lienard(10000) - 1.0) <= 1e-2);
  for (std::size_t m = 0; m < 50; ++m) CHECK(variance_lienard(m) > 0.0);
}

TEST_CASE("coeff_vector schemes") {
  SUBCASE("Kac") {
    const auto cv = coeff_vector(PowerLaw{0.0}, 5);
    REQUIRE(cv.values.size() == 6);
    for (double v : cv.values) CHECK(v == 1.0);
  }
  SUBCASE("power law -1/2") {
    const auto cv = coeff_vector(PowerLaw{-0.5}, 4);
    CHECK(cv.values[0] == 1.0);
    CHECK(cv.values[1] == 1.0);
    CHECK(cv.values[2] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(cv.values[3] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(cv.values[4] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("perturbed center") {
    const auto cv = coeff_vector(PerturbedCenter{}, 2);
    REQUIRE(cv.degree() == 2);
    for (std::int64_t m = 0; m <= 2; ++m) {
      const double exact = std::sqrt(0.5 * std::numbers::pi * oracle::center_variance_sum(m).get_d());
      CHECK(cv.values[static_cast<std::size_t>(m)] == doctest::Approx(exact).epsilon(1e-14));
    }
  }
}

TEST_CASE("CoeffScheme parsing and validation") {
  CHECK(CoeffScheme::parse("center") == CoeffScheme(PerturbedCenter{}));
  CHECK(CoeffScheme::parse("lienard") == CoeffScheme(Lienard{}));
  CHECK(CoeffScheme::parse("power:-0.5").rho() == -0.5);
  CHECK(CoeffScheme::parse(CoeffScheme(PowerLaw{0.25}).name()) == CoeffScheme(PowerLaw{0.25}));
  CHECK_THROWS(CoeffScheme::parse("power:x"));
  CHECK_THROWS(CoeffScheme::parse("kac"));
  CHECK_THROWS_AS(CoeffScheme(PowerLaw{std::nan("")}), DomainError);
}
