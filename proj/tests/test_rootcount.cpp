#include <doctest.h>

#include <cmath>
#include <random>

#include "kacpoly/errors.hpp"
#include "kacpoly/polynomial.hpp"
#include "kacpoly/rootcount.hpp"
#include "kacpoly/sampler.hpp"
#include "kacpoly/sturm.hpp"
#include "kacpoly/sweep.hpp"

using namespace kacpoly;

namespace {

std::vector<mpz_class> to_mpz(const Coeffs& c) {
  std::vector<mpz_class> out;
  for (double v : c) out.emplace_back(static_cast<long>(v));
  return out;
}

Coeffs random_integer_poly(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> coef(-100, 100);
  Coeffs c(static_cast<std::size_t>(degree) + 1);
  for (auto& v : c) v = coef(rng);
  while (c.back() == 0.0) c.back() = coef(rng);
  return c;
}

std::size_t sturm_on(const Coeffs& c, const Interval& iv) {
  return sturm_count(to_mpz(c), RationalInterval::from(iv));
}

}  // namespace

TEST_CASE("interval parsing and membership") {
  const auto a = Interval::parse("0,1");
  CHECK(a.lo == 0.0);
  CHECK(a.hi == 1.0);
  CHECK_FALSE(a.contains(0.0));
  const auto b = Interval::parse("[-2.5,inf)");
  CHECK(b.lo_closed);
  CHECK(std::isinf(b.hi));
  CHECK(b.contains(-2.5));
  CHECK(Interval::parse("(-inf,inf)").contains(1e300));
  CHECK_THROWS(Interval::parse("[-inf,0]"));
  CHECK_THROWS(Interval::parse("1;2"));
  CHECK(Interval::open(1, 1).empty());
  CHECK_FALSE(Interval::closed(1, 1).empty());
  CHECK(Interval::parse(Interval::parse("(0.25,3]").to_string()).hi_closed);
}

TEST_CASE("companion roots on simple polynomials") {
  const Coeffs x2m1 = {-1, 0, 1};
  const auto r = real_roots(x2m1);
  REQUIRE(r.count == 2);
  CHECK(r.roots[0] == doctest::Approx(-1.0));
  CHECK(r.roots[1] == doctest::Approx(1.0));
  CHECK(real_roots(Coeffs{1, 0, 1}).count == 0);
  CHECK(count_in_interval(Coeffs{0.125, -0.75, 1}, Interval::open(0, 1)).count == 2);
  CHECK(count_in_interval(Coeffs{-6, 1, 1}, Interval::open(0, 1)).count == 0);
  // trailing zeros in the highest powers are ignored
  CHECK(real_roots(Coeffs{-1, 0, 1, 0, 0}).count == 2);
}

TEST_CASE("zero polynomial") {
  const Coeffs zero = {0, 0, 0};
  CHECK(real_roots(zero).status == CountStatus::ZeroPolynomial);
  CHECK(real_roots(zero).count == 0);
  for (auto m : {RootMethod::Companion, RootMethod::Sweep}) {
    const auto rep = count_in_interval(zero, Interval::open(0, 1), m);
    CHECK(rep.status == CountStatus::ZeroPolynomial);
    CHECK(rep.count == 0);
  }
  CHECK_THROWS_AS(sturm_count(to_mpz(zero), RationalInterval{}), ZeroPolynomial);
  CHECK_THROWS_AS(reversed(zero), ZeroPolynomial);
}

TEST_CASE("sturm examples") {
  CHECK(sturm_on({0, -1, 0, 1}, Interval::open(-2, 2)) == 3);
  CHECK(sturm_on({1, -2, 1}, Interval::open(0, 2)) == 2);
  CHECK(sturm_on({1, -3, 0, 0, 0, 1}, Interval::real_line()) == 3);
  CHECK(sturm_on({0, -1, 1}, Interval::open(0, 1)) == 0);
  CHECK(sturm_on({0, -1, 1}, Interval::closed(0, 1)) == 2);
  CHECK(sturm_on({0, -1, 1}, Interval::parse("(0,1]")) == 1);
  // (x-1)^3 (x+2)^2 x
  CHECK(sturm_on({0, -4, 8, -1, -5, 1, 1}, Interval::real_line()) == 6);
  CHECK(sturm_on({0, -4, 8, -1, -5, 1, 1}, Interval::open(-3, 0)) == 2);
  std::vector<mpz_class> big(66, 1);
  CHECK_THROWS_AS(sturm_count(big, RationalInterval{}), DegreeTooLarge);
}

TEST_CASE("sturm root isolation") {
  const auto rs = sturm_roots(to_mpz({1, -3, 0, 0, 0, 1}), RationalInterval{});
  REQUIRE(rs.roots.size() == 3);
  for (double r : rs.roots) CHECK(std::fabs(evaluate(Coeffs{1, -3, 0, 0, 0, 1}, r)) < 1e-12);
  const auto dbl = sturm_roots(to_mpz({1, -2, 1}), RationalInterval{});
  REQUIRE(dbl.roots.size() == 1);
  CHECK(dbl.roots[0] == 1.0);
  CHECK(dbl.multiplicity[0] == 2);
}

TEST_CASE("exact integer scaling preserves the polynomial") {
  const auto z = exact_integer_coeffs(Coeffs{0.5, -0.125, 3.0});
  REQUIRE(z.size() == 3);
  CHECK(z[0] == 4);
  CHECK(z[1] == -1);
  CHECK(z[2] == 24);
}

TEST_CASE("companion multiplicity of a double root") {
  const auto r = count_in_interval(Coeffs{1, -2, 1}, Interval::open(0, 2));
  CHECK(r.count == 2);
  CHECK(r.roots.size() == 1);
}

TEST_CASE("companion agrees with sturm on 1000 random integer polynomials") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> deg(1, 50);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto c = random_integer_poly(rng, deg(rng));
    const auto rep = real_roots(c);
    const auto exact = sturm_on(c, Interval::real_line());
    if (rep.count != exact) ++mismatches;
    CHECK(rep.max_residual <= 1e-6);
  }
  CHECK(mismatches == 0);
}

TEST_CASE("interval counts agree with sturm on degree-30 integer polynomials") {
  std::mt19937_64 rng(777);
  const Interval ivs[] = {Interval::open(0, 1), Interval::open(1, INFINITY), Interval::open(-1, 1),
                          Interval::parse("(-inf,-1)"), Interval::open(-0.5, 2.0)};
  for (int i = 0; i < 200; ++i) {
    const auto c = random_integer_poly(rng, 30);
    for (const auto& iv : ivs) {
      const auto exact = sturm_on(c, iv);
      INFO("interval " << iv.to_string());
      CHECK(count_in_interval(c, iv, RootMethod::Companion).count == exact);
      CHECK(count_in_interval(c, iv, RootMethod::Sturm).count == exact);
      CHECK(count_in_interval(c, iv, RootMethod::Sweep).count == exact);
    }
  }
}

TEST_CASE("closed endpoints count, open ones do not") {
  const Coeffs c = {0, -1, 1};  // x(x-1)
  for (auto m : {RootMethod::Companion, RootMethod::Sturm, RootMethod::Sweep}) {
    INFO(to_string(m));
    CHECK(count_in_interval(c, Interval::closed(0, 1), m).count == 2);
    CHECK(count_in_interval(c, Interval::open(0, 1), m).count == 0);
    CHECK(count_in_interval(c, Interval::parse("[0,1)"), m).count == 1);
    CHECK(count_in_interval(c, Interval::real_line(), m).count == 2);
  }
  // a triple zero at the origin
  CHECK(count_in_interval(Coeffs{0, 0, 0, 1, 1}, Interval::parse("[0,5)"), RootMethod::Sweep).count == 3);
  CHECK(count_in_interval(Coeffs{0, 0, 0, 1, 1}, Interval::parse("[0,5)")).count == 3);
}

TEST_CASE("reversal") {
  const Coeffs c = {1, 0, -4};
  const auto r = real_roots(reversed(c));
  REQUIRE(r.count == 2);
  CHECK(r.roots[0] == doctest::Approx(-2.0));
  CHECK(r.roots[1] == doctest::Approx(2.0));

  const Coeffs pal = {2, -3, 5, -3, 2};
  CHECK(reversed(pal) == pal);

  const auto cv = coeff_vector(PowerLaw{-0.5}, 4);
  const auto rv = reversed(cv);
  for (std::size_t m = 0; m <= 4; ++m) CHECK(rv.values[m] == cv.values[4 - m] / cv.values[4]);

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Coeffs f(21);
    for (auto& v : f) v = g(rng);
    CHECK(count_in_interval(f, Interval::open(1, INFINITY)).count ==
          count_in_interval(reversed(f), Interval::open(0, 1)).count);
    const auto twice = reversed(reversed(f));
    for (const auto& iv : {Interval::open(0.5, 3), Interval::parse("(-inf,-0.1)"), Interval::open(-2, -1)}) {
      CHECK(count_in_interval(twice, iv).count == count_in_interval(f, iv).count);
    }
  }
}

TEST_CASE("mirror symmetry") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    Coeffs f(40);
    for (auto& v : f) v = g(rng);
    CHECK(count_in_interval(f, Interval::parse("(-inf,0)")).count ==
          count_in_interval(mirrored(f), Interval::parse("(0,inf)")).count);
  }
}

TEST_CASE("sweep agrees with companion on Gaussian polynomials") {
  const Interval ivs[] = {Interval::open(0, 1), Interval::open(1, INFINITY), Interval::real_line(),
                          Interval::open(-1, 1), Interval::open(0.9, 0.999)};
  for (const auto& scheme : {CoeffScheme(PowerLaw{0}), CoeffScheme(PerturbedCenter{}),
                             CoeffScheme(PowerLaw{-1.0}), CoeffScheme(PowerLaw{1.0})}) {
    const auto cv = coeff_vector(scheme, 120);
    int mismatches = 0;
    for (std::uint32_t t = 0; t < 100; ++t) {
      const auto p = sample_polynomial(cv, NoiseDistribution::Gaussian, SeedSpec{5, 5, t, 0});
      for (const auto& iv : ivs) {
        if (count_in_interval(p.realized, iv, RootMethod::Sweep).count !=
            count_in_interval(p.realized, iv, RootMethod::Companion).count) {
          ++mismatches;
        }
      }
    }
    INFO(scheme.name());
    CHECK(mismatches == 0);
  }
}

TEST_CASE("sweep grid covers its interval") {
  std::vector<double> w(200, 1.0);
  const auto grid = make_sweep_grid(w, 0.2, 0.99);
  CHECK(grid.nodes.front() == 0.2);
  CHECK(grid.nodes.back() == 0.99);
  for (std::size_t i = 1; i < grid.nodes.size(); ++i) CHECK(grid.nodes[i] > grid.nodes[i - 1]);
  const auto res = sweep_count(Coeffs{-0.25, 0, 1}, make_sweep_grid(std::vector<double>{1, 0, 1}, 0, 1), true);
  CHECK(res.count == 1);
  REQUIRE(res.roots.size() == 1);
  CHECK(res.roots[0] == doctest::Approx(0.5));
}

TEST_CASE("method names") {
  for (auto m : {RootMethod::Companion, RootMethod::Sturm, RootMethod::Sweep}) {
    CHECK(parse_root_method(to_string(m)) == m);
  }
  CHECK_THROWS(parse_root_method("newton"));
}

TEST_CASE("region counter matches per-region companion counts") {
  const std::vector<Interval> regions = {
      Interval::open(0, 1),        Interval::open(1, INFINITY), Interval::open(-1, 1),
      Interval::open(-INFINITY, -1), Interval::real_line(),    Interval::open(0.9, 0.999),
      Interval::open(1.001, 1.2),  Interval::open(-1, 0)};
  for (const auto& scheme : {CoeffScheme(PerturbedCenter{}), CoeffScheme(PowerLaw{0}),
                             CoeffScheme(PowerLaw{0.5}), CoeffScheme(PowerLaw{-1.0})}) {
    for (auto dist : {NoiseDistribution::Gaussian, NoiseDistribution::Rademacher}) {
      const auto cv = coeff_vector(scheme, 150);
      const RegionCounter sweep(cv.values, regions, RootMethod::Sweep);
      const RegionCounter companion(cv.values, regions, RootMethod::Companion);
      int mismatches = 0;
      for (std::uint32_t t = 0; t < 60; ++t) {
        const auto p = sample_polynomial(cv, dist, SeedSpec{9, 1, t, 0});
        const auto a = sweep.count(p.realized).counts;
        const auto b = companion.count(p.realized).counts;
        for (std::size_t r = 0; r < regions.size(); ++r) {
          if (t < 5 && b[r] != count_in_interval(p.realized, regions[r]).count) ++mismatches;
          if (a[r] != b[r]) ++mismatches;
        }
      }
      INFO(scheme.name(), " ", to_string(dist));
      CHECK(mismatches == 0);
    }
  }
}

TEST_CASE("region counter handles zeros on chart seams") {
  const std::vector<Interval> regions = {Interval::real_line(), Interval::open(-1, 1),
                                         Interval::open(0, INFINITY)};
  const std::vector<double> w(5, 1.0);
  const RegionCounter rc(w, regions, RootMethod::Sweep);
  // x^2 (x - 1)(x + 1)(x - 2)
  const Coeffs f = {0, 0, 2, -1, -2, 1};
  const auto res = rc.count(f).counts;
  CHECK(res[0] == 5);
  CHECK(res[1] == 2);
  CHECK(res[2] == 2);
  CHECK(rc.count(Coeffs{0, 0}).status == CountStatus::ZeroPolynomial);
  CHECK_THROWS(RegionCounter(w, {Interval::closed(0, 1)}, RootMethod::Sweep));
}
