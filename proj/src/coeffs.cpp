#include "kacpoly/coeffs.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kacpoly/errors.hpp"
#include "kacpoly/summation.hpp"

namespace kacpoly {

namespace {

constexpr long double kLn2 = std::numbers::ln2_v<long double>;
constexpr long double kLnPi = 1.1447298858494001741434273513530587L;

// Below this the product is formed directly; it stays well inside range and
// avoids cancellation between lgamma terms of similar size.
constexpr std::int64_t kDirectProductLimit = 60;

// Extended precision so that the rounded double result is within one ulp.
long double log_double_factorial_ext(std::int64_t k) {
  if (k <= 1) return 0.0L;
  if (k <= kDirectProductLimit) {
    long double p = 1.0L;
    for (std::int64_t j = k; j > 1; j -= 2) p *= static_cast<long double>(j);
    return std::log(p);
  }
  if (k % 2 == 0) {
    // (2j)!! = 2^j j!
    const long double j = static_cast<long double>(k / 2);
    return j * kLn2 + std::lgamma(j + 1.0L);
  }
  // (2j+1)!! = 2^{j+1} Gamma(j + 3/2) / sqrt(pi)
  const long double j = static_cast<long double>((k - 1) / 2);
  return (j + 1.0L) * kLn2 + std::lgamma(j + 1.5L) - 0.5L * kLnPi;
}

// (2m+1)!! / (2m+2)!! = Gamma(m + 3/2) / (sqrt(pi) Gamma(m + 2))
double central_ratio(std::int64_t m) {
  const long double x = static_cast<long double>(m);
  return static_cast<double>(
      std::exp(std::lgamma(x + 1.5L) - std::lgamma(x + 2.0L) - 0.5L * kLnPi));
}

}  // namespace

double log_double_factorial(std::int64_t k) {
  if (k < -1) throw DomainError("log_double_factorial: k must be >= -1");
  return static_cast<double>(log_double_factorial_ext(k));
}

double trig_moment(std::int64_t k, std::int64_t m) {
  if (m < 0 || k < 0 || k > 2 * m + 2) {
    throw DomainError("trig_moment: requires 0 <= k <= 2m+2");
  }
  if (k % 2 != 0) return 0.0;
  const long double log_value = log_double_factorial_ext(2 * m - k + 1) +
                                log_double_factorial_ext(k - 1) -
                                log_double_factorial_ext(2 * m + 2);
  return 2.0 * std::numbers::pi * static_cast<double>(std::exp(log_value));
}

double variance_center(std::size_t m_in) {
  // c_m^2 = (pi/2) sum_l [A(l)^2 + B(l)^2] with
  //   A(l) = (2m-2l+1)!!(2l-1)!!/(2m+2)!!,  B(l) = (2m-2l-1)!!(2l+1)!!/(2m+2)!!.
  // Both are log-convex in l with maxima at l = 0 and l = m, so the sum is
  // taken from both ends inward and stops once the new terms are negligible.
  const auto m = static_cast<std::int64_t>(m_in);
  const double md = static_cast<double>(m);
  const double ratio = central_ratio(m);

  double a_lo = ratio;
  double b_lo = ratio / (2.0 * md + 1.0);
  double a_hi = b_lo;
  double b_hi = ratio;

  CompensatedSum sum;
  std::int64_t lo = 0;
  std::int64_t hi = m;
  constexpr double kNegligible = 1e-20;
  bool lo_done = false;
  bool hi_done = false;
  while (lo <= hi && !(lo_done && hi_done)) {
    if (!lo_done) {
      const double term = a_lo * a_lo + b_lo * b_lo;
      sum.add(term);
      if (lo > 0 && term < kNegligible * sum.value()) lo_done = true;
      const double l = static_cast<double>(lo);
      a_lo *= (2.0 * l + 1.0) / (2.0 * md - 2.0 * l + 1.0);
      if (lo + 1 <= m) b_lo *= (2.0 * l + 3.0) / (2.0 * md - 2.0 * l - 1.0);
      ++lo;
    }
    if (lo > hi) break;
    if (!hi_done) {
      const double term = a_hi * a_hi + b_hi * b_hi;
      sum.add(term);
      if (hi < m && term < kNegligible * sum.value()) hi_done = true;
      const double l = static_cast<double>(hi);
      a_hi *= (2.0 * md - 2.0 * l + 3.0) / (2.0 * l - 1.0);
      b_hi *= (2.0 * md - 2.0 * l + 1.0) / (2.0 * l + 1.0);
      --hi;
    }
  }
  return 0.5 * std::numbers::pi * sum.value();
}

double variance_lienard(std::size_t m_in) {
  const auto m = static_cast<std::int64_t>(m_in);
  const double ratio = central_ratio(m);
  return std::numbers::pi * ratio * ratio;
}

CoeffScheme::CoeffScheme(PowerLaw v) : v_(v) {
  if (!std::isfinite(v.rho)) throw DomainError("PowerLaw exponent must be finite");
}

CoeffScheme CoeffScheme::parse(std::string_view text) {
  if (text == "center") return PerturbedCenter{};
  if (text == "lienard") return Lienard{};
  constexpr std::string_view prefix = "power:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string_view num = text.substr(prefix.size());
    double rho = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rho);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw std::invalid_argument("bad power-law exponent: " + std::string(num));
    }
    return PowerLaw{rho};
  }
  throw std::invalid_argument("unknown scheme: " + std::string(text) +
                              " (expected center|lienard|power:RHO)");
}

double CoeffScheme::rho() const {
  if (const auto* p = std::get_if<PowerLaw>(&v_)) return p->rho;
  return -0.5;
}

std::string CoeffScheme::name() const {
  if (std::holds_alternative<PerturbedCenter>(v_)) return "center";
  if (std::holds_alternative<Lienard>(v_)) return "lienard";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, std::get<PowerLaw>(v_).rho);
  return "power:" + std::string(buf, res.ptr);
}

CoeffVector coeff_vector(const CoeffScheme& scheme, std::size_t n) {
  CoeffVector out;
  out.scheme = scheme;
  out.values.resize(n + 1);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        for (std::size_t m = 0; m <= n; ++m) {
          if constexpr (std::is_same_v<S, PerturbedCenter>) {
            out.values[m] = std::sqrt(variance_center(m));
          } else if constexpr (std::is_same_v<S, Lienard>) {
            out.values[m] = std::sqrt(variance_lienard(m));
          } else {
            out.values[m] = m == 0 ? 1.0 : std::pow(static_cast<double>(m), s.rho);
          }
        }
      },
      scheme.variant());
  return out;
}

}  // namespace kacpoly
