#include "kacpoly/polynomial.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kacpoly/errors.hpp"

namespace kacpoly {

Coeffs trim_leading_zeros(std::span<const double> coeffs) {
  std::size_t len = coeffs.size();
  while (len > 0 && coeffs[len - 1] == 0.0) --len;
  return Coeffs(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(len));
}

bool is_zero_polynomial(std::span<const double> coeffs) {
  for (const double c : coeffs) {
    if (c != 0.0) return false;
  }
  return true;
}

double evaluate(std::span<const double> coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

std::pair<double, double> evaluate_with_derivative(std::span<const double> coeffs, double x) {
  double f = 0.0;
  double df = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    df = df * x + f;
    f = f * x + coeffs[i];
  }
  return {f, df};
}

Coeffs mirrored(std::span<const double> coeffs) {
  Coeffs out(coeffs.begin(), coeffs.end());
  for (std::size_t m = 1; m < out.size(); m += 2) out[m] = -out[m];
  return out;
}

Coeffs reversed(std::span<const double> coeffs) {
  Coeffs t = trim_leading_zeros(coeffs);
  if (t.empty()) throw ZeroPolynomial("reversed: zero polynomial");
  return Coeffs(t.rbegin(), t.rend());
}

CoeffVector reversed(const CoeffVector& coeffs) {
  CoeffVector out;
  out.scheme = coeffs.scheme;
  const std::size_t len = coeffs.values.size();
  out.values.resize(len);
  const double cn = coeffs.values.back();
  for (std::size_t m = 0; m < len; ++m) out.values[m] = coeffs.values[len - 1 - m] / cn;
  return out;
}

RandomPoly reversed(const RandomPoly& poly) {
  RandomPoly out;
  out.coeffs = reversed(poly.coeffs);
  out.dist = poly.dist;
  out.seed = poly.seed;
  const std::size_t len = poly.noise.size();
  out.noise.assign(poly.noise.rbegin(), poly.noise.rend());
  out.realized.resize(len);
  for (std::size_t m = 0; m < len; ++m) out.realized[m] = out.coeffs.values[m] * out.noise[m];
  return out;
}

Interval Interval::open(double lo, double hi) { return Interval{lo, hi, false, false}; }
Interval Interval::closed(double lo, double hi) { return Interval{lo, hi, true, true}; }
Interval Interval::real_line() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Interval{-inf, inf, false, false};
}

namespace {

double parse_endpoint(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (s == "inf" || s == "+inf" || s == "infinity") return inf;
  if (s == "-inf" || s == "-infinity") return -inf;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad interval endpoint: '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Interval Interval::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  Interval out;
  if (!text.empty() && (text.front() == '[' || text.front() == '(')) {
    out.lo_closed = text.front() == '[';
    text.remove_prefix(1);
  }
  if (!text.empty() && (text.back() == ']' || text.back() == ')')) {
    out.hi_closed = text.back() == ']';
    text.remove_suffix(1);
  }
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("interval must look like 'a,b'");
  }
  out.lo = parse_endpoint(text.substr(0, comma));
  out.hi = parse_endpoint(text.substr(comma + 1));
  if (out.lo > out.hi) throw std::invalid_argument("interval requires lo <= hi");
  if ((std::isinf(out.lo) && out.lo_closed) || (std::isinf(out.hi) && out.hi_closed)) {
    throw std::invalid_argument("infinite endpoints must be open");
  }
  return out;
}

bool Interval::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::empty() const {
  if (lo < hi) return false;
  return !(lo == hi && lo_closed && hi_closed);
}

std::string Interval::to_string() const {
  auto fmt = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  return std::string(lo_closed ? "[" : "(") + fmt(lo) + "," + fmt(hi) + (hi_closed ? "]" : ")");
}

}  // namespace kacpoly
