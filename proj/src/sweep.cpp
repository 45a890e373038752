#include "kacpoly/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "kacpoly/polynomial.hpp"

namespace kacpoly {

namespace {

// Zero densities (without the 1/pi) of the Gaussian polynomial with
// variances w and of its derivative, at x in [0, 1].
std::pair<double, double> zero_densities(std::span<const double> w, double x) {
  const std::size_t len = w.size();
  if (len < 2) return {0.0, 0.0};
  const double x2 = x * x;
  double p0 = w[0] + w[1] * x2;
  double r0 = w[1] * x;
  double q0 = w[1];
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  double q = 1.0;  // x^{2m-4}
  for (std::size_t m = 2; m < len; ++m) {
    const double md = static_cast<double>(m);
    const double t = w[m] * q;
    s0 += t;
    s1 += md * t;
    s2 += md * md * t;
    s3 += (md - 1.0) * md * md * t;
    s4 += (md - 1.0) * (md - 1.0) * md * md * t;
    q *= x2;
    if (q == 0.0) break;
  }
  p0 += x2 * x2 * s0;
  r0 += x2 * x * s1;
  q0 += x2 * s2;
  const double p1 = q0;
  const double r1 = x * s3;
  const double q1 = s4;
  const double d0 = p0 > 0.0 ? std::sqrt(std::max(p0 * q0 - r0 * r0, 0.0)) / p0 : 0.0;
  const double d1 = p1 > 0.0 ? std::sqrt(std::max(p1 * q1 - r1 * r1, 0.0)) / p1 : 0.0;
  return {d0, d1};
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

// f and f' on [0, 1]. Summation runs upward and stops once the remaining
// terms are bounded below roundoff of the partial sums, which makes points
// away from 1 cheap for high degrees.
class Evaluator {
 public:
  explicit Evaluator(std::span<const double> coeffs)
      : coeffs_(coeffs), tail_max_(coeffs.size() + 1, 0.0) {
    for (std::size_t m = coeffs.size(); m-- > 0;) {
      tail_max_[m] = std::max(tail_max_[m + 1], std::fabs(coeffs[m]));
    }
  }

  std::pair<double, double> operator()(double x) {
    ++calls;
    const std::size_t len = coeffs_.size();
    if (len == 0) return {0.0, 0.0};
    // too close to 1 for truncation to pay off
    if (x >= 1.0 - 64.0 / static_cast<double>(len)) return evaluate_with_derivative(coeffs_, x);
    constexpr double kRel = 1e-18;
    const double gap = 1.0 - x;
    double f = coeffs_[0], df = 0.0, f_abs = std::fabs(coeffs_[0]), df_abs = 0.0;
    double pw = 1.0;  // x^{m-1}
    for (std::size_t m = 1; m < len; ++m) {
      const double md = static_cast<double>(m);
      const double a = coeffs_[m];
      df = std::fma(md * a, pw, df);
      df_abs += std::fabs(md * a * pw);
      pw *= x;
      f = std::fma(a, pw, f);
      f_abs += std::fabs(a * pw);
      if ((m & 15) == 0) {
        // sum_{k>m} |a_k| x^k and sum_{k>m} k |a_k| x^{k-1}
        const double bound = tail_max_[m + 1] * pw;
        const double tail_f = bound * x / gap;
        const double tail_df = bound * ((md + 1.0) / gap + x / (gap * gap));
        if (tail_f <= kRel * f_abs && tail_df <= kRel * df_abs) break;
        if (pw == 0.0) break;
      }
    }
    return {f, df};
  }

  std::size_t calls = 0;

 private:
  std::span<const double> coeffs_;
  std::vector<double> tail_max_;
};

// Zero of g on [a, b] given opposite signs at the ends (Illinois variant of
// regula falsi, falling back to bisection when it stalls).
template <class G>
double bracketed_zero(G&& g, double a, double b, double ga, double gb) {
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    if (b - a <= 4e-16 * std::max(1.0, std::fabs(a) + std::fabs(b))) break;
    double c = (a * gb - b * ga) / (gb - ga);
    if (!(c > a && c < b) || it % 8 == 7) c = 0.5 * (a + b);
    const double gc = g(c);
    if (gc == 0.0) return c;
    if ((gc < 0.0) == (ga < 0.0)) {
      a = c;
      ga = gc;
      if (side == -1) gb *= 0.5;
      side = -1;
    } else {
      b = c;
      gb = gc;
      if (side == 1) ga *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SweepGrid make_sweep_grid(std::span<const double> weights_sq, double lo, double hi,
                          double kappa) {
  SweepGrid grid;
  if (!(hi > lo)) {
    grid.nodes = {lo, hi};
    return grid;
  }
  constexpr double kMaxStep = 0.05;
  double x = lo;
  grid.nodes.push_back(x);
  while (x < hi) {
    const auto [d0, d1] = zero_densities(weights_sq, x);
    const double density = std::max(d0, d1);
    double step = density > 0.0 ? kappa / density : kMaxStep;
    step = std::min(step, kMaxStep);
    double next = x + step;
    if (next >= hi || hi - next < 0.25 * step) next = hi;
    if (!(next > x)) next = std::nextafter(x, hi);
    grid.nodes.push_back(next);
    x = next;
  }
  return grid;
}

namespace {

SweepResult sweep(std::span<const double> coeffs, const SweepGrid& grid, bool locate,
                  std::vector<std::uint32_t>* cells) {
  SweepResult out;
  const auto& nodes = grid.nodes;
  if (nodes.size() < 2 || !(nodes.back() > nodes.front())) return out;
  Evaluator eval(coeffs);

  auto [f_prev, df_prev] = eval(nodes.front());
  // A zero exactly at the open left end belongs outside; use the sign just
  // to the right of it.
  int s_prev = f_prev == 0.0 ? sign_of(df_prev) : sign_of(f_prev);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double a = nodes[i - 1];
    const double b = nodes[i];
    const auto [f_b, df_b] = eval(b);
    int s_b = sign_of(f_b);
    if (i + 1 == nodes.size() && f_b == 0.0) s_b = -sign_of(df_b);

    const bool f_changes = s_prev != s_b;
    const bool df_changes = sign_of(df_prev) != sign_of(df_b);
    const std::size_t before = out.count;
    if (f_changes && (!df_changes || !locate)) {
      ++out.count;
      if (locate) {
        const double r = bracketed_zero([&](double t) { return eval(t).first; }, a, b, f_prev,
                                        f_b == 0.0 ? static_cast<double>(s_b) : f_b);
        out.roots.push_back(r);
      }
    } else if (df_changes) {
      const double c = bracketed_zero([&](double t) { return eval(t).second; }, a, b, df_prev,
                                      df_b);
      const double f_c = eval(c).first;
      const int s_c = sign_of(f_c);
      const bool left = s_prev != s_c;
      const bool right = s_c != s_b;
      out.count += static_cast<std::size_t>(left) + static_cast<std::size_t>(right);
      if (locate) {
        if (left) {
          out.roots.push_back(
              bracketed_zero([&](double t) { return eval(t).first; }, a, c, f_prev, f_c));
        }
        if (right) {
          out.roots.push_back(bracketed_zero([&](double t) { return eval(t).first; }, c, b, f_c,
                                             f_b == 0.0 ? static_cast<double>(s_b) : f_b));
        }
      }
    }
    if (cells != nullptr) (*cells)[i - 1] = static_cast<std::uint32_t>(out.count - before);
    f_prev = f_b;
    df_prev = df_b;
    s_prev = s_b;
  }
  out.evaluations = eval.calls;
  return out;
}

}  // namespace

SweepResult sweep_count(std::span<const double> coeffs, const SweepGrid& grid, bool locate) {
  return sweep(coeffs, grid, locate, nullptr);
}

std::vector<std::uint32_t> sweep_cell_counts(std::span<const double> coeffs,
                                             const SweepGrid& grid) {
  std::vector<std::uint32_t> cells(grid.nodes.size() > 1 ? grid.nodes.size() - 1 : 0, 0);
  sweep(coeffs, grid, false, &cells);
  return cells;
}

}  // namespace kacpoly
