#include "kacpoly/rootcount.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <stdexcept>

#include "kacpoly/errors.hpp"
#include "kacpoly/sturm.hpp"
#include "kacpoly/sweep.hpp"

namespace kacpoly {

namespace {

// Parlett-Reinsch balancing with radix-2 scale factors (no permutations).
void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double kRadix = 2.0;
  constexpr double kRadixSq = kRadix * kRadix;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::fabs(a(j, i));
        r += std::fabs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kRadixSq;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kRadixSq;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// |f(x)| / sum |a_m| |x|^m: the relative backward error of x as a root.
double backward_error(std::span<const double> coeffs, double x) {
  double f = 0.0, scale = 0.0;
  const double ax = std::fabs(x);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    f = f * x + coeffs[i];
    scale = scale * ax + std::fabs(coeffs[i]);
  }
  return scale > 0.0 ? std::fabs(f) / scale : 0.0;
}

double polish(std::span<const double> coeffs, double x) {
  double fx = std::fabs(evaluate(coeffs, x));
  for (int it = 0; it < 6 && fx > 0.0; ++it) {
    const auto [f, df] = evaluate_with_derivative(coeffs, x);
    if (df == 0.0) break;
    const double cand = x - f / df;
    const double fc = std::fabs(evaluate(coeffs, cand));
    if (!(fc < fx)) break;
    x = cand;
    fx = fc;
  }
  return x;
}

void finish_report(RootCountReport& rep, std::span<const double> coeffs) {
  rep.count = 0;
  rep.max_residual = 0.0;
  for (std::size_t i = 0; i < rep.roots.size(); ++i) {
    rep.count += rep.multiplicity[i];
    rep.max_residual = std::max(rep.max_residual, backward_error(coeffs, rep.roots[i]));
  }
}

// Roots exactly on a query endpoint: if f vanishes there in floating point,
// a nearby polished root is moved onto it before membership is decided.
void snap_to_endpoints(std::span<const double> coeffs, const Interval& iv,
                       std::vector<double>& roots) {
  for (const double e : {iv.lo, iv.hi}) {
    if (!std::isfinite(e) || evaluate(coeffs, e) != 0.0) continue;
    for (double& r : roots) {
      if (std::fabs(r - e) <= 1e-8 * (1.0 + std::fabs(e))) r = e;
    }
  }
}

RootCountReport count_companion(std::span<const double> coeffs, const Interval& iv, double tol) {
  RootCountReport all = real_roots(coeffs, tol);
  RootCountReport out;
  out.method = RootMethod::Companion;
  out.status = all.status;
  out.near_boundary = all.near_boundary;
  std::vector<double> snapped = all.roots;
  snap_to_endpoints(coeffs, iv, snapped);
  for (std::size_t i = 0; i < snapped.size(); ++i) {
    if (!iv.contains(snapped[i])) continue;
    if (!out.roots.empty() && out.roots.back() == snapped[i]) {
      out.multiplicity.back() += all.multiplicity[i];
      continue;
    }
    out.roots.push_back(snapped[i]);
    out.multiplicity.push_back(all.multiplicity[i]);
  }
  finish_report(out, coeffs);
  return out;
}

RootCountReport count_sturm(std::span<const double> coeffs, const Interval& iv) {
  RootCountReport out;
  out.method = RootMethod::Sturm;
  if (is_zero_polynomial(coeffs)) {
    out.status = CountStatus::ZeroPolynomial;
    return out;
  }
  const auto ints = exact_integer_coeffs(coeffs);
  const auto found = sturm_roots(ints, RationalInterval::from(iv));
  out.roots = found.roots;
  out.multiplicity = found.multiplicity;
  finish_report(out, coeffs);
  return out;
}

struct ChartPiece {
  const Coeffs* chart;
  double lo;
  double hi;
  int map;  // 0: x, 1: -x, 2: 1/u, 3: -1/u
};

RootCountReport count_sweep(std::span<const double> coeffs, const Interval& iv) {
  RootCountReport out;
  out.method = RootMethod::Sweep;
  const Coeffs a = trim_leading_zeros(coeffs);
  if (a.empty()) {
    out.status = CountStatus::ZeroPolynomial;
    return out;
  }
  if (iv.empty()) return out;
  const Coeffs b = mirrored(a);
  const Coeffs c = trim_leading_zeros(reversed(a));
  const Coeffs d = mirrored(c);
  auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };

  std::vector<ChartPiece> pieces;
  pieces.push_back({&a, std::max(iv.lo, 0.0), std::min(iv.hi, 1.0), 0});
  pieces.push_back({&b, std::max(-iv.hi, 0.0), std::min(-iv.lo, 1.0), 1});
  pieces.push_back({&c, inv(iv.hi), inv(std::max(iv.lo, 1.0)), 2});
  pieces.push_back({&d, inv(-iv.lo), inv(std::max(-iv.hi, 1.0)), 3});
  if (iv.hi <= 1.0) pieces[2].hi = pieces[2].lo;
  if (iv.lo >= -1.0) pieces[3].hi = pieces[3].lo;

  std::vector<std::pair<double, std::size_t>> found;
  for (const auto& pc : pieces) {
    if (!(pc.hi > pc.lo)) continue;
    std::vector<double> w(pc.chart->size());
    for (std::size_t m = 0; m < w.size(); ++m) w[m] = (*pc.chart)[m] * (*pc.chart)[m];
    const SweepGrid grid = make_sweep_grid(w, pc.lo, pc.hi);
    const SweepResult res = sweep_count(*pc.chart, grid, true);
    for (const double r : res.roots) {
      double x = r;
      switch (pc.map) {
        case 1: x = -r; break;
        case 2: x = 1.0 / r; break;
        case 3: x = -1.0 / r; break;
        default: break;
      }
      found.emplace_back(polish(a, x), 1);
    }
  }
  // Isolated points: the chart seams and closed endpoints.
  std::vector<double> points = {-1.0, 0.0, 1.0};
  if (iv.lo_closed) points.push_back(iv.lo);
  if (iv.hi_closed) points.push_back(iv.hi);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (const double p : points) {
    if (!iv.contains(p)) continue;
    if (p == 0.0) {
      std::size_t z = 0;
      while (z < a.size() && a[z] == 0.0) ++z;
      if (z > 0) found.emplace_back(0.0, z);
    } else if (evaluate(a, p) == 0.0) {
      found.emplace_back(p, 1);
    }
  }
  std::sort(found.begin(), found.end());
  for (const auto& [r, m] : found) {
    out.roots.push_back(r);
    out.multiplicity.push_back(m);
  }
  finish_report(out, a);
  return out;
}

}  // namespace

RootMethod parse_root_method(std::string_view text) {
  if (text == "companion") return RootMethod::Companion;
  if (text == "sturm") return RootMethod::Sturm;
  if (text == "sweep") return RootMethod::Sweep;
  throw std::invalid_argument("unknown root method: " + std::string(text) +
                              " (expected companion|sturm|sweep)");
}

std::string to_string(RootMethod method) {
  switch (method) {
    case RootMethod::Companion:
      return "companion";
    case RootMethod::Sturm:
      return "sturm";
    case RootMethod::Sweep:
      return "sweep";
  }
  return "?";
}

RootCountReport real_roots(std::span<const double> coeffs, double tol) {
  RootCountReport rep;
  rep.method = RootMethod::Companion;
  const Coeffs trimmed = trim_leading_zeros(coeffs);
  if (trimmed.empty()) {
    rep.status = CountStatus::ZeroPolynomial;
    return rep;
  }
  std::size_t zeros = 0;
  while (trimmed[zeros] == 0.0) ++zeros;
  const std::span<const double> core(trimmed.data() + zeros, trimmed.size() - zeros);
  const std::size_t k = core.size() - 1;

  std::vector<double> candidates;
  if (k == 1) {
    candidates.push_back(-core[0] / core[1]);
  } else if (k > 1) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k),
                                                 static_cast<Eigen::Index>(k));
    const double lead = core[k];
    for (std::size_t i = 0; i < k; ++i) {
      comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k - 1)) = -core[i] / lead;
      if (i > 0) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    balance(comp);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
    if (solver.info() != Eigen::Success) {
      throw EigenFailure("companion eigenvalues did not converge (degree " + std::to_string(k) +
                         ")");
    }
    for (const auto& lam : solver.eigenvalues()) {
      const double scale = 1.0 + std::fabs(lam.real());
      const double ratio = std::fabs(lam.imag()) / scale;
      if (ratio > 0.0 && ratio <= 10.0 * tol) rep.near_boundary = true;
      if (ratio < tol || lam.imag() == 0.0) candidates.push_back(lam.real());
    }
  }
  for (double& x : candidates) x = polish(core, x);
  std::sort(candidates.begin(), candidates.end());

  std::vector<std::pair<double, std::size_t>> merged;
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i + 1;
    double sum = candidates[i];
    while (j < candidates.size() &&
           candidates[j] - candidates[j - 1] <= 10.0 * tol * (1.0 + std::fabs(candidates[j]))) {
      sum += candidates[j];
      ++j;
    }
    merged.emplace_back(sum / static_cast<double>(j - i), j - i);
    i = j;
  }
  if (zeros > 0) merged.emplace_back(0.0, zeros);
  std::sort(merged.begin(), merged.end());
  for (const auto& [r, m] : merged) {
    if (!rep.roots.empty() && rep.roots.back() == r) {
      rep.multiplicity.back() += m;
      continue;
    }
    rep.roots.push_back(r);
    rep.multiplicity.push_back(m);
  }
  finish_report(rep, trimmed);
  return rep;
}

RootCountReport count_in_interval(std::span<const double> coeffs, const Interval& interval,
                                  RootMethod method, double tol) {
  switch (method) {
    case RootMethod::Companion:
      return count_companion(coeffs, interval, tol);
    case RootMethod::Sturm:
      return count_sturm(coeffs, interval);
    case RootMethod::Sweep:
      return count_sweep(coeffs, interval);
  }
  throw std::logic_error("unreachable root method");
}

namespace {

// Piece of an open interval seen in chart k (x, -x, 1/x, -1/x), as a
// subinterval of [0, 1]; empty pieces have hi <= lo.
std::pair<double, double> chart_piece(const Interval& iv, int chart) {
  auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
  switch (chart) {
    case 0:
      return {std::max(iv.lo, 0.0), std::min(iv.hi, 1.0)};
    case 1:
      return {std::max(-iv.hi, 0.0), std::min(-iv.lo, 1.0)};
    case 2:
      if (iv.hi <= 1.0) return {0.0, 0.0};
      return {inv(iv.hi), inv(std::max(iv.lo, 1.0))};
    default:
      if (iv.lo >= -1.0) return {0.0, 0.0};
      return {inv(-iv.lo), inv(std::max(-iv.hi, 1.0))};
  }
}

}  // namespace

RegionCounter::RegionCounter(std::span<const double> weights, std::vector<Interval> regions,
                             RootMethod method, double tol)
    : regions_(std::move(regions)), method_(method), tol_(tol) {
  for (const auto& iv : regions_) {
    if (iv.lo_closed || iv.hi_closed) {
      throw std::invalid_argument("RegionCounter needs open regions: " + iv.to_string());
    }
  }
  if (method_ != RootMethod::Sweep) return;

  std::vector<double> sq(weights.size());
  for (std::size_t m = 0; m < sq.size(); ++m) sq[m] = weights[m] * weights[m];
  std::vector<double> sq_rev(sq.rbegin(), sq.rend());

  ranges_.resize(regions_.size());
  for (int chart = 0; chart < 4; ++chart) {
    double lo = 1.0, hi = 0.0;
    std::vector<double> cuts;
    for (const auto& iv : regions_) {
      const auto [a, b] = chart_piece(iv, chart);
      if (!(b > a)) continue;
      lo = std::min(lo, a);
      hi = std::max(hi, b);
      cuts.push_back(a);
      cuts.push_back(b);
    }
    if (!(hi > lo)) continue;
    auto nodes = make_sweep_grid(chart < 2 ? sq : sq_rev, lo, hi).nodes;
    nodes.insert(nodes.end(), cuts.begin(), cuts.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const auto [a, b] = chart_piece(regions_[r], chart);
      if (!(b > a)) continue;
      const auto first = std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin();
      const auto last = std::lower_bound(nodes.begin(), nodes.end(), b) - nodes.begin();
      ranges_[r][static_cast<std::size_t>(chart)] = {static_cast<std::size_t>(first),
                                                     static_cast<std::size_t>(last)};
    }
    nodes_[static_cast<std::size_t>(chart)] = std::move(nodes);
  }
}

RegionCounter::Result RegionCounter::count(std::span<const double> coeffs) const {
  Result out;
  out.counts.assign(regions_.size(), 0);
  const Coeffs a = trim_leading_zeros(coeffs);
  if (a.empty()) {
    out.status = CountStatus::ZeroPolynomial;
    return out;
  }
  if (method_ == RootMethod::Companion) {
    const auto all = real_roots(a, tol_);
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      std::vector<double> snapped = all.roots;
      snap_to_endpoints(a, regions_[r], snapped);
      for (std::size_t i = 0; i < snapped.size(); ++i) {
        if (regions_[r].contains(snapped[i])) out.counts[r] += all.multiplicity[i];
      }
    }
    return out;
  }
  if (method_ == RootMethod::Sturm) {
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      out.counts[r] = count_sturm(a, regions_[r]).count;
    }
    return out;
  }

  // Zeros at the origin are divided out so that the x and -x charts start
  // from a nonzero value.
  std::size_t zeros = 0;
  while (a[zeros] == 0.0) ++zeros;
  const Coeffs core(a.begin() + static_cast<std::ptrdiff_t>(zeros), a.end());
  std::array<Coeffs, 4> charts;
  if (!nodes_[0].empty()) charts[0] = core;
  if (!nodes_[1].empty()) charts[1] = mirrored(core);
  if (!nodes_[2].empty() || !nodes_[3].empty()) charts[2] = reversed(a);
  if (!nodes_[3].empty()) charts[3] = mirrored(charts[2]);

  for (std::size_t chart = 0; chart < 4; ++chart) {
    if (nodes_[chart].empty()) continue;
    const auto cells = sweep_cell_counts(charts[chart], SweepGrid{nodes_[chart]});
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const auto& range = ranges_[r][chart];
      for (std::size_t i = range.first; i < range.last; ++i) out.counts[r] += cells[i];
    }
  }
  // chart seams
  const bool zero_at_one = evaluate(a, 1.0) == 0.0;
  const bool zero_at_minus_one = evaluate(a, -1.0) == 0.0;
  for (std::size_t r = 0; r < regions_.size(); ++r) {
    const auto& iv = regions_[r];
    if (zeros > 0 && iv.contains(0.0)) out.counts[r] += zeros;
    if (zero_at_one && iv.contains(1.0)) out.counts[r] += 1;
    if (zero_at_minus_one && iv.contains(-1.0)) out.counts[r] += 1;
  }
  return out;
}

}  // namespace kacpoly
