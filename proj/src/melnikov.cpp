#include "kacpoly/melnikov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "kacpoly/errors.hpp"
#include "kacpoly/polynomial.hpp"

namespace kacpoly {

namespace {

const double kSqrt8Pi = std::sqrt(8.0 * std::numbers::pi);

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// g(r) = P(r) - r, or nullopt where the orbit escapes or fails to return.
std::optional<double> displacement(const PerturbedSystem& sys, double r) {
  try {
    return poincare_return(sys, r) - r;
  } catch (const Escape&) {
    return std::nullopt;
  } catch (const NoReturn&) {
    return std::nullopt;
  }
}

struct Sample {
  double r;
  double g;
};

std::vector<Sample> sample_grid(const PerturbedSystem& sys, double lo, double hi, std::size_t n) {
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (const auto g = displacement(sys, r)) out.push_back({r, *g});
  }
  return out;
}

std::size_t sign_changes(const std::vector<Sample>& s) {
  std::size_t c = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if ((s[i].g > 0.0) != (s[i + 1].g > 0.0)) ++c;
  }
  return c;
}

double bisect_fixed_point(const PerturbedSystem& sys, Sample a, Sample b) {
  for (int it = 0; it < 50 && b.r - a.r > 1e-12 * b.r; ++it) {
    const double mid = 0.5 * (a.r + b.r);
    const auto g = displacement(sys, mid);
    if (!g) break;
    if ((*g > 0.0) == (a.g > 0.0)) {
      a = {mid, *g};
    } else {
      b = {mid, *g};
    }
  }
  return 0.5 * (a.r + b.r);
}

}  // namespace

void PerturbedSystem::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

PlanarField PerturbedSystem::field() const {
  const PerturbationCoefficients* p = &pc;
  const double eps = epsilon;
  if (pc.kind() == PerturbationKind::Lienard) {
    return [p, eps](const Vec2& v) { return Vec2{v[1] - eps * p->p(v[0], 0.0), -v[0]}; };
  }
  return [p, eps](const Vec2& v) {
    return Vec2{v[1] + eps * p->p(v[0], v[1]), -v[0] + eps * p->q(v[0], v[1])};
  };
}

double MelnikovPoly::operator()(double r) const {
  const double x = r * r;
  return scale * x * evaluate(fn_coeffs, x);
}

double MelnikovPoly::radial_derivative(double r) const {
  // d/dr [x f(x)] with x = r^2 is 2r f(x) + 2r^3 f'(x)
  const double x = r * r;
  const auto [f, df] = evaluate_with_derivative(fn_coeffs, x);
  return 2.0 * r * f + 2.0 * r * x * df;
}

MelnikovPoly build_melnikov(const PerturbedSystem& sys) {
  if (sys.kind() == PerturbationKind::Lienard) {
    return melnikov_from_noise(sys.kind(), melnikov_noise_from_lienard(sys.pc));
  }
  return melnikov_from_noise(sys.kind(), melnikov_noise_from_perturbation(sys.pc));
}

MelnikovPoly melnikov_from_noise(PerturbationKind kind, std::vector<double> fn_coeffs) {
  MelnikovPoly mp;
  mp.kind = kind;
  mp.scale = kind == PerturbationKind::Lienard ? 1.0 : kSqrt8Pi;
  mp.fn_coeffs = std::move(fn_coeffs);
  return mp;
}

double melnikov_flux_quadrature(const PerturbedSystem& sys, double r) {
  if (!(r > 0.0)) throw DomainError("flux radius must be positive");
  const int nodes = std::max(4 * sys.pc.degree() + 8, 64);
  const bool lienard = sys.kind() == PerturbationKind::Lienard;
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / nodes;
    const double x = r * std::cos(theta), y = r * std::sin(theta);
    // p dy - q dx with dy = x dtheta, dx = -y dtheta
    acc += lienard ? sys.pc.p(x, 0.0) * x : sys.pc.p(x, y) * x + sys.pc.q(x, y) * y;
  }
  return acc * 2.0 * std::numbers::pi / nodes;
}

std::string to_string(CycleMethod method) {
  return method == CycleMethod::Ode ? "ode" : "melnikov";
}

bool LimitCycleReport::all_nondegenerate() const {
  return std::all_of(nondegenerate.begin(), nondegenerate.end(), [](bool b) { return b; });
}

LimitCycleReport count_bifurcating_cycles(const MelnikovPoly& mp, RootMethod method) {
  LimitCycleReport out;
  out.method = CycleMethod::Melnikov;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto rep = count_in_interval(mp.fn_coeffs, Interval::open(0.0, inf), method);
  out.status = rep.status;
  const double threshold = 1e-8 * l2_norm(mp.fn_coeffs);
  for (std::size_t i = 0; i < rep.roots.size(); ++i) {
    const double r = std::sqrt(rep.roots[i]);
    for (std::size_t k = 0; k < rep.multiplicity[i]; ++k) {
      out.radii.push_back(r);
      // a repeated root is degenerate by definition
      out.nondegenerate.push_back(rep.multiplicity[i] == 1 &&
                                  std::fabs(mp.radial_derivative(r)) > threshold);
    }
  }
  out.count = out.radii.size();
  return out;
}

LimitCycleReport count_bifurcating_cycles(const PerturbedSystem& sys, RootMethod method) {
  return count_bifurcating_cycles(build_melnikov(sys), method);
}

double poincare_return(const PerturbedSystem& sys, double r0) {
  if (!(r0 > 0.0)) throw DomainError("return map needs r0 > 0");
  return first_return(sys.field(), r0).x;
}

LimitCycleReport verify_cycles_ode(const PerturbedSystem& sys, const OdeVerifyOptions& opts) {
  const auto mel = count_bifurcating_cycles(sys);
  double lo = opts.default_lo, hi = opts.default_hi;
  if (!mel.radii.empty()) {
    lo = 0.5 * mel.radii.front();
    hi = 1.5 * mel.radii.back();
  }
  PerturbedSystem run = sys;
  auto report = [&](const std::vector<Sample>& grid, bool partial) {
    LimitCycleReport out;
    out.method = CycleMethod::Ode;
    out.epsilon = run.epsilon;
    out.partial_window = partial;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if ((grid[i].g > 0.0) != (grid[i + 1].g > 0.0)) {
        out.radii.push_back(bisect_fixed_point(run, grid[i], grid[i + 1]));
        out.nondegenerate.push_back(true);
      }
    }
    out.count = out.radii.size();
    return out;
  };
  // Counts are compared only between grids on which every orbit returned;
  // the last two grids serve as a fallback once epsilon_min is reached.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t previous_complete = kNone;
  std::size_t previous_any = kNone;
  std::size_t last_any = kNone;
  std::vector<Sample> last_grid;
  for (double eps = opts.epsilon_start; eps >= opts.epsilon_min * (1 - 1e-12); eps *= 0.5) {
    run.epsilon = eps;
    auto grid = sample_grid(run, lo, hi, opts.grid_points);
    const std::size_t changes = sign_changes(grid);
    const bool complete = grid.size() == opts.grid_points;
    if (complete && previous_complete == changes) return report(grid, false);
    previous_complete = complete ? changes : kNone;
    previous_any = last_any;
    last_any = changes;
    last_grid = std::move(grid);
  }
  if (last_any != kNone && previous_any == last_any) return report(last_grid, true);
  throw NonConvergent("fixed-point count did not settle before epsilon " +
                      std::to_string(opts.epsilon_min));
}

}  // namespace kacpoly
