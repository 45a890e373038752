#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kacpoly/ode.hpp"
#include "kacpoly/rootcount.hpp"
#include "kacpoly/sampler.hpp"

namespace kacpoly {

/// xdot = y + eps p(x, y), ydot = -x + eps q(x, y) for FullCenter;
/// xdot = y - eps p(x), ydot = -x for Lienard.
struct PerturbedSystem {
  PerturbationCoefficients pc;
  double epsilon = 1e-3;

  PerturbationKind kind() const { return pc.kind(); }
  /// Throws DomainError unless 0 < epsilon < 1.
  void validate() const;
  PlanarField field() const;
};

/// M(r) = scale * r^2 * f(r^2) where f has coefficients c_m xi_m. The scale
/// is sqrt(8 pi) for FullCenter and 1 for Lienard, so in both cases M(r)
/// equals the flux of (p, q) through the circle of radius r.
struct MelnikovPoly {
  std::vector<double> fn_coeffs;
  double scale = 1.0;
  PerturbationKind kind = PerturbationKind::FullCenter;

  std::size_t degree() const { return fn_coeffs.empty() ? 0 : fn_coeffs.size() - 1; }
  double operator()(double r) const;
  /// d/dr of r^2 f(r^2), without the scale.
  double radial_derivative(double r) const;
  /// Sign of the first-order displacement P(r) - r relative to M(r):
  /// +1 for FullCenter, -1 for Lienard (p enters with a minus sign).
  double displacement_sign() const {
    return kind == PerturbationKind::Lienard ? -1.0 : 1.0;
  }
};

MelnikovPoly build_melnikov(const PerturbedSystem& sys);
/// Wraps f_n coefficients drawn directly (sample_melnikov_noise).
MelnikovPoly melnikov_from_noise(PerturbationKind kind, std::vector<double> fn_coeffs);

/// Trapezoid rule in theta for the circle flux integral of p dy - q dx
/// (Lienard: p dy) with max(4d + 8, 64) nodes. Throws DomainError for r <= 0.
double melnikov_flux_quadrature(const PerturbedSystem& sys, double r);

enum class CycleMethod { Melnikov, Ode };
std::string to_string(CycleMethod method);

struct LimitCycleReport {
  std::size_t count = 0;
  std::vector<double> radii;         // ascending
  std::vector<bool> nondegenerate;   // per radius
  CycleMethod method = CycleMethod::Melnikov;
  CountStatus status = CountStatus::Ok;
  double epsilon = 0.0;  // ode only: the epsilon at which the count settled
  bool partial_window = false;  // ode only: some orbits in the window escaped
  bool all_nondegenerate() const;
};

/// Positive zeros of f_n mapped to radii sqrt(x). A root is flagged
/// nondegenerate when |d/dr[r^2 f(r^2)]| > 1e-8 * ||f||_2 there.
LimitCycleReport count_bifurcating_cycles(const MelnikovPoly& mp,
                                          RootMethod method = RootMethod::Companion);
LimitCycleReport count_bifurcating_cycles(const PerturbedSystem& sys,
                                          RootMethod method = RootMethod::Companion);

/// P(r0) for the system at its epsilon. Throws Escape or NoReturn.
double poincare_return(const PerturbedSystem& sys, double r0);

struct OdeVerifyOptions {
  double epsilon_start = 1e-2;
  double epsilon_min = 1e-5;
  std::size_t grid_points = 160;
  double default_lo = 0.05;
  double default_hi = 5.0;
};

/// Fixed points of P(r) - r found by grid sign changes plus bisection over a
/// halving epsilon schedule; stops once two consecutive counts agree. The
/// window is the Melnikov radii padded by 50%, else the default range.
/// Counts are compared only between grids where every orbit returned; if that
/// never settles, the last two grids down to epsilon_min are compared over
/// the returning orbits and the report is marked partial_window. Throws
/// NonConvergent if neither settles.
LimitCycleReport verify_cycles_ode(const PerturbedSystem& sys, const OdeVerifyOptions& opts = {});

}  // namespace kacpoly
