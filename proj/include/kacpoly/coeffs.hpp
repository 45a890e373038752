#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kacpoly {

/// Natural log of k!! for k >= -1, with (-1)!! = 0!! = 1.
double log_double_factorial(std::int64_t k);

/// a_{k,m} = integral over [0, 2pi] of cos^{2m+2-k}(t) sin^k(t) dt.
/// Throws DomainError unless 0 <= k <= 2m+2.
double trig_moment(std::int64_t k, std::int64_t m);

/// Coefficient variance c_m^2 of the Melnikov polynomial of a perturbed
/// linear center with independent unit-variance perturbation coefficients.
double variance_center(std::size_t m);

/// Coefficient variance pi((2m+1)!!/(2m+2)!!)^2 of the Lienard model.
double variance_lienard(std::size_t m);

struct PerturbedCenter {
  friend bool operator==(const PerturbedCenter&, const PerturbedCenter&) = default;
};
struct Lienard {
  friend bool operator==(const Lienard&, const Lienard&) = default;
};
struct PowerLaw {
  double rho = 0.0;
  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};

/// Deterministic weight family c_{m,n}.
class CoeffScheme {
 public:
  using Variant = std::variant<PerturbedCenter, Lienard, PowerLaw>;

  CoeffScheme() = default;
  CoeffScheme(PerturbedCenter v) : v_(v) {}
  CoeffScheme(Lienard v) : v_(v) {}
  /// Throws DomainError if rho is not finite.
  CoeffScheme(PowerLaw v);

  /// Parses "center", "lienard" or "power:RHO".
  static CoeffScheme parse(std::string_view text);

  const Variant& variant() const { return v_; }
  bool is_power_law() const { return std::holds_alternative<PowerLaw>(v_); }

  /// Growth exponent: rho for PowerLaw, -1/2 for the two ODE schemes.
  double rho() const;

  /// Round-trippable label, e.g. "power:-0.5".
  std::string name() const;

  friend bool operator==(const CoeffScheme&, const CoeffScheme&) = default;

 private:
  Variant v_ = PerturbedCenter{};
};

struct CoeffVector {
  std::vector<double> values;  // c_{0,n} ... c_{n,n}
  CoeffScheme scheme;

  std::size_t degree() const { return values.empty() ? 0 : values.size() - 1; }
};

/// c_{m,n} for m = 0..n. PowerLaw uses m^rho for m >= 1 and c_0 = 1.
CoeffVector coeff_vector(const CoeffScheme& scheme, std::size_t n);

}  // namespace kacpoly
