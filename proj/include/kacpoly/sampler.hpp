#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/rng.hpp"

namespace kacpoly {

/// Mean-zero, unit-variance noise laws. UniformSym is uniform on [-sqrt3, sqrt3].
enum class NoiseDistribution { Gaussian, Rademacher, UniformSym };

/// Accepts "gauss"/"gaussian", "rademacher", "uniform".
NoiseDistribution parse_distribution(std::string_view text);
std::string to_string(NoiseDistribution dist);

/// One variate, a pure function of (dist, seed).
double draw(NoiseDistribution dist, const SeedSpec& seed);

struct RandomPoly {
  CoeffVector coeffs;
  NoiseDistribution dist = NoiseDistribution::Gaussian;
  SeedSpec seed;                 // index field unused; noise[m] uses index m
  std::vector<double> noise;     // xi_0 .. xi_n
  std::vector<double> realized;  // coeffs.values[m] * noise[m]

  std::size_t degree() const { return coeffs.degree(); }
};

RandomPoly sample_polynomial(const CoeffVector& coeffs, NoiseDistribution dist,
                             const SeedSpec& seed);
RandomPoly sample_polynomial(const CoeffScheme& scheme, NoiseDistribution dist, std::size_t n,
                             const SeedSpec& seed);

enum class PerturbationKind { FullCenter, Lienard };
/// "center" or "lienard".
PerturbationKind parse_perturbation_kind(std::string_view text);
std::string to_string(PerturbationKind kind);

/// Coefficients of a degree-d polynomial perturbation. FullCenter stores
/// alpha_{j,k}, beta_{j,k} for 1 <= j+k <= d in graded order; Lienard stores
/// alpha_1..alpha_d.
class PerturbationCoefficients {
 public:
  /// All-zero perturbation; throws DomainError if degree < 1.
  PerturbationCoefficients(PerturbationKind kind, int degree);

  PerturbationKind kind() const { return kind_; }
  int degree() const { return degree_; }
  /// floor((d-1)/2): degree of the induced Melnikov polynomial f_n.
  std::size_t melnikov_degree() const { return static_cast<std::size_t>((degree_ - 1) / 2); }

  /// Position of x^j y^k among monomials with 1 <= j+k <= d.
  static std::size_t monomial_index(int j, int k);
  static std::size_t monomial_count(int degree);

  double& alpha(int j, int k);
  double alpha(int j, int k) const;
  double& beta(int j, int k);
  double beta(int j, int k) const;
  /// Lienard coefficient alpha_k, 1 <= k <= d.
  double& lienard_alpha(int k);
  double lienard_alpha(int k) const;

  /// p(x, y) and q(x, y) for FullCenter; for Lienard p is the scaled
  /// single-variable polynomial (1/(2 sqrt(pi))) sum alpha_k x^k and q = 0.
  double p(double x, double y) const;
  double q(double x, double y) const;

 private:
  void check_pair(int j, int k) const;
  double eval_bivariate(const std::vector<double>& c, double x, double y) const;

  PerturbationKind kind_;
  int degree_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

/// Draws every perturbation coefficient from its own stream. alpha_{j,k} uses
/// index 2*monomial_index, beta_{j,k} index 2*monomial_index+1; Lienard
/// alpha_k uses index k.
PerturbationCoefficients sample_perturbation(PerturbationKind kind, int degree,
                                             NoiseDistribution dist, const SeedSpec& seed);

/// Entries c_{m,n} xi_m of f_n for a full perturbed center:
/// (8 pi)^{-1/2} sum_{j+k=2m+1} [alpha_{j,k} a_{k,m} + beta_{j,k} a_{k+1,m}].
std::vector<double> melnikov_noise_from_perturbation(const PerturbationCoefficients& pc);

/// Entries alpha_{2m+1} sqrt(pi) (2m+1)!!/(2m+2)!! for the Lienard model.
std::vector<double> melnikov_noise_from_lienard(const PerturbationCoefficients& pc);

/// Same values as sampling the perturbation and reducing it, but only the
/// coefficients that reach f_n are drawn (identical streams).
std::vector<double> sample_melnikov_noise(PerturbationKind kind, int degree,
                                          NoiseDistribution dist, const SeedSpec& seed);

}  // namespace kacpoly
