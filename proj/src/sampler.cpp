#include "kacpoly/sampler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kacpoly/errors.hpp"

namespace kacpoly {

namespace {

// a_{k,m} for k = 0..2m+2 (zeros at odd k), via the ratio
// a_{k+2,m} / a_{k,m} = (k+1) / (2m-k+1).
std::vector<double> trig_moment_row(std::int64_t m) {
  std::vector<double> row(static_cast<std::size_t>(2 * m + 3), 0.0);
  double a = trig_moment(0, m);
  for (std::int64_t k = 0; k <= 2 * m + 2; k += 2) {
    row[static_cast<std::size_t>(k)] = a;
    if (k + 2 <= 2 * m + 2) {
      a *= static_cast<double>(k + 1) / static_cast<double>(2 * m - k + 1);
    }
  }
  return row;
}

const double kInvSqrt8Pi = 1.0 / std::sqrt(8.0 * std::numbers::pi);

double lienard_weight(std::int64_t m) {
  return std::sqrt(std::numbers::pi) *
         std::exp(log_double_factorial(2 * m + 1) - log_double_factorial(2 * m + 2));
}

}  // namespace

NoiseDistribution parse_distribution(std::string_view text) {
  if (text == "gauss" || text == "gaussian") return NoiseDistribution::Gaussian;
  if (text == "rademacher") return NoiseDistribution::Rademacher;
  if (text == "uniform") return NoiseDistribution::UniformSym;
  throw std::invalid_argument("unknown distribution: " + std::string(text) +
                              " (expected gauss|rademacher|uniform)");
}

std::string to_string(NoiseDistribution dist) {
  switch (dist) {
    case NoiseDistribution::Gaussian:
      return "gauss";
    case NoiseDistribution::Rademacher:
      return "rademacher";
    case NoiseDistribution::UniformSym:
      return "uniform";
  }
  return "?";
}

PerturbationKind parse_perturbation_kind(std::string_view text) {
  if (text == "center") return PerturbationKind::FullCenter;
  if (text == "lienard") return PerturbationKind::Lienard;
  throw std::invalid_argument("unknown kind: " + std::string(text) + " (expected center|lienard)");
}

std::string to_string(PerturbationKind kind) {
  return kind == PerturbationKind::Lienard ? "lienard" : "center";
}

double draw(NoiseDistribution dist, const SeedSpec& seed) {
  const auto [u1, u2] = uniform_pair(seed);
  switch (dist) {
    case NoiseDistribution::Gaussian:
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    case NoiseDistribution::Rademacher:
      return u1 < 0.5 ? -1.0 : 1.0;
    case NoiseDistribution::UniformSym:
      return std::numbers::sqrt3 * (2.0 * u1 - 1.0);
  }
  return 0.0;
}

RandomPoly sample_polynomial(const CoeffVector& coeffs, NoiseDistribution dist,
                             const SeedSpec& seed) {
  RandomPoly poly;
  poly.coeffs = coeffs;
  poly.dist = dist;
  poly.seed = seed;
  const std::size_t len = coeffs.values.size();
  poly.noise.resize(len);
  poly.realized.resize(len);
  for (std::size_t m = 0; m < len; ++m) {
    poly.noise[m] = draw(dist, seed.with_index(m));
    poly.realized[m] = coeffs.values[m] * poly.noise[m];
  }
  return poly;
}

RandomPoly sample_polynomial(const CoeffScheme& scheme, NoiseDistribution dist, std::size_t n,
                             const SeedSpec& seed) {
  return sample_polynomial(coeff_vector(scheme, n), dist, seed);
}

PerturbationCoefficients::PerturbationCoefficients(PerturbationKind kind, int degree)
    : kind_(kind), degree_(degree) {
  if (degree < 1) throw DomainError("perturbation degree must be >= 1");
  if (kind == PerturbationKind::FullCenter) {
    alpha_.assign(monomial_count(degree), 0.0);
    beta_.assign(monomial_count(degree), 0.0);
  } else {
    alpha_.assign(static_cast<std::size_t>(degree), 0.0);
  }
}

std::size_t PerturbationCoefficients::monomial_index(int j, int k) {
  const auto s = static_cast<std::size_t>(j + k);
  return (s - 1) * (s + 2) / 2 + static_cast<std::size_t>(k);
}

std::size_t PerturbationCoefficients::monomial_count(int degree) {
  const auto d = static_cast<std::size_t>(degree);
  return d * (d + 3) / 2;
}

void PerturbationCoefficients::check_pair(int j, int k) const {
  if (kind_ != PerturbationKind::FullCenter) {
    throw std::logic_error("alpha(j,k)/beta(j,k) require a FullCenter perturbation");
  }
  if (j < 0 || k < 0 || j + k < 1 || j + k > degree_) {
    throw std::out_of_range("monomial index outside 1 <= j+k <= d");
  }
}

double& PerturbationCoefficients::alpha(int j, int k) {
  check_pair(j, k);
  return alpha_[monomial_index(j, k)];
}
double PerturbationCoefficients::alpha(int j, int k) const {
  check_pair(j, k);
  return alpha_[monomial_index(j, k)];
}
double& PerturbationCoefficients::beta(int j, int k) {
  check_pair(j, k);
  return beta_[monomial_index(j, k)];
}
double PerturbationCoefficients::beta(int j, int k) const {
  check_pair(j, k);
  return beta_[monomial_index(j, k)];
}

double& PerturbationCoefficients::lienard_alpha(int k) {
  if (kind_ != PerturbationKind::Lienard) throw std::logic_error("not a Lienard perturbation");
  if (k < 1 || k > degree_) throw std::out_of_range("Lienard index outside 1..d");
  return alpha_[static_cast<std::size_t>(k - 1)];
}
double PerturbationCoefficients::lienard_alpha(int k) const {
  if (kind_ != PerturbationKind::Lienard) throw std::logic_error("not a Lienard perturbation");
  if (k < 1 || k > degree_) throw std::out_of_range("Lienard index outside 1..d");
  return alpha_[static_cast<std::size_t>(k - 1)];
}

double PerturbationCoefficients::p(double x, double y) const {
  if (kind_ == PerturbationKind::Lienard) {
    double acc = 0.0;
    for (int k = degree_; k >= 1; --k) acc = (acc + alpha_[static_cast<std::size_t>(k - 1)]) * x;
    return acc / (2.0 * std::sqrt(std::numbers::pi));
  }
  return eval_bivariate(alpha_, x, y);
}

double PerturbationCoefficients::q(double x, double y) const {
  if (kind_ == PerturbationKind::Lienard) return 0.0;
  return eval_bivariate(beta_, x, y);
}

double PerturbationCoefficients::eval_bivariate(const std::vector<double>& c, double x,
                                                double y) const {
  const auto d = static_cast<std::size_t>(degree_);
  std::vector<double> xp(d + 1), yp(d + 1);
  xp[0] = yp[0] = 1.0;
  for (std::size_t i = 1; i <= d; ++i) {
    xp[i] = xp[i - 1] * x;
    yp[i] = yp[i - 1] * y;
  }
  double acc = 0.0;
  std::size_t idx = 0;
  for (std::size_t s = 1; s <= d; ++s) {
    for (std::size_t k = 0; k <= s; ++k) acc += c[idx++] * xp[s - k] * yp[k];
  }
  return acc;
}

PerturbationCoefficients sample_perturbation(PerturbationKind kind, int degree,
                                             NoiseDistribution dist, const SeedSpec& seed) {
  PerturbationCoefficients pc(kind, degree);
  if (kind == PerturbationKind::Lienard) {
    for (int k = 1; k <= degree; ++k) {
      pc.lienard_alpha(k) = draw(dist, seed.with_index(static_cast<std::uint64_t>(k)));
    }
    return pc;
  }
  for (int s = 1; s <= degree; ++s) {
    for (int k = 0; k <= s; ++k) {
      const std::uint64_t idx = PerturbationCoefficients::monomial_index(s - k, k);
      pc.alpha(s - k, k) = draw(dist, seed.with_index(2 * idx));
      pc.beta(s - k, k) = draw(dist, seed.with_index(2 * idx + 1));
    }
  }
  return pc;
}

std::vector<double> melnikov_noise_from_perturbation(const PerturbationCoefficients& pc) {
  if (pc.kind() != PerturbationKind::FullCenter) {
    throw std::logic_error("melnikov_noise_from_perturbation requires a FullCenter perturbation");
  }
  const std::size_t n = pc.melnikov_degree();
  std::vector<double> out(n + 1);
  for (std::size_t mu = 0; mu <= n; ++mu) {
    const auto m = static_cast<std::int64_t>(mu);
    const auto row = trig_moment_row(m);
    const int s = static_cast<int>(2 * m + 1);
    double acc = 0.0;
    for (int k = 0; k <= s; ++k) {
      acc += pc.alpha(s - k, k) * row[static_cast<std::size_t>(k)] +
             pc.beta(s - k, k) * row[static_cast<std::size_t>(k + 1)];
    }
    out[mu] = kInvSqrt8Pi * acc;
  }
  return out;
}

std::vector<double> melnikov_noise_from_lienard(const PerturbationCoefficients& pc) {
  if (pc.kind() != PerturbationKind::Lienard) {
    throw std::logic_error("melnikov_noise_from_lienard requires a Lienard perturbation");
  }
  const std::size_t n = pc.melnikov_degree();
  std::vector<double> out(n + 1);
  for (std::size_t mu = 0; mu <= n; ++mu) {
    const auto m = static_cast<std::int64_t>(mu);
    out[mu] = pc.lienard_alpha(static_cast<int>(2 * m + 1)) * lienard_weight(m);
  }
  return out;
}

std::vector<double> sample_melnikov_noise(PerturbationKind kind, int degree,
                                          NoiseDistribution dist, const SeedSpec& seed) {
  if (degree < 1) throw DomainError("perturbation degree must be >= 1");
  const auto n = static_cast<std::size_t>((degree - 1) / 2);
  std::vector<double> out(n + 1);
  for (std::size_t mu = 0; mu <= n; ++mu) {
    const auto m = static_cast<std::int64_t>(mu);
    if (kind == PerturbationKind::Lienard) {
      const auto k = static_cast<std::uint64_t>(2 * m + 1);
      out[mu] = draw(dist, seed.with_index(k)) * lienard_weight(m);
      continue;
    }
    const auto row = trig_moment_row(m);
    const int s = static_cast<int>(2 * m + 1);
    double acc = 0.0;
    for (int k = 0; k <= s; ++k) {
      const std::uint64_t idx = PerturbationCoefficients::monomial_index(s - k, k);
      // Only alpha with even k and beta with odd k meet a nonzero moment.
      if (k % 2 == 0) {
        acc += draw(dist, seed.with_index(2 * idx)) * row[static_cast<std::size_t>(k)];
      } else {
        acc += draw(dist, seed.with_index(2 * idx + 1)) * row[static_cast<std::size_t>(k + 1)];
      }
    }
    out[mu] = kInvSqrt8Pi * acc;
  }
  return out;
}

}  // namespace kacpoly
