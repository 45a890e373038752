#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/kacrice.hpp"
#include "kacpoly/melnikov.hpp"
#include "kacpoly/polynomial.hpp"
#include "kacpoly/rng.hpp"
#include "kacpoly/rootcount.hpp"
#include "kacpoly/sampler.hpp"

namespace kacpoly {

/// Named counting regions. The core interval and its inverse depend on n.
enum class RegionPreset {
  UnitInner,      // (0,1)
  UnitOuter,      // (1,inf)
  Symmetric,      // (-1,1)
  BelowMinusOne,  // (-inf,-1)
  RealLine,
  Core,           // core interval of (0,1)
  CoreInverse,    // its image under x -> 1/x
  Positive,       // (0,inf)
  Negative,       // (-inf,0)
  MinusOneZero,   // (-1,0)
};

/// Names: 01, 1inf, m11, minf_m1, R, In, In_inv, 0inf, minf0, m10.
RegionPreset parse_region(std::string_view text);
std::string to_string(RegionPreset region);
/// Throws DomainError for the core presets when n < 2.
Interval resolve_region(RegionPreset region, std::size_t n);

/// Leading-order prediction for a preset, when one exists.
std::optional<AsymptoticPrediction> region_prediction(RegionPreset region, double rho,
                                                      std::size_t n);

enum class MethodChoice { Auto, Companion, Sturm, Sweep };
MethodChoice parse_method_choice(std::string_view text);
std::string to_string(MethodChoice method);
/// Auto uses the companion matrix up to degree 128 and the sweep above.
RootMethod resolve_method(MethodChoice method, std::size_t n);

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct ExperimentConfig {
  CoeffScheme scheme;
  NoiseDistribution dist = NoiseDistribution::Gaussian;
  std::vector<std::size_t> degrees;
  std::vector<RegionPreset> regions;
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  MethodChoice method = MethodChoice::Auto;
  bool kacrice = true;  // Gaussian only
  double quad_tol = kDefaultQuadTol;
  bool moments = false;
  std::string label = "experiment";

  // checks
  std::optional<Band> ratio_band = Band{0.75, 1.25};  // mc / asymptotic
  Band growth_band{0.8, 1.2};                         // fitted / predicted coefficient
  double z_sigma = 3.0;
  double flat_tolerance = 0.2;
  double max_failure_rate = 0.01;

  /// Throws std::invalid_argument.
  void validate() const;
  /// Stream id for the trials at degree n.
  std::uint32_t stream_id(std::size_t n) const;
};

struct EstimateRow {
  std::size_t n = 0;
  RegionPreset region = RegionPreset::UnitInner;
  Interval interval;
  std::size_t trials = 0;  // successful
  std::size_t failed = 0;
  bool valid = true;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  std::optional<double> kr_value;
  std::optional<double> kr_error;
  std::optional<double> asymptotic;
  std::string asymptotic_formula;
  std::optional<double> ratio_mc_over_asymptotic;
  std::optional<double> ratio_mc_over_kr;
};

struct MomentRow {
  std::size_t n = 0;
  RegionPreset region = RegionPreset::UnitInner;
  int order = 1;
  double moment = 0.0;
  double standard_error = 0.0;
};

struct ExperimentResult {
  std::vector<EstimateRow> rows;
  std::vector<MomentRow> moments;
  std::vector<std::string> warnings;
};

/// Per-trial counts, trial-major: counts[t * regions + r]. Failed trials
/// have failed[t] set and zero counts.
struct TrialCounts {
  std::size_t regions = 0;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint8_t> failed;
};

/// Counts for every trial at degree n; the result does not depend on `workers`.
TrialCounts run_trials(const ExperimentConfig& config, std::size_t n);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Least-squares fits of values against {ln n, 1} and {sqrt(ln n), 1}.
struct GrowthFit {
  std::string basis;  // "ln n", "sqrt(ln n)" or "constant"
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ln = 0.0;
  double slope_sqrt_ln = 0.0;
  double rss_ln = 0.0;
  double rss_sqrt_ln = 0.0;
  double spread = 0.0;          // max - min
  double max_successive = 0.0;  // largest |v_{i+1} - v_i|, degrees ascending
};

/// Throws InsufficientData for fewer than 3 distinct degrees.
GrowthFit fit_growth(const std::vector<std::size_t>& degrees, const std::vector<double>& values,
                     double flat_tolerance);

/// Expected growth for a preset under a scheme: basis and coefficient.
struct ExpectedGrowth {
  std::string basis;
  std::optional<double> coefficient;  // absent for "constant"
};
std::optional<ExpectedGrowth> expected_growth(RegionPreset region, double rho);

struct RowCheck {
  std::size_t n = 0;
  std::string region;
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
};

struct RegionSummary {
  std::string region;
  std::string source;  // "mc" or "kr"
  GrowthFit fit;
  std::optional<ExpectedGrowth> expected;
  std::optional<bool> pass;
};

struct TheoryReport {
  std::vector<RowCheck> checks;
  std::vector<RegionSummary> summaries;
  bool all_pass() const;
};

/// Per-row checks only; usable with any number of degrees.
std::vector<RowCheck> check_rows(const std::vector<EstimateRow>& rows,
                                 const ExperimentConfig& config);

/// Row checks plus growth fits per region. Throws InsufficientData for
/// fewer than 3 distinct degrees.
TheoryReport compare_to_theory(const std::vector<EstimateRow>& rows,
                               const ExperimentConfig& config);

/// Random perturbed systems, one per trial, counted through the Melnikov
/// polynomial and optionally re-counted from the ODE.
struct LimitCycleBatch {
  PerturbationKind kind = PerturbationKind::FullCenter;
  int degree = 3;
  NoiseDistribution dist = NoiseDistribution::Gaussian;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  MethodChoice method = MethodChoice::Auto;
  bool ode = false;
  OdeVerifyOptions ode_options;
  std::string label = "limit-cycles";

  /// Throws std::invalid_argument.
  void validate() const;
  SeedSpec seed(std::size_t trial) const;
  /// The system drawn for a trial; its Melnikov polynomial matches the
  /// fast path used when `ode` is off.
  PerturbedSystem system(std::size_t trial, double epsilon = 1e-3) const;
};

struct LimitCycleTrial {
  std::size_t trial = 0;
  LimitCycleReport melnikov;
  std::optional<LimitCycleReport> ode;
  std::string error;  // numeric failure of either stage
};

std::vector<LimitCycleTrial> run_limit_cycle_batch(const LimitCycleBatch& batch);

}  // namespace kacpoly
