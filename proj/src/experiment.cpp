#include "kacpoly/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "kacpoly/errors.hpp"

namespace kacpoly {

namespace {

struct RegionName {
  RegionPreset region;
  std::string_view name;
};

constexpr RegionName kRegionNames[] = {
    {RegionPreset::UnitInner, "01"},      {RegionPreset::UnitOuter, "1inf"},
    {RegionPreset::Symmetric, "m11"},     {RegionPreset::BelowMinusOne, "minf_m1"},
    {RegionPreset::RealLine, "R"},        {RegionPreset::Core, "In"},
    {RegionPreset::CoreInverse, "In_inv"}, {RegionPreset::Positive, "0inf"},
    {RegionPreset::Negative, "minf0"},    {RegionPreset::MinusOneZero, "m10"},
};

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

RegionPreset parse_region(std::string_view text) {
  for (const auto& r : kRegionNames) {
    if (r.name == text) return r.region;
  }
  throw std::invalid_argument(fmt::format("unknown region '{}'", text));
}

std::string to_string(RegionPreset region) {
  for (const auto& r : kRegionNames) {
    if (r.region == region) return std::string(r.name);
  }
  return "?";
}

Interval resolve_region(RegionPreset region, std::size_t n) {
  switch (region) {
    case RegionPreset::UnitInner:
      return Interval::open(0.0, 1.0);
    case RegionPreset::UnitOuter:
      return Interval::open(1.0, kInf);
    case RegionPreset::Symmetric:
      return Interval::open(-1.0, 1.0);
    case RegionPreset::BelowMinusOne:
      return Interval::open(-kInf, -1.0);
    case RegionPreset::RealLine:
      return Interval::real_line();
    case RegionPreset::Positive:
      return Interval::open(0.0, kInf);
    case RegionPreset::Negative:
      return Interval::open(-kInf, 0.0);
    case RegionPreset::MinusOneZero:
      return Interval::open(-1.0, 0.0);
    case RegionPreset::Core:
    case RegionPreset::CoreInverse: {
      const auto core = core_interval(n);
      if (core.empty) return Interval::open(1.0, 1.0);
      if (region == RegionPreset::Core) return core.interval();
      return Interval::open(1.0 / core.hi, 1.0 / core.lo);
    }
  }
  throw std::logic_error("unhandled region");
}

std::optional<AsymptoticPrediction> region_prediction(RegionPreset region, double rho,
                                                      std::size_t n) {
  if (n < 3) return std::nullopt;
  switch (region) {
    case RegionPreset::UnitInner:
    case RegionPreset::MinusOneZero:
    case RegionPreset::Core:
      return asymptotic_prediction(rho, KacRegion::Inner, n);
    case RegionPreset::UnitOuter:
    case RegionPreset::BelowMinusOne:
    case RegionPreset::CoreInverse:
      return asymptotic_prediction(rho, KacRegion::Outer, n);
    case RegionPreset::Symmetric:
      return asymptotic_prediction(rho, KacRegion::Symmetric, n);
    case RegionPreset::RealLine:
      return asymptotic_prediction(rho, KacRegion::RealLine, n);
    case RegionPreset::Positive:
    case RegionPreset::Negative: {
      auto inner = asymptotic_prediction(rho, KacRegion::Inner, n);
      const auto outer = asymptotic_prediction(rho, KacRegion::Outer, n);
      AsymptoticPrediction out = inner;
      out.formula = inner.formula + " + " + outer.formula;
      if (inner.value && outer.value) {
        out.value = *inner.value + *outer.value;
      } else if (outer.value) {
        // bounded inner part is of lower order
        out.value = outer.value;
        out.formula = outer.formula;
      }
      return out;
    }
  }
  return std::nullopt;
}

MethodChoice parse_method_choice(std::string_view text) {
  if (text == "auto") return MethodChoice::Auto;
  if (text == "companion") return MethodChoice::Companion;
  if (text == "sturm") return MethodChoice::Sturm;
  if (text == "sweep") return MethodChoice::Sweep;
  throw std::invalid_argument(fmt::format("unknown method '{}'", text));
}

std::string to_string(MethodChoice method) {
  switch (method) {
    case MethodChoice::Auto:
      return "auto";
    case MethodChoice::Companion:
      return "companion";
    case MethodChoice::Sturm:
      return "sturm";
    case MethodChoice::Sweep:
      return "sweep";
  }
  return "?";
}

RootMethod resolve_method(MethodChoice method, std::size_t n) {
  switch (method) {
    case MethodChoice::Companion:
      return RootMethod::Companion;
    case MethodChoice::Sturm:
      return RootMethod::Sturm;
    case MethodChoice::Sweep:
      return RootMethod::Sweep;
    case MethodChoice::Auto:
      break;
  }
  return n <= 128 ? RootMethod::Companion : RootMethod::Sweep;
}

void ExperimentConfig::validate() const {
  if (degrees.empty()) throw std::invalid_argument("config: degrees must be nonempty");
  if (regions.empty()) throw std::invalid_argument("config: regions must be nonempty");
  if (trials < 2) throw std::invalid_argument("config: trials must be >= 2");
  if (trials > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("config: too many trials");
  }
  if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  if (!(quad_tol > 0.0)) throw std::invalid_argument("config: quad_tol must be positive");
  if (ratio_band && !(ratio_band->lo <= ratio_band->hi)) {
    throw std::invalid_argument("config: ratio_band must have lo <= hi");
  }
  if (!(growth_band.lo <= growth_band.hi)) {
    throw std::invalid_argument("config: growth_band must have lo <= hi");
  }
  if (!(z_sigma > 0.0)) throw std::invalid_argument("config: z_sigma must be positive");
  if (!(flat_tolerance >= 0.0)) throw std::invalid_argument("config: flat_tolerance must be >= 0");
  if (!(max_failure_rate >= 0.0)) {
    throw std::invalid_argument("config: max_failure_rate must be >= 0");
  }
  for (auto region : regions) {
    if ((region == RegionPreset::Core || region == RegionPreset::CoreInverse) &&
        std::any_of(degrees.begin(), degrees.end(), [](std::size_t n) { return n < 2; })) {
      throw std::invalid_argument("config: core-interval regions need every degree >= 2");
    }
  }
}

std::uint32_t ExperimentConfig::stream_id(std::size_t n) const {
  return experiment_id(fmt::format("{}|{}|{}|{}", label, scheme.name(), to_string(dist), n));
}

TrialCounts run_trials(const ExperimentConfig& config, std::size_t n) {
  const auto cv = coeff_vector(config.scheme, n);
  std::vector<Interval> intervals;
  for (auto r : config.regions) intervals.push_back(resolve_region(r, n));
  const RegionCounter counter(cv.values, intervals, resolve_method(config.method, n));

  TrialCounts out;
  out.regions = intervals.size();
  out.counts.assign(config.trials * out.regions, 0);
  out.failed.assign(config.trials, 0);
  const std::uint32_t stream = config.stream_id(n);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= config.trials) return;
      try {
        const auto poly = sample_polynomial(
            cv, config.dist,
            SeedSpec{config.master_seed, stream, static_cast<std::uint32_t>(t), 0});
        const auto res = counter.count(poly.realized);
        if (res.status != CountStatus::Ok) {
          out.failed[t] = 1;
          continue;
        }
        for (std::size_t r = 0; r < out.regions; ++r) {
          out.counts[t * out.regions + r] = static_cast<std::uint32_t>(res.counts[r]);
        }
      } catch (const NumericFailure&) {
        out.failed[t] = 1;
      } catch (const DegreeTooLarge&) {
        out.failed[t] = 1;
      }
    }
  };
  const std::size_t threads = std::min(config.workers, config.trials);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  return out;
}

namespace {

// Mean and standard error of the mean from exact integer power sums.
struct Moments {
  long double sum = 0, sum_sq = 0;
  std::size_t count = 0;
  void add(long double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? static_cast<double>(sum / count) : 0.0; }
  double standard_error() const {
    if (count < 2) return 0.0;
    const long double m = sum / count;
    const long double var = std::max<long double>((sum_sq - count * m * m) / (count - 1), 0);
    return static_cast<double>(std::sqrt(var / count));
  }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  const bool gaussian = config.dist == NoiseDistribution::Gaussian;
  for (const std::size_t n : config.degrees) {
    const auto trials = run_trials(config, n);
    const auto cv = coeff_vector(config.scheme, n);
    std::size_t failed = 0;
    for (auto f : trials.failed) failed += f;
    const std::size_t ok = config.trials - failed;
    const bool valid =
        ok >= 2 && static_cast<double>(failed) <=
                       config.max_failure_rate * static_cast<double>(config.trials);
    if (failed > 0) {
      result.warnings.push_back(fmt::format("n={}: {} of {} trials failed", n, failed,
                                            config.trials));
    }

    for (std::size_t r = 0; r < config.regions.size(); ++r) {
      EstimateRow row;
      row.n = n;
      row.region = config.regions[r];
      row.interval = resolve_region(row.region, n);
      row.trials = ok;
      row.failed = failed;
      row.valid = valid;

      std::array<Moments, 3> powers;
      for (std::size_t t = 0; t < config.trials; ++t) {
        if (trials.failed[t]) continue;
        const long double c = trials.counts[t * trials.regions + r];
        powers[0].add(c);
        powers[1].add(c * c);
        powers[2].add(c * c * c);
      }
      row.mc_mean = powers[0].mean();
      row.mc_stderr = powers[0].standard_error();

      if (config.kacrice && gaussian) {
        if (row.interval.empty()) {
          row.kr_value = 0.0;
          row.kr_error = 0.0;
        } else {
          try {
            const auto kr = expected_roots_gaussian(cv, row.interval, config.quad_tol);
            row.kr_value = kr.value;
            row.kr_error = kr.error_estimate;
          } catch (const NumericFailure& e) {
            result.warnings.push_back(
                fmt::format("n={} region={}: Kac-Rice failed: {}", n, to_string(row.region),
                            e.what()));
          }
        }
      }
      if (const auto pred = region_prediction(row.region, config.scheme.rho(), n)) {
        row.asymptotic = pred->value;
        row.asymptotic_formula = pred->formula;
      }
      if (row.asymptotic && *row.asymptotic > 0.1) {
        row.ratio_mc_over_asymptotic = row.mc_mean / *row.asymptotic;
      }
      if (row.kr_value && *row.kr_value > 0.1) row.ratio_mc_over_kr = row.mc_mean / *row.kr_value;
      result.rows.push_back(row);

      if (config.moments) {
        for (int order = 1; order <= 3; ++order) {
          const auto& m = powers[static_cast<std::size_t>(order - 1)];
          result.moments.push_back(MomentRow{n, row.region, order, m.mean(), m.standard_error()});
        }
      }
    }
  }
  return result;
}

GrowthFit fit_growth(const std::vector<std::size_t>& degrees, const std::vector<double>& values,
                     double flat_tolerance) {
  if (degrees.size() != values.size()) {
    throw std::invalid_argument("fit_growth: degrees and values differ in length");
  }
  std::vector<std::pair<std::size_t, double>> pts;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] >= 2) pts.emplace_back(degrees[i], values[i]);
  }
  std::sort(pts.begin(), pts.end());
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == 0 || pts[i].first != pts[i - 1].first) ++distinct;
  }
  if (distinct < 3) throw InsufficientData("growth fit needs at least 3 distinct degrees >= 2");

  auto affine = [&](auto basis, double& slope, double& intercept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(pts.size());
    for (const auto& [n, y] : pts) {
      const double x = basis(static_cast<double>(n));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    intercept = (sy - slope * sx) / k;
    double rss = 0;
    for (const auto& [n, y] : pts) {
      const double e = y - (slope * basis(static_cast<double>(n)) + intercept);
      rss += e * e;
    }
    return rss;
  };

  GrowthFit fit;
  double b_ln = 0, b_sqrt = 0;
  fit.rss_ln = affine([](double n) { return std::log(n); }, fit.slope_ln, b_ln);
  fit.rss_sqrt_ln = affine([](double n) { return std::sqrt(std::log(n)); }, fit.slope_sqrt_ln,
                           b_sqrt);
  double lo = pts.front().second, hi = lo, mean = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    lo = std::min(lo, pts[i].second);
    hi = std::max(hi, pts[i].second);
    mean += pts[i].second;
    if (i > 0) {
      fit.max_successive = std::max(fit.max_successive, std::fabs(pts[i].second - pts[i - 1].second));
    }
  }
  mean /= static_cast<double>(pts.size());
  fit.spread = hi - lo;

  if (fit.spread <= flat_tolerance) {
    fit.basis = "constant";
    fit.slope = 0.0;
    fit.intercept = mean;
  } else if (fit.rss_sqrt_ln < fit.rss_ln) {
    fit.basis = "sqrt(ln n)";
    fit.slope = fit.slope_sqrt_ln;
    fit.intercept = b_sqrt;
  } else {
    fit.basis = "ln n";
    fit.slope = fit.slope_ln;
    fit.intercept = b_ln;
  }
  return fit;
}

std::optional<ExpectedGrowth> expected_growth(RegionPreset region, double rho) {
  const double pi = std::numbers::pi;
  const Regime regime = regime_of(rho);
  const double outer = 1.0 / (2.0 * pi);
  ExpectedGrowth ln_growth{"ln n", outer};
  switch (region) {
    case RegionPreset::UnitOuter:
    case RegionPreset::BelowMinusOne:
    case RegionPreset::CoreInverse:
      return ln_growth;
    case RegionPreset::UnitInner:
    case RegionPreset::MinusOneZero:
    case RegionPreset::Core:
    case RegionPreset::Symmetric: {
      const double mult = region == RegionPreset::Symmetric ? 2.0 : 1.0;
      switch (regime) {
        case Regime::Supercritical:
          return ExpectedGrowth{"ln n", mult * std::sqrt(2.0 * rho + 1.0) / (2.0 * pi)};
        case Regime::Critical:
          return ExpectedGrowth{"sqrt(ln n)", mult / pi};
        case Regime::Subcritical:
          return ExpectedGrowth{"constant", std::nullopt};
      }
      break;
    }
    case RegionPreset::RealLine:
    case RegionPreset::Positive:
    case RegionPreset::Negative: {
      const double mult = region == RegionPreset::RealLine ? 2.0 : 1.0;
      if (regime == Regime::Supercritical) {
        return ExpectedGrowth{"ln n", mult * (1.0 + std::sqrt(2.0 * rho + 1.0)) / (2.0 * pi)};
      }
      return ExpectedGrowth{"ln n", mult * outer};
    }
  }
  return std::nullopt;
}

bool TheoryReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  for (const auto& s : summaries) {
    if (s.pass && !*s.pass) return false;
  }
  return true;
}

std::vector<RowCheck> check_rows(const std::vector<EstimateRow>& rows,
                                 const ExperimentConfig& config) {
  std::vector<RowCheck> out;
  for (const auto& row : rows) {
    const std::string region = to_string(row.region);
    const std::size_t total = row.trials + row.failed;
    const double rate = total ? static_cast<double>(row.failed) / static_cast<double>(total) : 0.0;
    out.push_back({row.n, region, "failure_rate", rate, 0.0, config.max_failure_rate, row.valid});
    if (!row.valid) continue;
    if (row.kr_value) {
      const double gap = std::fabs(row.mc_mean - *row.kr_value);
      const double allowed = config.z_sigma * row.mc_stderr;
      out.push_back({row.n, region, "mc_vs_kr", gap, 0.0, allowed, gap <= allowed});
    }
    if (config.ratio_band && row.ratio_mc_over_asymptotic) {
      const double v = *row.ratio_mc_over_asymptotic;
      out.push_back({row.n, region, "ratio_mc_over_asymptotic", v, config.ratio_band->lo,
                     config.ratio_band->hi, config.ratio_band->contains(v)});
    }
  }
  return out;
}

TheoryReport compare_to_theory(const std::vector<EstimateRow>& rows,
                               const ExperimentConfig& config) {
  TheoryReport report;
  report.checks = check_rows(rows, config);

  std::vector<RegionPreset> regions;
  for (const auto& row : rows) {
    if (std::find(regions.begin(), regions.end(), row.region) == regions.end()) {
      regions.push_back(row.region);
    }
  }
  for (auto region : regions) {
    std::vector<std::size_t> degrees;
    std::vector<double> mc, kr;
    bool have_kr = true;
    for (const auto& row : rows) {
      if (row.region != region || !row.valid) continue;
      degrees.push_back(row.n);
      mc.push_back(row.mc_mean);
      if (row.kr_value) {
        kr.push_back(*row.kr_value);
      } else {
        have_kr = false;
      }
    }
    const auto expected = expected_growth(region, config.scheme.rho());
    auto summarize = [&](const std::string& source, const std::vector<double>& values) {
      RegionSummary s;
      s.region = to_string(region);
      s.source = source;
      s.fit = fit_growth(degrees, values, config.flat_tolerance);
      s.expected = expected;
      if (expected) {
        if (expected->basis == "constant") {
          s.pass = s.fit.basis == "constant" && s.fit.max_successive <= config.flat_tolerance;
        } else {
          s.pass = s.fit.basis == expected->basis &&
                   config.growth_band.contains(s.fit.slope / *expected->coefficient);
        }
      }
      report.summaries.push_back(std::move(s));
    };
    summarize("mc", mc);
    if (have_kr && !kr.empty()) summarize("kr", kr);
  }
  return report;
}

void LimitCycleBatch::validate() const {
  if (degree < 1) throw std::invalid_argument("limit cycles: degree must be >= 1");
  if (trials < 1) throw std::invalid_argument("limit cycles: trials must be >= 1");
  if (trials > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("limit cycles: too many trials");
  }
  if (workers < 1) throw std::invalid_argument("limit cycles: workers must be >= 1");
}

SeedSpec LimitCycleBatch::seed(std::size_t trial) const {
  const auto stream =
      experiment_id(fmt::format("{}|{}|{}|{}", label, to_string(kind), to_string(dist), degree));
  return SeedSpec{master_seed, stream, static_cast<std::uint32_t>(trial), 0};
}

PerturbedSystem LimitCycleBatch::system(std::size_t trial, double epsilon) const {
  return PerturbedSystem{sample_perturbation(kind, degree, dist, seed(trial)), epsilon};
}

std::vector<LimitCycleTrial> run_limit_cycle_batch(const LimitCycleBatch& batch) {
  batch.validate();
  const auto n = static_cast<std::size_t>((batch.degree - 1) / 2);
  const RootMethod method = resolve_method(batch.method, n);
  std::vector<LimitCycleTrial> out(batch.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= batch.trials) return;
      auto& res = out[t];
      res.trial = t;
      try {
        if (batch.ode) {
          const auto sys = batch.system(t);
          res.melnikov = count_bifurcating_cycles(sys, method);
          res.ode = verify_cycles_ode(sys, batch.ode_options);
        } else {
          auto noise = sample_melnikov_noise(batch.kind, batch.degree, batch.dist, batch.seed(t));
          res.melnikov = count_bifurcating_cycles(melnikov_from_noise(batch.kind, std::move(noise)),
                                                  method);
        }
      } catch (const NumericFailure& e) {
        res.error = e.what();
      }
    }
  };
  const std::size_t threads = std::min(batch.workers, batch.trials);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(work);
  }
  return out;
}

}  // namespace kacpoly
