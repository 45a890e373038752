#include "kacpoly/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace kacpoly {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("not a number: '{}'", s));
  }
  return v;
}

// Accepts scientific notation such as 1e4 as long as the value is integral.
std::size_t parse_count(std::string_view s) {
  const double v = parse_number(s);
  if (v < 0 || v != std::floor(v) || v > 9.0e15) {
    throw std::invalid_argument(fmt::format("not a nonnegative integer: '{}'", s));
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument(fmt::format("not a boolean: '{}'", s));
}

Band parse_band(std::string_view s) {
  const auto parts = split_list(s);
  if (parts.size() != 2) throw std::invalid_argument(fmt::format("band needs lo,hi: '{}'", s));
  return Band{parse_number(parts[0]), parts[1] == "inf" ? INFINITY : parse_number(parts[1])};
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("config line {}: expected key = value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "scheme") {
        cfg.scheme = CoeffScheme::parse(value);
      } else if (key == "dist") {
        cfg.dist = parse_distribution(value);
      } else if (key == "degrees") {
        cfg.degrees.clear();
        for (auto v : split_list(value)) cfg.degrees.push_back(parse_count(v));
      } else if (key == "regions") {
        cfg.regions.clear();
        for (auto v : split_list(value)) cfg.regions.push_back(parse_region(v));
      } else if (key == "trials") {
        cfg.trials = parse_count(value);
      } else if (key == "workers") {
        cfg.workers = parse_count(value);
      } else if (key == "method") {
        cfg.method = parse_method_choice(value);
      } else if (key == "kacrice") {
        cfg.kacrice = parse_bool(value);
      } else if (key == "quad_tol") {
        cfg.quad_tol = parse_number(value);
      } else if (key == "moments") {
        cfg.moments = parse_bool(value);
      } else if (key == "label") {
        cfg.label = std::string(value);
      } else if (key == "ratio_band") {
        if (value == "none") {
          cfg.ratio_band.reset();
        } else {
          cfg.ratio_band = parse_band(value);
        }
      } else if (key == "growth_band") {
        cfg.growth_band = parse_band(value);
      } else if (key == "z_sigma") {
        cfg.z_sigma = parse_number(value);
      } else if (key == "flat_tolerance") {
        cfg.flat_tolerance = parse_number(value);
      } else if (key == "max_failure_rate") {
        cfg.max_failure_rate = parse_number(value);
      } else if (key == "seed" || key == "master_seed") {
        throw std::invalid_argument("the seed is given with --seed, not in the config");
      } else {
        throw std::invalid_argument(fmt::format("unknown key '{}'", key));
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  if (cfg.regions.empty()) cfg.regions = {RegionPreset::UnitInner, RegionPreset::UnitOuter};
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  auto join = [](const auto& items, auto&& fmt_one) {
    std::string out;
    for (const auto& v : items) {
      if (!out.empty()) out += ",";
      out += fmt_one(v);
    }
    return out;
  };
  std::string out;
  out += fmt::format("scheme = {}\n", c.scheme.name());
  out += fmt::format("dist = {}\n", to_string(c.dist));
  out += fmt::format("degrees = {}\n", join(c.degrees, [](std::size_t n) { return std::to_string(n); }));
  out += fmt::format("regions = {}\n", join(c.regions, [](RegionPreset r) { return to_string(r); }));
  out += fmt::format("trials = {}\n", c.trials);
  out += fmt::format("method = {}\n", to_string(c.method));
  out += fmt::format("kacrice = {}\n", c.kacrice);
  out += fmt::format("quad_tol = {}\n", c.quad_tol);
  out += fmt::format("moments = {}\n", c.moments);
  out += fmt::format("label = {}\n", c.label);
  if (c.ratio_band) {
    out += fmt::format("ratio_band = {},{}\n", c.ratio_band->lo, c.ratio_band->hi);
  } else {
    out += "ratio_band = none\n";
  }
  out += fmt::format("growth_band = {},{}\n", c.growth_band.lo, c.growth_band.hi);
  out += fmt::format("z_sigma = {}\n", c.z_sigma);
  out += fmt::format("flat_tolerance = {}\n", c.flat_tolerance);
  out += fmt::format("max_failure_rate = {}\n", c.max_failure_rate);
  return out;
}

}  // namespace kacpoly
