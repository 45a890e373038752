#include "kacpoly/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace kacpoly {

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw std::invalid_argument(fmt::format("unknown format '{}' (expected csv|json)", text));
}

std::string to_string(Format format) { return format == Format::Csv ? "csv" : "json"; }

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range(fmt::format("no column '{}'", name));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> cell_number(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::nullopt;
}

namespace {

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

// Unquoted text parses as an integer, then as a double, else stays text.
Cell parse_bare(std::string_view s) {
  if (s.empty()) return std::monostate{};
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
      ec == std::errc() && p == s.data() + s.size()) {
    return i;
  }
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
      ec == std::errc() && p == s.data() + s.size()) {
    return d;
  }
  return std::string(s);
}

std::string csv_field(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else {
          const std::string s = one_line(v);
          const bool quote = s.find_first_of(",\"") != std::string::npos ||
                             !std::holds_alternative<std::string>(parse_bare(s));
          if (!quote) return s;
          std::string out = "\"";
          for (char ch : s) {
            if (ch == '"') out += '"';
            out += ch;
          }
          return out + "\"";
        }
      },
      cell);
}

std::vector<Cell> split_csv_line(std::string_view line) {
  std::vector<Cell> out;
  std::size_t i = 0;
  while (true) {
    if (i < line.size() && line[i] == '"') {
      std::string text;
      ++i;
      while (true) {
        if (i >= line.size()) throw std::invalid_argument("unterminated quote in CSV");
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            text += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        text += line[i++];
      }
      out.emplace_back(std::move(text));
      if (i < line.size() && line[i] != ',') throw std::invalid_argument("junk after quoted field");
    } else {
      const auto comma = line.find(',', i);
      const auto end = comma == std::string_view::npos ? line.size() : comma;
      out.push_back(parse_bare(line.substr(i, end - i)));
      i = end;
    }
    if (i >= line.size()) break;
    ++i;  // comma
    if (i == line.size()) {
      out.emplace_back(std::monostate{});
      break;
    }
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string to_csv(const Document& doc) {
  const auto& env = doc.envelope;
  std::string out;
  out += fmt::format("# kacpoly {}\n", env.version);
  out += fmt::format("# command: {}\n", one_line(env.command));
  for (const auto& [k, v] : env.flags) out += fmt::format("# flag: {}={}\n", k, one_line(v));
  if (env.seed) out += fmt::format("# seed: {}\n", *env.seed);
  for (const auto& w : env.warnings) out += fmt::format("# warning: {}\n", one_line(w));
  for (const auto& n : env.notes) out += fmt::format("# note: {}\n", one_line(n));
  for (std::size_t i = 0; i < doc.table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_field(doc.table.columns[i]);
  }
  out += '\n';
  for (const auto& row : doc.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

Document parse_csv(std::string_view text) {
  Document doc;
  auto& env = doc.envelope;
  env.version.clear();
  bool have_header = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line[0] == '#') {
      line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      if (starts_with(line, "kacpoly ")) {
        env.version = std::string(line.substr(8));
      } else if (starts_with(line, "command: ")) {
        env.command = std::string(line.substr(9));
      } else if (starts_with(line, "flag: ")) {
        const auto kv = line.substr(6);
        const auto eq = kv.find('=');
        env.flags.emplace_back(std::string(kv.substr(0, eq)),
                               eq == std::string_view::npos ? "" : std::string(kv.substr(eq + 1)));
      } else if (starts_with(line, "seed: ")) {
        env.seed = std::stoull(std::string(line.substr(6)));
      } else if (starts_with(line, "warning: ")) {
        env.warnings.emplace_back(line.substr(9));
      } else if (starts_with(line, "note: ")) {
        env.notes.emplace_back(line.substr(6));
      }
      continue;
    }
    auto cells = split_csv_line(line);
    if (!have_header) {
      for (const auto& c : cells) {
        if (const auto* s = std::get_if<std::string>(&c)) {
          doc.table.columns.push_back(*s);
        } else {
          doc.table.columns.push_back(csv_field(c));
        }
      }
      have_header = true;
      continue;
    }
    if (cells.size() != doc.table.columns.size()) {
      throw std::invalid_argument(fmt::format("CSV row has {} fields, header has {}",
                                              cells.size(), doc.table.columns.size()));
    }
    doc.table.rows.push_back(std::move(cells));
  }
  return doc;
}

nlohmann::json to_json(const Document& doc) {
  const auto& env = doc.envelope;
  nlohmann::json j;
  j["version"] = env.version;
  j["command"] = env.command;
  j["flags"] = nlohmann::json::array();
  for (const auto& [k, v] : env.flags) j["flags"].push_back({k, v});
  j["seed"] = env.seed ? nlohmann::json(*env.seed) : nlohmann::json(nullptr);
  j["warnings"] = env.warnings;
  j["notes"] = env.notes;
  j["columns"] = doc.table.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : doc.table.rows) {
    auto jr = nlohmann::json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              jr.push_back(nullptr);
            } else {
              jr.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

Document parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad JSON: ") + e.what());
  }
  Document doc;
  auto& env = doc.envelope;
  try {
    env.version = j.value("version", "");
    env.command = j.value("command", "");
    if (j.contains("flags")) {
      for (const auto& f : j["flags"]) env.flags.emplace_back(f.at(0), f.at(1));
    }
    if (j.contains("seed") && !j["seed"].is_null()) env.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("warnings")) env.warnings = j["warnings"].get<std::vector<std::string>>();
    if (j.contains("notes")) env.notes = j["notes"].get<std::vector<std::string>>();
    doc.table.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& v : jr) {
        if (v.is_null()) {
          row.emplace_back(std::monostate{});
        } else if (v.is_number_integer()) {
          row.emplace_back(v.get<std::int64_t>());
        } else if (v.is_number_float()) {
          row.emplace_back(v.get<double>());
        } else if (v.is_string()) {
          row.emplace_back(v.get<std::string>());
        } else if (v.is_boolean()) {
          row.emplace_back(static_cast<std::int64_t>(v.get<bool>()));
        } else {
          throw std::invalid_argument("unsupported JSON cell");
        }
      }
      if (row.size() != doc.table.columns.size()) {
        throw std::invalid_argument("JSON row length differs from columns");
      }
      doc.table.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad document: ") + e.what());
  }
  return doc;
}

Document parse_document(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_csv(text);
}

std::string render(const Document& doc, Format format) {
  if (format == Format::Csv) return to_csv(doc);
  return to_json(doc).dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

namespace {

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

Cell size_cell(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

Table estimates_table(const std::vector<EstimateRow>& rows) {
  Table t;
  t.columns = {"n",        "region",     "interval",  "trials",     "failed",
               "valid",    "mc_mean",    "mc_stderr", "kr_value",   "kr_error",
               "asymptotic", "asymptotic_formula", "ratio_mc_over_asymptotic",
               "ratio_mc_over_kr"};
  for (const auto& r : rows) {
    t.rows.push_back({size_cell(r.n), to_string(r.region), r.interval.to_string(),
                      size_cell(r.trials), size_cell(r.failed),
                      static_cast<std::int64_t>(r.valid), r.mc_mean, r.mc_stderr,
                      opt_cell(r.kr_value), opt_cell(r.kr_error), opt_cell(r.asymptotic),
                      r.asymptotic_formula, opt_cell(r.ratio_mc_over_asymptotic),
                      opt_cell(r.ratio_mc_over_kr)});
  }
  return t;
}

Table moments_table(const std::vector<MomentRow>& rows) {
  Table t;
  t.columns = {"n", "region", "order", "moment", "stderr"};
  for (const auto& r : rows) {
    t.rows.push_back({size_cell(r.n), to_string(r.region), static_cast<std::int64_t>(r.order),
                      r.moment, r.standard_error});
  }
  return t;
}

nlohmann::json report_json(const Envelope& envelope, const ExperimentConfig& config,
                           const ExperimentResult& result, const std::vector<RowCheck>& checks,
                           const std::vector<RegionSummary>& summaries) {
  nlohmann::json j = to_json(Document{envelope, estimates_table(result.rows)});
  j.erase("columns");
  j.erase("rows");
  j["config"] = {
      {"scheme", config.scheme.name()},
      {"dist", to_string(config.dist)},
      {"degrees", config.degrees},
      {"trials", config.trials},
      {"method", to_string(config.method)},
      {"label", config.label},
      {"z_sigma", config.z_sigma},
      {"flat_tolerance", config.flat_tolerance},
      {"growth_band", {config.growth_band.lo, config.growth_band.hi}},
      {"ratio_band", config.ratio_band
                         ? nlohmann::json{config.ratio_band->lo, config.ratio_band->hi}
                         : nlohmann::json(nullptr)},
  };
  auto jc = nlohmann::json::array();
  bool pass = true;
  for (const auto& c : checks) {
    jc.push_back({{"n", c.n}, {"region", c.region}, {"check", c.name}, {"value", c.value},
                  {"lo", c.lo}, {"hi", c.hi}, {"pass", c.pass}});
    pass = pass && c.pass;
  }
  j["checks"] = std::move(jc);
  auto js = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json e = {{"region", s.region},
                        {"source", s.source},
                        {"basis", s.fit.basis},
                        {"slope", s.fit.slope},
                        {"intercept", s.fit.intercept},
                        {"slope_ln", s.fit.slope_ln},
                        {"slope_sqrt_ln", s.fit.slope_sqrt_ln},
                        {"rss_ln", s.fit.rss_ln},
                        {"rss_sqrt_ln", s.fit.rss_sqrt_ln},
                        {"spread", s.fit.spread},
                        {"max_successive", s.fit.max_successive}};
    if (s.expected) {
      e["expected_basis"] = s.expected->basis;
      e["expected_coefficient"] =
          s.expected->coefficient ? nlohmann::json(*s.expected->coefficient) : nlohmann::json(nullptr);
    }
    e["pass"] = s.pass ? nlohmann::json(*s.pass) : nlohmann::json(nullptr);
    if (s.pass) pass = pass && *s.pass;
    js.push_back(std::move(e));
  }
  j["summaries"] = std::move(js);
  j["pass"] = pass;
  return j;
}

void write_experiment(const std::filesystem::path& dir, const Envelope& envelope,
                      const ExperimentConfig& config, const ExperimentResult& result,
                      const std::vector<RowCheck>& checks,
                      const std::vector<RegionSummary>& summaries) {
  std::filesystem::create_directories(dir);
  Envelope env = envelope;
  env.warnings.insert(env.warnings.end(), result.warnings.begin(), result.warnings.end());
  write_file((dir / "estimates.csv").string(), to_csv({env, estimates_table(result.rows)}));
  write_file((dir / "moments.csv").string(), to_csv({env, moments_table(result.moments)}));
  write_file((dir / "report.json").string(),
             report_json(env, config, result, checks, summaries).dump(2) + "\n");

  // whitespace-separated for plotting tools; comment lines carry the envelope
  std::string header = to_csv({env, {}});
  header.pop_back();  // empty column line
  for (auto region : config.regions) {
    for (const bool sqrt_axis : {false, true}) {
      std::string text = header;
      text += sqrt_axis ? "# sqrt_ln_n mc_mean\n" : "# ln_n mc_mean\n";
      for (const auto& row : result.rows) {
        if (row.region != region || row.n < 2) continue;
        const double ln = std::log(static_cast<double>(row.n));
        text += format_double(sqrt_axis ? std::sqrt(ln) : ln) + " " + format_double(row.mc_mean) + "\n";
      }
      const auto name =
          fmt::format("plot-{}-{}.dat", to_string(region), sqrt_axis ? "sqrtln" : "ln");
      write_file((dir / name).string(), text);
    }
  }
}

}  // namespace kacpoly
