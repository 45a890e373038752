#include "kacpoly/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kacpoly/coeffs.hpp"
#include "kacpoly/config.hpp"
#include "kacpoly/errors.hpp"
#include "kacpoly/experiment.hpp"
#include "kacpoly/kacrice.hpp"
#include "kacpoly/melnikov.hpp"
#include "kacpoly/output.hpp"
#include "kacpoly/rootcount.hpp"
#include "kacpoly/sampler.hpp"

namespace kacpoly {

namespace {

// A check that failed under --check; carries the report text.
struct CheckFailed {
  std::string report;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  std::size_t workers = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (double x : v) {
    if (!s.empty()) s += ';';
    s += format_double(x);
  }
  return s;
}

Cell size_cell(std::size_t v) { return static_cast<std::int64_t>(v); }

// Flags that shape the payload, in command-line order. Output location and
// worker count are left out: they do not change the numbers.
Envelope make_envelope(const CLI::App& sub, const Globals& g, bool uses_seed) {
  Envelope env;
  env.command = sub.get_name();
  static const std::set<std::string> skip = {"--out", "--workers", "--seed", "--help"};
  auto add = [&](const CLI::Option* opt) {
    const std::string name = opt->get_name();
    if (opt->count() == 0 || skip.count(name)) return;
    std::string value;
    for (const auto& r : opt->results()) {
      if (!value.empty()) value += ' ';
      value += r;
    }
    env.flags.emplace_back(name, value);
  };
  for (const auto* opt : sub.get_options()) add(opt);
  for (const auto* opt : sub.get_parent()->get_options()) add(opt);
  if (uses_seed) env.seed = g.seed;
  return env;
}

void require_seed(const Globals& g, std::string_view command) {
  if (g.seed_opt->count() == 0) {
    throw CLI::ValidationError(fmt::format("{}: --seed is required", command));
  }
}

void emit(const Document& doc, const Globals& g, std::ostream& out) {
  const auto text = render(doc, parse_format(g.format));
  if (g.out == "-") {
    out << text;
  } else {
    write_file(g.out, text);
  }
}

std::vector<double> read_coefficients(const std::string& path) {
  const std::string text = read_file(path);
  try {
    const auto doc = parse_document(text);
    const auto col = doc.table.column("coefficient");
    std::vector<double> out;
    for (const auto& row : doc.table.rows) {
      const auto v = cell_number(row[col]);
      if (!v) throw std::invalid_argument("non-numeric coefficient in " + path);
      out.push_back(*v);
    }
    return out;
  } catch (const std::out_of_range&) {
    // plain list of numbers, constant term first
  } catch (const std::invalid_argument&) {
  }
  std::vector<double> out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto& ch : line) {
      if (ch == ',' || ch == ';') ch = ' ';
    }
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(w, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != w.size()) throw std::invalid_argument("bad coefficient '" + w + "' in " + path);
      out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("no coefficients in " + path);
  return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real zeros of random polynomials and limit cycles of perturbed centers",
               "kacpoly"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "master seed for every random stream");
  app.add_option("--out", g.out, "output file (directory for experiment); - for stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  g.workers_opt =
      app.add_option("--workers", g.workers, "threads for Monte Carlo")->check(CLI::PositiveNumber);

  // coeffs
  std::string scheme_text;
  std::size_t degree = 0;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "deterministic weights c_m");
  coeffs_cmd->add_option("--scheme", scheme_text, "center | lienard | power:RHO")->required();
  coeffs_cmd->add_option("--degree", degree)->required();

  // sample
  std::string dist_text = "gauss";
  std::size_t trial = 0;
  auto* sample_cmd = app.add_subcommand("sample", "one random polynomial");
  sample_cmd->add_option("--scheme", scheme_text)->required();
  sample_cmd->add_option("--dist", dist_text, "gauss | rademacher | uniform");
  sample_cmd->add_option("--degree", degree)->required();
  sample_cmd->add_option("--trial", trial, "trial index within the seed's stream");

  // count
  std::string coeffs_path;
  std::string interval_text = "(-inf,inf)";
  std::string method_text = "companion";
  double real_tol = kDefaultRealTol;
  auto* count_cmd = app.add_subcommand("count", "real roots in an interval");
  count_cmd->add_option("--coeffs", coeffs_path, "CSV/JSON from sample, or a list of numbers")
      ->required();
  count_cmd->add_option("--interval", interval_text, "e.g. \"0,1\", \"[0,1)\", \"(1,inf)\"");
  count_cmd->add_option("--method", method_text, "companion | sturm | sweep");
  count_cmd->add_option("--tol", real_tol, "real-axis tolerance for companion eigenvalues");

  // kac-rice
  std::string region_text = "01";
  double quad_tol = kDefaultQuadTol;
  auto* kr_cmd = app.add_subcommand("kac-rice", "expected zeros for Gaussian noise");
  kr_cmd->add_option("--scheme", scheme_text)->required();
  kr_cmd->add_option("--degree", degree)->required();
  kr_cmd->add_option("--region", region_text, "01 | 1inf | sym | R");
  kr_cmd->add_option("--tol", quad_tol);

  // experiment
  std::string config_path;
  bool check = false;
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo grid from a config file");
  exp_cmd->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
  exp_cmd->add_flag("--check", check, "exit 3 if a configured band is violated");

  // limit-cycles
  std::string kind_text = "center";
  std::size_t trials = 1;
  bool with_ode = false;
  std::string batch_method = "auto";
  OdeVerifyOptions ode_opts;
  auto* lc_cmd = app.add_subcommand("limit-cycles", "bifurcating cycles of random systems");
  lc_cmd->add_option("--kind", kind_text, "center | lienard");
  lc_cmd->add_option("--degree", degree)->required();
  lc_cmd->add_option("--dist", dist_text);
  lc_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  lc_cmd->add_option("--method", batch_method, "auto | companion | sturm | sweep");
  lc_cmd->add_flag("--ode", with_ode, "also count fixed points of the return map");
  lc_cmd->add_option("--epsilon-start", ode_opts.epsilon_start);

  // ode-verify
  auto* ov_cmd = app.add_subcommand("ode-verify", "Melnikov and ODE counts for one system");
  ov_cmd->add_option("--kind", kind_text);
  ov_cmd->add_option("--degree", degree)->required();
  ov_cmd->add_option("--dist", dist_text);
  ov_cmd->add_option("--trial", trial, "which system of the seed's stream");
  ov_cmd->add_option("--epsilon-start", ode_opts.epsilon_start);
  ov_cmd->add_option("--epsilon-min", ode_opts.epsilon_min);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("kacpoly");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  CLI::App* active = nullptr;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    active = app.get_subcommands().front();

    if (active == coeffs_cmd) {
      const auto cv = coeff_vector(CoeffScheme::parse(scheme_text), degree);
      Document doc{make_envelope(*active, g, false), {}};
      doc.table.columns = {"m", "c_m", "m_c_m_sq"};
      for (std::size_t m = 0; m < cv.values.size(); ++m) {
        const double c = cv.values[m];
        doc.table.rows.push_back({size_cell(m), c, static_cast<double>(m) * c * c});
      }
      emit(doc, g, out);
    } else if (active == sample_cmd) {
      require_seed(g, "sample");
      const auto cv = coeff_vector(CoeffScheme::parse(scheme_text), degree);
      const auto poly = sample_polynomial(cv, parse_distribution(dist_text),
                                          SeedSpec{g.seed, experiment_id("sample"),
                                                   static_cast<std::uint32_t>(trial), 0});
      Document doc{make_envelope(*active, g, true), {}};
      doc.table.columns = {"m", "c_m", "noise", "coefficient"};
      for (std::size_t m = 0; m < poly.realized.size(); ++m) {
        doc.table.rows.push_back({size_cell(m), cv.values[m], poly.noise[m], poly.realized[m]});
      }
      emit(doc, g, out);
    } else if (active == count_cmd) {
      const auto coeffs = read_coefficients(coeffs_path);
      const auto iv = Interval::parse(interval_text);
      const auto rep = count_in_interval(coeffs, iv, parse_root_method(method_text), real_tol);
      Document doc{make_envelope(*active, g, false), {}};
      if (rep.status == CountStatus::ZeroPolynomial) {
        doc.envelope.warnings.push_back("zero polynomial: every point is a root");
      }
      if (rep.near_boundary) {
        doc.envelope.warnings.push_back("an eigenvalue sat near the real-axis tolerance");
      }
      std::string mult;
      for (auto m : rep.multiplicity) {
        if (!mult.empty()) mult += ';';
        mult += std::to_string(m);
      }
      doc.table.columns = {"interval", "method",       "count", "distinct",
                           "max_residual", "roots", "multiplicity"};
      doc.table.rows.push_back({iv.to_string(), to_string(rep.method), size_cell(rep.count),
                                size_cell(rep.roots.size()), rep.max_residual,
                                join_doubles(rep.roots), mult});
      emit(doc, g, out);
    } else if (active == kr_cmd) {
      const auto scheme = CoeffScheme::parse(scheme_text);
      const auto region = parse_kac_region(region_text);
      const auto cv = coeff_vector(scheme, degree);
      const auto kr = expected_roots_gaussian(cv, to_interval(region), quad_tol);
      Document doc{make_envelope(*active, g, false), {}};
      doc.table.columns = {"region", "n", "value", "error_estimate", "asymptotic", "formula",
                           "ratio"};
      Cell asym = std::monostate{}, ratio = std::monostate{};
      std::string formula;
      if (degree >= 3) {
        const auto pred = asymptotic_prediction(scheme.rho(), region, degree);
        formula = pred.formula;
        if (pred.value) {
          asym = *pred.value;
          if (*pred.value > 0.1) ratio = kr.value / *pred.value;
        }
      }
      doc.table.rows.push_back({to_string(region), size_cell(degree), kr.value,
                                kr.error_estimate, asym, formula, ratio});
      emit(doc, g, out);
    } else if (active == exp_cmd) {
      require_seed(g, "experiment");
      if (g.out == "-") throw CLI::ValidationError("experiment: --out DIR is required");
      auto cfg = load_experiment_config(config_path);
      cfg.master_seed = g.seed;
      if (g.workers_opt->count() > 0) cfg.workers = g.workers;
      const auto result = run_experiment(cfg);

      Envelope env = make_envelope(*active, g, true);
      std::istringstream cfg_lines(to_config_text(cfg));
      for (std::string line; std::getline(cfg_lines, line);) env.notes.push_back("config: " + line);

      std::vector<std::size_t> distinct(cfg.degrees.begin(), cfg.degrees.end());
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      std::vector<RowCheck> checks;
      std::vector<RegionSummary> summaries;
      if (std::count_if(distinct.begin(), distinct.end(), [](auto n) { return n >= 2; }) >= 3) {
        auto report = compare_to_theory(result.rows, cfg);
        checks = std::move(report.checks);
        summaries = std::move(report.summaries);
      } else {
        checks = check_rows(result.rows, cfg);
        env.warnings.push_back("growth fit skipped: fewer than 3 degrees");
      }
      write_experiment(g.out, env, cfg, result, checks, summaries);

      std::string failures;
      for (const auto& c : checks) {
        if (!c.pass) {
          failures += fmt::format("FAIL n={} region={} {}: value {} outside [{}, {}]\n", c.n,
                                  c.region, c.name, format_double(c.value), format_double(c.lo),
                                  format_double(c.hi));
        }
      }
      for (const auto& s : summaries) {
        if (s.pass && !*s.pass) {
          failures += fmt::format("FAIL region={} growth ({}): basis {} slope {} expected {} {}\n",
                                  s.region, s.source, s.fit.basis, format_double(s.fit.slope),
                                  s.expected->basis,
                                  s.expected->coefficient
                                      ? format_double(*s.expected->coefficient)
                                      : std::string("-"));
        }
      }
      out << fmt::format("wrote {} rows to {}\n", result.rows.size(), g.out);
      if (check && !failures.empty()) throw CheckFailed{failures};
      if (!failures.empty()) out << failures;
    } else if (active == lc_cmd) {
      require_seed(g, "limit-cycles");
      LimitCycleBatch batch;
      batch.kind = parse_perturbation_kind(kind_text);
      batch.degree = static_cast<int>(degree);
      batch.dist = parse_distribution(dist_text);
      batch.trials = trials;
      batch.master_seed = g.seed;
      batch.workers = g.workers;
      batch.method = parse_method_choice(batch_method);
      batch.ode = with_ode;
      batch.ode_options = ode_opts;
      const auto results = run_limit_cycle_batch(batch);

      Document doc{make_envelope(*active, g, true), {}};
      doc.table.columns = {"trial",    "melnikov_count", "all_nondegenerate", "ode_count",
                           "ode_epsilon", "partial_window", "error", "radii"};
      double sum = 0, sum_sq = 0;
      std::size_t ok = 0;
      for (const auto& r : results) {
        Cell ode_count = std::monostate{}, ode_eps = std::monostate{}, partial = std::monostate{};
        if (r.ode) {
          ode_count = size_cell(r.ode->count);
          ode_eps = r.ode->epsilon;
          partial = static_cast<std::int64_t>(r.ode->partial_window);
        }
        if (r.error.empty()) {
          const double c = static_cast<double>(r.melnikov.count);
          sum += c;
          sum_sq += c * c;
          ++ok;
        } else {
          doc.envelope.warnings.push_back(fmt::format("trial {}: {}", r.trial, r.error));
        }
        doc.table.rows.push_back({size_cell(r.trial), size_cell(r.melnikov.count),
                                  static_cast<std::int64_t>(r.melnikov.all_nondegenerate()),
                                  ode_count, ode_eps, partial, r.error,
                                  join_doubles(r.melnikov.radii)});
      }
      if (ok > 0) {
        const double mean = sum / static_cast<double>(ok);
        std::string line = fmt::format("melnikov_count mean={}", format_double(mean));
        if (ok > 1) {
          const double var = std::max(0.0, (sum_sq - static_cast<double>(ok) * mean * mean) /
                                                static_cast<double>(ok - 1));
          line += fmt::format(" stderr={}", format_double(std::sqrt(var / static_cast<double>(ok))));
        }
        doc.envelope.notes.push_back(line);
      }
      emit(doc, g, out);
    } else if (active == ov_cmd) {
      require_seed(g, "ode-verify");
      LimitCycleBatch batch;
      batch.kind = parse_perturbation_kind(kind_text);
      batch.degree = static_cast<int>(degree);
      batch.dist = parse_distribution(dist_text);
      batch.master_seed = g.seed;
      batch.trials = trial + 1;
      batch.validate();
      const auto sys = batch.system(trial);
      const auto mel = count_bifurcating_cycles(sys);
      LimitCycleReport ode;
      try {
        ode = verify_cycles_ode(sys, ode_opts);
      } catch (const NumericFailure& e) {
        throw NonConvergent(fmt::format("ode-verify (kind={}, degree={}, trial={}): {}",
                                        kind_text, degree, trial, e.what()));
      }
      Document doc{make_envelope(*active, g, true), {}};
      doc.table.columns = {"method", "count", "all_nondegenerate", "epsilon", "partial_window",
                           "radii"};
      doc.table.rows.push_back({to_string(mel.method), size_cell(mel.count),
                                static_cast<std::int64_t>(mel.all_nondegenerate()),
                                std::monostate{}, std::monostate{}, join_doubles(mel.radii)});
      doc.table.rows.push_back({to_string(ode.method), size_cell(ode.count), std::monostate{},
                                ode.epsilon, static_cast<std::int64_t>(ode.partial_window),
                                join_doubles(ode.radii)});
      emit(doc, g, out);
    }
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    err << (active ? active->help() : app.help());
    return kExitUsage;
  } catch (const CheckFailed& e) {
    err << e.report;
    return kExitCheckFailed;
  } catch (const NumericFailure& e) {
    err << "numeric failure in " << (active ? active->get_name() : "kacpoly") << ": " << e.what()
        << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace kacpoly
