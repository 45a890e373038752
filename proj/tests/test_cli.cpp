#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "kacpoly/cli.hpp"
#include "kacpoly/output.hpp"

using namespace kacpoly;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "kacpoly-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { write_file(p.string(), text); }

}  // namespace

TEST_CASE("shortest round-trip doubles") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(u(rng), static_cast<int>(u(rng)));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
}

TEST_CASE("CSV and JSON round trip") {
  Document doc;
  doc.envelope.command = "test";
  doc.envelope.flags = {{"--scheme", "center"}, {"--interval", "[0,1)"}};
  doc.envelope.seed = 18446744073709551615ull;
  doc.envelope.warnings = {"a warning, with comma"};
  doc.table.columns = {"i", "x", "label", "missing"};
  doc.table.rows = {
      {std::int64_t{3}, 0.1, std::string("01"), std::monostate{}},
      {std::int64_t{-4}, -2.5e-17, std::string("say \"hi\", twice"), std::monostate{}},
      {std::int64_t{0}, 1e300, std::string("inf"), 7.0},
  };
  for (const auto& back : {parse_csv(to_csv(doc)), parse_json(render(doc, Format::Json))}) {
    CHECK(back.envelope.command == "test");
    CHECK(back.envelope.flags == doc.envelope.flags);
    CHECK(back.envelope.seed == doc.envelope.seed);
    CHECK(back.envelope.warnings == doc.envelope.warnings);
    CHECK(back.table.columns == doc.table.columns);
    REQUIRE(back.table.rows.size() == doc.table.rows.size());
    for (std::size_t r = 0; r < doc.table.rows.size(); ++r) {
      for (std::size_t c = 0; c < doc.table.columns.size(); ++c) {
        const auto& a = doc.table.rows[r][c];
        const auto& b = back.table.rows[r][c];
        if (cell_number(a)) {
          CHECK(cell_number(a) == cell_number(b));
        } else {
          CHECK(a == b);
        }
      }
    }
  }
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_json("{"), std::invalid_argument);
}

TEST_CASE("coeffs subcommand") {
  const auto r = run({"coeffs", "--scheme", "lienard", "--degree", "5"});
  CHECK(r.code == kExitOk);
  const auto doc = parse_csv(r.out);
  CHECK(doc.table.rows.size() == 6);
  CHECK(doc.envelope.command == "coeffs");
  CHECK(doc.envelope.version == std::string(kVersion));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({"coeffs", "--scheme", "lienard", "--degree", "5", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"coeffs", "--scheme", "quartic", "--degree", "5"}).code == kExitUsage);
  CHECK(run({"sample", "--scheme", "center", "--degree", "5"}).code == kExitUsage);
  CHECK(run({"count", "--coeffs", "/nonexistent/file"}).code == kExitUsage);
  CHECK(run({"coeffs", "--scheme", "center", "--degree", "3", "--format", "xml"}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("numeric failures exit 2") {
  const auto r = run({"kac-rice", "--scheme", "center", "--degree", "100000", "--tol", "1e-300"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.err.find("kac-rice") != std::string::npos);
}

TEST_CASE("json and csv carry the same numbers") {
  const std::vector<std::string> base = {"sample", "--scheme", "power:0.5", "--degree", "30",
                                         "--dist", "uniform", "--seed", "77"};
  auto csv_args = base;
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto a = parse_csv(run(csv_args).out);
  const auto b = parse_json(run(json_args).out);
  CHECK(a.table.columns == b.table.columns);
  REQUIRE(a.table.rows.size() == 31);
  REQUIRE(b.table.rows.size() == 31);
  for (std::size_t r = 0; r < a.table.rows.size(); ++r) {
    for (std::size_t c = 0; c < a.table.columns.size(); ++c) {
      CHECK(cell_number(a.table.rows[r][c]) == cell_number(b.table.rows[r][c]));
    }
  }
  CHECK(a.envelope.seed == 77u);
  CHECK(b.envelope.seed == 77u);
  // repeated invocation is byte-identical
  CHECK(run(csv_args).out == run(csv_args).out);
}

TEST_CASE("sample then count") {
  const auto dir = scratch("count");
  const auto file = dir / "poly.json";
  REQUIRE(run({"sample", "--scheme", "power:0", "--degree", "12", "--seed", "3", "--format",
               "json", "--out", file.string()})
              .code == kExitOk);
  const auto companion = parse_csv(run({"count", "--coeffs", file.string()}).out);
  const auto sturm =
      parse_csv(run({"count", "--coeffs", file.string(), "--method", "sturm"}).out);
  const auto col = companion.table.column("count");
  CHECK(cell_number(companion.table.rows[0][col]) == cell_number(sturm.table.rows[0][col]));

  write(dir / "plain.txt", "# x^2 - 1\n-1, 0, 1\n");
  const auto plain = parse_csv(run({"count", "--coeffs", (dir / "plain.txt").string(),
                                    "--interval", "[1,2]"})
                                   .out);
  CHECK(cell_number(plain.table.rows[0][plain.table.column("count")]) == 1.0);
}

TEST_CASE("kac-rice subcommand") {
  const auto r = run({"kac-rice", "--scheme", "power:0", "--degree", "1", "--region", "R"});
  REQUIRE(r.code == kExitOk);
  const auto doc = parse_csv(r.out);
  CHECK(*cell_number(doc.table.rows[0][doc.table.column("value")]) == doctest::Approx(1.0));
}

TEST_CASE("experiment outputs, reproducibility and --check") {
  const auto dir = scratch("experiment");
  write(dir / "run.cfg",
        "scheme = center\ndegrees = 40, 160, 640\nregions = 01, 1inf, R\ntrials = 200\n"
        "moments = true\nratio_band = 0.5,3\n");
  const auto cfg = (dir / "run.cfg").string();

  CHECK(run({"experiment", "--config", cfg, "--out", (dir / "a").string()}).code == kExitUsage);

  Run first;
  for (const char* workers : {"1", "4", "16"}) {
    const auto out = dir / (std::string("w") + workers);
    const auto r = run({"experiment", "--config", cfg, "--out", out.string(), "--seed", "21",
                        "--workers", workers});
    REQUIRE(r.code == kExitOk);
    for (auto name : {"estimates.csv", "moments.csv", "report.json", "plot-01-ln.dat",
                      "plot-R-sqrtln.dat"}) {
      CHECK(fs::exists(out / name));
    }
    if (std::string(workers) != "1") {
      for (auto name : {"estimates.csv", "moments.csv", "report.json"}) {
        CHECK(read_file(out / name) == read_file(dir / "w1" / name));
      }
    }
  }
  const auto est = parse_csv(read_file(dir / "w1" / "estimates.csv"));
  CHECK(est.table.rows.size() == 9);
  CHECK(est.envelope.seed == 21u);

  // a band nobody can meet
  write(dir / "strict.cfg",
        "scheme = center\ndegrees = 40\nregions = 1inf\ntrials = 50\nratio_band = 5,6\n");
  const auto r = run({"experiment", "--config", (dir / "strict.cfg").string(), "--out",
                      (dir / "strict").string(), "--seed", "1", "--check"});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.err.find("n=40 region=1inf ratio_mc_over_asymptotic") != std::string::npos);
}

TEST_CASE("limit-cycles and ode-verify subcommands") {
  const auto lc = run({"limit-cycles", "--kind", "lienard", "--degree", "9", "--trials", "6",
                       "--seed", "8", "--ode"});
  REQUIRE(lc.code == kExitOk);
  const auto doc = parse_csv(lc.out);
  CHECK(doc.table.rows.size() == 6);
  const auto ov = run({"ode-verify", "--kind", "lienard", "--degree", "9", "--seed", "8",
                       "--trial", "2"});
  REQUIRE(ov.code == kExitOk);
  const auto single = parse_csv(ov.out);
  REQUIRE(single.table.rows.size() == 2);
  // the same system as row 2 of the batch
  const auto mc = doc.table.column("melnikov_count");
  const auto oc = doc.table.column("ode_count");
  CHECK(cell_number(single.table.rows[0][1]) == cell_number(doc.table.rows[2][mc]));
  CHECK(cell_number(single.table.rows[1][1]) == cell_number(doc.table.rows[2][oc]));
}
