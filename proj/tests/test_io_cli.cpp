#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ltlab/harness.hpp"
#include "ltlab/io.hpp"
#include "ltlab/path_sim.hpp"

using namespace ltlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
#ifdef LTLAB_CLI_PATH
  const std::string cmd = std::string(LTLAB_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return (status >= 0) ? ((status >> 8) & 0xff) : -1;
#else
  (void)args;
  return -1;
#endif
}

fs::path temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("ltlab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("double formatting is locale independent and round-trip safe") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-1.25e-7).find(',') == std::string::npos);
  const double v = 0.1234567890123456789;
  CHECK(std::stod(io::format_double(v)) == v);
}

TEST_CASE("path csv layout") {
  const auto dir = temp_dir("csv");
  pathsim::SimConfig config{1.0, 4, 9, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  io::write_path_csv((dir / "p.csv").string(), path);
  const auto text = slurp(dir / "p.csv");
  CHECK(text.substr(0, 9) == "i,time,w\n");
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);  // header + 5 rows
  CHECK(text.find("\r") == std::string::npos);
}

TEST_CASE("plan json round trip") {
  clt::ExperimentPlan plan;
  plan.sim.master_seed = 424241;
  plan.sim.steps = 12345;
  plan.h_list = {0.1, 0.05, 0.025};
  plan.replicas = 321;
  plan.policy.delta_divisor = 4;
  plan.bracket.a3_grid = 16;
  plan.expectation.replicas = 650;

  const auto text = io::plan_to_json(plan);
  const auto back = io::plan_from_json(text);
  CHECK(back.sim.master_seed == plan.sim.master_seed);
  CHECK(back.sim.steps == plan.sim.steps);
  CHECK(back.h_list == plan.h_list);
  CHECK(back.replicas == plan.replicas);
  CHECK(back.policy.delta_divisor == plan.policy.delta_divisor);
  CHECK(back.bracket.a3_grid == plan.bracket.a3_grid);
  CHECK(back.expectation.replicas == plan.expectation.replicas);
}

TEST_CASE("report json schema: valid reports pass, corrupted ones fail") {
  clt::CltReport report;
  report.plan.h_list = {0.08};
  report.plan.replicas = 100;
  clt::PerHRow row;
  row.h = 0.08;
  row.ks_D = 0.03;
  row.ks_p = 0.2;
  report.per_h.push_back(row);
  report.samples = {{1.0, 2.0}};
  report.mixture = {0.5, -0.5};

  const auto text = io::report_to_json(report);
  CHECK(io::validate_report_json(text).empty());

  auto j = nlohmann::json::parse(text);
  j.erase("seeds");
  CHECK(!io::validate_report_json(j.dump()).empty());

  auto j2 = nlohmann::json::parse(text);
  j2["per_h"][0]["ks_D"] = 1.5;
  CHECK(!io::validate_report_json(j2.dump()).empty());

  CHECK(!io::validate_report_json("{not json").empty());
}

TEST_CASE("cli simulate writes deterministic outputs" *
          doctest::test_suite("cli")) {
  const auto dir1 = temp_dir("sim1");
  const auto dir2 = temp_dir("sim2");
  const std::string common =
      "--seed 7 simulate --t 1 --steps 1000 --replicas 1";
  REQUIRE(run_cli("--out " + dir1.string() + " " + common) == 0);
  REQUIRE(run_cli("--out " + dir2.string() + " " + common) == 0);

  const auto csv1 = slurp(dir1 / "path_0.csv");
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 1002);
  CHECK(csv1 == slurp(dir2 / "path_0.csv"));
  CHECK(fs::exists(dir1 / "manifest.json"));

  // missing --out is a configuration error
  CHECK(run_cli("simulate --t 1 --steps 100") == 2);
}

TEST_CASE("cli verify: deterministic suite passes, negated K fails" *
          doctest::test_suite("cli")) {
  CHECK(run_cli("verify --deterministic-only") == 0);
  CHECK(run_cli("verify --self-test-negate-K --paths 4 --steps 20000") == 1);
}

TEST_CASE("cli clt smoke run produces a valid report" *
          doctest::test_suite("cli")) {
  const auto dir = temp_dir("clt");
  REQUIRE(run_cli("--preset smoke --seed 11 --out " + dir.string() + " clt") ==
          0);
  const auto report_text = slurp(dir / "report.json");
  CHECK(io::validate_report_json(report_text).empty());

  const auto samples = slurp(dir / "samples.csv");
  // header + 2 h-values x 200 replicas
  CHECK(std::count(samples.begin(), samples.end(), '\n') == 1 + 2 * 200);
  CHECK(samples.rfind("h,replica,statistic,mixture_sample\n", 0) == 0);

  // report subcommand validates and summarizes
  CHECK(run_cli("report --in " + (dir / "report.json").string()) == 0);

  std::ofstream bad(dir / "bad.json");
  bad << "{\"schema\": \"other\"}";
  bad.close();
  CHECK(run_cli("report --in " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("report --in " + (dir / "missing.json").string()) == 3);
}

TEST_CASE("cli seed precedence: env overrides config, flag wins" *
          doctest::test_suite("cli")) {
  const auto dir = temp_dir("seeds");
  ::setenv("LOCALTIME_LAB_SEED", "999", 1);
  REQUIRE(run_cli("--out " + dir.string() +
                  " simulate --t 1 --steps 10 --replicas 1") == 0);
  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["resolved_seed"].get<std::uint64_t>() == 999);

  const auto dir2 = temp_dir("seeds2");
  REQUIRE(run_cli("--seed 5 --out " + dir2.string() +
                  " simulate --t 1 --steps 10 --replicas 1") == 0);
  auto manifest2 = nlohmann::json::parse(slurp(dir2 / "manifest.json"));
  CHECK(manifest2["resolved_seed"].get<std::uint64_t>() == 5);
  ::unsetenv("LOCALTIME_LAB_SEED");
}
