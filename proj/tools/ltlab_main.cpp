// localtime-lab command line front end.
//
// Subcommands: simulate | verify | clt | bracket | report.
// Exit codes: 0 success, 1 check/acceptance failure, 2 configuration error,
// 3 I/O failure. Config precedence: flags > config file > preset; the
// resolved configuration is dumped to the output directory before any
// computation starts. LOCALTIME_LAB_SEED overrides the config seed (an
// explicit --seed flag still wins).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ltlab/harness.hpp"
#include "ltlab/intersection.hpp"
#include "ltlab/io.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/martingale.hpp"
#include "ltlab/path_sim.hpp"
#include "ltlab/verify.hpp"

namespace {

namespace fs = std::filesystem;
using ltlab::clt::ExperimentPlan;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_flag;
  std::size_t threads = 0;
  std::string preset = "desk";
};

ExperimentPlan preset_plan(const std::string& name) {
  ExperimentPlan plan;
  if (name == "desk") {
    // defaults as declared
  } else if (name == "smoke") {
    plan.sim.steps = 20000;
    plan.replicas = 200;
    plan.h_list = {0.08, 0.04};
    plan.expectation.replicas = 500;
    plan.bracket.mm_steps = 40000;
    plan.bracket.mm_replicas = 50;
    plan.bracket.mw_steps = 20000;
    plan.bracket.mw_replicas = 80;
    plan.bracket.a3_steps = 20000;
    plan.bracket.a3_replicas = 40;
  } else if (name == "full") {
    plan.sim.steps = 400000;
    plan.replicas = 5000;
    plan.h_list = {0.08, 0.04, 0.02, 0.01};
    plan.expectation.replicas = 2000;
    plan.bracket.mm_replicas = 400;
    plan.bracket.mw_replicas = 800;
    plan.bracket.a3_replicas = 400;
  } else {
    throw CLI::ValidationError("--preset", "unknown preset: " + name);
  }
  return plan;
}

// flags > config file > preset > environment seed.
ExperimentPlan resolve_plan(const CommonOptions& common,
                            std::vector<std::string>& overrides) {
  ExperimentPlan plan = preset_plan(common.preset);
  if (!common.config_path.empty()) {
    std::ifstream in(common.config_path);
    if (!in) throw std::runtime_error("cannot read config: " + common.config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    plan = ltlab::io::plan_from_json(ss.str());
    overrides.push_back("config=" + common.config_path);
  }
  if (const char* env = std::getenv("LOCALTIME_LAB_SEED")) {
    plan.sim.master_seed = std::strtoull(env, nullptr, 10);
    overrides.push_back(std::string("env LOCALTIME_LAB_SEED=") + env);
  }
  if (common.seed_flag) {
    plan.sim.master_seed = *common.seed_flag;
    overrides.push_back("--seed");
  }
  plan.threads = common.threads;
  plan.out_dir = common.out_dir;
  return plan;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

void write_manifest_first(const std::string& subcommand,
                          const CommonOptions& common,
                          const ExperimentPlan& plan,
                          const std::vector<std::string>& overrides) {
  ltlab::io::RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.config_path = common.config_path;
  manifest.overrides = overrides;
  manifest.out_dir = common.out_dir;
  manifest.resolved_seed = plan.sim.master_seed;
  manifest.resolved_config_json = ltlab::io::plan_to_json(plan);
  ltlab::io::write_manifest(common.out_dir + "/manifest.json", manifest);
}

void print_rows(const std::vector<ltlab::verify::CheckRow>& rows) {
  for (const auto& row : rows) {
    std::printf("[%s] %-44s value=%- .6g  tol=%- .3g  %s\n",
                row.pass ? "PASS" : "FAIL", row.name.c_str(), row.value,
                row.threshold, row.detail.c_str());
  }
}

int cmd_simulate(const CommonOptions& common, double t, std::size_t steps,
                 std::size_t replicas, bool with_field, double field_delta) {
  std::vector<std::string> overrides;
  ExperimentPlan plan = resolve_plan(common, overrides);
  plan.sim.horizon = t;
  plan.sim.steps = steps;
  plan.sim.replica_count = static_cast<std::uint32_t>(replicas);
  ensure_out_dir(common.out_dir);
  write_manifest_first("simulate", common, plan, overrides);

  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path = ltlab::pathsim::generate_brownian(
        plan.sim, static_cast<std::uint32_t>(r));
    const std::string base = common.out_dir + "/path_" + std::to_string(r);
    ltlab::io::write_path_csv(base + ".csv", path);
    ltlab::io::write_path_metadata(base + ".json", path);
    if (with_field) {
      const auto field = ltlab::localtime::local_time_binned(path, field_delta);
      ltlab::io::write_field_csv(base + "_field.csv", field);
      ltlab::io::write_field_metadata(base + "_field.json", field, path, 0.0);
    }
  }
  std::printf("wrote %zu path(s) to %s\n", replicas, common.out_dir.c_str());
  return kExitOk;
}

int cmd_verify(const CommonOptions& common, bool deterministic_only,
               bool negate_k, std::size_t paths, std::size_t steps) {
  auto rows = ltlab::verify::deterministic_suite();
  if (!deterministic_only) {
    ltlab::verify::PathwiseConfig cfg;
    cfg.paths = paths;
    cfg.steps = steps;
    cfg.threads = common.threads;
    if (common.seed_flag) cfg.master_seed = *common.seed_flag;
    if (negate_k) cfg.k_sign = -1;
    const auto pathwise = ltlab::verify::pathwise_suite(cfg);
    rows.insert(rows.end(), pathwise.begin(), pathwise.end());
  }
  print_rows(rows);
  const bool ok = ltlab::verify::all_pass(rows);
  std::printf("%s\n", ok ? "verify: all checks passed"
                         : "verify: CHECK FAILURES (see residuals above)");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_clt(const CommonOptions& common, std::optional<double> h_single,
            std::optional<std::size_t> replicas,
            std::optional<std::size_t> steps, bool with_brackets,
            bool with_expectation) {
  std::vector<std::string> overrides;
  ExperimentPlan plan = resolve_plan(common, overrides);
  if (h_single) {
    plan.h_list = {*h_single};
    overrides.push_back("--h");
  }
  if (replicas) {
    plan.replicas = *replicas;
    overrides.push_back("--replicas");
  }
  if (steps) {
    plan.sim.steps = *steps;
    overrides.push_back("--steps");
  }
  ensure_out_dir(common.out_dir);
  write_manifest_first("clt", common, plan, overrides);

  auto report = ltlab::clt::run_clt_experiment(plan);
  if (with_brackets) {
    const auto brackets = ltlab::clt::bracket_study(plan);
    // Attach the ratio at the study's h to matching rows of the report.
    for (auto& row : report.per_h) {
      for (const auto& mm : brackets.mm_rows) {
        if (mm.t == 1.0) row.bracket_ratio = mm.ratio_mean;
      }
    }
    ltlab::io::write_scaling_csv(common.out_dir + "/mw_scaling.csv",
                                 brackets.mw);
  }
  if (with_expectation) {
    const auto rows = ltlab::clt::expectation_study(plan);
    std::printf("expectation study (h, empirical, predicted, se):\n");
    for (const auto& row : rows) {
      std::printf("  h=%.4g  %.6f  %.6f  %.2g\n", row.h, row.empirical_mean,
                  row.predicted, row.stderr_mean);
    }
  }

  ltlab::io::write_report_json(common.out_dir + "/report.json", report);
  ltlab::io::write_samples_csv(common.out_dir + "/samples.csv", report);

  bool ok = true;
  std::printf("CLT report (h, ks_D, ks_p, mean_S, var_S):\n");
  for (const auto& row : report.per_h) {
    std::printf("  h=%.4g  D=%.4f  p=%.4f  mean=%.4f  var=%.3f\n", row.h,
                row.ks_D, row.ks_p, row.mean_S, row.var_S);
    if (row.h <= 0.02 && row.ks_D > 0.06) ok = false;
  }
  std::printf("report: %s/report.json\n", common.out_dir.c_str());
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_bracket(const CommonOptions& common) {
  std::vector<std::string> overrides;
  ExperimentPlan plan = resolve_plan(common, overrides);
  ensure_out_dir(common.out_dir);
  write_manifest_first("bracket", common, plan, overrides);

  const auto study = ltlab::clt::bracket_study(plan);
  ltlab::io::write_scaling_csv(common.out_dir + "/mw_scaling.csv", study.mw);

  bool ok = true;
  std::printf("<M,M> ratio study (h=%.4g):\n", plan.bracket.mm_h);
  for (const auto& row : study.mm_rows) {
    std::printf("  t=%.2f  <M,M>=%.4f  alpha2=%.4f  ratio=%.4f (se %.3f)\n",
                row.t, row.mm_mean, row.alpha2_mean, row.ratio_mean,
                row.ratio_stderr);
    if (row.t == 1.0 && std::abs(row.ratio_mean - 8.0 / 3.0) >
                            0.1 * (8.0 / 3.0))
      ok = false;
  }
  std::printf("<M,W> scaling:\n");
  for (const auto& row : study.mw.rows) {
    std::printf("  h=%.4g  mean=% .5f (se %.5f)  mean|.|=%.5f\n", row.h,
                row.mean, row.stderr_mean, row.mean_abs);
  }
  std::printf("  slope of mean|<M,W>| vs h: %.3f (bootstrap se %.3f)\n",
              study.mw.slope_mean_abs, study.mw.slope_bootstrap_se);
  std::printf("A3 study: mean/h=%.4f (se %.4f), predicted %.4f\n",
              study.a3.mean_over_h, study.a3.stderr_over_h,
              study.a3.predicted);
  if (std::abs(study.a3.mean_over_h - study.a3.predicted) >
      0.15 * study.a3.predicted)
    ok = false;
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_report(const std::string& in_path) {
  std::ifstream in(in_path);
  if (!in) {
    std::fprintf(stderr, "cannot read report: %s\n", in_path.c_str());
    return kExitIo;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const auto problems = ltlab::io::validate_report_json(ss.str());
  if (!problems.empty()) {
    for (const auto& p : problems)
      std::fprintf(stderr, "schema problem: %s\n", p.c_str());
    return kExitConfig;
  }
  const auto j = nlohmann::json::parse(ss.str());
  std::printf("valid report (%s)\n", j["schema"].get<std::string>().c_str());
  for (const auto& row : j["per_h"]) {
    std::printf("  h=%.4g  D=%.4f  p=%.4f  mean=%.4f  var=%.3f\n",
                row["h"].get<double>(), row["ks_D"].get<double>(),
                row["ks_p"].get<double>(), row["mean_S"].get<double>(),
                row["var_S"].get<double>());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"localtime-lab: Monte Carlo experiments for the L2 modulus "
               "of Brownian local time"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--config", common.config_path, "JSON config file")
      ->envname("");
  app.add_option("--threads", common.threads,
                 "worker pool size (0: machine parallelism)");
  app.add_option("--preset", common.preset, "desk | smoke | full");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "master seed (u64)");
  app.add_option("--out", common.out_dir, "output directory");

  auto* sim = app.add_subcommand("simulate", "write sample paths as CSV");
  double sim_t = 1.0;
  std::size_t sim_steps = 1000, sim_replicas = 1;
  bool sim_with_field = false;
  double sim_field_delta = 0.01;
  sim->add_option("--t", sim_t, "horizon");
  sim->add_option("--steps", sim_steps, "grid steps");
  sim->add_option("--replicas", sim_replicas, "number of paths");
  sim->add_flag("--with-field", sim_with_field, "also write binned fields");
  sim->add_option("--delta", sim_field_delta, "field bin width");

  auto* ver = app.add_subcommand("verify", "run the identity check suites");
  bool det_only = false, negate_k = false;
  std::size_t ver_paths = 100, ver_steps = 200000;
  ver->add_flag("--deterministic-only", det_only,
                "closed-form checks only (fast)");
  ver->add_flag("--self-test-negate-K", negate_k,
                "flip the K kernel; the suite must fail");
  ver->add_option("--paths", ver_paths, "pathwise suite replicas");
  ver->add_option("--steps", ver_steps, "pathwise suite grid steps");

  auto* cltc = app.add_subcommand("clt", "distributional CLT experiment");
  std::optional<double> clt_h;
  std::optional<std::size_t> clt_replicas, clt_steps;
  bool with_brackets = false, with_expectation = false;
  double clt_h_value = 0.0;
  std::size_t clt_replicas_value = 0, clt_steps_value = 0;
  auto* h_opt = cltc->add_option("--h", clt_h_value, "single h (overrides grid)");
  auto* rep_opt = cltc->add_option("--replicas", clt_replicas_value,
                                   "replica budget");
  auto* steps_opt = cltc->add_option("--steps", clt_steps_value, "grid steps");
  cltc->add_flag("--with-brackets", with_brackets, "also run bracket_study");
  cltc->add_flag("--with-expectation", with_expectation,
                 "also run expectation_study");

  auto* bra = app.add_subcommand("bracket", "bracket convergence studies");

  auto* rep = app.add_subcommand("report", "validate and summarize a report");
  std::string report_in;
  rep->add_option("--in", report_in, "report.json path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (seed_opt->count() > 0) common.seed_flag = seed_value;
  if (h_opt->count() > 0) clt_h = clt_h_value;
  if (rep_opt->count() > 0) clt_replicas = clt_replicas_value;
  if (steps_opt->count() > 0) clt_steps = clt_steps_value;

  try {
    if (sim->parsed()) {
      if (common.out_dir.empty()) {
        std::fprintf(stderr, "simulate: --out is required\n%s\n",
                     app.help().c_str());
        return kExitConfig;
      }
      return cmd_simulate(common, sim_t, sim_steps, sim_replicas,
                          sim_with_field, sim_field_delta);
    }
    if (ver->parsed())
      return cmd_verify(common, det_only, negate_k, ver_paths, ver_steps);
    if (cltc->parsed()) {
      if (common.out_dir.empty()) {
        std::fprintf(stderr, "clt: --out is required\n%s\n",
                     app.help().c_str());
        return kExitConfig;
      }
      return cmd_clt(common, clt_h, clt_replicas, clt_steps, with_brackets,
                     with_expectation);
    }
    if (bra->parsed()) {
      if (common.out_dir.empty()) {
        std::fprintf(stderr, "bracket: --out is required\n%s\n",
                     app.help().c_str());
        return kExitConfig;
      }
      return cmd_bracket(common);
    }
    if (rep->parsed()) return cmd_report(report_in);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  }
  return kExitConfig;
}
