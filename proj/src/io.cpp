#include "ltlab/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ltlab::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  return out;
}

void finish(std::ofstream& out, const std::string& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + file);
}

json path_seed_info(const pathsim::SamplePath& path) {
  return json{{"master_seed", path.master_seed},
              {"replica_id", path.replica_id}};
}

}  // namespace

void write_path_csv(const std::string& file, const pathsim::SamplePath& path) {
  auto out = open_out(file);
  out << "i,time,w\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    out << i << ',' << format_double(static_cast<double>(i) * path.delta)
        << ',' << format_double(path.values[i]) << '\n';
  }
  finish(out, file);
}

void write_path_metadata(const std::string& file,
                         const pathsim::SamplePath& path) {
  auto out = open_out(file);
  json meta{{"seed_info", path_seed_info(path)},
            {"delta", path.delta},
            {"steps", path.steps()},
            {"horizon", path.horizon()}};
  out << meta.dump(2) << '\n';
  finish(out, file);
}

void write_field_csv(const std::string& file,
                     const localtime::LocalTimeField& field) {
  auto out = open_out(file);
  out << "x,local_time\n";
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    out << format_double(field.x_at(static_cast<std::ptrdiff_t>(k))) << ','
        << format_double(field.values[k]) << '\n';
  }
  finish(out, file);
}

void write_field_metadata(const std::string& file,
                          const localtime::LocalTimeField& field,
                          const pathsim::SamplePath& path, double eps) {
  auto out = open_out(file);
  json meta{{"t", field.horizon},
            {"n", path.steps()},
            {"delta", field.bin_width},
            {"eps", eps},
            {"seed_info", path_seed_info(path)}};
  out << meta.dump(2) << '\n';
  finish(out, file);
}

void write_estimates_csv(const std::string& file,
                         const std::vector<intersection::Alpha2Estimate>& a2,
                         const std::vector<intersection::Alpha3Estimate>& a3) {
  const auto method_name = [](intersection::Method m) {
    switch (m) {
      case intersection::Method::kernel:
        return "kernel";
      case intersection::Method::occupation:
        return "occupation";
      case intersection::Method::counting:
        return "counting";
    }
    return "counting";
  };
  auto out = open_out(file);
  out << "method,x,y,epsilon,value\n";
  for (const auto& e : a2) {
    out << method_name(e.method) << ',' << format_double(e.x) << ",,"
        << format_double(e.eps) << ',' << format_double(e.value) << '\n';
  }
  for (const auto& e : a3) {
    out << method_name(e.method) << ',' << format_double(e.x) << ','
        << format_double(e.y) << ',' << format_double(e.eps) << ','
        << format_double(e.value) << '\n';
  }
  finish(out, file);
}

void write_series_csv(const std::string& file,
                      const martingale::MartingaleSeries& series) {
  auto out = open_out(file);
  out << "time,M,bracket_MW,bracket_MM\n";
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    out << format_double(series.times[i]) << ',' << format_double(series.M[i])
        << ',' << format_double(series.bracket_MW[i]) << ','
        << format_double(series.bracket_MM[i]) << '\n';
  }
  finish(out, file);
}

void write_scaling_csv(const std::string& file,
                       const martingale::MwScalingTable& table) {
  auto out = open_out(file);
  out << "h,mean,stderr,count\n";
  for (const auto& row : table.rows) {
    out << format_double(row.h) << ',' << format_double(row.mean) << ','
        << format_double(row.stderr_mean) << ',' << row.count << '\n';
  }
  finish(out, file);
}

void write_samples_csv(const std::string& file, const clt::CltReport& report) {
  auto out = open_out(file);
  out << "h,replica,statistic,mixture_sample\n";
  for (std::size_t q = 0; q < report.samples.size(); ++q) {
    for (std::size_t r = 0; r < report.samples[q].size(); ++r) {
      out << format_double(report.plan.h_list[q]) << ',' << r << ','
          << format_double(report.samples[q][r]) << ','
          << format_double(report.mixture[r]) << '\n';
    }
  }
  finish(out, file);
}

std::string plan_to_json(const clt::ExperimentPlan& plan) {
  json j{
      {"sim",
       {{"horizon", plan.sim.horizon},
        {"steps", plan.sim.steps},
        {"master_seed", plan.sim.master_seed},
        {"replica_count", plan.sim.replica_count}}},
      {"h_list", plan.h_list},
      {"replicas", plan.replicas},
      {"policy",
       {{"delta_divisor", plan.policy.delta_divisor},
        {"eps_divisor", plan.policy.eps_divisor}}},
      {"threads", plan.threads},
      {"out_dir", plan.out_dir},
      {"bracket",
       {{"mm_h", plan.bracket.mm_h},
        {"mm_steps", plan.bracket.mm_steps},
        {"mm_replicas", plan.bracket.mm_replicas},
        {"t_list", plan.bracket.t_list},
        {"mw_h_grid", plan.bracket.mw_h_grid},
        {"mw_steps", plan.bracket.mw_steps},
        {"mw_replicas", plan.bracket.mw_replicas},
        {"a3_h", plan.bracket.a3_h},
        {"a3_steps", plan.bracket.a3_steps},
        {"a3_replicas", plan.bracket.a3_replicas},
        {"a3_grid", plan.bracket.a3_grid},
        {"a3_eps_divisor", plan.bracket.a3_eps_divisor}}},
      {"expectation",
       {{"h_list", plan.expectation.h_list},
        {"replicas", plan.expectation.replicas}}}};
  return j.dump(2);
}

clt::ExperimentPlan plan_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  clt::ExperimentPlan plan;
  if (j.contains("sim")) {
    const auto& s = j["sim"];
    plan.sim.horizon = s.value("horizon", plan.sim.horizon);
    plan.sim.steps = s.value("steps", plan.sim.steps);
    plan.sim.master_seed = s.value("master_seed", plan.sim.master_seed);
    plan.sim.replica_count = s.value("replica_count", plan.sim.replica_count);
  }
  if (j.contains("h_list"))
    plan.h_list = j["h_list"].get<std::vector<double>>();
  plan.replicas = j.value("replicas", plan.replicas);
  if (j.contains("policy")) {
    plan.policy.delta_divisor =
        j["policy"].value("delta_divisor", plan.policy.delta_divisor);
    plan.policy.eps_divisor =
        j["policy"].value("eps_divisor", plan.policy.eps_divisor);
  }
  plan.threads = j.value("threads", plan.threads);
  plan.out_dir = j.value("out_dir", plan.out_dir);
  if (j.contains("bracket")) {
    const auto& b = j["bracket"];
    auto& s = plan.bracket;
    s.mm_h = b.value("mm_h", s.mm_h);
    s.mm_steps = b.value("mm_steps", s.mm_steps);
    s.mm_replicas = b.value("mm_replicas", s.mm_replicas);
    if (b.contains("t_list")) s.t_list = b["t_list"].get<std::vector<double>>();
    if (b.contains("mw_h_grid"))
      s.mw_h_grid = b["mw_h_grid"].get<std::vector<double>>();
    s.mw_steps = b.value("mw_steps", s.mw_steps);
    s.mw_replicas = b.value("mw_replicas", s.mw_replicas);
    s.a3_h = b.value("a3_h", s.a3_h);
    s.a3_steps = b.value("a3_steps", s.a3_steps);
    s.a3_replicas = b.value("a3_replicas", s.a3_replicas);
    s.a3_grid = b.value("a3_grid", s.a3_grid);
    s.a3_eps_divisor = b.value("a3_eps_divisor", s.a3_eps_divisor);
  }
  if (j.contains("expectation")) {
    const auto& e = j["expectation"];
    if (e.contains("h_list"))
      plan.expectation.h_list = e["h_list"].get<std::vector<double>>();
    plan.expectation.replicas =
        e.value("replicas", plan.expectation.replicas);
  }
  return plan;
}

std::string report_to_json(const clt::CltReport& report) {
  json per_h = json::array();
  for (const auto& row : report.per_h) {
    per_h.push_back({{"h", row.h},
                     {"ks_D", row.ks_D},
                     {"ks_p", row.ks_p},
                     {"mean_S", row.mean_S},
                     {"var_S", row.var_S},
                     {"predicted_mean", row.predicted_mean},
                     {"predicted_var", row.predicted_var},
                     {"bracket_ratio", row.bracket_ratio}});
  }
  json j{{"schema", "localtime-lab/clt-report/v1"},
         {"plan", json::parse(plan_to_json(report.plan))},
         {"per_h", per_h},
         {"runtime_seconds", report.runtime_seconds},
         {"seeds",
          {{"master_seed", report.plan.sim.master_seed},
           {"path_purpose", 0},
           {"eta_purpose", 1},
           {"note", "eta stream is purpose-disjoint from path streams"}}}};
  return j.dump(2);
}

void write_report_json(const std::string& file, const clt::CltReport& report) {
  auto out = open_out(file);
  out << report_to_json(report) << '\n';
  finish(out, file);
}

std::vector<std::string> validate_report_json(const std::string& json_text) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    problems.push_back(std::string("parse error: ") + e.what());
    return problems;
  }
  if (j.value("schema", "") != "localtime-lab/clt-report/v1")
    problems.push_back("missing or wrong schema tag");
  for (const char* key : {"plan", "per_h", "runtime_seconds", "seeds"})
    if (!j.contains(key)) problems.push_back(std::string("missing key: ") + key);
  if (j.contains("per_h")) {
    if (!j["per_h"].is_array()) {
      problems.push_back("per_h must be an array");
    } else {
      std::size_t idx = 0;
      for (const auto& row : j["per_h"]) {
        for (const char* key : {"h", "ks_D", "ks_p", "mean_S", "var_S",
                                "predicted_mean", "predicted_var",
                                "bracket_ratio"}) {
          if (!row.contains(key) || !row[key].is_number())
            problems.push_back("per_h[" + std::to_string(idx) +
                               "]: missing numeric key " + key);
        }
        if (row.contains("ks_D")) {
          const double d = row["ks_D"].get<double>();
          if (d < 0.0 || d > 1.0)
            problems.push_back("per_h[" + std::to_string(idx) +
                               "]: ks_D outside [0,1]");
        }
        ++idx;
      }
    }
  }
  if (j.contains("seeds") && !j["seeds"].contains("master_seed"))
    problems.push_back("seeds.master_seed missing");
  return problems;
}

void write_manifest(const std::string& file, const RunManifest& manifest) {
  auto out = open_out(file);
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  json j{{"subcommand", manifest.subcommand},
         {"config_path", manifest.config_path},
         {"overrides", manifest.overrides},
         {"out_dir", manifest.out_dir},
         {"timestamp", stamp},
         {"resolved_seed", manifest.resolved_seed},
         {"resolved_config",
          manifest.resolved_config_json.empty()
              ? json{}
              : json::parse(manifest.resolved_config_json)}};
  out << j.dump(2) << '\n';
  finish(out, file);
}

}  // namespace ltlab::io
