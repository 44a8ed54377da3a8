#pragma once

#include <string>
#include <vector>

#include "ltlab/harness.hpp"
#include "ltlab/intersection.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/martingale.hpp"
#include "ltlab/path_sim.hpp"

namespace ltlab::io {

// Locale-independent formatting (dot decimal separator, round-trip safe).
std::string format_double(double v);

// CSV writers; all UTF-8, LF line endings. Throw std::runtime_error on I/O
// failure.
void write_path_csv(const std::string& file, const pathsim::SamplePath& path);
void write_path_metadata(const std::string& file,
                         const pathsim::SamplePath& path);
void write_field_csv(const std::string& file,
                     const localtime::LocalTimeField& field);
void write_field_metadata(const std::string& file,
                          const localtime::LocalTimeField& field,
                          const pathsim::SamplePath& path, double eps);
void write_estimates_csv(const std::string& file,
                         const std::vector<intersection::Alpha2Estimate>& a2,
                         const std::vector<intersection::Alpha3Estimate>& a3);
void write_series_csv(const std::string& file,
                      const martingale::MartingaleSeries& series);
void write_scaling_csv(const std::string& file,
                       const martingale::MwScalingTable& table);
void write_samples_csv(const std::string& file, const clt::CltReport& report);

// Report JSON: schema "localtime-lab/clt-report/v1" with top-level keys
// plan, per_h, runtime_seconds, seeds.
std::string report_to_json(const clt::CltReport& report);
void write_report_json(const std::string& file, const clt::CltReport& report);

// Validates the published schema; returns a list of problems (empty = valid).
std::vector<std::string> validate_report_json(const std::string& json_text);

// Serialized run manifest, written before any computation starts.
struct RunManifest {
  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::uint64_t resolved_seed = 0;
  std::string resolved_config_json;  // fully resolved plan, as JSON text
};

void write_manifest(const std::string& file, const RunManifest& manifest);

// Plan <-> JSON (config files use the same shape as the manifest's
// resolved config).
std::string plan_to_json(const clt::ExperimentPlan& plan);
clt::ExperimentPlan plan_from_json(const std::string& json_text);

}  // namespace ltlab::io
