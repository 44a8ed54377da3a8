#pragma once

#include <cstdint>
#include <vector>

namespace ltlab::pathsim {

struct SimConfig {
  double horizon = 1.0;            // t
  std::size_t steps = 0;           // n
  std::uint64_t master_seed = 0;
  std::uint32_t replica_count = 1;

  double step() const { return horizon / static_cast<double>(steps); }
  void validate() const;  // throws std::invalid_argument
};

// A discretized Brownian path W_0..W_n on the uniform grid i * delta.
// Immutable after creation; safe to share read-only across threads.
struct SamplePath {
  std::vector<double> values;
  double delta = 0.0;
  std::uint64_t master_seed = 0;
  std::uint32_t replica_id = 0;

  std::size_t steps() const { return values.empty() ? 0 : values.size() - 1; }
  double horizon() const { return delta * static_cast<double>(steps()); }
};

// Deterministic function of (config, replica_id); distinct replicas use
// disjoint counter-based streams. W_0 = 0, increments ~ N(0, delta).
SamplePath generate_brownian(const SimConfig& config, std::uint32_t replica_id);

// Simple random walk on Z, S_0 = 0.
struct WalkPath {
  std::vector<long long> positions;
  std::uint64_t seed = 0;

  std::size_t steps() const {
    return positions.empty() ? 0 : positions.size() - 1;
  }
};

WalkPath generate_walk(std::size_t steps, std::uint64_t seed);

}  // namespace ltlab::pathsim
