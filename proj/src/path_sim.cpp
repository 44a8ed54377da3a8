#include "ltlab/path_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "ltlab/rng.hpp"

namespace ltlab::pathsim {

void SimConfig::validate() const {
  if (steps == 0) throw std::invalid_argument("SimConfig: steps must be >= 1");
  if (!(horizon > 0.0))
    throw std::invalid_argument("SimConfig: horizon must be > 0");
  if (replica_count == 0)
    throw std::invalid_argument("SimConfig: replica_count must be >= 1");
}

SamplePath generate_brownian(const SimConfig& config,
                             std::uint32_t replica_id) {
  config.validate();
  if (replica_id >= config.replica_count)
    throw std::invalid_argument("generate_brownian: replica_id out of range");

  rng::Philox gen(config.master_seed, replica_id, rng::Purpose::path);
  const double sqrt_dt = std::sqrt(config.step());

  SamplePath path;
  path.delta = config.step();
  path.master_seed = config.master_seed;
  path.replica_id = replica_id;
  path.values.resize(config.steps + 1);
  path.values[0] = 0.0;
  double w = 0.0;
  for (std::size_t i = 0; i < config.steps; ++i) {
    w += sqrt_dt * gen.gaussian();
    path.values[i + 1] = w;
  }
  return path;
}

WalkPath generate_walk(std::size_t steps, std::uint64_t seed) {
  rng::Philox gen(seed, 0, rng::Purpose::walk);
  WalkPath walk;
  walk.seed = seed;
  walk.positions.resize(steps + 1);
  walk.positions[0] = 0;
  long long s = 0;
  for (std::size_t i = 0; i < steps; ++i) {
    s += (gen.next_u32() & 1u) ? 1 : -1;
    walk.positions[i + 1] = s;
  }
  return walk;
}

}  // namespace ltlab::pathsim
