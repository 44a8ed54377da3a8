#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ltlab::verify {

struct CheckRow {
  std::string name;
  double value = 0.0;      // measured quantity (residual, distance, ...)
  double threshold = 0.0;  // pass iff |value| <= threshold unless noted
  bool pass = false;
  std::string detail;
};

// Closed-form / deterministic checks: J and K kernel identities on a dense
// grid, the (|x+y| - |x-y|) weight integral 2/3 by closed form and
// quadrature, the resolvent v against its defining integral, the smoothed
// positive part at zero, and the constant consistency c' = c sqrt(2).
std::vector<CheckRow> deterministic_suite();

struct PathwiseConfig {
  std::size_t paths = 100;
  std::size_t steps = 200000;
  double horizon = 1.0;
  std::uint64_t master_seed = 20240521;
  double h = 0.05;          // decomposition scale; eps = h/8
  double tanaka_rel_tol = 0.05;
  double decomposition_rel_tol = 0.05;
  std::size_t threads = 0;
  int k_sign = +1;          // -1: self-test, the suite must then fail
  bool refinement = true;   // also run at doubled steps, residual must shrink
};

// Pathwise identity checks: Tanaka residuals at a in {0, +0.1, -0.1},
// the decomposition residual at scale h, the J-term bound, and the
// n-doubling refinement trend.
std::vector<CheckRow> pathwise_suite(const PathwiseConfig& config);

bool all_pass(const std::vector<CheckRow>& rows);

}  // namespace ltlab::verify
