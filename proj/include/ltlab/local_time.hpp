#pragma once

#include <cstdint>
#include <vector>

#include "ltlab/mollifier.hpp"
#include "ltlab/path_sim.hpp"

namespace ltlab::localtime {

// Spatial field of local time values L^{x_k}_t at x_k = x_origin + k * delta,
// bin width delta. Values are zero off the stored grid.
struct LocalTimeField {
  double x_origin = 0.0;
  double bin_width = 0.0;
  std::vector<double> values;
  double horizon = 0.0;

  std::size_t size() const { return values.size(); }
  double x_at(std::ptrdiff_t k) const {
    return x_origin + static_cast<double>(k) * bin_width;
  }
  double value_at(std::ptrdiff_t k) const {
    return (k >= 0 && k < static_cast<std::ptrdiff_t>(values.size()))
               ? values[static_cast<std::size_t>(k)]
               : 0.0;
  }
};

// Occupation estimate with half-open bins [x_k, x_k + delta) and left-point
// sampling over i < n. Conserves delta * sum(L) = t by construction.
LocalTimeField local_time_binned(const pathsim::SamplePath& path,
                                 double bin_width);

struct FieldGrid {
  double x_origin = 0.0;
  double bin_width = 0.0;
  std::size_t count = 0;
};

// Grid spanning [min W - margin, max W + margin] at the given resolution.
FieldGrid cover_grid(const pathsim::SamplePath& path, double bin_width,
                     double margin);

// Mollified estimate L^{x_k} = delta_t * sum_{i<n} f_eps(W_i - x_k).
LocalTimeField local_time_kernel(const pathsim::SamplePath& path,
                                 const Mollifier& m, const FieldGrid& grid);

// delta * sum of values (total mass; equals t for binned fields).
double field_integral(const LocalTimeField& field);

double max_value(const LocalTimeField& field);

// Validates that h is an integer multiple of the bin width and returns the
// shift in bins. Throws std::invalid_argument otherwise.
long long shift_bins(const LocalTimeField& field, double h);

// L^p modulus: delta * sum_k |L^{x_k+h} - L^{x_k}|^p with the field treated
// as zero outside its grid. Requires h = m * delta exactly and p >= 1.
double lp_modulus(const LocalTimeField& field, double h, double p);

// CLT statistic (int (L^{x+h} - L^x)^2 dx - 4 h t) / h^{3/2}.
double l2_statistic(const LocalTimeField& field, double h);

// Integer local time of a simple random walk: l^x = #{1 <= i <= n: S_i = x}.
// The i = 0 term is excluded, so the counts sum to n.
struct WalkLocalTime {
  long long x_min = 0;
  std::vector<long long> counts;  // counts[k] is l^{x_min + k}

  long long at(long long x) const {
    const long long k = x - x_min;
    return (k >= 0 && k < static_cast<long long>(counts.size()))
               ? counts[static_cast<std::size_t>(k)]
               : 0;
  }
  long long total() const {
    long long s = 0;
    for (long long c : counts) s += c;
    return s;
  }
};

WalkLocalTime walk_local_time(const pathsim::WalkPath& walk);

// Polymer Hamiltonian of the walk, computed along two independent routes:
//   pair_count     = sum_{i!=j} 1{S_i=S_j} - (1/2) sum_{i!=j} 1{|S_i-S_j|=1}
//                    (literal double loop over 1 <= i, j <= n),
//   square_sum     = sum_x (l^x - l^{x+1})^2,
//   from_square    = square_sum / 2 - n.
// The bare square sum counts ordered pairs twice and includes the n
// self-pairs, so pair_count == from_square; tests verify this exhaustively.
struct WalkHamiltonian {
  WalkLocalTime local_time;
  long long pair_count = 0;
  long long square_sum = 0;
  long long from_square = 0;
};

WalkHamiltonian walk_hamiltonian(const pathsim::WalkPath& walk);

}  // namespace ltlab::localtime
