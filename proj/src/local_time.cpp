#include "ltlab/local_time.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltlab::localtime {

namespace {

void require_nonempty(const pathsim::SamplePath& path) {
  if (path.values.empty() || path.steps() == 0)
    throw std::invalid_argument("local_time: empty path");
}

}  // namespace

LocalTimeField local_time_binned(const pathsim::SamplePath& path,
                                 double bin_width) {
  require_nonempty(path);
  if (!(bin_width > 0.0))
    throw std::invalid_argument("local_time_binned: bin width must be > 0");

  const std::size_t n = path.steps();
  const auto [mn_it, mx_it] =
      std::minmax_element(path.values.begin(), path.values.begin() + n);
  const double mn = *mn_it;
  const double mx = *mx_it;

  // Origin aligned to an absolute multiple of the bin width so that fields
  // of the same resolution share their grid.
  const double origin = std::floor(mn / bin_width) * bin_width;
  std::size_t count =
      static_cast<std::size_t>(std::floor((mx - origin) / bin_width)) + 1;

  LocalTimeField field;
  field.x_origin = origin;
  field.bin_width = bin_width;
  field.horizon = path.horizon();
  field.values.assign(count, 0.0);

  const double weight = path.delta / bin_width;
  for (std::size_t i = 0; i < n; ++i) {
    auto k = static_cast<std::ptrdiff_t>(
        std::floor((path.values[i] - origin) / bin_width));
    k = std::clamp<std::ptrdiff_t>(k, 0,
                                   static_cast<std::ptrdiff_t>(count) - 1);
    field.values[static_cast<std::size_t>(k)] += weight;
  }
  return field;
}

FieldGrid cover_grid(const pathsim::SamplePath& path, double bin_width,
                     double margin) {
  require_nonempty(path);
  if (!(bin_width > 0.0))
    throw std::invalid_argument("cover_grid: bin width must be > 0");
  const auto [mn_it, mx_it] =
      std::minmax_element(path.values.begin(), path.values.end());
  const double lo = *mn_it - margin;
  const double hi = *mx_it + margin;
  FieldGrid grid;
  grid.bin_width = bin_width;
  grid.x_origin = std::floor(lo / bin_width) * bin_width;
  grid.count = static_cast<std::size_t>(
                   std::floor((hi - grid.x_origin) / bin_width)) +
               1;
  return grid;
}

LocalTimeField local_time_kernel(const pathsim::SamplePath& path,
                                 const Mollifier& m, const FieldGrid& grid) {
  require_nonempty(path);
  if (grid.count == 0)
    throw std::invalid_argument("local_time_kernel: empty grid");

  LocalTimeField field;
  field.x_origin = grid.x_origin;
  field.bin_width = grid.bin_width;
  field.horizon = path.horizon();
  field.values.assign(grid.count, 0.0);

  const std::size_t n = path.steps();
  const double eps = m.eps();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = path.values[i];
    // Only grid points within the kernel support contribute.
    const auto k_lo = static_cast<std::ptrdiff_t>(
        std::ceil((w - eps - grid.x_origin) / grid.bin_width));
    const auto k_hi = static_cast<std::ptrdiff_t>(
        std::floor((w + eps - grid.x_origin) / grid.bin_width));
    for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(k_lo, 0);
         k <= std::min<std::ptrdiff_t>(
                  k_hi, static_cast<std::ptrdiff_t>(grid.count) - 1);
         ++k) {
      field.values[static_cast<std::size_t>(k)] +=
          path.delta * m(w - field.x_at(k));
    }
  }
  return field;
}

double field_integral(const LocalTimeField& field) {
  double s = 0.0;
  for (double v : field.values) s += v;
  return s * field.bin_width;
}

double max_value(const LocalTimeField& field) {
  double mx = 0.0;
  for (double v : field.values) mx = std::max(mx, v);
  return mx;
}

long long shift_bins(const LocalTimeField& field, double h) {
  if (!(field.bin_width > 0.0))
    throw std::invalid_argument("shift_bins: field has no grid");
  const double ratio = h / field.bin_width;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * (1.0 + std::abs(ratio)))
    throw std::invalid_argument(
        "shift_bins: h must be an integer multiple of the bin width");
  return static_cast<long long>(rounded);
}

double lp_modulus(const LocalTimeField& field, double h, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_modulus: p must be >= 1");
  const long long m = shift_bins(field, h);
  const auto count = static_cast<std::ptrdiff_t>(field.size());
  double sum = 0.0;
  for (std::ptrdiff_t k = -static_cast<std::ptrdiff_t>(std::abs(m));
       k < count + static_cast<std::ptrdiff_t>(std::abs(m)); ++k) {
    const double diff = field.value_at(k + m) - field.value_at(k);
    if (diff == 0.0) continue;
    sum += (p == 2.0) ? diff * diff : std::pow(std::abs(diff), p);
  }
  return sum * field.bin_width;
}

double l2_statistic(const LocalTimeField& field, double h) {
  const double modulus = lp_modulus(field, h, 2.0);
  const double t = field.horizon;
  return (modulus - 4.0 * h * t) / (h * std::sqrt(h));
}

WalkLocalTime walk_local_time(const pathsim::WalkPath& walk) {
  WalkLocalTime lt;
  if (walk.positions.empty()) return lt;
  const auto [mn_it, mx_it] =
      std::minmax_element(walk.positions.begin(), walk.positions.end());
  lt.x_min = *mn_it;
  lt.counts.assign(static_cast<std::size_t>(*mx_it - *mn_it) + 1, 0);
  for (std::size_t i = 1; i < walk.positions.size(); ++i)
    ++lt.counts[static_cast<std::size_t>(walk.positions[i] - lt.x_min)];
  return lt;
}

WalkHamiltonian walk_hamiltonian(const pathsim::WalkPath& walk) {
  WalkHamiltonian h;
  h.local_time = walk_local_time(walk);
  const auto n = static_cast<long long>(walk.steps());

  // Route 1: literal pair counting over 1 <= i != j <= n.
  long long same = 0, adjacent = 0;
  for (long long i = 1; i <= n; ++i) {
    for (long long j = 1; j <= n; ++j) {
      if (i == j) continue;
      const long long d = walk.positions[static_cast<std::size_t>(i)] -
                          walk.positions[static_cast<std::size_t>(j)];
      if (d == 0) ++same;
      if (d == 1 || d == -1) ++adjacent;
    }
  }
  h.pair_count = same - adjacent / 2;  // adjacent is even by symmetry

  // Route 2: square sum over sites, including the two boundary terms where
  // one of l^x, l^{x+1} is zero.
  long long sq = 0;
  const auto& lt = h.local_time;
  for (long long x = lt.x_min - 1;
       x <= lt.x_min + static_cast<long long>(lt.counts.size()); ++x) {
    const long long d = lt.at(x) - lt.at(x + 1);
    sq += d * d;
  }
  h.square_sum = sq;
  h.from_square = sq / 2 - n;
  return h;
}

}  // namespace ltlab::localtime
