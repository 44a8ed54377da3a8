#include "ltlab/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ltlab/intersection.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/rank_index.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/stats.hpp"

namespace ltlab::martingale {

namespace {

void require_h(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("martingale: h must be > 0");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

double kernel_J(double h, double x) {
  require_h(h);
  if (x <= -h || x >= h) return 0.0;
  return x <= 0.0 ? -x - h : x - h;
}

int kernel_K(double h, double x) {
  require_h(h);
  if (x > 0.0 && x <= h) return 1;
  if (x > -h && x <= 0.0) return -1;
  return 0;
}

double euler_stochastic_integral(const pathsim::SamplePath& path,
                                 std::span<const double> integrand) {
  if (integrand.size() != path.steps())
    throw std::invalid_argument(
        "euler_stochastic_integral: integrand needs one value per step");
  double sum = 0.0;
  for (std::size_t i = 0; i < integrand.size(); ++i)
    sum += integrand[i] * (path.values[i + 1] - path.values[i]);
  return sum;
}

std::vector<std::int64_t> martingale_inner_counts(
    const pathsim::SamplePath& path, double h) {
  require_h(h);
  const std::size_t n = path.steps();
  if (n == 0) throw std::invalid_argument("martingale_inner_counts: empty path");
  std::span<const double> w{path.values.data(), n};
  util::ValueIndex index(w);
  util::Fenwick<std::int64_t> tree(n);

  std::vector<std::int64_t> counts(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t below = tree.prefix(index.rank_lt(w[j] - h));
    const std::int64_t strictly_below = tree.prefix(index.rank_lt(w[j]));
    const std::int64_t below_hi = tree.prefix(index.rank_lt(w[j] + h));
    // plus window [W_j - h, W_j), minus window [W_j, W_j + h)
    counts[j] = (strictly_below - below) - (below_hi - strictly_below);
    tree.add(index.slot_of(j), 1);
  }
  return counts;
}

MartingaleSeries martingale_path(const pathsim::SamplePath& path, double h) {
  const auto counts = martingale_inner_counts(path, h);
  const std::size_t n = path.steps();
  const double d = path.delta;
  const double inv_h32 = 1.0 / (h * std::sqrt(h));
  const double inv_h3 = 1.0 / (h * h * h);

  MartingaleSeries series;
  series.h = h;
  series.times.resize(n + 1);
  series.M.assign(n + 1, 0.0);
  series.bracket_MW.assign(n + 1, 0.0);
  series.bracket_MM.assign(n + 1, 0.0);
  series.times[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double inner = d * static_cast<double>(counts[j]);  // int K dr
    series.times[j + 1] = static_cast<double>(j + 1) * d;
    series.M[j + 1] = series.M[j] + inv_h32 * inner *
                                        (path.values[j + 1] - path.values[j]);
    series.bracket_MW[j + 1] = series.bracket_MW[j] + inv_h32 * inner * d;
    series.bracket_MM[j + 1] =
        series.bracket_MM[j] + inv_h3 * inner * inner * d;
  }
  return series;
}

std::vector<double> mw_bracket_values(const pathsim::SamplePath& path,
                                      std::span<const double> h_grid) {
  const std::size_t n = path.steps();
  if (n == 0) throw std::invalid_argument("mw_bracket_values: empty path");
  std::span<const double> w{path.values.data(), n};
  util::ValueIndex index(w);
  util::Fenwick<std::int64_t> tree(n);

  std::vector<std::int64_t> sums(h_grid.size(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    const std::int64_t strictly_below = tree.prefix(index.rank_lt(w[j]));
    for (std::size_t q = 0; q < h_grid.size(); ++q) {
      const double h = h_grid[q];
      const std::int64_t below = tree.prefix(index.rank_lt(w[j] - h));
      const std::int64_t below_hi = tree.prefix(index.rank_lt(w[j] + h));
      sums[q] += (strictly_below - below) - (below_hi - strictly_below);
    }
    tree.add(index.slot_of(j), 1);
  }

  std::vector<double> out(h_grid.size());
  const double d = path.delta;
  for (std::size_t q = 0; q < h_grid.size(); ++q) {
    const double h = h_grid[q];
    out[q] = d * d * static_cast<double>(sums[q]) / (h * std::sqrt(h));
  }
  return out;
}

TanakaCheck tanaka_check(const pathsim::SamplePath& path, double a,
                         double eps) {
  const std::size_t n = path.steps();
  if (n == 0) throw std::invalid_argument("tanaka_check: empty path");
  const double d = path.delta;
  const double t = path.horizon();
  const double w_end = path.values[n];

  TanakaCheck check;
  check.lhs = intersection::alpha2_counting(path, a, eps).value;

  double term_end = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    term_end += positive_part(w_end - path.values[i] - a);
  term_end *= 2.0 * d;

  // Stochastic term: 2 sum_j [Delta #{i<j: W_i < W_j - a}] dW_j.
  std::span<const double> w{path.values.data(), n};
  util::ValueIndex index(w);
  util::Fenwick<std::int64_t> tree(n);
  double stochastic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto below = tree.prefix(index.rank_lt(w[j] - a));
    stochastic += d * static_cast<double>(below) *
                  (path.values[j + 1] - path.values[j]);
    tree.add(index.slot_of(j), 1);
  }
  stochastic *= 2.0;

  check.rhs = term_end - 2.0 * positive_part(-a) * t - stochastic;
  check.residual = check.lhs - check.rhs;
  return check;
}

TanakaCheck tanaka_check_mollified(const pathsim::SamplePath& path, double a,
                                   const localtime::Mollifier& m) {
  const std::size_t n = path.steps();
  if (n == 0) throw std::invalid_argument("tanaka_check_mollified: empty path");
  const double d = path.delta;
  const double t = path.horizon();
  const double w_end = path.values[n];

  TanakaCheck check;
  check.lhs = intersection::alpha2_kernel(path, m, a).value;

  double term_end = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    term_end += m.positive_part(w_end - path.values[i] - a).g;
  term_end *= 2.0 * d;

  double stochastic = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < j; ++i)
      inner += m.positive_part(path.values[j] - path.values[i] - a).g_prime;
    stochastic += d * inner * (path.values[j + 1] - path.values[j]);
  }
  stochastic *= 2.0;

  check.rhs = term_end - 2.0 * m.positive_part(-a).g * t - stochastic;
  check.residual = check.lhs - check.rhs;
  return check;
}

DecompositionCheck decomposition_check(const pathsim::SamplePath& path,
                                       double h, double eps,
                                       DecompositionOptions options) {
  require_h(h);
  if (!(eps < h))
    throw std::invalid_argument("decomposition_check: requires eps < h");
  const std::size_t n = path.steps();
  if (n == 0) throw std::invalid_argument("decomposition_check: empty path");
  const double d = path.delta;
  const double t = path.horizon();

  const double offsets[3] = {0.0, h, -h};
  auto alpha = intersection::alpha2_counting_batch(path, offsets, eps);
  if (options.correct_window_bias) {
    for (int q = 0; q < 3; ++q) {
      alpha[q] -= t * (intersection::resolvent_window_average(offsets[q], eps) -
                       intersection::resolvent_v(offsets[q]));
    }
  }

  DecompositionCheck check;
  check.lhs = 2.0 * (2.0 * alpha[0] - alpha[1] - alpha[2]) - 4.0 * h * t;

  double j_end = 0.0, j_start = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    j_end += kernel_J(h, path.values[n] - path.values[i]);
    j_start += kernel_J(h, path.values[0] - path.values[i]);
  }
  check.j_term_end = j_end * d;
  check.j_term_start = j_start * d;

  const auto counts = martingale_inner_counts(path, h);
  double stochastic = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    stochastic += d * static_cast<double>(options.k_sign * counts[j]) *
                  (path.values[j + 1] - path.values[j]);
  }

  check.rhs = 4.0 * check.j_term_end - 4.0 * stochastic;
  check.residual = check.lhs - check.rhs;
  return check;
}

MwScalingTable bracket_mw_scaling(const pathsim::SimConfig& sim,
                                  std::size_t replicas,
                                  std::span<const double> h_grid,
                                  std::size_t threads) {
  if (h_grid.size() < 2)
    throw std::invalid_argument("bracket_mw_scaling: need at least 2 h values");
  for (std::size_t q = 1; q < h_grid.size(); ++q)
    if (!(h_grid[q] < h_grid[q - 1]))
      throw std::invalid_argument("bracket_mw_scaling: h grid must decrease");

  pathsim::SimConfig cfg = sim;
  cfg.replica_count = std::max<std::uint32_t>(
      cfg.replica_count, static_cast<std::uint32_t>(replicas));

  // values[q][r] = <M^{h_q}, W>_1 on replica r; common paths across the grid.
  std::vector<std::vector<double>> values(h_grid.size(),
                                          std::vector<double>(replicas, 0.0));
  util::parallel_for(replicas, threads, [&](std::size_t r) {
    const auto path =
        pathsim::generate_brownian(cfg, static_cast<std::uint32_t>(r));
    const auto row = mw_bracket_values(path, h_grid);
    for (std::size_t q = 0; q < h_grid.size(); ++q) values[q][r] = row[q];
  });

  MwScalingTable table;
  std::vector<double> abs_means(h_grid.size());
  std::vector<double> mean_abs(h_grid.size());
  std::vector<double> hs(h_grid.begin(), h_grid.end());
  for (std::size_t q = 0; q < h_grid.size(); ++q) {
    ScalingRow row;
    row.h = h_grid[q];
    row.count = replicas;
    row.mean = stats::mean(values[q]);
    row.stderr_mean = stats::stderr_of_mean(values[q]);
    std::vector<double> abs_vals(values[q].size());
    for (std::size_t r = 0; r < values[q].size(); ++r)
      abs_vals[r] = std::abs(values[q][r]);
    row.mean_abs = stats::mean(abs_vals);
    row.stderr_abs = stats::stderr_of_mean(abs_vals);
    abs_means[q] = std::abs(row.mean);
    mean_abs[q] = row.mean_abs;
    table.rows.push_back(row);
  }
  table.slope_abs_mean = stats::loglog_slope(hs, abs_means);
  table.slope_mean_abs = stats::loglog_slope(hs, mean_abs);

  // Bootstrap error bar for the mean-magnitude slope: resample replicas.
  const std::size_t B = 200;
  std::vector<double> slopes;
  slopes.reserve(B);
  rng::Philox gen(sim.master_seed ^ 0x5ca1ab1eULL, 1, rng::Purpose::stats);
  std::vector<double> resampled(h_grid.size());
  for (std::size_t b = 0; b < B; ++b) {
    std::fill(resampled.begin(), resampled.end(), 0.0);
    for (std::size_t r = 0; r < replicas; ++r) {
      const auto k = static_cast<std::size_t>(gen.uniform01() *
                                              static_cast<double>(replicas));
      const std::size_t idx = std::min(k, replicas - 1);
      for (std::size_t q = 0; q < h_grid.size(); ++q)
        resampled[q] += std::abs(values[q][idx]);
    }
    for (auto& v : resampled) v /= static_cast<double>(replicas);
    slopes.push_back(stats::loglog_slope(hs, resampled));
  }
  table.slope_bootstrap_se = std::sqrt(stats::variance(slopes));
  return table;
}

}  // namespace ltlab::martingale
