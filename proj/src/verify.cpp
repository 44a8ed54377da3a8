#include "ltlab/verify.hpp"

#include <cmath>
#include <cstdio>

#include "ltlab/harness.hpp"
#include "ltlab/intersection.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/martingale.hpp"
#include "ltlab/mollifier.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/rng.hpp"
#include "ltlab/stats.hpp"

namespace ltlab::verify {

namespace {

CheckRow make_row(std::string name, double value, double threshold,
                  std::string detail = {}) {
  CheckRow row;
  row.name = std::move(name);
  row.value = value;
  row.threshold = threshold;
  row.pass = std::abs(value) <= threshold;
  row.detail = std::move(detail);
  return row;
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

std::vector<CheckRow> deterministic_suite() {
  std::vector<CheckRow> rows;

  // J_h piecewise form against the positive-part combination, K_h indicator
  // form against 2*1{x>0} - 1{x>h} - 1{x>-h}, on a dense grid plus the
  // boundary points.
  {
    double max_j = 0.0;
    int k_mismatch = 0;
    const double h = 0.7;
    rng::Philox gen(12345, 0, rng::Purpose::stats);
    for (int i = 0; i < 10000; ++i) {
      double x;
      if (i < 7) {
        const double edge[7] = {-h, 0.0, h, -2 * h, 2 * h, -h / 2, h / 2};
        x = edge[i];
      } else {
        x = (gen.uniform01() - 0.5) * 4.0 * h;
      }
      const double combo = 2.0 * positive_part(x) - positive_part(x - h) -
                           positive_part(x + h);
      max_j = std::max(max_j, std::abs(martingale::kernel_J(h, x) - combo));
      const int k_alt = 2 * (x > 0.0) - (x > h) - (x > -h);
      if (martingale::kernel_K(h, x) != k_alt) ++k_mismatch;
    }
    rows.push_back(make_row("kernel_J piecewise == positive-part combo",
                            max_j, 0.0, "10^4-point grid, exact"));
    rows.push_back(make_row("kernel_K indicator == step combination",
                            static_cast<double>(k_mismatch), 0.0,
                            "10^4-point grid, exact"));
  }

  // Weight integral over [0,1]^2 of |x+y| - |x-y|: the triangle split gives
  // int int_{y<x} 2y + int int_{x<y} 2x = 1/3 + 1/3; quadrature must agree.
  {
    const double closed = 1.0 / 3.0 + 1.0 / 3.0;
    const auto inner = [](double x) {
      return quadrature::adaptive_simpson(
          [x](double y) { return std::abs(x + y) - std::abs(x - y); }, 0.0,
          1.0, 1e-14);
    };
    const double quad = quadrature::adaptive_simpson(inner, 0.0, 1.0, 1e-14);
    rows.push_back(make_row("weight integral closed form - 2/3",
                            closed - 2.0 / 3.0, 0.0));
    rows.push_back(
        make_row("weight integral quadrature - 2/3", quad - 2.0 / 3.0, 1e-12));
  }

  // Resolvent v(x) = e^{-|x|} against the defining integral.
  {
    rows.push_back(make_row("v(1) - 1/e",
                            intersection::resolvent_v(1.0) - std::exp(-1.0),
                            0.0));
    rows.push_back(make_row(
        "v(1) quadrature - e^{-1}",
        intersection::resolvent_v_quadrature(1.0) - std::exp(-1.0), 1e-8));
    rows.push_back(make_row(
        "v(2) quadrature - e^{-2}",
        intersection::resolvent_v_quadrature(2.0) - std::exp(-2.0), 1e-8));
  }

  // Smoothed positive part: g'(0) = 1/2 for both symmetric shapes; exact
  // branches outside the support.
  {
    const localtime::Mollifier bump(0.25);
    const localtime::Mollifier quartic(0.25, localtime::BumpShape::quartic);
    rows.push_back(make_row("g'(0) - 1/2 (smooth bump)",
                            bump.positive_part(0.0).g_prime - 0.5, 1e-10));
    rows.push_back(make_row("g'(0) - 1/2 (quartic bump)",
                            quartic.positive_part(0.0).g_prime - 0.5, 1e-10));
    rows.push_back(make_row("g(2 eps) - 2 eps",
                            bump.positive_part(0.5).g - 0.5, 0.0));
    rows.push_back(
        make_row("g(-2 eps)", bump.positive_part(-0.5).g, 0.0));
  }

  // Constant consistency: c' = c sqrt(2), via int L^2 = 2 alpha2(0).
  {
    rows.push_back(make_row(
        "c' - sqrt(2) c",
        clt::kMixtureCPrime - std::sqrt(2.0) * clt::kMixtureC, 1e-14));
    rows.push_back(make_row("c - sqrt(64/3)",
                            clt::kMixtureC - std::sqrt(64.0 / 3.0), 1e-14));
  }

  return rows;
}

namespace {

struct PathwiseAccum {
  std::vector<double> tanaka_res[3];
  std::vector<double> tanaka_lhs[3];
  std::vector<double> decomp_res;
  std::vector<double> decomp_lhs;
  int j_bound_violations = 0;
};

PathwiseAccum run_pathwise(const PathwiseConfig& config, std::size_t steps) {
  const double a_values[3] = {0.0, 0.1, -0.1};
  pathsim::SimConfig cfg{config.horizon, steps, config.master_seed,
                         static_cast<std::uint32_t>(config.paths)};
  const double eps = config.h / 8.0;

  PathwiseAccum acc;
  for (auto& v : acc.tanaka_res) v.assign(config.paths, 0.0);
  for (auto& v : acc.tanaka_lhs) v.assign(config.paths, 0.0);
  acc.decomp_res.assign(config.paths, 0.0);
  acc.decomp_lhs.assign(config.paths, 0.0);

  std::vector<int> violations(config.paths, 0);
  util::parallel_for(config.paths, config.threads, [&](std::size_t r) {
    const auto path =
        pathsim::generate_brownian(cfg, static_cast<std::uint32_t>(r));
    for (int ai = 0; ai < 3; ++ai) {
      const auto tc = martingale::tanaka_check(path, a_values[ai], eps);
      acc.tanaka_res[ai][r] = tc.residual;
      acc.tanaka_lhs[ai][r] = tc.lhs;
    }
    martingale::DecompositionOptions opts;
    opts.k_sign = config.k_sign;
    const auto dc = martingale::decomposition_check(path, config.h, eps, opts);
    acc.decomp_res[r] = dc.residual;
    acc.decomp_lhs[r] = dc.lhs;

    // J-term bound with the sup over a fine binned field.
    const auto field = localtime::local_time_binned(path, eps);
    const double sup_l = localtime::max_value(field);
    const double bound = 2.0 * config.h * config.h * sup_l;
    if (std::abs(dc.j_term_end) > bound || std::abs(dc.j_term_start) > bound)
      violations[r] = 1;
  });
  for (int v : violations) acc.j_bound_violations += v;
  return acc;
}

double rms(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

std::vector<CheckRow> pathwise_suite(const PathwiseConfig& config) {
  std::vector<CheckRow> rows;
  const auto base = run_pathwise(config, config.steps);

  const char* names[3] = {"tanaka residual a=0", "tanaka residual a=+0.1",
                          "tanaka residual a=-0.1"};
  for (int ai = 0; ai < 3; ++ai) {
    const double rel = rms(base.tanaka_res[ai]) / rms(base.tanaka_lhs[ai]);
    rows.push_back(make_row(names[ai], rel, config.tanaka_rel_tol,
                            "RMS residual / RMS alpha2"));
  }
  const double decomp_rel = rms(base.decomp_res) / rms(base.decomp_lhs);
  rows.push_back(make_row("decomposition residual", decomp_rel,
                          config.decomposition_rel_tol,
                          "RMS residual / RMS lhs"));
  rows.push_back(make_row("J-term bound violations",
                          static_cast<double>(base.j_bound_violations), 0.0,
                          "|int J_h ds| <= 2 h^2 sup L"));

  if (config.refinement) {
    const auto fine = run_pathwise(config, config.steps * 2);
    const double coarse_rms = rms(base.tanaka_res[0]);
    const double fine_rms = rms(fine.tanaka_res[0]);
    // Pass when the residual shrinks (leave a small margin for noise).
    rows.push_back(make_row("tanaka refinement ratio (2n vs n)",
                            fine_rms / coarse_rms, 0.95,
                            "must be < 1 up to noise"));
    const double coarse_d = rms(base.decomp_res);
    const double fine_d = rms(fine.decomp_res);
    rows.push_back(make_row("decomposition refinement ratio (2n vs n)",
                            fine_d / coarse_d, 0.95, "must be < 1 up to noise"));
  }
  return rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& row : rows)
    if (!row.pass) return false;
  return true;
}

}  // namespace ltlab::verify
