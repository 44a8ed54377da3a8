#include "ltlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ltlab/intersection.hpp"
#include "ltlab/parallel.hpp"
#include "ltlab/quadrature.hpp"
#include "ltlab/rng.hpp"

namespace ltlab::clt {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310002;
}

double predicted_mean_statistic(double h) {
  return -8.0 * std::sqrt(h) / kSqrt2Pi;
}

double predicted_modulus_mean(double h) {
  return 4.0 * h - 8.0 * h * h / kSqrt2Pi;
}

double predicted_modulus_mean_exact(double h, double t) {
  // 4 int_0^t (t - tau)(p_tau(0) - p_tau(h)) dtau. Substituting tau = u^2
  // removes the 1/sqrt(tau) endpoint singularity and leaves
  //   g(u) = 2 (t - u^2) (1 - e^{-h^2/(2 u^2)}) / sqrt(2 pi).
  const auto g = [h, t](double u) {
    if (u <= 0.0) return 2.0 * t / kSqrt2Pi;
    const double tau = u * u;
    return 2.0 * (t - tau) * (1.0 - std::exp(-h * h / (2.0 * tau))) / kSqrt2Pi;
  };
  return 4.0 * quadrature::adaptive_simpson(g, 0.0, std::sqrt(t), 1e-13, 44);
}

void ExperimentPlan::validate() const {
  sim.validate();
  if (h_list.empty())
    throw std::invalid_argument("ExperimentPlan: empty h list");
  for (std::size_t q = 1; q < h_list.size(); ++q)
    if (!(h_list[q] < h_list[q - 1]))
      throw std::invalid_argument("ExperimentPlan: h list must decrease");
  for (double h : h_list)
    if (!(h > 0.0)) throw std::invalid_argument("ExperimentPlan: h must be > 0");
  if (policy.delta_divisor < 1 || policy.eps_divisor < 1)
    throw std::invalid_argument("ExperimentPlan: bad resolution policy");
}

double mixture_sample(const localtime::LocalTimeField& field, double eta) {
  double sum_sq = 0.0;
  for (double v : field.values) sum_sq += v * v;
  return mixture_sample_from_l2(sum_sq * field.bin_width, eta);
}

double mixture_sample_from_l2(double int_l2, double eta) {
  return kMixtureC * std::sqrt(int_l2) * eta;
}

CltReport run_clt_experiment(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.replicas < 100)
    throw std::invalid_argument(
        "run_clt_experiment: needs at least 100 replicas for the asymptotic "
        "KS comparison");
  const auto start = std::chrono::steady_clock::now();

  pathsim::SimConfig cfg = plan.sim;
  cfg.replica_count = std::max<std::uint32_t>(
      cfg.replica_count, static_cast<std::uint32_t>(plan.replicas));

  CltReport report;
  report.plan = plan;
  report.samples.assign(plan.h_list.size(),
                        std::vector<double>(plan.replicas, 0.0));
  report.mixture.assign(plan.replicas, 0.0);
  report.int_l2.assign(plan.replicas, 0.0);

  // int L^2 reference resolution: the finest h of the grid.
  const double h_ref = plan.h_list.back();
  const double delta_ref = plan.policy.delta_for(h_ref);

  util::parallel_for(plan.replicas, plan.threads, [&](std::size_t r) {
    const auto path =
        pathsim::generate_brownian(cfg, static_cast<std::uint32_t>(r));
    for (std::size_t q = 0; q < plan.h_list.size(); ++q) {
      const double h = plan.h_list[q];
      const auto field =
          localtime::local_time_binned(path, plan.policy.delta_for(h));
      report.samples[q][r] = localtime::l2_statistic(field, h);
    }
    const auto ref_field = localtime::local_time_binned(path, delta_ref);
    double sum_sq = 0.0;
    for (double v : ref_field.values) sum_sq += v * v;
    report.int_l2[r] = sum_sq * ref_field.bin_width;

    // Fresh eta from the dedicated stream; never shares the path stream.
    rng::Philox eta_gen(cfg.master_seed, r, rng::Purpose::eta);
    report.mixture[r] =
        mixture_sample_from_l2(report.int_l2[r], eta_gen.gaussian());
  });

  const double mean_l2 = stats::mean(report.int_l2);
  for (std::size_t q = 0; q < plan.h_list.size(); ++q) {
    PerHRow row;
    row.h = plan.h_list[q];
    const auto ks = stats::ks_two_sample(report.samples[q], report.mixture);
    row.ks_D = ks.D;
    row.ks_p = ks.p;
    row.mean_S = stats::mean(report.samples[q]);
    row.var_S = stats::variance(report.samples[q]);
    row.predicted_mean = predicted_mean_statistic(row.h);
    row.predicted_var = (64.0 / 3.0) * mean_l2;
    report.per_h.push_back(row);
  }

  // Bootstrap SE of adjacent KS-distance differences (paired resampling of
  // replicas, mixture resampled alongside).
  if (plan.h_list.size() >= 2) {
    const std::size_t B = 100;
    rng::Philox gen(cfg.master_seed ^ 0x6b5fca2aULL, 2, rng::Purpose::stats);
    std::vector<std::vector<double>> diffs(plan.h_list.size() - 1);
    std::vector<double> mix(plan.replicas);
    std::vector<std::vector<double>> res(plan.h_list.size(),
                                         std::vector<double>(plan.replicas));
    for (std::size_t b = 0; b < B; ++b) {
      for (std::size_t r = 0; r < plan.replicas; ++r) {
        const auto k = static_cast<std::size_t>(
            gen.uniform01() * static_cast<double>(plan.replicas));
        const std::size_t idx = std::min(k, plan.replicas - 1);
        mix[r] = report.mixture[idx];
        for (std::size_t q = 0; q < plan.h_list.size(); ++q)
          res[q][r] = report.samples[q][idx];
      }
      for (std::size_t q = 0; q + 1 < plan.h_list.size(); ++q) {
        const double d0 = stats::ks_two_sample(res[q], mix).D;
        const double d1 = stats::ks_two_sample(res[q + 1], mix).D;
        diffs[q].push_back(d0 - d1);
      }
    }
    for (auto& d : diffs)
      report.ks_diff_bootstrap_se.push_back(std::sqrt(stats::variance(d)));
  }

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::vector<ExpectationRow> expectation_study(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.expectation.replicas < 500)
    throw std::invalid_argument("expectation_study: needs >= 500 replicas");

  pathsim::SimConfig cfg = plan.sim;
  cfg.replica_count = std::max<std::uint32_t>(
      cfg.replica_count, static_cast<std::uint32_t>(plan.expectation.replicas));
  const auto& hs = plan.expectation.h_list;

  std::vector<std::vector<double>> moduli(
      hs.size(), std::vector<double>(plan.expectation.replicas, 0.0));
  util::parallel_for(plan.expectation.replicas, plan.threads,
                     [&](std::size_t r) {
                       const auto path = pathsim::generate_brownian(
                           cfg, static_cast<std::uint32_t>(r));
                       for (std::size_t q = 0; q < hs.size(); ++q) {
                         const auto field = localtime::local_time_binned(
                             path, plan.policy.delta_for(hs[q]));
                         moduli[q][r] =
                             localtime::lp_modulus(field, hs[q], 2.0);
                       }
                     });

  std::vector<ExpectationRow> rows;
  for (std::size_t q = 0; q < hs.size(); ++q) {
    ExpectationRow row;
    row.h = hs[q];
    row.count = plan.expectation.replicas;
    row.empirical_mean = stats::mean(moduli[q]);
    row.stderr_mean = stats::stderr_of_mean(moduli[q]);
    row.predicted = predicted_modulus_mean(hs[q]);
    row.predicted_exact = predicted_modulus_mean_exact(hs[q], plan.sim.horizon);
    row.residual_over_h3 =
        (row.empirical_mean - row.predicted) / (hs[q] * hs[q] * hs[q]);
    rows.push_back(row);
  }
  return rows;
}

namespace {

pathsim::SamplePath truncate_path(const pathsim::SamplePath& path,
                                  std::size_t steps) {
  pathsim::SamplePath sub;
  sub.delta = path.delta;
  sub.master_seed = path.master_seed;
  sub.replica_id = path.replica_id;
  sub.values.assign(path.values.begin(), path.values.begin() + steps + 1);
  return sub;
}

}  // namespace

BracketStudy bracket_study(const ExperimentPlan& plan) {
  plan.validate();
  const auto& sec = plan.bracket;
  BracketStudy study;

  // <M,M>_t against alpha2_t(0), pathwise ratios at each marker time.
  {
    pathsim::SimConfig cfg = plan.sim;
    cfg.steps = sec.mm_steps;
    cfg.replica_count = std::max<std::uint32_t>(
        cfg.replica_count, static_cast<std::uint32_t>(sec.mm_replicas));
    const double eps = plan.policy.eps_for(sec.mm_h);

    std::vector<std::vector<double>> mm(sec.t_list.size()),
        a2(sec.t_list.size()), ratio(sec.t_list.size());
    for (auto& v : mm) v.assign(sec.mm_replicas, 0.0);
    for (auto& v : a2) v.assign(sec.mm_replicas, 0.0);
    for (auto& v : ratio) v.assign(sec.mm_replicas, 0.0);

    util::parallel_for(sec.mm_replicas, plan.threads, [&](std::size_t r) {
      const auto path =
          pathsim::generate_brownian(cfg, static_cast<std::uint32_t>(r));
      const auto series = martingale::martingale_path(path, sec.mm_h);
      for (std::size_t ti = 0; ti < sec.t_list.size(); ++ti) {
        const double t = sec.t_list[ti];
        const auto steps_t = static_cast<std::size_t>(
            std::llround(t / path.delta));
        const auto sub = truncate_path(path, steps_t);
        double a2_val =
            intersection::alpha2_counting(sub, 0.0, eps).value;
        // window-average correction of t*v around the kink at 0
        a2_val -= sub.horizon() *
                  (intersection::resolvent_window_average(0.0, eps) - 1.0);
        mm[ti][r] = series.bracket_MM[steps_t];
        a2[ti][r] = a2_val;
        ratio[ti][r] = mm[ti][r] / a2_val;
      }
    });

    for (std::size_t ti = 0; ti < sec.t_list.size(); ++ti) {
      MmBracketRow row;
      row.h = sec.mm_h;
      row.t = sec.t_list[ti];
      row.count = sec.mm_replicas;
      row.mm_mean = stats::mean(mm[ti]);
      row.mm_stderr = stats::stderr_of_mean(mm[ti]);
      row.alpha2_mean = stats::mean(a2[ti]);
      row.ratio_mean = stats::mean(ratio[ti]);
      row.ratio_stderr = stats::stderr_of_mean(ratio[ti]);
      study.mm_rows.push_back(row);
    }
  }

  // <M,W>_1 scaling across the h grid.
  {
    pathsim::SimConfig cfg = plan.sim;
    cfg.steps = sec.mw_steps;
    study.mw = martingale::bracket_mw_scaling(cfg, sec.mw_replicas,
                                              sec.mw_h_grid, plan.threads);
  }

  // A3 weight integral over [0,1]^2 divided by h.
  {
    pathsim::SimConfig cfg = plan.sim;
    cfg.steps = sec.a3_steps;
    cfg.replica_count = std::max<std::uint32_t>(
        cfg.replica_count, static_cast<std::uint32_t>(sec.a3_replicas));
    const double eps = sec.a3_h / sec.a3_eps_divisor;
    std::vector<double> values(sec.a3_replicas, 0.0);
    util::parallel_for(sec.a3_replicas, plan.threads, [&](std::size_t r) {
      const auto path =
          pathsim::generate_brownian(cfg, static_cast<std::uint32_t>(r));
      values[r] = intersection::a3_weight_integral(path, sec.a3_h,
                                                   sec.a3_grid, eps) /
                  sec.a3_h;
    });
    study.a3.h = sec.a3_h;
    study.a3.count = sec.a3_replicas;
    study.a3.mean_over_h = stats::mean(values);
    study.a3.stderr_over_h = stats::stderr_of_mean(values);
    study.a3.predicted = (4.0 / 3.0) * kExpectedAlpha2;
  }

  return study;
}

}  // namespace ltlab::clt
