#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltlab/local_time.hpp"
#include "ltlab/martingale.hpp"
#include "ltlab/path_sim.hpp"
#include "ltlab/stats.hpp"

namespace ltlab::clt {

// c = sqrt(64/3) of the mixture limit, and the restated-form constant
// c' = sqrt(128/3) = c * sqrt(2) (via int L^2 = 2 alpha2(0)).
inline constexpr double kMixtureC = 4.618802153517006;
inline constexpr double kMixtureCPrime = 6.531972647421808;

// E alpha2_1(0) = (4/3)/sqrt(2 pi) and E int (L^x_1)^2 dx = 2 E alpha2_1(0).
inline constexpr double kExpectedAlpha2 = 0.5319230405352436;
inline constexpr double kExpectedIntL2 = 1.0638460810704873;

// Mean of the statistic at scale h (leading orders), -8 sqrt(h) / sqrt(2 pi).
double predicted_mean_statistic(double h);
// E of the squared modulus at scale h: 4h - 8h^2/sqrt(2 pi) (+O(h^3)).
double predicted_modulus_mean(double h);
// Same expectation without truncation, by quadrature of
// 4 int_0^t (t - tau)(p_tau(0) - p_tau(h)) dtau.
double predicted_modulus_mean_exact(double h, double t = 1.0);

struct ResolutionPolicy {
  int delta_divisor = 8;  // field bin width  = h / delta_divisor
  int eps_divisor = 8;    // counting window  = h / eps_divisor

  double delta_for(double h) const { return h / delta_divisor; }
  double eps_for(double h) const { return h / eps_divisor; }
};

struct BracketPlanSection {
  double mm_h = 0.05;
  std::size_t mm_steps = 400000;
  std::size_t mm_replicas = 200;
  std::vector<double> t_list = {0.25, 0.5, 1.0};

  std::vector<double> mw_h_grid = {0.08, 0.04, 0.02, 0.01};
  std::size_t mw_steps = 200000;
  std::size_t mw_replicas = 400;

  double a3_h = 0.05;
  std::size_t a3_steps = 100000;
  std::size_t a3_replicas = 200;
  std::size_t a3_grid = 8;
  int a3_eps_divisor = 16;
};

struct ExpectationPlanSection {
  std::vector<double> h_list = {0.1, 0.05};
  std::size_t replicas = 1000;
};

struct ExperimentPlan {
  pathsim::SimConfig sim{1.0, 200000, 0, 1};
  std::vector<double> h_list = {0.08, 0.04, 0.02};  // decreasing
  std::size_t replicas = 2000;
  ResolutionPolicy policy;
  std::size_t threads = 0;
  std::string out_dir;  // empty: no file output

  BracketPlanSection bracket;
  ExpectationPlanSection expectation;

  void validate() const;  // throws std::invalid_argument
};

// One mixture-law draw c (int L^2)^{1/2} eta from the field of the paired
// path; eta must come from the dedicated eta stream.
double mixture_sample(const localtime::LocalTimeField& field, double eta);
double mixture_sample_from_l2(double int_l2, double eta);

struct PerHRow {
  double h = 0.0;
  double ks_D = 0.0;
  double ks_p = 0.0;
  double mean_S = 0.0;
  double var_S = 0.0;
  double predicted_mean = 0.0;
  double predicted_var = 0.0;
  double bracket_ratio = 0.0;  // filled by the bracket study when run
};

struct CltReport {
  ExperimentPlan plan;
  std::vector<PerHRow> per_h;
  // samples[q][r]: statistic S_{h_q} of replica r; mixture[r] pairs with the
  // same replica's int L^2 (reference resolution) and a fresh eta.
  std::vector<std::vector<double>> samples;
  std::vector<double> mixture;
  std::vector<double> int_l2;
  std::vector<double> ks_diff_bootstrap_se;  // SE of D(h_q) - D(h_{q+1})
  double runtime_seconds = 0.0;
};

// Monte Carlo experiment for the distributional limit: per replica one path,
// one statistic per h, and one paired mixture draw. Requires replicas >= 100
// (two-sample KS uses the asymptotic distribution).
CltReport run_clt_experiment(const ExperimentPlan& plan);

struct ExpectationRow {
  double h = 0.0;
  double empirical_mean = 0.0;
  double stderr_mean = 0.0;
  double predicted = 0.0;        // 4h - 8h^2/sqrt(2 pi)
  double predicted_exact = 0.0;  // quadrature, no truncation
  double residual_over_h3 = 0.0;
  std::size_t count = 0;
};

std::vector<ExpectationRow> expectation_study(const ExperimentPlan& plan);

struct MmBracketRow {
  double h = 0.0;
  double t = 0.0;
  double mm_mean = 0.0;
  double mm_stderr = 0.0;
  double alpha2_mean = 0.0;
  double ratio_mean = 0.0;  // mean of pathwise <M,M>_t / alpha2_t(0)
  double ratio_stderr = 0.0;
  std::size_t count = 0;
};

struct A3Row {
  double h = 0.0;
  double mean_over_h = 0.0;  // mean of (integral of A3 over [0,1]^2) / h
  double stderr_over_h = 0.0;
  double predicted = 0.0;  // (4/3) E alpha2_1(0)
  std::size_t count = 0;
};

struct BracketStudy {
  std::vector<MmBracketRow> mm_rows;
  martingale::MwScalingTable mw;
  A3Row a3;
};

BracketStudy bracket_study(const ExperimentPlan& plan);

}  // namespace ltlab::clt
