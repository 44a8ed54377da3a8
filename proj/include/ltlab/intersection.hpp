#pragma once

#include <span>
#include <vector>

#include "ltlab/local_time.hpp"
#include "ltlab/mollifier.hpp"
#include "ltlab/path_sim.hpp"

namespace ltlab::intersection {

// v(x) = int_0^inf e^{-s/2} p_s(x) ds = e^{-|x|}.
double resolvent_v(double x);

// Quadrature of the defining integral; oracle for resolvent_v. Requires
// x != 0 (the integrand is integrable but singular at s -> 0 when x = 0).
double resolvent_v_quadrature(double x, double tol = 1e-10);

// Average of v over the window (x - eps, x + eps], in closed form. Used to
// remove the known kink-smoothing bias of windowed counting estimators.
double resolvent_window_average(double x, double eps);

enum class Method { kernel, occupation, counting };

struct Alpha2Estimate {
  double x = 0.0;
  double value = 0.0;
  Method method = Method::counting;
  double eps = 0.0;
};

struct Alpha3Estimate {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  Method method = Method::counting;
  double eps = 0.0;
};

// Window convention for all counting estimators: the increment condition
// W_j - W_i - x in [-eps, eps) is evaluated on the past value as
//   W_i in (lo, hi],  lo = (W_j - x) - eps,  hi = (W_j - x) + eps,
// with lo/hi computed in double exactly as written. Brute-force checks must
// use the same comparisons to reproduce the counts bit for bit.

// delta * sum_k L^{x_k+h} L^{x_k}; estimates alpha2(h) + alpha2(-h), and
// int (L^x)^2 dx = 2 alpha2(0) at h = 0. Requires h >= 0, h = m * delta.
double alpha2_occupation(const localtime::LocalTimeField& field, double h);

// Pair-counting estimator of alpha2_t(x): Delta^2 #{i<j} / (2 eps) over
// pairs 0 <= i < j <= n-1, O(n log n) via an order-statistics index.
Alpha2Estimate alpha2_counting(const pathsim::SamplePath& path, double x,
                               double eps);

// Same pass evaluated at several offsets at once.
std::vector<double> alpha2_counting_batch(const pathsim::SamplePath& path,
                                          std::span<const double> offsets,
                                          double eps);

// Smooth-mollifier cross-check variant (O(n^2); intended for small n).
Alpha2Estimate alpha2_kernel(const pathsim::SamplePath& path,
                             const localtime::Mollifier& m, double x);

// Triple-counting estimator of alpha3_t(x, y): Delta^3 #{i<j<k} / (2 eps)^2
// with W_j - W_i - x and W_k - W_j - y in the window. O(n log n) in two
// passes (windowed counts, then windowed sums of counts).
Alpha3Estimate alpha3_counting(const pathsim::SamplePath& path, double x,
                               double y, double eps);

// Four-term combination
//   A3(h,x,y) = a3(h(x-y), hy) - a3(h(-x-y), hy)
//             - a3(h(x+y), -hy) + a3(-h(x-y), -hy).
// Requires x, y in [0, 1] and eps < h.
double a3_combination(const pathsim::SamplePath& path, double h, double x,
                      double y, double eps);

// Midpoint quadrature of A3(h, ., .) over [0,1]^2 on a grid_n x grid_n grid,
// batched so the whole grid costs a handful of O(n log n) passes.
double a3_weight_integral(const pathsim::SamplePath& path, double h,
                          std::size_t grid_n, double eps);

// Left side of the change-of-variables identity: h^{-3} of the double sum
// of K_h(x+y) K_h(y) alpha3(x,y) over the same quadrature cells, evaluated
// with the same counting estimator. Tests compare it with
// a3_weight_integral / h.
double a3_kernel_weighted_sum(const pathsim::SamplePath& path, double h,
                              std::size_t grid_n, double eps);

// gamma2(x) = alpha2(x) - t v(x),
// gamma3(x,y) = alpha3(x,y) - gamma2(x) v(y) - gamma2(y) v(x) - t v(x) v(y).
struct GammaEstimate {
  double t = 0.0;
  std::vector<Alpha2Estimate> gamma2;
  std::vector<Alpha3Estimate> gamma3;
};

GammaEstimate gamma_decompose(std::span<const Alpha2Estimate> alpha2,
                              std::span<const Alpha3Estimate> alpha3,
                              double t);

// Exact reconstructions (inverse of gamma_decompose).
double alpha2_from_gamma(const GammaEstimate& g, double x);
double alpha3_from_gamma(const GammaEstimate& g, double x, double y);

}  // namespace ltlab::intersection
