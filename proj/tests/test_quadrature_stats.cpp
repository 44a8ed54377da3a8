#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltlab/quadrature.hpp"
#include "ltlab/stats.hpp"

using ltlab::quadrature::adaptive_simpson;
using ltlab::stats::ks_two_sample;

TEST_CASE("adaptive simpson on known integrals") {
  const double a = adaptive_simpson([](double x) { return x * x; }, 0, 3, 1e-12);
  CHECK(a == doctest::Approx(9.0).epsilon(1e-12));
  const double b =
      adaptive_simpson([](double x) { return std::exp(-x); }, 0, 40, 1e-12);
  CHECK(b == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ks two-sample trivial cases") {
  std::vector<double> a{1.0, 2.0, 3.0};
  CHECK(ks_two_sample(a, a).D == 0.0);

  std::vector<double> low{0.0, 0.1, 0.2};
  std::vector<double> high{5.0, 6.0, 7.0};
  CHECK(ks_two_sample(low, high).D == 1.0);

  std::vector<double> b{1.5, 2.5, 3.5};
  CHECK(ks_two_sample(a, b).D == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(ks_two_sample({}, a), std::invalid_argument);
}

TEST_CASE("ks matches a brute-force CDF sweep") {
  // Oracle: evaluate both empirical CDFs at every sample point.
  std::vector<double> a{0.3, -1.2, 2.2, 0.3, 0.9};
  std::vector<double> b{0.1, 0.35, 0.9, 1.4};
  double brute = 0.0;
  for (double x : {0.3, -1.2, 2.2, 0.9, 0.1, 0.35, 1.4}) {
    double fa = 0, fb = 0;
    for (double v : a) fa += v <= x;
    for (double v : b) fb += v <= x;
    brute = std::max(brute, std::abs(fa / a.size() - fb / b.size()));
  }
  CHECK(ks_two_sample(a, b).D == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("kolmogorov survival function endpoints") {
  CHECK(ltlab::stats::kolmogorov_sf(0.0) == 1.0);
  CHECK(ltlab::stats::kolmogorov_sf(0.5) > 0.9);
  CHECK(ltlab::stats::kolmogorov_sf(2.0) < 0.001);
}

TEST_CASE("loglog slope recovers a power law") {
  std::vector<double> xs{0.08, 0.04, 0.02, 0.01};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.0 * std::sqrt(x));
  CHECK(ltlab::stats::loglog_slope(xs, ys) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normal cdf sanity") {
  CHECK(ltlab::quadrature::normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(ltlab::quadrature::normal_cdf(1.959963985) ==
        doctest::Approx(0.975).epsilon(1e-6));
}
