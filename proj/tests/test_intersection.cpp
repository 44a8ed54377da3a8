#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltlab/intersection.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/path_sim.hpp"
#include "ltlab/stats.hpp"
#include "oracles.hpp"

using namespace ltlab;
using intersection::alpha2_counting;
using intersection::alpha3_counting;
using intersection::resolvent_v;
using pathsim::SamplePath;
using pathsim::SimConfig;

TEST_CASE("resolvent closed form and quadrature") {
  CHECK(resolvent_v(0.0) == 1.0);
  CHECK(resolvent_v(1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(resolvent_v(-1.0) == resolvent_v(1.0));
  CHECK(std::abs(intersection::resolvent_v_quadrature(2.0) - std::exp(-2.0)) <
        1e-8);
  CHECK_THROWS_AS(intersection::resolvent_v_quadrature(0.0),
                  std::invalid_argument);
}

TEST_CASE("resolvent window average") {
  // Closed form against direct numerical averaging.
  for (double x : {0.0, 0.3, -0.7}) {
    const double eps = 0.05;
    double direct = 0.0;
    const int steps = 20000;
    for (int i = 0; i < steps; ++i) {
      const double u = x - eps + (i + 0.5) * (2 * eps / steps);
      direct += std::exp(-std::abs(u));
    }
    direct /= steps;
    CHECK(intersection::resolvent_window_average(x, eps) ==
          doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("alpha2 counting matches the brute-force double loop exactly") {
  SimConfig config{1.0, 2000, 13131, 20};
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto path = pathsim::generate_brownian(config, r);
    for (double x : {0.0, 0.05, -0.12}) {
      const double eps = 0.01;
      const auto fast = alpha2_counting(path, x, eps);
      CHECK(fast.value == oracle::brute_alpha2(path, x, eps));
    }
  }
}

TEST_CASE("alpha2 vanishes beyond the path range") {
  SimConfig config{1.0, 500, 99, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  double lo = path.values[0], hi = path.values[0];
  for (double v : path.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double far = (hi - lo) + 1.0;
  CHECK(alpha2_counting(path, far, 0.01).value == 0.0);
  CHECK_THROWS_AS(alpha2_counting(path, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("alpha3 counting matches the brute-force triple loop exactly") {
  SimConfig config{1.0, 300, 77777, 20};
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto path = pathsim::generate_brownian(config, r);
    for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.04, -0.03},
                        std::pair{-0.08, 0.02}}) {
      const double eps = 0.02;
      const auto fast = alpha3_counting(path, x, y, eps);
      CHECK(fast.value == oracle::brute_alpha3(path, x, y, eps));
    }
  }
}

TEST_CASE("alpha3 reflection symmetry") {
  SimConfig config{1.0, 400, 2468, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  SamplePath reflected = path;
  for (auto& v : reflected.values) v = -v;
  const double eps = 0.02;
  // Reflected path swaps the window orientation; counts coincide after
  // negating both offsets (boundary points sit on a null set).
  const auto a = alpha3_counting(path, 0.05, -0.02, eps);
  const auto b = alpha3_counting(reflected, -0.05, 0.02, eps);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  CHECK(alpha3_counting(path, 100.0, 0.0, eps).value == 0.0);
}

TEST_CASE("occupation route: h = 0 gives int L^2 and 2 alpha2(0)" *
          doctest::test_suite("mc-slow")) {
  SimConfig config{1.0, 100000, 606060, 20};
  std::vector<double> rel(20);
  for (std::uint32_t r = 0; r < 20; ++r) {
    const auto path = pathsim::generate_brownian(config, r);
    const double eps = 0.005;
    const auto field = localtime::local_time_binned(path, eps);
    const double occ = intersection::alpha2_occupation(field, 0.0);
    const double cnt = 2.0 * alpha2_counting(path, 0.0, eps).value;
    rel[r] = (cnt - occ) / occ;
  }
  double max_rel = 0.0, mean_rel = 0.0;
  for (double v : rel) {
    max_rel = std::max(max_rel, std::abs(v));
    mean_rel += v / rel.size();
  }
  CHECK(std::abs(mean_rel) <= 0.03);
  CHECK(max_rel <= 0.06);
}

TEST_CASE("alpha2 occupation preconditions") {
  localtime::LocalTimeField field{0.0, 0.01, std::vector<double>(10, 1.0), 1.0};
  CHECK(intersection::alpha2_occupation(field, 0.02) > 0.0);
  CHECK_THROWS_AS(intersection::alpha2_occupation(field, 0.013),
                  std::invalid_argument);
  CHECK_THROWS_AS(intersection::alpha2_occupation(field, -0.01),
                  std::invalid_argument);
  localtime::LocalTimeField zero{0.0, 0.01, std::vector<double>(10, 0.0), 1.0};
  CHECK(intersection::alpha2_occupation(zero, 0.0) == 0.0);
}

TEST_CASE("mean alpha2(0) matches the Gaussian double integral" *
          doctest::test_suite("mc-slow")) {
  // E alpha2_1(0) = (4/3)/sqrt(2 pi); frozen from the quadrature oracle.
  const double expected = 0.5319230405352436;
  const std::size_t replicas = 2500;
  SimConfig config{1.0, 100000, 5151, static_cast<std::uint32_t>(replicas)};
  std::vector<double> vals(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path =
        pathsim::generate_brownian(config, static_cast<std::uint32_t>(r));
    const auto field = localtime::local_time_binned(path, 0.005);
    vals[r] = 0.5 * intersection::alpha2_occupation(field, 0.0);
  }
  CHECK(stats::mean(vals) == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("gamma decomposition round-trips exactly") {
  std::vector<intersection::Alpha2Estimate> a2{
      {0.0, 1.0, intersection::Method::counting, 0.01},
      {0.5, 0.62, intersection::Method::counting, 0.01},
      {-0.5, 0.58, intersection::Method::counting, 0.01}};
  std::vector<intersection::Alpha3Estimate> a3{
      {0.5, -0.5, 0.31, intersection::Method::counting, 0.01}};
  const auto g = intersection::gamma_decompose(a2, a3, 1.0);

  // alpha2(0) = t, v(0) = 1 -> gamma2(0) = 0.
  CHECK(g.gamma2[0].value == doctest::Approx(0.0));
  for (const auto& e : a2)
    CHECK(intersection::alpha2_from_gamma(g, e.x) ==
          doctest::Approx(e.value).epsilon(1e-14));
  CHECK(intersection::alpha3_from_gamma(g, 0.5, -0.5) ==
        doctest::Approx(0.31).epsilon(1e-14));

  std::vector<intersection::Alpha3Estimate> mismatched{
      {0.25, 0.5, 0.3, intersection::Method::counting, 0.01}};
  CHECK_THROWS_AS(intersection::gamma_decompose(a2, mismatched, 1.0),
                  std::invalid_argument);
}

TEST_CASE("antisymmetry of alpha2 (= gamma2) odd part stays O(h)" *
          doctest::test_suite("mc-slow")) {
  // alpha2(hx) - alpha2(-hx) = gamma2(hx) - gamma2(-hx) since v is even; the
  // scaled odd part must stay bounded as h halves. Fixed window, common
  // paths across the h grid.
  const std::size_t replicas = 150;
  const double eps = 0.002;
  const std::vector<double> hs{0.04, 0.02, 0.01};
  SimConfig config{1.0, 100000, 838383, static_cast<std::uint32_t>(replicas)};
  std::vector<double> scaled_abs(hs.size(), 0.0);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path =
        pathsim::generate_brownian(config, static_cast<std::uint32_t>(r));
    std::vector<double> offsets;
    for (double h : hs) {
      offsets.push_back(h);
      offsets.push_back(-h);
    }
    const auto vals = intersection::alpha2_counting_batch(path, offsets, eps);
    for (std::size_t q = 0; q < hs.size(); ++q)
      scaled_abs[q] += std::abs(vals[2 * q] - vals[2 * q + 1]) / hs[q];
  }
  for (auto& v : scaled_abs) v /= static_cast<double>(replicas);
  // Bounded: the smallest-h value must not blow up against the largest-h one.
  CHECK(scaled_abs.back() <= 2.5 * scaled_abs.front());
}

TEST_CASE("A3 combination: trivial zeros and the h beyond range case") {
  SimConfig config{1.0, 400, 1133, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  // x = y = 0 makes all four terms identical.
  CHECK(intersection::a3_combination(path, 0.05, 0.0, 0.0, 0.005) == 0.0);
  CHECK_THROWS_AS(intersection::a3_combination(path, 0.05, 1.5, 0.0, 0.005),
                  std::invalid_argument);
  CHECK_THROWS_AS(intersection::a3_combination(path, 0.05, 0.5, 0.5, 0.2),
                  std::invalid_argument);

  double lo = path.values[0], hi = path.values[0];
  for (double v : path.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // With h far beyond the path range every alpha3 offset window is empty
  // except the ones pinned at offset 0; those cancel inside A3.
  const double big_h = 4.0 * (hi - lo) + 1.0;
  CHECK(intersection::a3_combination(path, big_h, 0.5, 0.5, 0.001) == 0.0);
}

TEST_CASE("batched A3 quadrature equals per-cell combinations") {
  SimConfig config{1.0, 600, 4321, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  const double h = 0.1;
  const double eps = h / 16.0;
  const std::size_t g = 3;
  double direct = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      const double x = (i + 0.5) / static_cast<double>(g);
      const double y = (j + 0.5) / static_cast<double>(g);
      direct += intersection::a3_combination(path, h, x, y, eps);
    }
  }
  direct /= static_cast<double>(g * g);
  const double batched = intersection::a3_weight_integral(path, h, g, eps);
  CHECK(batched == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("weight-integral identity across the change of variables" *
          doctest::test_suite("mc-slow")) {
  // h^{-3} sum K_h(x+y) K_h(y) alpha3(x,y) == h^{-1} int A3 within
  // quadrature error, both sides on the same counting estimator.
  SimConfig config{1.0, 20000, 97531, 4};
  const double h = 0.08;
  const double eps = h / 16.0;
  std::vector<double> lhs(4), rhs(4);
  for (std::uint32_t r = 0; r < 4; ++r) {
    const auto path = pathsim::generate_brownian(config, r);
    lhs[r] = intersection::a3_kernel_weighted_sum(path, h, 8, eps);
    rhs[r] = intersection::a3_weight_integral(path, h, 8, eps) / h;
  }
  const double ml = stats::mean(lhs), mr = stats::mean(rhs);
  CHECK(ml == doctest::Approx(mr).epsilon(0.10));
}
