#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ltlab/harness.hpp"
#include "ltlab/intersection.hpp"
#include "ltlab/local_time.hpp"
#include "ltlab/path_sim.hpp"
#include "ltlab/stats.hpp"

using namespace ltlab;
using localtime::local_time_binned;
using localtime::local_time_kernel;
using localtime::LocalTimeField;
using localtime::lp_modulus;
using localtime::Mollifier;
using pathsim::SamplePath;
using pathsim::SimConfig;

namespace {

SamplePath flat_path(std::size_t n, double t) {
  SamplePath p;
  p.delta = t / static_cast<double>(n);
  p.values.assign(n + 1, 0.0);
  return p;
}

}  // namespace

TEST_CASE("binned field of the degenerate path") {
  const auto path = flat_path(1000, 1.0);
  const auto field = local_time_binned(path, 0.1);
  int nonzero = 0;
  double value = 0.0;
  for (double v : field.values) {
    if (v != 0.0) {
      ++nonzero;
      value = v;
    }
  }
  CHECK(nonzero == 1);
  CHECK(value == doctest::Approx(10.0));
  CHECK_THROWS_AS(local_time_binned(path, 0.0), std::invalid_argument);
}

TEST_CASE("binned occupation conserves total time") {
  SimConfig config{1.0, 20000, 555, 3};
  for (std::uint32_t r = 0; r < 3; ++r) {
    const auto path = pathsim::generate_brownian(config, r);
    for (double delta : {0.002, 0.01, 0.05}) {
      const auto field = local_time_binned(path, delta);
      CHECK(localtime::field_integral(field) ==
            doctest::Approx(1.0).epsilon(1e-12));
      for (double v : field.values) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("kernel field: support, conservation, consistency with binning") {
  SimConfig config{1.0, 100000, 7070, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  const double eps = 0.01;
  const Mollifier m(eps);

  SUBCASE("flat path vanishes off the kernel support") {
    const auto flat = flat_path(100, 1.0);
    localtime::FieldGrid grid{-1.0, 0.05, 41};  // covers [-1, 1]
    const auto field = local_time_kernel(flat, m, grid);
    for (std::size_t k = 0; k < field.size(); ++k) {
      const double x = field.x_at(static_cast<std::ptrdiff_t>(k));
      if (std::abs(x) > eps) CHECK(field.values[k] == 0.0);
    }
  }

  SUBCASE("mass within 1e-6 of t on a fine covering grid") {
    for (auto shape :
         {localtime::BumpShape::smooth_exp, localtime::BumpShape::quartic}) {
      const Mollifier mm(eps, shape);
      const auto grid = localtime::cover_grid(path, eps / 16.0, eps);
      const auto field = local_time_kernel(path, mm, grid);
      CHECK(localtime::field_integral(field) ==
            doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  SUBCASE("int L^2 agrees with the binned estimate at matched resolution") {
    const auto grid = localtime::cover_grid(path, eps, eps);
    const auto kernel_field = local_time_kernel(path, m, grid);
    const auto binned = local_time_binned(path, eps);
    const double a = intersection::alpha2_occupation(kernel_field, 0.0);
    const double b = intersection::alpha2_occupation(binned, 0.0);
    CHECK(a == doctest::Approx(b).epsilon(0.03));
  }

  SUBCASE("empty grid throws") {
    CHECK_THROWS_AS(local_time_kernel(path, m, localtime::FieldGrid{0, 0.1, 0}),
                    std::invalid_argument);
  }
}

TEST_CASE("mollifier independence of the field and of the modulus" *
          doctest::test_suite("mc-slow")) {
  SimConfig config{1.0, 100000, 909090, 1};
  const auto path = pathsim::generate_brownian(config, 0);
  const double eps = 0.005;
  const Mollifier smooth(eps, localtime::BumpShape::smooth_exp);
  const Mollifier quartic(eps, localtime::BumpShape::quartic);
  const auto grid = localtime::cover_grid(path, eps, eps);
  const auto f1 = local_time_kernel(path, smooth, grid);
  const auto f2 = local_time_kernel(path, quartic, grid);

  double l1_diff = 0.0, l1_norm = 0.0;
  for (std::size_t k = 0; k < f1.size(); ++k) {
    l1_diff += std::abs(f1.values[k] - f2.values[k]);
    l1_norm += std::abs(f1.values[k]);
  }
  CHECK(l1_diff / l1_norm <= 0.02);

  const double m1 = lp_modulus(f1, 0.02, 2.0);
  const double m2 = lp_modulus(f2, 0.02, 2.0);
  CHECK(std::abs(m1 - m2) / m1 <= 0.02);
}

TEST_CASE("lp_modulus basics and the exact product identity") {
  SUBCASE("zero field") {
    LocalTimeField zero{0.0, 0.01, std::vector<double>(100, 0.0), 1.0};
    CHECK(lp_modulus(zero, 0.05, 2.0) == 0.0);
    CHECK(localtime::l2_statistic(zero, 0.04) == doctest::Approx(-20.0));
  }
  SUBCASE("preconditions") {
    LocalTimeField zero{0.0, 0.01, std::vector<double>(100, 0.0), 1.0};
    CHECK_THROWS_AS(lp_modulus(zero, 0.0153, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_modulus(zero, 0.05, 0.5), std::invalid_argument);
  }
  SUBCASE("int (L^{x+h}-L^x)^2 = 2(int L^2 - int L^{x+h} L^x), exactly") {
    SimConfig config{1.0, 50000, 424242, 1};
    const auto path = pathsim::generate_brownian(config, 0);
    const auto field = local_time_binned(path, 0.005);
    for (double h : {0.005, 0.02, 0.1}) {
      const double lhs = lp_modulus(field, h, 2.0);
      const double rhs = 2.0 * (intersection::alpha2_occupation(field, 0.0) -
                                intersection::alpha2_occupation(field, h));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("mean of L^0_1 matches the occupation-density integral" *
          doctest::test_suite("mc-slow")) {
  // E L^0_1 = int_0^1 p_s(0) ds = 2/sqrt(2 pi); 1-D quadrature oracle frozen.
  const double expected = 0.7978845608028654;
  const std::size_t replicas = 10000;
  SimConfig config{1.0, 100000, 4242, static_cast<std::uint32_t>(replicas)};
  std::vector<double> l0(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path =
        pathsim::generate_brownian(config, static_cast<std::uint32_t>(r));
    const auto field = local_time_binned(path, 0.01);
    const auto k = static_cast<std::ptrdiff_t>(
        std::floor((0.0 - field.x_origin) / field.bin_width));
    l0[r] = field.value_at(k);
  }
  CHECK(stats::mean(l0) == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("L2 and L1 moduli against their limit laws" *
          doctest::test_suite("mc-slow")) {
  const std::size_t replicas = 200;
  const double h = 0.01;
  SimConfig config{1.0, 100000, 1717, static_cast<std::uint32_t>(replicas)};
  std::vector<double> ratio2(replicas), ratio1(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path =
        pathsim::generate_brownian(config, static_cast<std::uint32_t>(r));
    const auto field = local_time_binned(path, h / 4.0);
    ratio2[r] = lp_modulus(field, h, 2.0) / h;
    double sum_sqrt = 0.0;
    for (double v : field.values) sum_sqrt += std::sqrt(v);
    const double predicted_l1 = 2.0 * std::sqrt(2.0 / 3.141592653589793) *
                                sum_sqrt * field.bin_width;
    ratio1[r] = lp_modulus(field, h, 1.0) / std::sqrt(h) / predicted_l1;
  }
  // (L^{x+h}-L^x)^2 integral / h -> 4t.
  CHECK(stats::mean(ratio2) == doctest::Approx(4.0).epsilon(0.07));
  // L^1 modulus / sqrt(h) -> 2 sqrt(2/pi) int sqrt(L).
  CHECK(stats::mean(ratio1) == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("statistic moments at moderate budget" *
          doctest::test_suite("mc-slow")) {
  const std::size_t replicas = 800;
  const double h = 0.04;
  SimConfig config{1.0, 100000, 9090, static_cast<std::uint32_t>(replicas)};
  clt::ResolutionPolicy policy;
  std::vector<double> stats_h(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    const auto path =
        pathsim::generate_brownian(config, static_cast<std::uint32_t>(r));
    const auto field = local_time_binned(path, policy.delta_for(h));
    stats_h[r] = localtime::l2_statistic(field, h);
  }
  const double se = stats::stderr_of_mean(stats_h);
  // Exact finite-h mean of the statistic is -0.6277 at h=0.04 (quadrature);
  // the leading-order formula gives -0.6383.
  CHECK(std::abs(stats::mean(stats_h) - clt::predicted_mean_statistic(h)) <=
        4.0 * se + 0.02);
  // Variance approaches (64/3) E int L^2 = 22.695 (20% at this budget).
  CHECK(stats::variance(stats_h) ==
        doctest::Approx(22.69538306283706).epsilon(0.25));
}
