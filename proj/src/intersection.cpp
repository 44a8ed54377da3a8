#include "ltlab/intersection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ltlab/quadrature.hpp"
#include "ltlab/rank_index.hpp"

namespace ltlab::intersection {

namespace {

void require_eps(double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("intersection: eps must be > 0");
}

std::span<const double> left_points(const pathsim::SamplePath& path) {
  if (path.steps() == 0)
    throw std::invalid_argument("intersection: empty path");
  return {path.values.data(), path.steps()};
}

}  // namespace

double resolvent_v(double x) { return std::exp(-std::abs(x)); }

double resolvent_v_quadrature(double x, double tol) {
  if (x == 0.0)
    throw std::invalid_argument("resolvent_v_quadrature: x must be nonzero");
  const auto integrand = [x](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(-0.5 * s) * quadrature::normal_pdf(s, x);
  };
  // Tail beyond s = 80 is below e^{-40}.
  return quadrature::adaptive_simpson(integrand, 0.0, 80.0, tol * 0.1);
}

double resolvent_window_average(double x, double eps) {
  require_eps(eps);
  // A(u) = int_0^u e^{-|v|} dv = sign(u) (1 - e^{-|u|})
  const auto A = [](double u) {
    return u >= 0.0 ? 1.0 - std::exp(-u) : -(1.0 - std::exp(u));
  };
  return (A(x + eps) - A(x - eps)) / (2.0 * eps);
}

double alpha2_occupation(const localtime::LocalTimeField& field, double h) {
  if (h < 0.0)
    throw std::invalid_argument("alpha2_occupation: h must be >= 0");
  const long long m = localtime::shift_bins(field, h);
  const auto count = static_cast<std::ptrdiff_t>(field.size());
  double sum = 0.0;
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const double other = field.value_at(k + m);
    if (other != 0.0) sum += other * field.values[static_cast<std::size_t>(k)];
  }
  return sum * field.bin_width;
}

Alpha2Estimate alpha2_counting(const pathsim::SamplePath& path, double x,
                               double eps) {
  const double offsets[1] = {x};
  const auto values = alpha2_counting_batch(path, offsets, eps);
  return {x, values[0], Method::counting, eps};
}

std::vector<double> alpha2_counting_batch(const pathsim::SamplePath& path,
                                          std::span<const double> offsets,
                                          double eps) {
  require_eps(eps);
  const auto w = left_points(path);
  util::ValueIndex index(w);
  util::Fenwick<std::int64_t> tree(w.size());

  std::vector<std::int64_t> counts(offsets.size(), 0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    for (std::size_t q = 0; q < offsets.size(); ++q) {
      const double center = w[j] - offsets[q];
      const double lo = center - eps;
      const double hi = center + eps;
      counts[q] += tree.prefix(index.rank_le(hi)) -
                   tree.prefix(index.rank_le(lo));
    }
    tree.add(index.slot_of(j), 1);
  }

  const double scale = path.delta * path.delta / (2.0 * eps);
  std::vector<double> out(offsets.size());
  for (std::size_t q = 0; q < offsets.size(); ++q)
    out[q] = scale * static_cast<double>(counts[q]);
  return out;
}

Alpha2Estimate alpha2_kernel(const pathsim::SamplePath& path,
                             const localtime::Mollifier& m, double x) {
  const auto w = left_points(path);
  double sum = 0.0;
  const double eps = m.eps();
  for (std::size_t j = 1; j < w.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const double d = w[j] - w[i] - x;
      if (d > -eps && d < eps) sum += m(d);
    }
  }
  return {x, sum * path.delta * path.delta, Method::kernel, eps};
}

Alpha3Estimate alpha3_counting(const pathsim::SamplePath& path, double x,
                               double y, double eps) {
  require_eps(eps);
  const auto w = left_points(path);
  util::ValueIndex index(w);

  // Pass 1: c(j) = #{i<j : W_j - W_i - x in window}.
  std::vector<double> c(w.size(), 0.0);
  {
    util::Fenwick<std::int64_t> tree(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double center = w[j] - x;
      c[j] = static_cast<double>(tree.prefix(index.rank_le(center + eps)) -
                                 tree.prefix(index.rank_le(center - eps)));
      tree.add(index.slot_of(j), 1);
    }
  }

  // Pass 2: sum over k of the windowed sum of c(j) for j < k around W_k - y.
  double total = 0.0;
  {
    util::Fenwick<double> tree(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double center = w[k] - y;
      total += tree.prefix(index.rank_le(center + eps)) -
               tree.prefix(index.rank_le(center - eps));
      tree.add(index.slot_of(k), c[k]);
    }
  }

  const double d = path.delta;
  const double scale = d * d * d / (4.0 * eps * eps);
  return {x, y, scale * total, Method::counting, eps};
}

double a3_combination(const pathsim::SamplePath& path, double h, double x,
                      double y, double eps) {
  if (!(h > 0.0)) throw std::invalid_argument("a3_combination: h must be > 0");
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw std::invalid_argument("a3_combination: x, y must lie in [0, 1]");
  if (!(eps < h))
    throw std::invalid_argument(
        "a3_combination: eps must be smaller than the offset scale h");
  const double t1 = alpha3_counting(path, h * (x - y), h * y, eps).value;
  const double t2 = alpha3_counting(path, h * (-x - y), h * y, eps).value;
  const double t3 = alpha3_counting(path, h * (x + y), -h * y, eps).value;
  const double t4 = alpha3_counting(path, -h * (x - y), -h * y, eps).value;
  return t1 - t2 - t3 + t4;
}

namespace {

struct A3Term {
  double a;
  double b;
  double weight;
};

// Accumulated signed quadrature weights per distinct (a, b) offset pair for
// the midpoint rule over [0,1]^2.
std::vector<A3Term> a3_quadrature_terms(double h, std::size_t grid_n) {
  std::map<std::pair<double, double>, double> acc;
  const double cell = 1.0 / static_cast<double>(grid_n);
  const double w0 = cell * cell;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) * cell;
    for (std::size_t j = 0; j < grid_n; ++j) {
      const double y = (static_cast<double>(j) + 0.5) * cell;
      acc[{h * (x - y), h * y}] += w0;
      acc[{h * (-x - y), h * y}] -= w0;
      acc[{h * (x + y), -h * y}] -= w0;
      acc[{-h * (x - y), -h * y}] += w0;
    }
  }
  std::vector<A3Term> terms;
  terms.reserve(acc.size());
  for (const auto& [key, weight] : acc)
    terms.push_back({key.first, key.second, weight});
  return terms;
}

double a3_batched_sum(const pathsim::SamplePath& path,
                      const std::vector<A3Term>& terms, double eps) {
  const auto w = left_points(path);
  const std::size_t n = w.size();
  util::ValueIndex index(w);

  // Distinct first offsets (a) and second offsets (b).
  std::vector<double> a_values, b_values;
  for (const auto& t : terms) {
    a_values.push_back(t.a);
    b_values.push_back(t.b);
  }
  std::sort(a_values.begin(), a_values.end());
  a_values.erase(std::unique(a_values.begin(), a_values.end()),
                 a_values.end());
  std::sort(b_values.begin(), b_values.end());
  b_values.erase(std::unique(b_values.begin(), b_values.end()),
                 b_values.end());
  const auto a_id = [&](double a) {
    return static_cast<std::size_t>(
        std::lower_bound(a_values.begin(), a_values.end(), a) -
        a_values.begin());
  };
  const auto b_id = [&](double b) {
    return static_cast<std::size_t>(
        std::lower_bound(b_values.begin(), b_values.end(), b) -
        b_values.begin());
  };

  // Pass 1: windowed pair counts c_a(j) for every distinct a.
  std::vector<std::vector<std::uint32_t>> counts(
      a_values.size(), std::vector<std::uint32_t>(n, 0));
  {
    util::Fenwick<std::int64_t> tree(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t q = 0; q < a_values.size(); ++q) {
        const double center = w[j] - a_values[q];
        counts[q][j] = static_cast<std::uint32_t>(
            tree.prefix(index.rank_le(center + eps)) -
            tree.prefix(index.rank_le(center - eps)));
      }
      tree.add(index.slot_of(j), 1);
    }
  }

  // Combine counts into one weighted series per distinct b.
  std::vector<std::vector<double>> combined(b_values.size(),
                                            std::vector<double>(n, 0.0));
  for (const auto& t : terms) {
    const auto& c = counts[a_id(t.a)];
    auto& g = combined[b_id(t.b)];
    for (std::size_t j = 0; j < n; ++j)
      g[j] += t.weight * static_cast<double>(c[j]);
  }

  // Pass 2: one weighted windowed-sum pass per distinct b.
  double total = 0.0;
  util::Fenwick<double> tree(n);
  for (std::size_t q = 0; q < b_values.size(); ++q) {
    tree.reset();
    const auto& g = combined[q];
    const double b = b_values[q];
    for (std::size_t k = 0; k < n; ++k) {
      const double center = w[k] - b;
      total += tree.prefix(index.rank_le(center + eps)) -
               tree.prefix(index.rank_le(center - eps));
      tree.add(index.slot_of(k), g[k]);
    }
  }
  const double d = path.delta;
  return total * d * d * d / (4.0 * eps * eps);
}

}  // namespace

double a3_weight_integral(const pathsim::SamplePath& path, double h,
                          std::size_t grid_n, double eps) {
  if (!(h > 0.0))
    throw std::invalid_argument("a3_weight_integral: h must be > 0");
  if (grid_n == 0)
    throw std::invalid_argument("a3_weight_integral: empty grid");
  if (!(eps < h))
    throw std::invalid_argument("a3_weight_integral: requires eps < h");
  return a3_batched_sum(path, a3_quadrature_terms(h, grid_n), eps);
}

double a3_kernel_weighted_sum(const pathsim::SamplePath& path, double h,
                              std::size_t grid_n, double eps) {
  if (!(h > 0.0) || grid_n == 0 || !(eps < h))
    throw std::invalid_argument("a3_kernel_weighted_sum: bad arguments");
  // Midpoint cells over [-2h, 2h]^2 in (x, y); K_h(x+y) K_h(y) weights.
  // Matches the substitution x -> h(x - y), y -> h y of the identity.
  std::map<std::pair<double, double>, double> acc;
  const std::size_t cells = 4 * grid_n;
  const double cell = 4.0 * h / static_cast<double>(cells);
  const auto K = [h](double u) {
    if (u > 0.0 && u <= h) return 1;
    if (u > -h && u <= 0.0) return -1;
    return 0;
  };
  for (std::size_t i = 0; i < cells; ++i) {
    const double x = -2.0 * h + (static_cast<double>(i) + 0.5) * cell;
    for (std::size_t j = 0; j < cells; ++j) {
      const double y = -2.0 * h + (static_cast<double>(j) + 0.5) * cell;
      const int kw = K(x + y) * K(y);
      if (kw != 0) acc[{x, y}] += kw * cell * cell;
    }
  }
  std::vector<A3Term> terms;
  terms.reserve(acc.size());
  for (const auto& [key, weight] : acc)
    terms.push_back({key.first, key.second, weight});
  return a3_batched_sum(path, terms, eps) / (h * h * h);
}

GammaEstimate gamma_decompose(std::span<const Alpha2Estimate> alpha2,
                              std::span<const Alpha3Estimate> alpha3,
                              double t) {
  GammaEstimate g;
  g.t = t;
  g.gamma2.reserve(alpha2.size());
  for (const auto& a : alpha2) {
    Alpha2Estimate e = a;
    e.value = a.value - t * resolvent_v(a.x);
    g.gamma2.push_back(e);
  }
  const auto gamma2_at = [&](double x) {
    for (const auto& e : g.gamma2)
      if (e.x == x) return e.value;
    throw std::invalid_argument(
        "gamma_decompose: alpha3 offset without matching alpha2 offset");
  };
  g.gamma3.reserve(alpha3.size());
  for (const auto& a : alpha3) {
    Alpha3Estimate e = a;
    const double g2x = gamma2_at(a.x);
    const double g2y = gamma2_at(a.y);
    e.value = a.value - g2x * resolvent_v(a.y) - g2y * resolvent_v(a.x) -
              t * resolvent_v(a.x) * resolvent_v(a.y);
    g.gamma3.push_back(e);
  }
  return g;
}

double alpha2_from_gamma(const GammaEstimate& g, double x) {
  for (const auto& e : g.gamma2)
    if (e.x == x) return e.value + g.t * resolvent_v(x);
  throw std::invalid_argument("alpha2_from_gamma: unknown offset");
}

double alpha3_from_gamma(const GammaEstimate& g, double x, double y) {
  const double g2x = alpha2_from_gamma(g, x) - g.t * resolvent_v(x);
  const double g2y = alpha2_from_gamma(g, y) - g.t * resolvent_v(y);
  for (const auto& e : g.gamma3)
    if (e.x == x && e.y == y)
      return e.value + g2x * resolvent_v(y) + g2y * resolvent_v(x) +
             g.t * resolvent_v(x) * resolvent_v(y);
  throw std::invalid_argument("alpha3_from_gamma: unknown offset pair");
}

}  // namespace ltlab::intersection
