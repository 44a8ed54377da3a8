#pragma once

namespace ltlab::localtime {

enum class BumpShape {
  smooth_exp,  // C-infinity bump ~ exp(-1/(1-x^2)) on (-1,1)
  quartic,     // (15/16) (1-x^2)^2 on [-1,1]
};

// Smooth positive symmetric kernel with support [-eps, eps] and unit mass,
// f_eps(x) = shape(x/eps)/eps. The smooth_exp shape is normalized once by
// quadrature; the quartic shape has closed-form mass 1.
class Mollifier {
 public:
  explicit Mollifier(double eps, BumpShape shape = BumpShape::smooth_exp);

  double eps() const { return eps_; }
  BumpShape shape() const { return shape_; }

  // f_eps(x); zero for |x| >= eps.
  double operator()(double x) const;

  // Normalized profile on [-1, 1].
  double shape_value(double u) const;

  // Quadrature of the normalized profile over [-1, 1]; ~1 by construction,
  // exposed so tests can verify the normalization independently.
  double shape_mass(double tol = 1e-12) const;

  // Smoothed positive part g_eps(x) = int_0^inf y f_eps(x - y) dy and its
  // derivative g'_eps(x) = int_0^inf f_eps(x - y) dy. Exact branches outside
  // the kernel support: g = x, g' = 1 for x >= eps; both 0 for x <= -eps.
  struct PositivePart {
    double g;
    double g_prime;
  };
  PositivePart positive_part(double x) const;

 private:
  double raw_shape(double u) const;

  double eps_;
  BumpShape shape_;
  double norm_;  // 1 / integral of the raw profile
};

}  // namespace ltlab::localtime
