#include "ltlab/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "ltlab/quadrature.hpp"

namespace ltlab::localtime {

namespace {

double smooth_exp_raw(double u) {
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(-1.0 / d);
}

// Integral of exp(-1/(1-u^2)) over (-1,1), computed once.
double smooth_exp_mass() {
  static const double mass = quadrature::adaptive_simpson(
      [](double u) { return smooth_exp_raw(u); }, -1.0, 1.0, 1e-14);
  return mass;
}

}  // namespace

Mollifier::Mollifier(double eps, BumpShape shape) : eps_(eps), shape_(shape) {
  if (!(eps > 0.0)) throw std::invalid_argument("Mollifier: eps must be > 0");
  norm_ = shape == BumpShape::smooth_exp ? 1.0 / smooth_exp_mass() : 1.0;
}

double Mollifier::raw_shape(double u) const {
  switch (shape_) {
    case BumpShape::smooth_exp:
      return smooth_exp_raw(u);
    case BumpShape::quartic: {
      const double d = 1.0 - u * u;
      return d > 0.0 ? (15.0 / 16.0) * d * d : 0.0;
    }
  }
  return 0.0;
}

double Mollifier::shape_value(double u) const { return norm_ * raw_shape(u); }

double Mollifier::operator()(double x) const {
  return shape_value(x / eps_) / eps_;
}

double Mollifier::shape_mass(double tol) const {
  return quadrature::adaptive_simpson(
      [this](double u) { return shape_value(u); }, -1.0, 1.0, tol);
}

Mollifier::PositivePart Mollifier::positive_part(double x) const {
  if (x >= eps_) return {x, 1.0};
  if (x <= -eps_) return {0.0, 0.0};
  // g(x)  = int_{-1}^{x/eps} (x - eps u) shape(u) du
  // g'(x) = int_{-1}^{x/eps} shape(u) du
  const double c = x / eps_;
  const double gp = quadrature::adaptive_simpson(
      [this](double u) { return shape_value(u); }, -1.0, c, 1e-12);
  const double first_moment = quadrature::adaptive_simpson(
      [this](double u) { return u * shape_value(u); }, -1.0, c, 1e-12);
  return {x * gp - eps_ * first_moment, gp};
}

}  // namespace ltlab::localtime
