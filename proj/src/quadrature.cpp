#include "ltlab/quadrature.hpp"

#include <cmath>

namespace ltlab::quadrature {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double recurse(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm, double whole,
               double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return recurse(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double normal_pdf(double s, double x) {
  return std::exp(-x * x / (2.0 * s)) / std::sqrt(6.283185307179586 * s);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace ltlab::quadrature
