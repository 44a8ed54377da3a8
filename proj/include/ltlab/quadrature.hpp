#pragma once

#include <functional>

namespace ltlab::quadrature {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// Gaussian transition density p_s(x) = exp(-x^2/(2s)) / sqrt(2 pi s).
double normal_pdf(double s, double x);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace ltlab::quadrature
