#pragma once

#include <cstddef>
#include <span>

namespace qrng {

/// Complementary error function.
double erfc(double x);

/// Regularized upper incomplete gamma Q(a, x).
double igamc(double a, double x);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_upper(double statistic, double dof);

/// Kolmogorov-Smirnov statistic D of a sample against Uniform(0,1).
double ks_uniform_statistic(std::span<const double> sample);

/// Asymptotic p-value of a KS statistic D for sample size n (Stephens' small-n correction).
double ks_pvalue(double d, std::size_t n);

} // namespace qrng
