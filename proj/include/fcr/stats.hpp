#pragma once

#include <cstddef>
#include <span>

namespace fcr {

struct TTestResult {
  double t = 0.0;
  std::size_t df = 0;
  double p = 1.0;  // two-tailed
};

/// Paired t-test on x - y. Throws InputError for n < 2, unequal lengths or
/// zero variance of the differences.
TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double students_t_two_tailed(double t, double df);

/// z such that P(|Z| <= z) = confidence for a standard normal Z.
double normal_two_tailed_quantile(double confidence);

/// Cochran sample size with finite-population correction, rounded up, at least 1.
std::size_t cochran_sample_size(std::size_t population, double confidence, double margin,
                                double proportion);

}  // namespace fcr
