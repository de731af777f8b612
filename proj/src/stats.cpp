#include "fcr/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "fcr/error.hpp"

namespace fcr {

double students_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw InputError("degrees of freedom must be positive");
  if (!std::isfinite(t)) return 0.0;
  // P(|T| >= t) = I_{df / (df + t^2)}(df / 2, 1 / 2)
  double x = df / (df + t * t);
  return boost::math::ibeta(df / 2.0, 0.5, x);
}

TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("paired samples must have equal length");
  const std::size_t n = xs.size();
  if (n < 2) throw InputError("paired t-test needs at least two pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = xs[i] - ys[i] - mean;
    ss += d * d;
  }
  double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) throw InputError("paired differences have zero variance");
  TTestResult r;
  r.df = n - 1;
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p = students_t_two_tailed(r.t, static_cast<double>(r.df));
  return r;
}

double normal_two_tailed_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw InputError("confidence must lie in (0, 1)");
  boost::math::normal standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

std::size_t cochran_sample_size(std::size_t population, double confidence, double margin,
                                double proportion) {
  if (population < 1) throw InputError("population must be at least 1");
  if (!(margin > 0.0 && margin < 1.0)) throw InputError("margin must lie in (0, 1)");
  if (!(proportion >= 0.0 && proportion <= 1.0)) throw InputError("proportion must lie in [0, 1]");
  double z = normal_two_tailed_quantile(confidence);
  double n0 = z * z * proportion * (1.0 - proportion) / (margin * margin);
  if (n0 <= 0.0) return 1;
  double n = n0 / (1.0 + (n0 - 1.0) / static_cast<double>(population));
  // Guard against representation noise pushing an exact integer up a step.
  double rounded = std::ceil(n - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(0.0, rounded)));
}

}  // namespace fcr
