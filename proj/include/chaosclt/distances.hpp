#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace chaosclt {

/// Observations sorted ascending; never empty.
class EmpiricalSample {
 public:
  explicit EmpiricalSample(std::vector<double> observations);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Standard normal CDF through erfc, accurate in both tails.
double normal_cdf(double x);

/// sup_x |F_M(x) - Phi((x - mean) / sqrt(variance))| for the empirical CDF
/// F_M, evaluated exactly: at each distinct jump point both the left limit
/// and the value after the jump are compared.
double kolmogorov_distance(const EmpiricalSample& sample, double mean, double variance);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root mean square of the log-scale residuals.
  double residual = 0.0;
};

/// Least-squares line through (log n, log d). Needs at least two points with
/// distinct n and every d > 0.
RateFit rate_fit(std::span<const std::pair<double, double>> points);

}  // namespace chaosclt
