#include "chaosclt/distances.hpp"

#include <algorithm>
#include <cmath>

#include "chaosclt/errors.hpp"

namespace chaosclt {

EmpiricalSample::EmpiricalSample(std::vector<double> observations)
    : values_(std::move(observations)) {
  if (values_.empty()) throw DomainError("EmpiricalSample: sample is empty");
  for (double x : values_)
    if (std::isnan(x)) throw DomainError("EmpiricalSample: NaN observation");
  std::sort(values_.begin(), values_.end());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); }

double kolmogorov_distance(const EmpiricalSample& sample, double mean, double variance) {
  if (!(variance > 0.0)) throw DomainError("kolmogorov_distance: variance must be positive");
  const double sd = std::sqrt(variance);
  const auto values = sample.values();
  const double count = static_cast<double>(values.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double phi = normal_cdf((values[i] - mean) / sd);
    const double before = static_cast<double>(i) / count;
    const double after = static_cast<double>(j) / count;
    sup = std::max({sup, std::abs(phi - before), std::abs(after - phi)});
    i = j;
  }
  return std::min(sup, 1.0);
}

RateFit rate_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("rate_fit: at least two points are required");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, d] : points) {
    if (!(n > 0.0)) throw DomainError("rate_fit: n must be positive");
    if (!(d > 0.0)) throw DomainError("rate_fit: distances must be positive");
    xs.push_back(std::log(n));
    ys.push_back(std::log(d));
  }
  const double k = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("rate_fit: n values must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / k);
  return fit;
}

}  // namespace chaosclt
