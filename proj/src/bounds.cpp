#include "chaosclt/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "chaosclt/errors.hpp"

namespace chaosclt {

namespace {

constexpr double kMixedInnerTolerance = 1e-10;

double checked_sqrt_mixed(double value, int p, int q) {
  if (value < -kMixedInnerTolerance) {
    throw NumericalError("mixed inner product <f_" + std::to_string(p) + " (x) f_" +
                         std::to_string(p) + ", f_" + std::to_string(q) + " (x)_" +
                         std::to_string(q - p) + " f_" + std::to_string(q) +
                         "> is negative: " + std::to_string(value));
  }
  return std::sqrt(std::max(value, 0.0));
}

double kappa4_of(const Kernel& f2) {
  if (const auto* dense = std::get_if<DenseKernel>(&f2)) return kappa4_I2(*dense);
  return kappa4_I2(std::get<RankOneSumKernel>(f2));
}

void require_positive_variance(double variance, const char* where) {
  if (!(variance > 0.0)) throw DomainError(std::string(where) + ": variance must be positive");
}

}  // namespace

double BoundReport::term(std::string_view label) const {
  for (const auto& t : terms)
    if (t.label == label) return t.value;
  throw DomainError("BoundReport: no term labelled '" + std::string(label) + "'");
}

double BoundReport::term_sum() const {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.value;
  return sum;
}

void BoundReport::recompute_total() {
  total = constant_multiplier * prefactor * term_sum() / variance;
}

nlohmann::json to_json(const BoundReport& report) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : report.terms) terms.push_back({{"label", t.label}, {"value", t.value}});
  return {{"terms", terms},
          {"variance", report.variance},
          {"prefactor", report.prefactor},
          {"constant_multiplier", report.constant_multiplier},
          {"total", report.total}};
}

BoundReport theorem31_bound(const ChaosSum& f, double constant_multiplier) {
  const int d = f.lowest_order();
  const int top = f.highest_order();

  double max_contraction = 0.0;
  for (const auto& [p, k] : f.kernels()) {
    if (p < std::max(d, 2)) continue;
    for (int r = 1; r <= p - 1; ++r) max_contraction = std::max(max_contraction, contraction_norm(k, r));
  }

  double max_mixed = 0.0;
  if (d != top) {
    for (const auto& [p, kp] : f.kernels()) {
      for (const auto& [q, kq] : f.kernels()) {
        if (q <= p) continue;
        max_mixed = std::max(max_mixed, checked_sqrt_mixed(mixed_inner(kp, kq), p, q));
      }
    }
  }

  BoundReport report;
  report.terms = {{"max_contraction_norm", max_contraction},
                  {"max_sqrt_mixed_inner", max_mixed}};
  report.variance = second_moment(f);
  require_positive_variance(report.variance, "theorem31_bound");
  report.constant_multiplier = constant_multiplier;
  report.recompute_total();
  return report;
}

double phi(const Kernel& f1, const Kernel& f2) {
  const BoundReport r = phi_report(f1, f2);
  return r.term_sum();
}

BoundReport phi_report(const Kernel& f1, const Kernel& f2, double constant_multiplier) {
  if (order(f1) != 1 || order(f2) != 2) throw DomainError("phi: expects orders 1 and 2");
  if (dim(f1) != dim(f2)) throw DomainError("phi: kernels must share the dimension");
  BoundReport report;
  report.terms = {{"sqrt_abs_kappa4", std::sqrt(std::abs(kappa4_of(f2)))},
                  {"sqrt_mixed_inner", checked_sqrt_mixed(mixed_inner(f1, f2), 1, 2)}};
  const double n1 = norm(f1);
  const double n2 = norm(f2);
  report.variance = n1 * n1 + 2.0 * n2 * n2;
  report.constant_multiplier = constant_multiplier;
  // A degenerate F = 0 has no meaningful normalisation; report the bare phi.
  if (report.variance > 0.0) {
    report.recompute_total();
  } else {
    report.variance = 0.0;
    report.total = constant_multiplier * report.term_sum();
  }
  return report;
}

double covariance_abs_power_sum(const CovarianceFunction& rho, std::size_t n, double exponent,
                                bool two_sided) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double term = std::pow(std::abs(rho(static_cast<std::int64_t>(k))), exponent);
    sum += (two_sided && k > 0) ? 2.0 * term : term;
  }
  return sum;
}

BoundReport corollary33_bound(const CovarianceFunction& rho, std::size_t n, int d, int m,
                              double variance, double constant_multiplier) {
  if (n == 0) throw DomainError("corollary33_bound: n must be >= 1");
  if (d < 1 || m < d) throw DomainError("corollary33_bound: need 1 <= d <= m");
  require_positive_variance(variance, "corollary33_bound");
  BoundReport report;
  const double four_thirds = std::pow(covariance_abs_power_sum(rho, n, 4.0 / 3.0, true), 1.5);
  const double cross = covariance_abs_power_sum(rho, n, 2.0 * d, false) *
                       std::sqrt(covariance_abs_power_sum(rho, n, 2.0, false));
  report.terms = {{"sum_abs_rho_4_3", four_thirds}, {"rank_cross_term", cross}};
  report.variance = variance;
  report.prefactor = 1.0 / std::sqrt(static_cast<double>(n));
  report.constant_multiplier = constant_multiplier;
  report.recompute_total();
  return report;
}

BoundReport power_variation_bound(const CovarianceFunction& rho, std::size_t n, int q,
                                  double variance, double constant_multiplier) {
  if (q < 2 || q % 2 != 0) throw DomainError("power_variation_bound: q must be even and >= 2");
  if (n == 0) throw DomainError("power_variation_bound: n must be >= 1");
  require_positive_variance(variance, "power_variation_bound");
  BoundReport report;
  const double four_thirds = std::pow(covariance_abs_power_sum(rho, n, 4.0 / 3.0, true), 1.5);
  const double squares = std::pow(covariance_abs_power_sum(rho, n, 2.0, false), 1.5);
  report.terms = {{"sum_abs_rho_4_3", four_thirds}, {"sum_rho_sq_3_2", squares}};
  report.variance = variance;
  report.prefactor = 1.0 / std::sqrt(static_cast<double>(n));
  report.constant_multiplier = constant_multiplier;
  report.recompute_total();
  return report;
}

RatePrediction fgn_rate(double hurst, int q) {
  if (q < 2 || q % 2 != 0) throw DomainError("fgn_rate: q must be even and >= 2");
  if (!(hurst > 0.0)) throw DomainError("fgn_rate: Hurst index must be positive");
  if (hurst >= 0.75) {
    throw DomainError("fgn_rate: H >= 3/4 is outside the normal-convergence regime");
  }
  constexpr double kCritical = 0.625;
  if (std::abs(hurst - kCritical) <= 1e-12) return {-0.5, 1.5};
  if (hurst < kCritical) return {-0.5, 0.0};
  return {4.0 * hurst - 3.0, 0.0};
}

double nz_ratio_diagnostic(const CovarianceFunction& rho, std::size_t n, int M,
                           std::span<const int> signs) {
  if (M != 2 && M != 3) throw DomainError("nz_ratio_diagnostic: M must be 2 or 3");
  if (signs.size() != static_cast<std::size_t>(M)) {
    throw DomainError("nz_ratio_diagnostic: sign vector must have length M");
  }
  for (int s : signs)
    if (s != 1 && s != -1) throw DomainError("nz_ratio_diagnostic: signs must be +1 or -1");

  const auto span = static_cast<std::int64_t>(n);
  const std::int64_t reach = span * M;
  std::vector<double> abs_rho(static_cast<std::size_t>(reach) + 1);
  for (std::int64_t k = 0; k <= reach; ++k) abs_rho[static_cast<std::size_t>(k)] = std::abs(rho(k));
  auto a = [&](std::int64_t k) { return abs_rho[static_cast<std::size_t>(k < 0 ? -k : k)]; };

  double lhs = 0.0;
  if (M == 2) {
    for (std::int64_t k1 = -span; k1 <= span; ++k1) {
      const double w1 = a(k1);
      if (w1 == 0.0) continue;
      for (std::int64_t k2 = -span; k2 <= span; ++k2)
        lhs += a(signs[0] * k1 + signs[1] * k2) * w1 * a(k2);
    }
  } else {
    for (std::int64_t k1 = -span; k1 <= span; ++k1) {
      const double w1 = a(k1);
      if (w1 == 0.0) continue;
      for (std::int64_t k2 = -span; k2 <= span; ++k2) {
        const double w12 = w1 * a(k2);
        if (w12 == 0.0) continue;
        for (std::int64_t k3 = -span; k3 <= span; ++k3)
          lhs += a(signs[0] * k1 + signs[1] * k2 + signs[2] * k3) * w12 * a(k3);
      }
    }
  }

  double base = 0.0;
  const double exponent = 1.0 + 1.0 / M;
  for (std::int64_t k = -span; k <= span; ++k) base += std::pow(a(k), exponent);
  return lhs / std::pow(base, M);
}

}  // namespace chaosclt
