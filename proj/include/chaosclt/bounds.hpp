#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "chaosclt/chaos.hpp"
#include "chaosclt/stationary_gaussian.hpp"

namespace chaosclt {

// Right-hand sides of the Berry-Esseen type bounds, decomposed term by term.
// The universal constants are unknown, so every report carries an explicit
// constant_multiplier (default 1):
//
//   total = constant_multiplier * prefactor * (sum of terms) / variance
//
// `prefactor` holds any explicit factor outside the bracket (1/sqrt(n) for the
// stationary-sequence bounds, 1 otherwise).
struct BoundReport {
  struct Term {
    std::string label;
    double value;
  };

  std::vector<Term> terms;
  double variance = 1.0;
  double prefactor = 1.0;
  double constant_multiplier = 1.0;
  double total = 0.0;

  double term(std::string_view label) const;
  double term_sum() const;
  void recompute_total();
};

nlohmann::json to_json(const BoundReport& report);

/// Exponent and log power of the predicted rate n^exponent log^log_power(n).
struct RatePrediction {
  double exponent = 0.0;
  double log_power = 0.0;
};

/// Bound for a finite chaos sum F = sum_{p=d}^N I_p(f_p):
///   term "max_contraction_norm" = max_{max(d,2) <= p <= N, 1 <= r < p} ||f_p (x)_r f_p||
///   term "max_sqrt_mixed_inner" = delta_{dN} max_{d <= p < q <= N}
///                                 sqrt(<f_p (x) f_p, f_q (x)_{q-p} f_q>)
/// normalised by E[F^2]. A mixed inner product below -1e-10 throws
/// NumericalError; values in [-1e-10, 0) are clamped to zero.
BoundReport theorem31_bound(const ChaosSum& f, double constant_multiplier = 1.0);

/// phi(F) for F = I_1(f1) + I_2(f2):
/// sqrt|kappa4(I_2(f2))| + sqrt(<f1 (x) f1, f2 (x)_1 f2>).
double phi(const Kernel& f1, const Kernel& f2);
/// Same quantity as a report with variance E[F^2].
BoundReport phi_report(const Kernel& f1, const Kernel& f2, double constant_multiplier = 1.0);

/// sum_{k in range} |rho(k)|^exponent over k = 0..n-1, or over |k| < n when
/// `two_sided` (negative lags folded by symmetry).
double covariance_abs_power_sum(const CovarianceFunction& rho, std::size_t n,
                                double exponent, bool two_sided);

/// Breuer-Major bound with prefactor 1/sqrt(n):
///   "sum_abs_rho_4_3"   = (sum_{|k|<n} |rho(k)|^{4/3})^{3/2}
///   "rank_cross_term"   = (sum_{k<n} |rho(k)|^{2d}) (sum_{k<n} rho(k)^2)^{1/2}
/// `variance` is E[F_n^2] of the 1/sqrt(n)-normalised functional.
BoundReport corollary33_bound(const CovarianceFunction& rho, std::size_t n, int d, int m,
                              double variance, double constant_multiplier = 1.0);

/// Power-variation case (d = 1): second term (sum_{k<n} rho(k)^2)^{3/2}.
/// `variance` is the variance of sqrt(n)(Q_{q,n} - E Q_{q,n}) / rho0^{q/2},
/// i.e. n Var(Q_{q,n}) / rho0^q.
BoundReport power_variation_bound(const CovarianceFunction& rho, std::size_t n, int q,
                                  double variance, double constant_multiplier = 1.0);

/// Rate regimes for power variations of fGn: n^{-1/2} for H < 5/8,
/// n^{-1/2} log^{3/2} n at H = 5/8, n^{4H-3} for 5/8 < H < 3/4.
RatePrediction fgn_rate(double hurst, int q);

/// LHS / RHS of the multi-lag covariance inequality
///   sum_{|k_j| <= n} |rho(k . v)| prod_j |rho(k_j)|  vs  (sum_{|k|<=n} |rho(k)|^{1+1/M})^M
/// for M in {2, 3} and a sign vector v. A diagnostic, not a check.
double nz_ratio_diagnostic(const CovarianceFunction& rho, std::size_t n, int M,
                           std::span<const int> signs);

}  // namespace chaosclt
