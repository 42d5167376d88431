#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chaosclt/bounds.hpp"
#include "chaosclt/chaos.hpp"

namespace chaosclt {

/// Perturbations of the synthetic ratio family. Each random perturbation
/// lives on its own coordinate z_j and has the form
///   scale * (a z_j + b (z_j^2 - 1) / sqrt(2)),   scale = lambda^decay,
/// so its L2 norm is scale * sqrt(a^2 + b^2). With decay < 1/2 every
/// perturbation is o(sqrt(lambda)).
struct PerturbationConfig {
  double s_linear = 0.0;
  double s_quadratic = 0.0;
  double u_linear = 0.0;
  double u_quadratic = 0.0;
  double mu = 0.0;
  double decay = 0.0;
  /// E G = rho sqrt(lambda) (1 + mean_shift).
  double mean_shift = 0.0;
  /// Cosine of the angle between f and the first eigendirection of g.
  double overlap = 0.0;

  bool random_terms_zero() const {
    return s_linear == 0.0 && s_quadratic == 0.0 && u_linear == 0.0 && u_quadratic == 0.0;
  }
};

/// Element a I_1(e_j) + b I_2(e_j (x) e_j) / sqrt(2) of the first two chaoses.
struct SingleCoordinateChaos {
  std::size_t coordinate = 0;
  double linear = 0.0;
  double quadratic = 0.0;

  double sample(std::span<const double> z) const {
    const double x = z[coordinate];
    return linear * x + quadratic * (x * x - 1.0) * 0.7071067811865476;
  }
  double l2_norm() const;
};

/// Ratio statistic
///   Q = (G - E G + F + (U + mu) / sqrt(lambda)) / (G / (rho sqrt(lambda)))
/// with G - E G = V + S / sqrt(lambda), V = I_2(g), F = I_1(f).
///
/// Coordinates 0..m-1 carry g, coordinate m carries f, m+1 carries S and
/// m+2 carries U.
struct RatioFamily {
  double lambda = 1.0;
  double rho_const = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  std::size_t m = 1;
  std::size_t dim = 4;
  SecondChaosSpectrum g;
  std::vector<double> f;
  SingleCoordinateChaos s;
  SingleCoordinateChaos u;
  double mu = 0.0;
  double mean_G = 1.0;

  double limit_variance() const { return sigma1 * sigma1 + sigma2 * sigma2; }
};

struct RatioSample {
  double value = 0.0;
  bool rejected = false;
};

/// m = ceil(lambda), g = (sigma1 / sqrt(2m)) sum_{i<m} e_i (x) e_i,
/// f = sigma2 (sqrt(1 - overlap^2) e_m + overlap e_0).
/// Requires sigma1 sqrt(m/2) < rho sqrt(lambda) so that G > 0 almost surely
/// when S = 0; for integer lambda this is sigma1 < rho sqrt(2).
RatioFamily make_synthetic_family(double rho_const, double sigma1, double sigma2,
                                  double lambda, const PerturbationConfig& perturbation = {});

RatioSample sample_ratio(const RatioFamily& family, std::span<const double> z);

struct RatioBatch {
  std::vector<double> accepted;
  std::size_t rejected = 0;
  std::size_t replicas = 0;

  double rejection_rate() const {
    return replicas == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(replicas);
  }
};

/// Replica r draws z from substream r of `seed`. Accepted values keep
/// replica order.
RatioBatch sample_ratio_batch(const RatioFamily& family, std::size_t replicas,
                              std::uint64_t seed, unsigned threads = 1);

/// Five-term Kolmogorov bound, terms labelled
///   "phi"           sqrt|kappa4(V)| + sqrt(<f (x) f, g (x)_1 g>)
///   "mean_G"        lambda^{1/4} |E G / (rho sqrt(lambda)) - 1|
///   "variance_F"    |E F^2 - sigma2^2|
///   "variance_G"    |E (G - E G)^2 - sigma1^2|
///   "perturbations" (||S|| + ||U|| + |mu|) / sqrt(lambda)
/// All moments are exact.
BoundReport theorem41_bound(const RatioFamily& family, double constant_multiplier = 1.0);

}  // namespace chaosclt
