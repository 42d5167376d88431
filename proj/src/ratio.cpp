#include "chaosclt/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chaosclt/errors.hpp"
#include "chaosclt/random.hpp"
#include "parallel.hpp"

namespace chaosclt {

namespace {

// |a - b| with differences at the level of floating-point rounding reported as
// zero, so that analytically vanishing bound terms print as exactly 0.
double moment_gap(double a, double b) {
  const double gap = std::abs(a - b);
  const double scale = std::max(std::abs(a), std::abs(b));
  return gap <= 64.0 * std::numeric_limits<double>::epsilon() * scale ? 0.0 : gap;
}

}  // namespace

double SingleCoordinateChaos::l2_norm() const {
  return std::sqrt(linear * linear + quadratic * quadratic);
}

RatioFamily make_synthetic_family(double rho_const, double sigma1, double sigma2, double lambda,
                                  const PerturbationConfig& p) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("ratio family: lambda must be positive");
  if (!(rho_const > 0.0)) throw DomainError("ratio family: rho must be positive");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw DomainError("ratio family: sigma1, sigma2 must be positive");
  if (!(std::abs(p.overlap) <= 1.0)) throw DomainError("ratio family: overlap must lie in [-1, 1]");
  if (!(p.decay < 0.5)) throw DomainError("ratio family: perturbation decay must be below 1/2");
  if (!(p.mean_shift > -1.0)) throw DomainError("ratio family: mean_shift must exceed -1");

  const auto m = static_cast<std::size_t>(std::ceil(lambda));
  // inf I_2(g) = -sigma1 sqrt(m/2); it must stay above -rho sqrt(lambda).
  if (!(sigma1 < rho_const * std::sqrt(2.0)) ||
      !(sigma1 * std::sqrt(0.5 * static_cast<double>(m)) < rho_const * std::sqrt(lambda))) {
    throw DomainError("ratio family: sigma1 must be below rho*sqrt(2) for G > 0 almost surely");
  }

  RatioFamily fam;
  fam.lambda = lambda;
  fam.rho_const = rho_const;
  fam.sigma1 = sigma1;
  fam.sigma2 = sigma2;
  fam.m = m;
  fam.dim = m + 3;
  const double c = sigma1 / std::sqrt(2.0 * static_cast<double>(m));
  fam.g = SecondChaosSpectrum::diagonal(fam.dim, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), c));
  fam.f.assign(fam.dim, 0.0);
  fam.f[m] = sigma2 * std::sqrt(1.0 - p.overlap * p.overlap);
  fam.f[0] += sigma2 * p.overlap;

  const double scale = std::pow(lambda, p.decay);
  fam.s = {m + 1, scale * p.s_linear, scale * p.s_quadratic};
  fam.u = {m + 2, scale * p.u_linear, scale * p.u_quadratic};
  fam.mu = scale * p.mu;
  fam.mean_G = rho_const * std::sqrt(lambda) * (1.0 + p.mean_shift);
  return fam;
}

RatioSample sample_ratio(const RatioFamily& fam, std::span<const double> z) {
  if (z.size() != fam.dim) throw DomainError("sample_ratio: z has the wrong dimension");
  const double root = std::sqrt(fam.lambda);
  const double v = fam.g.sample(z);
  const double s = fam.s.sample(z);
  double f = 0.0;
  for (std::size_t i = 0; i < fam.dim; ++i)
    if (fam.f[i] != 0.0) f += fam.f[i] * z[i];
  const double centered_g = v + s / root;
  const double numerator = centered_g + f + (fam.u.sample(z) + fam.mu) / root;
  const double denominator = (fam.mean_G + centered_g) / (fam.rho_const * root);
  if (!(denominator > 0.0)) return {0.0, true};
  return {numerator / denominator, false};
}

RatioBatch sample_ratio_batch(const RatioFamily& fam, std::size_t replicas, std::uint64_t seed,
                              unsigned threads) {
  std::vector<double> values(replicas);
  std::vector<char> rejected(replicas, 0);
  detail::parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> z(fam.dim);
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(seed, r);
      stream.fill_normal(z);
      const RatioSample sample = sample_ratio(fam, z);
      values[r] = sample.value;
      rejected[r] = sample.rejected ? 1 : 0;
    }
  });
  RatioBatch batch;
  batch.replicas = replicas;
  batch.accepted.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    if (rejected[r]) {
      ++batch.rejected;
    } else {
      batch.accepted.push_back(values[r]);
    }
  }
  return batch;
}

BoundReport theorem41_bound(const RatioFamily& fam, double constant_multiplier) {
  const double root = std::sqrt(fam.lambda);
  double f_squared = 0.0;
  for (double x : fam.f) f_squared += x * x;

  const double phi_term =
      std::sqrt(std::abs(fam.g.kappa4())) + std::sqrt(std::max(fam.g.contraction_inner(fam.f), 0.0));
  const double mean_term =
      std::pow(fam.lambda, 0.25) * std::abs(fam.mean_G / (fam.rho_const * root) - 1.0);
  const double var_f_term = moment_gap(f_squared, fam.sigma2 * fam.sigma2);
  // V and S live on disjoint coordinates, so they are uncorrelated.
  const double s_norm = fam.s.l2_norm();
  const double var_g = 2.0 * fam.g.squared_norm() + s_norm * s_norm / fam.lambda;
  const double var_g_term = moment_gap(var_g, fam.sigma1 * fam.sigma1);
  const double perturbation_term = (s_norm + fam.u.l2_norm() + std::abs(fam.mu)) / root;

  BoundReport report;
  report.terms = {{"phi", phi_term},
                  {"mean_G", mean_term},
                  {"variance_F", var_f_term},
                  {"variance_G", var_g_term},
                  {"perturbations", perturbation_term}};
  report.constant_multiplier = constant_multiplier;
  report.recompute_total();
  return report;
}

}  // namespace chaosclt
