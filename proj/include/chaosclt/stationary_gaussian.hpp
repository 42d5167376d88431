#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chaosclt {

/// Covariance rho(k) = E[Z_0 Z_k] of a centered stationary Gaussian sequence.
///
/// The evaluator is only ever called with k >= 0; negative lags are folded,
/// so rho(k) == rho(-k) holds by construction.
class CovarianceFunction {
 public:
  CovarianceFunction(std::function<double(std::int64_t)> evaluator,
                     std::string label = "custom");

  double operator()(std::int64_t lag) const {
    return evaluator_(lag < 0 ? -lag : lag);
  }
  double rho0() const { return rho0_; }
  const std::string& label() const { return label_; }

  /// Fractional Gaussian noise with Hurst index in (0, 1); rho(0) = 1.
  static CovarianceFunction fgn(double hurst);
  /// Independent sequence: rho(0) = variance, rho(k) = 0 otherwise.
  static CovarianceFunction white_noise(double variance = 1.0);
  /// rho(k) = lags[|k|] for |k| < lags.size(), zero beyond.
  static CovarianceFunction from_lags(std::vector<double> lags);

 private:
  std::function<double(std::int64_t)> evaluator_;
  std::string label_;
  double rho0_;
};

/// fGn covariance 0.5(|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}).
double fgn_covariance(double hurst, std::int64_t lag);

/// M x n sample of (Z_0, ..., Z_{n-1}); row r is replica r.
struct PathMatrix {
  std::size_t length = 0;
  std::size_t replicas = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * length, length};
  }
  std::span<double> row(std::size_t r) {
    return {values.data() + r * length, length};
  }
};

/// Coefficients of g(x) = sum_{k=d}^{m} lambda_{2k} H_{2k}(x / sqrt(rho0)).
struct HermiteEvenCoeffs {
  int d = 1;
  int m = 1;
  std::vector<double> lambdas;  // lambdas[k - d] multiplies H_{2k}
  double rho0 = 1.0;

  void validate() const;
  double lambda(int k) const { return lambdas.at(static_cast<std::size_t>(k - d)); }
};

/// Exact sampler for a stationary Gaussian vector of fixed length.
///
/// Uses circulant embedding of size 2n diagonalised by the FFT. Embedding
/// eigenvalues in [-1e-10, 0) are clamped to zero; anything lower switches to
/// a dense square root of the n x n covariance matrix. Replica r draws from
/// substream r of the seed.
class StationarySampler {
 public:
  StationarySampler(const CovarianceFunction& rho, std::size_t length);

  std::size_t length() const { return length_; }
  bool uses_circulant() const { return dense_root_.size() == 0; }
  /// Smallest eigenvalue of the circulant embedding, before clamping.
  double min_embedding_eigenvalue() const { return min_embedding_eigenvalue_; }

  /// Calls visit(r, path) for every replica r in [0, replicas). The path span
  /// is only valid during the call. Visits from different threads touch
  /// disjoint replica ranges.
  void for_each_replica(std::size_t replicas, std::uint64_t seed,
                        unsigned threads,
                        const std::function<void(std::size_t, std::span<const double>)>&
                            visit) const;

  PathMatrix sample(std::size_t replicas, std::uint64_t seed,
                    unsigned threads = 1) const;

 private:
  std::size_t length_;
  double rho0_;
  std::vector<double> embedding_scale_;  // half-spectrum weights, bins 0..n
  double min_embedding_eigenvalue_ = 0.0;
  Eigen::MatrixXd dense_root_;           // only set when embedding fails
};

PathMatrix sample_paths(const CovarianceFunction& rho, std::size_t length,
                        std::size_t replicas, std::uint64_t seed,
                        unsigned threads = 1);

/// n x n Toeplitz matrix with entries rho(i - j) / scale.
Eigen::MatrixXd covariance_matrix(const CovarianceFunction& rho,
                                  std::size_t length, double scale = 1.0);

/// Returns S with S S^T = C. Cholesky when C is positive definite, otherwise a
/// symmetric eigen square root with eigenvalues in [-tol, 0) clamped. Throws
/// NumericalError naming the offending eigenvalue below -tol.
Eigen::MatrixXd covariance_square_root(const Eigen::MatrixXd& covariance,
                                       double tolerance = 1e-10);

/// (1/n) sum_i path_i^q for even q >= 2.
double power_variation(std::span<const double> path, int q);

/// E[Q_{q,n}] = rho0^{q/2} (q-1)!!.
double expected_power_variation(double rho0, int q);

/// (1/sqrt(n)) sum_i g(path_i) for g given in the even Hermite basis.
double breuer_major_statistic(std::span<const double> path,
                              const HermiteEvenCoeffs& coeffs);

/// Var(Q_{q,n}) from the Hermite expansion of x^q:
/// (rho0^q / n^2) sum_{i,j} sum_{k=1}^{q/2} c_{q,2k}^2 (2k)! (rho(i-j)/rho0)^{2k}.
double exact_variance_power_variation(const CovarianceFunction& rho, int q,
                                      std::size_t n);

/// c_{q,2k} = q! / (2^{q/2-k} (q/2-k)! (2k)!) for k = 0..q/2, so that
/// x^q = sum_k c_{q,2k} H_{2k}(x). Requires even q in [2, 32].
std::vector<double> hermite_monomial_coeffs(int q);

}  // namespace chaosclt
