#include "chaosclt/stationary_gaussian.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <unsupported/Eigen/FFT>

#include "chaosclt/errors.hpp"
#include "chaosclt/hermite.hpp"
#include "chaosclt/random.hpp"
#include "parallel.hpp"

namespace chaosclt {

namespace {

constexpr double kEmbeddingTolerance = 1e-10;
constexpr int kMaxMonomialPower = 32;

void require_even_power(int q, const char* where) {
  if (q < 2 || q % 2 != 0) {
    throw DomainError(std::string(where) + ": q must be an even integer >= 2, got " +
                      std::to_string(q));
  }
}

double factorial(int k) {
  double result = 1.0;
  for (int i = 2; i <= k; ++i) result *= i;
  return result;
}

}  // namespace

CovarianceFunction::CovarianceFunction(std::function<double(std::int64_t)> evaluator,
                                       std::string label)
    : evaluator_(std::move(evaluator)), label_(std::move(label)) {
  if (!evaluator_) throw DomainError("CovarianceFunction: empty evaluator");
  rho0_ = evaluator_(0);
  if (!(rho0_ > 0.0) || !std::isfinite(rho0_)) {
    throw DomainError("CovarianceFunction: rho(0) must be positive and finite");
  }
}

CovarianceFunction CovarianceFunction::fgn(double hurst) {
  fgn_covariance(hurst, 0);  // validates the Hurst index
  return CovarianceFunction([hurst](std::int64_t k) { return fgn_covariance(hurst, k); },
                            "fgn(H=" + std::to_string(hurst) + ")");
}

CovarianceFunction CovarianceFunction::white_noise(double variance) {
  return CovarianceFunction(
      [variance](std::int64_t k) { return k == 0 ? variance : 0.0; }, "white-noise");
}

CovarianceFunction CovarianceFunction::from_lags(std::vector<double> lags) {
  if (lags.empty()) throw DomainError("CovarianceFunction::from_lags: no lags given");
  return CovarianceFunction(
      [lags = std::move(lags)](std::int64_t k) {
        const auto index = static_cast<std::size_t>(k);
        return index < lags.size() ? lags[index] : 0.0;
      },
      "tabulated");
}

double fgn_covariance(double hurst, std::int64_t lag) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("fgn_covariance: Hurst index must lie in (0, 1)");
  }
  const double k = std::abs(static_cast<double>(lag));
  const double a = 2.0 * hurst;
  if (k < 2.0) {
    return 0.5 * (std::pow(k + 1.0, a) + std::pow(std::abs(k - 1.0), a) - 2.0 * std::pow(k, a));
  }
  // The second difference cancels about log10(k^2) digits when evaluated
  // directly. Expanding (1 + x)^a + (1 - x)^a - 2 = 2 sum_{j>=1} C(a, 2j) x^{2j}
  // with x = 1/k <= 1/2 keeps full relative accuracy.
  const double x2 = 1.0 / (k * k);
  double coeff = a * (a - 1.0) / 2.0;  // C(a, 2)
  double power = x2;
  double sum = 0.0;
  for (int j = 1; j < 64; ++j) {
    const double term = coeff * power;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    coeff *= (a - 2.0 * j) * (a - 2.0 * j - 1.0) / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
    power *= x2;
  }
  return std::pow(k, a) * sum;
}

void HermiteEvenCoeffs::validate() const {
  if (d < 1 || m < d) throw DomainError("HermiteEvenCoeffs: need 1 <= d <= m");
  if (lambdas.size() != static_cast<std::size_t>(m - d + 1)) {
    throw DomainError("HermiteEvenCoeffs: expected m - d + 1 coefficients");
  }
  if (!(rho0 > 0.0)) throw DomainError("HermiteEvenCoeffs: rho0 must be positive");
}

Eigen::MatrixXd covariance_matrix(const CovarianceFunction& rho, std::size_t length,
                                  double scale) {
  const auto n = static_cast<Eigen::Index>(length);
  Eigen::VectorXd lag_values(n);
  for (Eigen::Index k = 0; k < n; ++k) lag_values(k) = rho(k) / scale;
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = lag_values(std::abs(i - j));
  return c;
}

Eigen::MatrixXd covariance_square_root(const Eigen::MatrixXd& covariance,
                                       double tolerance) {
  Eigen::LLT<Eigen::MatrixXd> cholesky(covariance);
  if (cholesky.info() == Eigen::Success) return cholesky.matrixL();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("covariance_square_root: eigendecomposition failed");
  }
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -tolerance) {
    throw NumericalError(
        "covariance matrix is not positive semidefinite: eigenvalue " +
        std::to_string(smallest));
  }
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal();
}

StationarySampler::StationarySampler(const CovarianceFunction& rho, std::size_t length)
    : length_(length), rho0_(rho.rho0()) {
  if (length == 0) throw DomainError("StationarySampler: length must be >= 1");

  const std::size_t size = 2 * length;
  std::vector<std::complex<double>> row(size), spectrum;
  for (std::size_t j = 0; j <= length; ++j) {
    row[j] = rho(static_cast<std::int64_t>(j));
    if (j > 0 && j < length) row[size - j] = row[j];
  }
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, row);

  min_embedding_eigenvalue_ = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < size; ++k) {
    min_embedding_eigenvalue_ = std::min(min_embedding_eigenvalue_, spectrum[k].real());
  }
  // Half spectrum of a Hermitian weight vector: bins 0 and n are real with
  // variance lambda_k / L, interior bins complex with E|w_k|^2 = lambda_k / L.
  embedding_scale_.resize(length + 1);
  for (std::size_t k = 0; k <= length; ++k) {
    const double eigenvalue = std::max(spectrum[k].real(), 0.0) / static_cast<double>(size);
    const bool real_bin = (k == 0 || k == length);
    embedding_scale_[k] = std::sqrt(real_bin ? eigenvalue : 0.5 * eigenvalue);
  }
  if (min_embedding_eigenvalue_ < -kEmbeddingTolerance) {
    embedding_scale_.clear();
    dense_root_ = covariance_square_root(covariance_matrix(rho, length),
                                         kEmbeddingTolerance);
  }
}

void StationarySampler::for_each_replica(
    std::size_t replicas, std::uint64_t seed, unsigned threads,
    const std::function<void(std::size_t, std::span<const double>)>& visit) const {
  detail::parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> path(length_);
    if (uses_circulant()) {
      // The transform of a Hermitian vector is real, so one path costs
      // exactly 2n normals: two for the real bins, two per interior bin.
      const std::size_t size = 2 * length_;
      Eigen::FFT<double> fft;
      fft.SetFlag(Eigen::FFT<double>::Unscaled);
      std::vector<double> normals(size), full(size);
      std::vector<std::complex<double>> half(length_ + 1);
      for (std::size_t r = begin; r < end; ++r) {
        RandomStream stream(seed, r);
        stream.fill_normal(normals);
        half[0] = {embedding_scale_[0] * normals[0], 0.0};
        half[length_] = {embedding_scale_[length_] * normals[1], 0.0};
        for (std::size_t k = 1; k < length_; ++k) {
          half[k] = {embedding_scale_[k] * normals[2 * k], embedding_scale_[k] * normals[2 * k + 1]};
        }
        fft.inv(full.data(), half.data(), static_cast<Eigen::Index>(size));
        std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(length_), path.begin());
        visit(r, path);
      }
    } else {
      Eigen::VectorXd z(static_cast<Eigen::Index>(length_));
      for (std::size_t r = begin; r < end; ++r) {
        RandomStream stream(seed, r);
        stream.fill_normal({z.data(), length_});
        Eigen::Map<Eigen::VectorXd>(path.data(), z.size()) = dense_root_ * z;
        visit(r, path);
      }
    }
  });
}

PathMatrix StationarySampler::sample(std::size_t replicas, std::uint64_t seed,
                                     unsigned threads) const {
  if (replicas == 0) throw DomainError("sample_paths: replicas must be >= 1");
  PathMatrix out{length_, replicas, std::vector<double>(length_ * replicas)};
  for_each_replica(replicas, seed, threads,
                   [&out](std::size_t r, std::span<const double> path) {
                     std::copy(path.begin(), path.end(), out.row(r).begin());
                   });
  return out;
}

PathMatrix sample_paths(const CovarianceFunction& rho, std::size_t length,
                        std::size_t replicas, std::uint64_t seed, unsigned threads) {
  return StationarySampler(rho, length).sample(replicas, seed, threads);
}

double power_variation(std::span<const double> path, int q) {
  require_even_power(q, "power_variation");
  if (path.empty()) throw DomainError("power_variation: empty path");
  double sum = 0.0;
  for (double x : path) {
    const double square = x * x;
    double term = 1.0;
    for (int i = 0; i < q / 2; ++i) term *= square;
    sum += term;
  }
  return sum / static_cast<double>(path.size());
}

double expected_power_variation(double rho0, int q) {
  require_even_power(q, "expected_power_variation");
  return std::pow(rho0, q / 2) * hermite_monomial_coeffs(q).front();
}

double breuer_major_statistic(std::span<const double> path,
                              const HermiteEvenCoeffs& coeffs) {
  coeffs.validate();
  if (path.empty()) throw DomainError("breuer_major_statistic: empty path");
  const double inv_scale = 1.0 / std::sqrt(coeffs.rho0);
  double sum = 0.0;
  for (double z : path) {
    const double x = z * inv_scale;
    for (int k = coeffs.d; k <= coeffs.m; ++k) sum += coeffs.lambda(k) * hermite(2 * k, x);
  }
  return sum / std::sqrt(static_cast<double>(path.size()));
}

double exact_variance_power_variation(const CovarianceFunction& rho, int q,
                                      std::size_t n) {
  require_even_power(q, "exact_variance_power_variation");
  if (n == 0) throw DomainError("exact_variance_power_variation: n must be >= 1");
  const std::vector<double> c = hermite_monomial_coeffs(q);
  std::vector<double> weight(c.size(), 0.0);  // c_{q,2k}^2 (2k)!
  for (std::size_t k = 1; k < c.size(); ++k)
    weight[k] = c[k] * c[k] * factorial(static_cast<int>(2 * k));

  const double rho0 = rho.rho0();
  auto lag_term = [&](std::int64_t lag) {
    const double r2 = std::pow(rho(lag) / rho0, 2);
    double power = 1.0;
    double total = 0.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
      power *= r2;
      total += weight[k] * power;
    }
    return total;
  };

  const double nd = static_cast<double>(n);
  double sum = nd * lag_term(0);
  for (std::size_t lag = 1; lag < n; ++lag)
    sum += 2.0 * (nd - static_cast<double>(lag)) * lag_term(static_cast<std::int64_t>(lag));
  return std::pow(rho0, q) * sum / (nd * nd);
}

std::vector<double> hermite_monomial_coeffs(int q) {
  require_even_power(q, "hermite_monomial_coeffs");
  if (q > kMaxMonomialPower) {
    throw DomainError("hermite_monomial_coeffs: q above 32 overflows factorials");
  }
  const int half = q / 2;
  std::vector<double> c(static_cast<std::size_t>(half) + 1);
  for (int k = 0; k <= half; ++k) {
    c[static_cast<std::size_t>(k)] =
        factorial(q) / (std::ldexp(1.0, half - k) * factorial(half - k) * factorial(2 * k));
  }
  return c;
}

}  // namespace chaosclt
