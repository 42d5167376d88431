#include "chaosclt/chaos.hpp"

#include <cmath>
#include <string>

#include "chaosclt/errors.hpp"
#include "chaosclt/random.hpp"
#include "parallel.hpp"

namespace chaosclt {

namespace {

constexpr double kSymmetryTolerance = 1e-10;

double factorial(int k) {
  double result = 1.0;
  for (int i = 2; i <= k; ++i) result *= i;
  return result;
}

void require_symmetric_order2(const DenseKernel& g, const char* where) {
  if (g.order() != 2) throw DomainError(std::string(where) + ": kernel must have order 2");
  if (!g.is_symmetric(kSymmetryTolerance)) {
    throw DomainError(std::string(where) + ": kernel is not symmetric");
  }
}

double weighted_gram_trace_power(const RankOneSumKernel& g, int power) {
  if (g.order() != 2) throw DomainError("second-chaos cumulant: kernel must have order 2");
  const Eigen::MatrixXd dg = g.coefficients().asDiagonal() * g.gram();
  Eigen::MatrixXd acc = dg;
  for (int i = 1; i < power; ++i) acc = acc * dg;
  return acc.trace();
}

}  // namespace

// ------------------------------------------------------- SecondChaosSpectrum

SecondChaosSpectrum SecondChaosSpectrum::from_kernel(const DenseKernel& g) {
  require_symmetric_order2(g, "SecondChaosSpectrum");
  const Eigen::MatrixXd m = g.to_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (m + m.transpose()));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("SecondChaosSpectrum: eigendecomposition failed");
  }
  return {g.dim(), solver.eigenvalues(), solver.eigenvectors()};
}

SecondChaosSpectrum SecondChaosSpectrum::diagonal(std::size_t dim, Eigen::VectorXd eigenvalues) {
  if (static_cast<std::size_t>(eigenvalues.size()) > dim) {
    throw DomainError("SecondChaosSpectrum::diagonal: more eigenvalues than dimensions");
  }
  return {dim, std::move(eigenvalues), Eigen::MatrixXd()};
}

DenseKernel SecondChaosSpectrum::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (canonical_basis()) {
    m.diagonal().head(eigenvalues.size()) = eigenvalues;
  } else {
    m = eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
  return DenseKernel::from_matrix(m);
}

double SecondChaosSpectrum::sample(std::span<const double> z) const {
  if (z.size() != dim) throw DomainError("I_2 sample: z has the wrong dimension");
  double total = 0.0;
  if (canonical_basis()) {
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
      const double x = z[static_cast<std::size_t>(i)];
      total += eigenvalues(i) * (x * x - 1.0);
    }
    return total;
  }
  const Eigen::VectorXd projections =
      eigenvectors.transpose() * Eigen::Map<const Eigen::VectorXd>(z.data(), eigenvectors.rows());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    total += eigenvalues(i) * (projections(i) * projections(i) - 1.0);
  }
  return total;
}

double SecondChaosSpectrum::power_sum(int k) const {
  // Neumaier summation: spectra of large diagonal kernels have many equal terms.
  double total = 0.0;
  double compensation = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double term = std::pow(eigenvalues(i), k);
    const double next = total + term;
    compensation += std::abs(total) >= std::abs(term) ? (total - next) + term : (term - next) + total;
    total = next;
  }
  return total + compensation;
}

double SecondChaosSpectrum::contraction_inner(std::span<const double> f) const {
  if (f.size() != dim) throw DomainError("contraction_inner: f has the wrong dimension");
  double total = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double projection =
        canonical_basis()
            ? f[static_cast<std::size_t>(i)]
            : eigenvectors.col(i).dot(Eigen::Map<const Eigen::VectorXd>(f.data(), eigenvectors.rows()));
    total += eigenvalues(i) * eigenvalues(i) * projection * projection;
  }
  return total;
}

// ------------------------------------------------------------------ ChaosSum

ChaosSum::ChaosSum(std::size_t dim, std::map<int, Kernel> kernels)
    : dim_(dim), kernels_(std::move(kernels)) {
  if (kernels_.empty()) throw DomainError("ChaosSum: at least one chaos order required");
  for (const auto& [p, k] : kernels_) {
    if (p < 1) throw DomainError("ChaosSum: orders must be >= 1");
    if (order(k) != p) {
      throw DomainError("ChaosSum: kernel stored under order " + std::to_string(p) +
                        " has order " + std::to_string(order(k)));
    }
    if (chaosclt::dim(k) != dim_) throw DomainError("ChaosSum: kernels must share the dimension");
    if (const auto* dense = std::get_if<DenseKernel>(&k)) {
      if (!dense->is_symmetric(kSymmetryTolerance)) {
        throw DomainError("ChaosSum: dense kernel of order " + std::to_string(p) +
                          " is not symmetric");
      }
      if (p == 2) second_spectrum_ = SecondChaosSpectrum::from_kernel(*dense);
    } else {
      term_norms_[p] = std::get<RankOneSumKernel>(k).vectors().colwise().norm().transpose();
    }
  }
}

const Kernel* ChaosSum::kernel(int order) const {
  const auto it = kernels_.find(order);
  return it == kernels_.end() ? nullptr : &it->second;
}

ChaosSum ChaosSum::scaled(double factor) const {
  std::map<int, Kernel> kernels;
  for (const auto& [p, k] : kernels_) kernels.emplace(p, chaosclt::scaled(k, factor));
  return ChaosSum(dim_, std::move(kernels));
}

double sample(const ChaosSum& f, std::span<const double> z) {
  if (z.size() != f.dim()) throw DomainError("sample: z has the wrong dimension");
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));
  double total = 0.0;
  for (const auto& [p, k] : f.kernels()) {
    if (const auto* dense = std::get_if<DenseKernel>(&k)) {
      if (p == 1) {
        total += Eigen::Map<const Eigen::VectorXd>(dense->values().data(), zv.size()).dot(zv);
      } else if (p == 2) {
        total += f.second_spectrum_->sample(z);
      } else {
        throw UnsupportedRepresentation(
            "sample: dense kernels of order >= 3 cannot be sampled; use a rank-one sum");
      }
      continue;
    }
    const auto& r = std::get<RankOneSumKernel>(k);
    const Eigen::VectorXd& norms = f.term_norms_.at(p);
    const Eigen::VectorXd projections = r.vectors().transpose() * zv;
    for (Eigen::Index i = 0; i < projections.size(); ++i) {
      const double len = norms(i);
      if (len == 0.0) continue;
      total += r.coefficients()(i) * std::pow(len, p) * hermite(p, projections(i) / len);
    }
  }
  return total;
}

std::vector<double> sample_batch(const ChaosSum& f, std::size_t replicas, std::uint64_t seed,
                                 unsigned threads) {
  if (replicas == 0) throw DomainError("sample_batch: replicas must be >= 1");
  for (const auto& [p, k] : f.kernels()) {
    if (p >= 3 && std::holds_alternative<DenseKernel>(k)) {
      throw UnsupportedRepresentation(
          "sample_batch: dense kernels of order >= 3 cannot be sampled; use a rank-one sum");
    }
  }
  std::vector<double> out(replicas);
  detail::parallel_for(replicas, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> z(f.dim());
    for (std::size_t r = begin; r < end; ++r) {
      RandomStream stream(seed, r);
      stream.fill_normal(z);
      out[r] = sample(f, z);
    }
  });
  return out;
}

double second_moment(const ChaosSum& f) {
  double total = 0.0;
  for (const auto& [p, k] : f.kernels()) {
    const double n = norm(k);
    total += factorial(p) * n * n;
  }
  return total;
}

double kappa3_I2(const DenseKernel& g) { return SecondChaosSpectrum::from_kernel(g).kappa3(); }

double kappa4_I2(const DenseKernel& g) { return SecondChaosSpectrum::from_kernel(g).kappa4(); }

double kappa4_I2_contraction(const DenseKernel& g) {
  require_symmetric_order2(g, "kappa4_I2_contraction");
  const DenseKernel c = contract(g, g, 1);
  const double plain = norm(c);
  const double symmetric = norm(symmetrize(c));
  return 16.0 * (plain * plain + 2.0 * symmetric * symmetric);
}

double kappa3_I2(const RankOneSumKernel& g) { return 8.0 * weighted_gram_trace_power(g, 3); }

double kappa4_I2(const RankOneSumKernel& g) { return 48.0 * weighted_gram_trace_power(g, 4); }

}  // namespace chaosclt
