#include "chaosclt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "chaosclt/errors.hpp"

namespace chaosclt {

namespace {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t checked_size(int order, std::size_t dim, std::size_t guard) {
  if (order < 0) throw DomainError("kernel order must be nonnegative");
  if (dim == 0) throw DomainError("kernel dimension must be >= 1");
  std::size_t size = 1;
  for (int i = 0; i < order; ++i) {
    if (size > guard / dim) {
      throw DomainError("kernel with dim " + std::to_string(dim) + " and order " +
                        std::to_string(order) + " exceeds the " + std::to_string(guard) +
                        "-entry guard");
    }
    size *= dim;
  }
  return size;
}

std::size_t int_pow(std::size_t base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

Eigen::MatrixXd hadamard_power(const Eigen::MatrixXd& m, int exponent) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Ones(m.rows(), m.cols());
  for (int i = 0; i < exponent; ++i) result = result.cwiseProduct(m);
  return result;
}

void require_same_shape(const DenseKernel& f, const DenseKernel& g, const char* where) {
  if (f.order() != g.order() || f.dim() != g.dim()) {
    throw DomainError(std::string(where) + ": kernels differ in order or dimension");
  }
}

}  // namespace

// ---------------------------------------------------------------- DenseKernel

DenseKernel::DenseKernel(int order, std::size_t dim, std::vector<double> values,
                         std::size_t guard)
    : order_(order), dim_(dim), values_(std::move(values)) {
  if (values_.size() != checked_size(order, dim, guard)) {
    throw DomainError("DenseKernel: expected " + std::to_string(int_pow(dim, order)) +
                      " values, got " + std::to_string(values_.size()));
  }
}

DenseKernel DenseKernel::zeros(int order, std::size_t dim, std::size_t guard) {
  return DenseKernel(order, dim, std::vector<double>(checked_size(order, dim, guard), 0.0),
                     guard);
}

DenseKernel DenseKernel::from_vector(std::span<const double> v) {
  return DenseKernel(1, v.size(), std::vector<double>(v.begin(), v.end()));
}

DenseKernel DenseKernel::from_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw DomainError("DenseKernel::from_matrix: not square");
  const RowMajorMatrix row_major = m;
  return DenseKernel(2, static_cast<std::size_t>(m.rows()),
                     std::vector<double>(row_major.data(), row_major.data() + m.size()));
}

DenseKernel DenseKernel::tensor_power(std::span<const double> v, int order,
                                      std::size_t guard) {
  const std::size_t n = v.size();
  std::vector<double> values(checked_size(order, n, guard), 1.0);
  // Fill by expanding one index at a time.
  std::size_t block = 1;
  for (int level = 0; level < order; ++level) {
    for (std::size_t flat = block * n; flat-- > 0;) {
      values[flat] = values[flat / n] * v[flat % n];
    }
    block *= n;
  }
  return DenseKernel(order, n, std::move(values), guard);
}

double DenseKernel::operator()(std::span<const std::size_t> index) const {
  if (index.size() != static_cast<std::size_t>(order_)) {
    throw DomainError("DenseKernel: index arity does not match order");
  }
  std::size_t flat = 0;
  for (std::size_t i : index) {
    if (i >= dim_) throw DomainError("DenseKernel: index out of range");
    flat = flat * dim_ + i;
  }
  return values_[flat];
}

bool DenseKernel::is_symmetric(double tolerance) const {
  if (order_ < 2) return true;
  const double scale = std::max(1.0, std::abs(*std::max_element(
      values_.begin(), values_.end(),
      [](double a, double b) { return std::abs(a) < std::abs(b); })));
  std::vector<std::size_t> stride(static_cast<std::size_t>(order_));
  for (int k = 0; k < order_; ++k) stride[static_cast<std::size_t>(k)] = int_pow(dim_, order_ - 1 - k);
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    for (int k = 0; k + 1 < order_; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const std::size_t a = (flat / stride[uk]) % dim_;
      const std::size_t b = (flat / stride[uk + 1]) % dim_;
      if (a == b) continue;
      const std::size_t swapped =
          flat - a * stride[uk] - b * stride[uk + 1] + b * stride[uk] + a * stride[uk + 1];
      if (std::abs(values_[flat] - values_[swapped]) > tolerance * scale) return false;
    }
  }
  return true;
}

Eigen::MatrixXd DenseKernel::to_matrix() const {
  if (order_ != 2) throw DomainError("DenseKernel::to_matrix: order must be 2");
  const auto n = static_cast<Eigen::Index>(dim_);
  return Eigen::Map<const RowMajorMatrix>(values_.data(), n, n);
}

DenseKernel scaled(const DenseKernel& f, double factor) {
  std::vector<double> values(f.values().begin(), f.values().end());
  for (double& x : values) x *= factor;
  const std::size_t size = values.size();
  return DenseKernel(f.order(), f.dim(), std::move(values), size);
}

DenseKernel symmetrize(const DenseKernel& f) {
  const int p = f.order();
  if (p < 2) return f;
  const std::size_t n = f.dim();
  std::vector<std::size_t> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> index(perm.size());
  std::vector<double> out(f.size(), 0.0);
  std::size_t count = 0;
  const auto source = f.values();
  do {
    ++count;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t k = perm.size(); k-- > 0;) {
        index[k] = rest % n;
        rest /= n;
      }
      std::size_t permuted = 0;
      for (std::size_t k = 0; k < perm.size(); ++k) permuted = permuted * n + index[perm[k]];
      out[flat] += source[permuted];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& x : out) x /= static_cast<double>(count);
  const std::size_t size = out.size();
  return DenseKernel(p, n, std::move(out), size);
}

DenseKernel contract(const DenseKernel& f, const DenseKernel& g, int r, std::size_t guard) {
  if (f.dim() != g.dim()) throw DomainError("contract: dimension mismatch");
  if (r < 0 || r > std::min(f.order(), g.order())) {
    throw DomainError("contract: r = " + std::to_string(r) + " outside [0, min(p, q)]");
  }
  const std::size_t n = f.dim();
  const int out_order = f.order() + g.order() - 2 * r;
  const std::size_t out_size = checked_size(out_order, n, guard);

  const auto shared = static_cast<Eigen::Index>(int_pow(n, r));
  const auto f_free = static_cast<Eigen::Index>(int_pow(n, f.order() - r));
  const auto g_free = static_cast<Eigen::Index>(int_pow(n, g.order() - r));
  Eigen::Map<const RowMajorMatrix> fm(f.values().data(), shared, f_free);
  Eigen::Map<const RowMajorMatrix> gm(g.values().data(), shared, g_free);

  std::vector<double> out(out_size);
  Eigen::Map<RowMajorMatrix> result(out.data(), f_free, g_free);
  result.noalias() = fm.transpose() * gm;
  return DenseKernel(out_order, n, std::move(out), guard);
}

double inner(const DenseKernel& f, const DenseKernel& g) {
  require_same_shape(f, g, "inner");
  const auto size = static_cast<Eigen::Index>(f.size());
  return Eigen::Map<const Eigen::VectorXd>(f.values().data(), size)
      .dot(Eigen::Map<const Eigen::VectorXd>(g.values().data(), size));
}

double norm(const DenseKernel& f) { return std::sqrt(inner(f, f)); }

// ----------------------------------------------------------- RankOneSumKernel

RankOneSumKernel::RankOneSumKernel(int order, std::size_t dim, std::vector<Term> terms,
                                   bool stationary)
    : order_(order), stationary_(stationary) {
  if (order < 1) throw DomainError("RankOneSumKernel: order must be >= 1");
  if (dim == 0) throw DomainError("RankOneSumKernel: dimension must be >= 1");
  if (terms.empty()) throw DomainError("RankOneSumKernel: at least one term required");
  const auto n = static_cast<Eigen::Index>(dim);
  coefficients_.resize(static_cast<Eigen::Index>(terms.size()));
  vectors_.resize(n, coefficients_.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].vector.size() != dim) {
      throw DomainError("RankOneSumKernel: term " + std::to_string(i) +
                        " has the wrong dimension");
    }
    const auto col = static_cast<Eigen::Index>(i);
    coefficients_(col) = terms[i].coefficient;
    vectors_.col(col) = Eigen::Map<const Eigen::VectorXd>(terms[i].vector.data(), n);
  }
}

RankOneSumKernel::RankOneSumKernel(int order, Eigen::VectorXd coefficients,
                                   Eigen::MatrixXd vectors, bool stationary)
    : order_(order),
      coefficients_(std::move(coefficients)),
      vectors_(std::move(vectors)),
      stationary_(stationary) {
  if (order < 1) throw DomainError("RankOneSumKernel: order must be >= 1");
  if (vectors_.rows() == 0) throw DomainError("RankOneSumKernel: dimension must be >= 1");
  if (vectors_.cols() == 0) throw DomainError("RankOneSumKernel: at least one term required");
  if (coefficients_.size() != vectors_.cols()) {
    throw DomainError("RankOneSumKernel: coefficient count differs from vector count");
  }
}

RankOneSumKernel RankOneSumKernel::from_vector(std::span<const double> v) {
  return RankOneSumKernel(1, v.size(), {{1.0, std::vector<double>(v.begin(), v.end())}});
}

RankOneSumKernel RankOneSumKernel::from_symmetric_matrix(const DenseKernel& f) {
  if (f.order() != 2) throw DomainError("from_symmetric_matrix: order must be 2");
  if (!f.is_symmetric(1e-12)) throw DomainError("from_symmetric_matrix: kernel not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(f.to_matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("from_symmetric_matrix: eigendecomposition failed");
  }
  return RankOneSumKernel(2, solver.eigenvalues(), solver.eigenvectors());
}

Eigen::MatrixXd RankOneSumKernel::gram() const {
  if (!stationary_) return vectors_.transpose() * vectors_;
  const Eigen::RowVectorXd first = vectors_.col(0).transpose() * vectors_;
  const Eigen::Index t = vectors_.cols();
  Eigen::MatrixXd g(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = 0; j < t; ++j) g(i, j) = first(std::abs(i - j));
  return g;
}

DenseKernel RankOneSumKernel::densify(std::size_t guard) const {
  std::vector<double> values(checked_size(order_, dim(), guard), 0.0);
  for (Eigen::Index i = 0; i < vectors_.cols(); ++i) {
    const Eigen::VectorXd v = vectors_.col(i);
    const DenseKernel power = DenseKernel::tensor_power({v.data(), dim()}, order_, guard);
    const auto entries = power.values();
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += coefficients_(i) * entries[k];
  }
  return DenseKernel(order_, dim(), std::move(values), guard);
}

RankOneSumKernel RankOneSumKernel::scaled(double factor) const {
  return RankOneSumKernel(order_, coefficients_ * factor, vectors_, stationary_);
}

double inner(const RankOneSumKernel& f, const RankOneSumKernel& g) {
  if (f.order() != g.order() || f.dim() != g.dim()) {
    throw DomainError("inner: kernels differ in order or dimension");
  }
  const Eigen::MatrixXd cross = f.vectors().transpose() * g.vectors();
  return f.coefficients().dot(hadamard_power(cross, f.order()) * g.coefficients());
}

double norm(const RankOneSumKernel& f) {
  const double squared =
      f.coefficients().dot(hadamard_power(f.gram(), f.order()) * f.coefficients());
  return std::sqrt(std::max(squared, 0.0));
}

double rank_one_contraction_norm(const RankOneSumKernel& f, int r) {
  const int p = f.order();
  if (r < 1 || r > p - 1) {
    throw DomainError("rank_one_contraction_norm: r = " + std::to_string(r) +
                      " outside [1, p - 1]");
  }
  const Eigen::MatrixXd gram = f.gram();
  const auto& a = f.coefficients();
  const Eigen::MatrixXd weighted = a.asDiagonal() * hadamard_power(gram, r) * a.asDiagonal();
  const Eigen::MatrixXd product = weighted * hadamard_power(gram, p - r);
  const double squared = product.cwiseProduct(product.transpose()).sum();
  return std::sqrt(std::max(squared, 0.0));
}

double rank_one_mixed_inner(const RankOneSumKernel& fp, const RankOneSumKernel& fq) {
  const int p = fp.order();
  const int q = fq.order();
  if (q <= p) throw DomainError("rank_one_mixed_inner: requires q > p");
  if (fp.dim() != fq.dim()) throw DomainError("rank_one_mixed_inner: dimension mismatch");
  const Eigen::MatrixXd cross = fp.vectors().transpose() * fq.vectors();
  // x_k = b_k sum_i a_i <v_i, w_k>^p
  const Eigen::VectorXd x =
      fq.coefficients().cwiseProduct(hadamard_power(cross, p).transpose() * fp.coefficients());
  return x.dot(hadamard_power(fq.gram(), q - p) * x);
}

std::vector<RankOneSumKernel> breuer_major_kernels(const CovarianceFunction& rho,
                                                   std::size_t n,
                                                   const HermiteEvenCoeffs& coeffs) {
  coeffs.validate();
  if (n == 0) throw DomainError("breuer_major_kernels: n must be >= 1");
  // Columns of the transposed root are the whitening vectors eps_i.
  const Eigen::MatrixXd root =
      covariance_square_root(covariance_matrix(rho, n, rho.rho0()));
  const Eigen::MatrixXd eps = root.transpose();
  std::vector<RankOneSumKernel> kernels;
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = coeffs.d; k <= coeffs.m; ++k) {
    Eigen::VectorXd a = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                                  coeffs.lambda(k) * inv_sqrt_n);
    kernels.emplace_back(2 * k, std::move(a), eps, /*stationary=*/true);
  }
  return kernels;
}

// -------------------------------------------------------------- Kernel variant

namespace {

const RankOneSumKernel* rank_one_ptr(const Kernel& k) {
  return std::get_if<RankOneSumKernel>(&k);
}

// Exact structured view of a kernel when one exists.
std::optional<RankOneSumKernel> as_rank_one(const Kernel& k) {
  if (const auto* r = rank_one_ptr(k)) return *r;
  const auto& dense = std::get<DenseKernel>(k);
  if (dense.order() == 1) return RankOneSumKernel::from_vector(dense.values());
  if (dense.order() == 2 && dense.is_symmetric(1e-12)) {
    return RankOneSumKernel::from_symmetric_matrix(dense);
  }
  return std::nullopt;
}

double dense_mixed_inner(const DenseKernel& fp, const DenseKernel& fq) {
  const int p = fp.order();
  const DenseKernel folded = contract(fq, fq, fq.order() - p);
  const auto side = static_cast<Eigen::Index>(fp.size());
  Eigen::Map<const RowMajorMatrix> x(folded.values().data(), side, side);
  Eigen::Map<const Eigen::VectorXd> v(fp.values().data(), side);
  return v.dot(x * v);
}

}  // namespace

int order(const Kernel& k) {
  return std::visit([](const auto& x) { return x.order(); }, k);
}

std::size_t dim(const Kernel& k) {
  return std::visit([](const auto& x) { return x.dim(); }, k);
}

double norm(const Kernel& k) {
  return std::visit([](const auto& x) { return norm(x); }, k);
}

Kernel scaled(const Kernel& k, double factor) {
  if (const auto* r = rank_one_ptr(k)) return r->scaled(factor);
  return scaled(std::get<DenseKernel>(k), factor);
}

DenseKernel densify(const Kernel& k, std::size_t guard) {
  if (const auto* r = rank_one_ptr(k)) return r->densify(guard);
  return std::get<DenseKernel>(k);
}

double contraction_norm(const Kernel& k, int r) {
  if (const auto* structured = rank_one_ptr(k)) {
    return rank_one_contraction_norm(*structured, r);
  }
  const auto& dense = std::get<DenseKernel>(k);
  return norm(contract(dense, dense, r));
}

double mixed_inner(const Kernel& kp, const Kernel& kq) {
  if (order(kq) <= order(kp)) throw DomainError("mixed_inner: requires q > p");
  if (dim(kp) != dim(kq)) throw DomainError("mixed_inner: dimension mismatch");
  if (rank_one_ptr(kp) || rank_one_ptr(kq)) {
    auto sp = as_rank_one(kp);
    auto sq = as_rank_one(kq);
    if (sp && sq) return rank_one_mixed_inner(*sp, *sq);
  }
  return dense_mixed_inner(densify(kp), densify(kq));
}

}  // namespace chaosclt
