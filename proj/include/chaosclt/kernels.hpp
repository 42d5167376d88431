#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "chaosclt/stationary_gaussian.hpp"

namespace chaosclt {

// Kernels live on H = R^n with the Euclidean inner product. Stationary
// sequences enter through explicit whitening vectors (rows of a covariance
// square root), so every contraction below is a plain Euclidean sum.

inline constexpr std::size_t kDefaultEntryGuard = 10'000'000;

/// Tensor of order p over R^n storing all n^p entries, row-major in the
/// index tuple (first index most significant). Order 0 holds a scalar.
class DenseKernel {
 public:
  DenseKernel(int order, std::size_t dim, std::vector<double> values,
              std::size_t guard = kDefaultEntryGuard);

  static DenseKernel zeros(int order, std::size_t dim,
                           std::size_t guard = kDefaultEntryGuard);
  static DenseKernel from_vector(std::span<const double> v);
  static DenseKernel from_matrix(const Eigen::MatrixXd& m);
  /// v^{(x) p}.
  static DenseKernel tensor_power(std::span<const double> v, int order,
                                  std::size_t guard = kDefaultEntryGuard);

  int order() const { return order_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  double operator()(std::span<const std::size_t> index) const;
  double operator()(std::initializer_list<std::size_t> index) const {
    return (*this)(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Entrywise check against every adjacent index transposition.
  bool is_symmetric(double tolerance = 1e-12) const;
  /// Order-2 kernels only.
  Eigen::MatrixXd to_matrix() const;

 private:
  int order_;
  std::size_t dim_;
  std::vector<double> values_;
};

DenseKernel scaled(const DenseKernel& f, double factor);

/// Average of f over all p! index permutations.
DenseKernel symmetrize(const DenseKernel& f);

/// r-th contraction. The first r indices of f and of g are summed; the output
/// lists the p - r free indices of f, then the q - r free indices of g.
/// r = 0 is the tensor product. Not symmetrized.
DenseKernel contract(const DenseKernel& f, const DenseKernel& g, int r,
                     std::size_t guard = kDefaultEntryGuard);

double inner(const DenseKernel& f, const DenseKernel& g);
double norm(const DenseKernel& f);

/// sum_i a_i v_i^{(x) p}, symmetric by construction.
///
/// When `stationary` is set the caller asserts <v_i, v_j> depends only on
/// i - j, and Gram matrices are built from the first row alone.
class RankOneSumKernel {
 public:
  struct Term {
    double coefficient;
    std::vector<double> vector;
  };

  RankOneSumKernel(int order, std::size_t dim, std::vector<Term> terms,
                   bool stationary = false);
  /// Columns of `vectors` are the v_i.
  RankOneSumKernel(int order, Eigen::VectorXd coefficients, Eigen::MatrixXd vectors,
                   bool stationary = false);

  static RankOneSumKernel from_vector(std::span<const double> v);
  /// Exact rewrite of a symmetric order-2 kernel through its eigenvectors.
  static RankOneSumKernel from_symmetric_matrix(const DenseKernel& f);

  int order() const { return order_; }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.rows()); }
  std::size_t term_count() const { return static_cast<std::size_t>(vectors_.cols()); }
  bool stationary() const { return stationary_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }

  /// G_ij = <v_i, v_j>.
  Eigen::MatrixXd gram() const;
  DenseKernel densify(std::size_t guard = kDefaultEntryGuard) const;
  RankOneSumKernel scaled(double factor) const;

 private:
  int order_;
  Eigen::VectorXd coefficients_;
  Eigen::MatrixXd vectors_;
  bool stationary_;
};

double inner(const RankOneSumKernel& f, const RankOneSumKernel& g);
double norm(const RankOneSumKernel& f);

/// ||f (x)_r f|| for 1 <= r <= p-1 without densification:
/// ||f (x)_r f||^2 = sum_{ijkl} a_i a_j a_k a_l G_ij^r G_kl^r G_ik^{p-r} G_jl^{p-r},
/// evaluated as tr(A B A B) with A = D G^{.r} D, B = G^{.(p-r)}.
double rank_one_contraction_norm(const RankOneSumKernel& f, int r);

/// <f_p (x) f_p, f_q (x)_{q-p} f_q> for q > p:
/// sum a_i a_j b_k b_l <v_i,w_k>^p <v_j,w_l>^p <w_k,w_l>^{q-p}.
double rank_one_mixed_inner(const RankOneSumKernel& fp, const RankOneSumKernel& fq);

/// f_{2k} = (lambda_{2k} / sqrt(n)) sum_i eps_i^{(x) 2k}, k = d..m, where the
/// eps_i are rows of a square root of the standardized covariance matrix.
std::vector<RankOneSumKernel> breuer_major_kernels(const CovarianceFunction& rho,
                                                   std::size_t n,
                                                   const HermiteEvenCoeffs& coeffs);

// Either representation. Functions below pick the structured closed forms
// when every operand is a rank-one sum (dense orders 1 and 2 are converted
// exactly) and fall back to dense contraction otherwise.
using Kernel = std::variant<DenseKernel, RankOneSumKernel>;

int order(const Kernel& k);
std::size_t dim(const Kernel& k);
double norm(const Kernel& k);
Kernel scaled(const Kernel& k, double factor);
DenseKernel densify(const Kernel& k, std::size_t guard = kDefaultEntryGuard);
/// ||k (x)_r k||.
double contraction_norm(const Kernel& k, int r);
/// <kp (x) kp, kq (x)_{q-p} kq>, q > p.
double mixed_inner(const Kernel& kp, const Kernel& kq);

}  // namespace chaosclt
