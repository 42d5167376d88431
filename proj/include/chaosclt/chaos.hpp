#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chaosclt/hermite.hpp"
#include "chaosclt/kernels.hpp"

namespace chaosclt {

/// Diagonalisation g = sum_i lambda_i u_i (x) u_i of a symmetric order-2
/// kernel. With an empty eigenvector matrix the basis is the canonical one,
/// u_i = e_i, which lets very large diagonal kernels avoid an n x n matrix.
struct SecondChaosSpectrum {
  std::size_t dim = 0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // dim x eigenvalues.size(), or empty

  /// Symmetric eigendecomposition; all eigenvalues are kept, however small.
  static SecondChaosSpectrum from_kernel(const DenseKernel& g);
  static SecondChaosSpectrum diagonal(std::size_t dim, Eigen::VectorXd eigenvalues);

  bool canonical_basis() const { return eigenvectors.size() == 0; }
  DenseKernel reconstruct() const;

  /// I_2(g)(z) = sum_i lambda_i ((u_i . z)^2 - 1).
  double sample(std::span<const double> z) const;
  double power_sum(int k) const;
  /// ||g||^2.
  double squared_norm() const { return power_sum(2); }
  double kappa3() const { return 8.0 * power_sum(3); }
  double kappa4() const { return 48.0 * power_sum(4); }
  /// ||g (x)_1 g||^2 = sum lambda_i^4.
  double contraction_norm_squared() const { return power_sum(4); }
  /// <f (x) f, g (x)_1 g> = sum_i lambda_i^2 <u_i, f>^2.
  double contraction_inner(std::span<const double> f) const;
};

/// F = sum_{p=d}^{N} I_p(f_p) over R^n.
///
/// Dense kernels must be symmetric. Dense order-2 kernels are diagonalised on
/// construction; dense kernels of order >= 3 may be stored (for bounds) but
/// not sampled.
class ChaosSum {
 public:
  ChaosSum(std::size_t dim, std::map<int, Kernel> kernels);

  std::size_t dim() const { return dim_; }
  int lowest_order() const { return kernels_.begin()->first; }
  int highest_order() const { return kernels_.rbegin()->first; }
  /// delta_{dN} = 0.
  bool single_chaos() const { return lowest_order() == highest_order(); }
  const std::map<int, Kernel>& kernels() const { return kernels_; }
  const Kernel* kernel(int order) const;
  const SecondChaosSpectrum* dense_second_order_spectrum() const {
    return second_spectrum_ ? &*second_spectrum_ : nullptr;
  }

  ChaosSum scaled(double factor) const;

 private:
  std::size_t dim_;
  std::map<int, Kernel> kernels_;
  std::optional<SecondChaosSpectrum> second_spectrum_;
  std::map<int, Eigen::VectorXd> term_norms_;  // rank-one kernels: ||v_i||

  friend double sample(const ChaosSum& f, std::span<const double> z);
};

/// One exact draw of F evaluated on the standard Gaussian vector z.
double sample(const ChaosSum& f, std::span<const double> z);

/// `replicas` iid draws; replica r uses substream r of `seed`.
std::vector<double> sample_batch(const ChaosSum& f, std::size_t replicas,
                                 std::uint64_t seed, unsigned threads = 1);

/// E[F^2] = sum_p p! ||f_p||^2.
double second_moment(const ChaosSum& f);

/// Cumulants of I_2(g) from the spectrum: kappa3 = 8 sum lambda^3,
/// kappa4 = 48 sum lambda^4. Throw DomainError for non-symmetric g.
double kappa3_I2(const DenseKernel& g);
double kappa4_I2(const DenseKernel& g);
/// 16 (||g (x)_1 g||^2 + 2 ||g ~(x)_1 g||^2), the contraction route.
double kappa4_I2_contraction(const DenseKernel& g);
/// Rank-one order-2 kernels: trace formulas tr((DG)^3), tr((DG)^4).
double kappa3_I2(const RankOneSumKernel& g);
double kappa4_I2(const RankOneSumKernel& g);

}  // namespace chaosclt
