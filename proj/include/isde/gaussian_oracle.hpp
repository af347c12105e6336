#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace isde {

/// Sigma^{(d,k*)}_{sigma,eps}: block diagonal of d/k* equicorrelated
/// k* x k* blocks (unit diagonal, off-diagonal sigma), every cross-block
/// entry equal to eps.
struct GaussianBlockSpec
{
  int d = 2;
  int k_star = 1;
  double sigma = 0.0;
  double epsilon = 0.0;

  //! k* divides d, sigma in [0,1), eps >= 0, and the three eigenvalues are
  //! positive. Throws ParameterError.
  void validate() const;
  Eigen::MatrixXd covariance() const;
  //! Consecutive blocks of size k*.
  FeaturePartition true_partition() const;
};

//! A^p_sigma
Eigen::MatrixXd equicorrelated_matrix(int p, double sigma);

//! det A^p_sigma = (1 - sigma)^{p-1} (1 + (p-1) sigma)
double det_equicorrelated(int p, double sigma);

//! (1-s)^{(d/k)(k-1)} (1+(k-1)s+(d-k)e) (1+(k-1)s-ke)^{d/k-1}
double det_block_perturbed(const GaussianBlockSpec& spec);

struct EigenvalueMultiplicity
{
  double value;
  int multiplicity;
};

//! {1+(k-1)s+(d-k)e (x1), 1-s (x(d/k)(k-1)), 1+(k-1)s-ke (x(d/k-1))};
//! entries with zero multiplicity are omitted.
std::vector<EigenvalueMultiplicity> block_spectrum(const GaussianBlockSpec& spec);

//! log det of a symmetric positive-definite matrix by Cholesky.
//! Throws FactorizationError.
double log_det_spd(const Eigen::MatrixXd& cov);

//! KL(N(0, cov) || N(0, cov projected block-diagonally on the partition))
//!   = 1/2 (sum_S log det cov(S) - log det cov).
double kl_block_projection(const Eigen::MatrixXd& cov,
                           const FeaturePartition& partition);

struct AlmostIndependenceKl
{
  double exact;
  //! d(d-k)/(4(1+(k-1)s)^2) eps^2
  double leading;
};

//! KL(f_{Sigma_{s,e}} || f_{Sigma_s}) in closed form.
AlmostIndependenceKl kl_almost_independent(const GaussianBlockSpec& spec);

//! Block sizes of a partition into consecutive features.
struct Structure
{
  std::vector<int> sizes;

  int total() const;
  bool operator==(const Structure&) const = default;
};

FeaturePartition structure_partition(const Structure& structure);

//! KL for Sigma = A^d_sigma projected on the structure's consecutive blocks.
double kl_equicorrelated_structure(int d, double sigma, const Structure& s);

//! (k, ..., k, r) with d = pk + r; r omitted when zero.
Structure optimal_structure(int d, int k, double sigma);

/// Upper bound on KL(f_Sigma || f_{P*}) for Sigma = Sigma^{(d,k*)}_{s,e} when
/// blocks are capped at k < k*. With k* = pk + r:
///   KL_almost_indep + (dp/2k*) log((1+(k-1)s)/(1-s))
///     + (d/2k*) log((1+(r-1)s)/(1-s)) - (d/2k*) log((1+(k*-1)s)/(1-s)).
/// Throws ParameterError unless 1 <= k < k*.
double bias_upper_bound(const GaussianBlockSpec& spec, int k);

//! The partition the bound is built from: each true block split into
//! (k, ..., k, r).
FeaturePartition bias_construction_partition(const GaussianBlockSpec& spec,
                                             int k);

//! Phi, via erfc.
double standard_normal_cdf(double x);
//! Phi^{-1}, via the inverse complementary error function.
double standard_normal_quantile(double u);

//! N(0, cov) with a cached Cholesky factor.
class CenteredGaussian
{
public:
  explicit CenteredGaussian(const Eigen::MatrixXd& cov);

  int dimension() const { return static_cast<int>(cov_.rows()); }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  double log_det() const { return log_det_; }

  double log_density(std::span<const double> z) const;
  //! Writes one draw into `out`.
  void sample(std::mt19937_64& rng, std::span<double> out) const;

private:
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_det_;
};

//! n draws of Phi(Z) with Z ~ N(0, Sigma^{(d,k*)}_{s,e}); bitwise
//! reproducible for a fixed seed.
DataMatrix sample_gaussian_copula_block(const GaussianBlockSpec& spec,
                                        std::size_t n,
                                        std::uint64_t seed);

} // namespace isde
