#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/gaussian_oracle.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace isde {

//! A known density on [0,1]^d that can be sampled and evaluated, together
//! with its marginals. Used to generate synthetic data and to measure the
//! terms of the risk decomposition.
class Truth
{
public:
  virtual ~Truth() = default;

  virtual int dimension() const = 0;
  virtual DataMatrix sample(std::size_t n, std::uint64_t seed) const = 0;
  virtual double log_density(std::span<const double> x) const = 0;
  //! log f_S at x_S (|S| coordinates).
  virtual double log_marginal_density(const FeatureSubset& subset,
                                      std::span<const double> x_s) const = 0;
  //! KL(f || f_P) in closed form, when available.
  virtual std::optional<double> projection_kl(const FeaturePartition&) const
  {
    return std::nullopt;
  }
};

//! Gaussian copula of Sigma^{(d,k*)}_{s,e}. KL divergences between this
//! density and products of its marginals equal the Gaussian ones, since the
//! coordinatewise map Phi is shared by both arguments.
class GaussianCopulaTruth final : public Truth
{
public:
  explicit GaussianCopulaTruth(const GaussianBlockSpec& spec);

  const GaussianBlockSpec& spec() const { return spec_; }

  int dimension() const override { return spec_.d; }
  DataMatrix sample(std::size_t n, std::uint64_t seed) const override;
  double log_density(std::span<const double> x) const override;
  double log_marginal_density(const FeatureSubset& subset,
                              std::span<const double> x_s) const override;
  std::optional<double> projection_kl(
    const FeaturePartition& partition) const override;

private:
  static constexpr int kCachedMarginalDimension = 12;

  GaussianBlockSpec spec_;
  Eigen::MatrixXd cov_;
  CenteredGaussian joint_;
  //! Indexed by mask; filled when d <= kCachedMarginalDimension.
  std::vector<std::shared_ptr<const CenteredGaussian>> marginals_;
};

/// Consecutive pairs (1,2), (3,4), ... drawn from a Farlie-Gumbel-Morgenstern
/// copula c(u,v) = 1 + theta (1-2u)(1-2v); a trailing odd feature is uniform.
/// Every marginal is bounded in [1-|theta|, 1+|theta|]^{pairs}, which makes it
/// a fixture with explicit bounding constants.
class FgmPairsTruth final : public Truth
{
public:
  FgmPairsTruth(int d, double theta);

  double theta() const { return theta_; }
  FeaturePartition true_partition() const;

  int dimension() const override { return d_; }
  DataMatrix sample(std::size_t n, std::uint64_t seed) const override;
  double log_density(std::span<const double> x) const override;
  double log_marginal_density(const FeatureSubset& subset,
                              std::span<const double> x_s) const override;

private:
  int d_;
  double theta_;
};

} // namespace isde
