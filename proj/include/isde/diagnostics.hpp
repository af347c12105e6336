#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/isde.hpp"
#include "isde/truth.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace isde {

using LogDensity = std::function<double(std::span<const double>)>;
using Sampler = std::function<DataMatrix(std::size_t, std::uint64_t)>;

struct MonteCarloEstimate
{
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t used = 0;
  //! Draws where a log density was infinite; excluded from the mean.
  std::size_t infinite_count = 0;
  bool flagged = false;
};

//! Mean and standard error of log(f(X) / g(X)) over n_mc draws X ~ f.
//! Requires n_mc >= 100.
MonteCarloEstimate monte_carlo_kl(const Sampler& sample_truth,
                                  const LogDensity& log_truth,
                                  const LogDensity& log_estimate,
                                  std::size_t n_mc,
                                  std::uint64_t seed);

MonteCarloEstimate monte_carlo_kl(const Truth& truth,
                                  const LogDensity& log_estimate,
                                  std::size_t n_mc,
                                  std::uint64_t seed);

//! Sample mean and standard error of a sequence.
MonteCarloEstimate mean_with_error(std::span<const double> values);

struct RiskReport
{
  FeaturePartition partition_hat;
  FeaturePartition partition_tilde;
  FeaturePartition partition_star;
  //! KL(f || f_{P*}); closed form when the truth provides it.
  double bias = 0.0;
  bool bias_exact = false;
  //! sum_{S in P*} KL(f_S || fhat_S)
  MonteCarloEstimate approximation{};
  //! (P - P_n)(log fhat_{P~} - log fhat_{P^})
  MonteCarloEstimate selection{};
  //! KL(f || fhat_{P^})
  MonteCarloEstimate risk{};
  //! Standard error of the paired per-draw difference between the risk and
  //! the right-hand side.
  double combined_std_error = 0.0;
  //! bias + approximation + selection - risk
  double slack = 0.0;
  bool inequality_holds = false;
  std::size_t n_mc = 0;
  std::size_t excluded_draws = 0;
  std::size_t train_count = 0;
  std::size_t holdout_count = 0;
  std::vector<std::string> warnings{};
};

/// Draws `n_data` observations from the truth, runs ISDE, and measures the
/// three terms bounding KL(f || fhat_{P^}). P~ and P* are found by exhaustive
/// search over Part_d^k, with expectations under f taken over `n_mc` fresh
/// draws. Requires d <= 10.
RiskReport risk_decomposition_report(const Truth& truth,
                                     const IsdeConfig& config,
                                     std::size_t n_data,
                                     std::size_t n_mc,
                                     std::uint64_t seed);

//! Heuristic bounding constant: max over models and grid points of
//! |log fhat_S(x)| / |S|, on a regular grid with `points_per_axis` points.
double estimate_bounding_constant(const std::vector<MirrorKdeModel>& models,
                                  int points_per_axis = 16);

} // namespace isde
