#pragma once

#include "isde/combinatorics.hpp"
#include "isde/data_matrix.hpp"
#include "isde/kernel.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace isde {

inline constexpr double kMinBandwidth = 1e-6;
inline constexpr double kMaxBandwidth = 0.5 - 1e-9;

//! h = scale * m^{-1/(2 beta + |S|)}, clamped into (0, 1/2).
struct BandwidthRule
{
  double beta = 2.0;
  double scale = 1.0;

  void validate() const;
};

//! Throws ParameterError when m < 2 or the rule is invalid.
double select_bandwidth(const BandwidthRule& rule,
                        std::size_t m,
                        int subset_size);

/// Mirror-image kernel density estimator of a marginal f_S on [0,1]^|S|.
///
/// The estimator sums the kernel over every sample and its reflections
/// t -> -t and t -> 2 - t along each axis, and is restricted to the cube.
/// Samples are held sorted by their first coordinate so evaluation only
/// visits the window of samples whose kernel support can reach the query.
class MirrorKdeModel
{
public:
  //! `samples` is m x |S| in [0,1]. Throws ParameterError / DataError.
  MirrorKdeModel(FeatureSubset subset,
                 double bandwidth,
                 Kernel kernel,
                 DataMatrix samples);

  const FeatureSubset& subset() const { return subset_; }
  double bandwidth() const { return bandwidth_; }
  const Kernel& kernel() const { return kernel_; }
  const DataMatrix& samples() const { return samples_; }
  std::size_t sample_count() const { return samples_.rows(); }
  int dimension() const { return static_cast<int>(samples_.cols()); }

  //! Mirror-image estimate at x (|S| coordinates); 0 outside the cube.
  double evaluate(std::span<const double> x) const;

  //! Full 3^|S| reflection sum over every sample, no pruning. Serial
  //! reference for `evaluate`; the two agree bit for bit.
  double evaluate_reference(std::span<const double> x) const;

  //! Uncorrected KDE, defined on all of R^|S|.
  double evaluate_plain(std::span<const double> x) const;

  //! log(evaluate(x)); -infinity where the estimate vanishes.
  double log_evaluate(std::span<const double> x) const;

  //! Estimate at each row of `points` (|S| columns). OpenMP-parallel.
  std::vector<double> evaluate_many(const DataMatrix& points) const;

private:
  double normalizer() const;

  FeatureSubset subset_;
  double bandwidth_;
  Kernel kernel_;
  DataMatrix samples_;
  std::vector<double> first_column_;
};

//! Projects `data` onto `subset` and sets h from `rule`.
MirrorKdeModel fit(const DataMatrix& data,
                   const FeatureSubset& subset,
                   const BandwidthRule& rule,
                   const Kernel& kernel);

//! As `fit` with an explicit bandwidth in (0, 1/2).
MirrorKdeModel fit_with_bandwidth(const DataMatrix& data,
                                  const FeatureSubset& subset,
                                  double bandwidth,
                                  const Kernel& kernel);

} // namespace isde
