#include "isde/mirror_kde.hpp"

#include "isde/errors.hpp"
#include "isde/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace isde {

namespace {

constexpr int kMaxModelDimension = 20;
// Widening of the first-coordinate window; anything it admits beyond the
// exact support contributes an exact zero.
constexpr double kWindowSlack = 1e-9;

// M^{-1}(t) = -t, M^0(t) = t, M^1(t) = 2 - t; reflection index 0, 1, 2.
inline double
mirror(double t, int reflection)
{
  switch (reflection) {
    case 0:
      return -t;
    case 2:
      return 2.0 - t;
    default:
      return t;
  }
}

inline double
mirror_term(const Kernel& kernel, double w, int reflection, double x, double h)
{
  return kernel((mirror(w, reflection) - x) / h);
}

bool
inside_unit_cube(std::span<const double> x)
{
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0))
      return false;
  return true;
}

} // namespace

void
BandwidthRule::validate() const
{
  if (!(beta > 0.0 && beta <= 2.0))
    throw ParameterError("smoothness beta must lie in (0, 2]");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw ParameterError("bandwidth scale must be positive");
}

double
select_bandwidth(const BandwidthRule& rule, std::size_t m, int subset_size)
{
  rule.validate();
  if (m < 2)
    throw ParameterError("bandwidth selection needs at least 2 samples");
  if (subset_size < 1)
    throw ParameterError("subset size must be positive");
  const double h = rule.scale * std::pow(static_cast<double>(m),
                                         -1.0 / (2.0 * rule.beta + subset_size));
  return std::clamp(h, kMinBandwidth, kMaxBandwidth);
}

MirrorKdeModel::MirrorKdeModel(FeatureSubset subset,
                               double bandwidth,
                               Kernel kernel,
                               DataMatrix samples)
  : subset_(subset)
  , bandwidth_(bandwidth)
  , kernel_(kernel)
{
  if (!(bandwidth > 0.0 && bandwidth < 0.5))
    throw ParameterError("bandwidth must lie in (0, 1/2)");
  if (samples.cols() != static_cast<std::size_t>(subset.size()))
    throw StructuralError("sample columns do not match the subset size");
  if (subset.size() > kMaxModelDimension)
    throw ParameterError("marginal estimators are limited to 20 features");
  if (samples.rows() == 0)
    throw ParameterError("a density model needs at least one sample");
  require_unit_cube(samples);

  const std::size_t m = samples.rows();
  const std::size_t p = samples.cols();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{ 0 });
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = samples.row(a);
    const auto rb = samples.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  samples_ = DataMatrix(m, p);
  first_column_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::copy_n(samples.row(order[i]).begin(), p, samples_.row(i).begin());
    first_column_[i] = samples_(i, 0);
  }
}

double
MirrorKdeModel::normalizer() const
{
  return 1.0 / (static_cast<double>(samples_.rows()) *
                std::pow(bandwidth_, static_cast<double>(samples_.cols())));
}

double
MirrorKdeModel::evaluate(std::span<const double> x) const
{
  const std::size_t p = samples_.cols();
  if (x.size() != p)
    throw StructuralError("query dimension does not match the model");
  if (!inside_unit_cube(x))
    return 0.0;

  const double h = bandwidth_;
  const auto first = std::lower_bound(
    first_column_.begin(), first_column_.end(), x[0] - h - kWindowSlack);
  const auto last = std::upper_bound(
    first, first_column_.end(), x[0] + h + kWindowSlack);

  // Nonzero kernel factors per coordinate, kept in reflection order so the
  // accumulation order matches the full reflection sum.
  std::array<std::array<double, 3>, kMaxModelDimension> factors;
  std::array<int, kMaxModelDimension> counts;
  std::array<int, kMaxModelDimension> digit;

  double acc = 0.0;
  for (auto it = first; it != last; ++it) {
    const auto w = samples_.row(static_cast<std::size_t>(it - first_column_.begin()));
    bool reachable = true;
    for (std::size_t k = 0; k < p && reachable; ++k) {
      int c = 0;
      for (int r = 0; r < 3; ++r) {
        const double v = mirror_term(kernel_, w[k], r, x[k], h);
        if (v != 0.0)
          factors[k][c++] = v;
      }
      counts[k] = c;
      reachable = c > 0;
    }
    if (!reachable)
      continue;

    std::fill_n(digit.begin(), p, 0);
    while (true) {
      double prod = 1.0;
      for (std::size_t k = 0; k < p; ++k)
        prod *= factors[k][digit[k]];
      acc += prod;
      std::size_t k = p;
      while (k > 0 && ++digit[k - 1] == counts[k - 1]) {
        digit[k - 1] = 0;
        --k;
      }
      if (k == 0)
        break;
    }
  }
  return acc * normalizer();
}

double
MirrorKdeModel::evaluate_reference(std::span<const double> x) const
{
  const std::size_t p = samples_.cols();
  if (x.size() != p)
    throw StructuralError("query dimension does not match the model");
  if (!inside_unit_cube(x))
    return 0.0;

  std::size_t terms = 1;
  for (std::size_t k = 0; k < p; ++k)
    terms *= 3;

  double acc = 0.0;
  for (std::size_t i = 0; i < samples_.rows(); ++i) {
    const auto w = samples_.row(i);
    for (std::size_t t = 0; t < terms; ++t) {
      // Last coordinate varies fastest.
      std::size_t rest = t;
      std::array<int, kMaxModelDimension> reflection{};
      for (std::size_t k = p; k > 0; --k) {
        reflection[k - 1] = static_cast<int>(rest % 3);
        rest /= 3;
      }
      double prod = 1.0;
      for (std::size_t k = 0; k < p; ++k)
        prod *= mirror_term(kernel_, w[k], reflection[k], x[k], bandwidth_);
      acc += prod;
    }
  }
  return acc * normalizer();
}

double
MirrorKdeModel::evaluate_plain(std::span<const double> x) const
{
  const std::size_t p = samples_.cols();
  if (x.size() != p)
    throw StructuralError("query dimension does not match the model");
  double acc = 0.0;
  for (std::size_t i = 0; i < samples_.rows(); ++i) {
    const auto w = samples_.row(i);
    double prod = 1.0;
    for (std::size_t k = 0; k < p && prod != 0.0; ++k)
      prod *= kernel_((w[k] - x[k]) / bandwidth_);
    acc += prod;
  }
  return acc * normalizer();
}

double
MirrorKdeModel::log_evaluate(std::span<const double> x) const
{
  const double v = evaluate(x);
  return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

std::vector<double>
MirrorKdeModel::evaluate_many(const DataMatrix& points) const
{
  if (points.cols() != samples_.cols())
    throw StructuralError("query dimension does not match the model");
  std::vector<double> out(points.rows());
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = evaluate(points.row(static_cast<std::size_t>(i)));
  return out;
}

MirrorKdeModel
fit_with_bandwidth(const DataMatrix& data,
                   const FeatureSubset& subset,
                   double bandwidth,
                   const Kernel& kernel)
{
  if (data.cols() != static_cast<std::size_t>(subset.dimension()))
    throw StructuralError("data has " + std::to_string(data.cols()) +
                          " columns but the subset lives in d=" +
                          std::to_string(subset.dimension()));
  require_unit_cube(data);
  const auto columns = subset.indices();
  return MirrorKdeModel(subset, bandwidth, kernel, data.select_columns(columns));
}

MirrorKdeModel
fit(const DataMatrix& data,
    const FeatureSubset& subset,
    const BandwidthRule& rule,
    const Kernel& kernel)
{
  if (data.rows() < 2)
    throw ParameterError("fitting needs at least 2 samples");
  const double h = select_bandwidth(rule, data.rows(), subset.size());
  return fit_with_bandwidth(data, subset, h, kernel);
}

} // namespace isde
