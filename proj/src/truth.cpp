#include "isde/truth.hpp"

#include "isde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace isde {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Sum of log phi(z_i) over standard normal coordinates.
double
log_standard_normal(std::span<const double> z)
{
  double s = 0.0;
  for (double v : z)
    s += -0.5 * v * v - 0.5 * std::log(2.0 * std::numbers::pi);
  return s;
}

// Copula log density of N(0, cov) at u via z = Phi^{-1}(u).
double
copula_log_density(const CenteredGaussian& gaussian, std::span<const double> u)
{
  std::vector<double> z(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0 && u[i] < 1.0))
      return kNegInf;
    z[i] = standard_normal_quantile(u[i]);
  }
  return gaussian.log_density(z) - log_standard_normal(z);
}

bool
in_unit_cube(std::span<const double> x)
{
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0))
      return false;
  return true;
}

} // namespace

GaussianCopulaTruth::GaussianCopulaTruth(const GaussianBlockSpec& spec)
  : spec_(spec)
  , cov_(spec.covariance())
  , joint_(cov_)
{
  if (spec_.d <= kCachedMarginalDimension) {
    marginals_.resize(std::size_t{ 1 } << spec_.d);
    for (Mask m = 1; m < (Mask{ 1 } << spec_.d); ++m) {
      const auto idx = FeatureSubset(m, spec_.d).indices();
      marginals_[m] = std::make_shared<const CenteredGaussian>(cov_(idx, idx));
    }
  }
}

DataMatrix
GaussianCopulaTruth::sample(std::size_t n, std::uint64_t seed) const
{
  return sample_gaussian_copula_block(spec_, n, seed);
}

double
GaussianCopulaTruth::log_density(std::span<const double> x) const
{
  if (static_cast<int>(x.size()) != spec_.d)
    throw StructuralError("point dimension does not match the truth");
  return copula_log_density(joint_, x);
}

double
GaussianCopulaTruth::log_marginal_density(const FeatureSubset& subset,
                                          std::span<const double> x_s) const
{
  if (subset.dimension() != spec_.d ||
      static_cast<int>(x_s.size()) != subset.size())
    throw StructuralError("marginal query does not match the subset");
  if (!marginals_.empty())
    return copula_log_density(*marginals_[subset.mask()], x_s);
  const auto idx = subset.indices();
  const CenteredGaussian marginal(cov_(idx, idx));
  return copula_log_density(marginal, x_s);
}

std::optional<double>
GaussianCopulaTruth::projection_kl(const FeaturePartition& partition) const
{
  return kl_block_projection(cov_, partition);
}

FgmPairsTruth::FgmPairsTruth(int d, double theta)
  : d_(d)
  , theta_(theta)
{
  if (d < 1 || d > 32)
    throw ParameterError("dimension must lie in [1, 32]");
  if (!(std::fabs(theta) <= 1.0))
    throw ParameterError("FGM dependence theta must lie in [-1, 1]");
}

FeaturePartition
FgmPairsTruth::true_partition() const
{
  std::vector<FeatureSubset> blocks;
  for (int i = 0; i < d_; i += 2) {
    Mask m = Mask{ 1 } << i;
    if (i + 1 < d_)
      m |= Mask{ 1 } << (i + 1);
    blocks.emplace_back(m, d_);
  }
  return FeaturePartition(std::move(blocks), d_);
}

DataMatrix
FgmPairsTruth::sample(std::size_t n, std::uint64_t seed) const
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  DataMatrix out(n, static_cast<std::size_t>(d_));
  for (std::size_t r = 0; r < n; ++r) {
    for (int i = 0; i < d_; i += 2) {
      const double u = uniform(rng);
      out(r, static_cast<std::size_t>(i)) = u;
      if (i + 1 == d_)
        break;
      // Inverse of the conditional CDF v + a v (1 - v), a = theta (1 - 2u).
      const double w = uniform(rng);
      const double a = theta_ * (1.0 - 2.0 * u);
      double v = w;
      if (std::fabs(a) > 1e-12)
        v = ((1.0 + a) - std::sqrt((1.0 + a) * (1.0 + a) - 4.0 * a * w)) / (2.0 * a);
      out(r, static_cast<std::size_t>(i + 1)) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

double
FgmPairsTruth::log_density(std::span<const double> x) const
{
  if (static_cast<int>(x.size()) != d_)
    throw StructuralError("point dimension does not match the truth");
  if (!in_unit_cube(x))
    return kNegInf;
  double s = 0.0;
  for (int i = 0; i + 1 < d_; i += 2)
    s += std::log1p(theta_ * (1.0 - 2.0 * x[i]) * (1.0 - 2.0 * x[i + 1]));
  return s;
}

double
FgmPairsTruth::log_marginal_density(const FeatureSubset& subset,
                                    std::span<const double> x_s) const
{
  if (subset.dimension() != d_ || static_cast<int>(x_s.size()) != subset.size())
    throw StructuralError("marginal query does not match the subset");
  if (!in_unit_cube(x_s))
    return kNegInf;
  const auto idx = subset.indices();
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < idx.size(); ++j) {
    if (idx[j] % 2 == 0 && idx[j + 1] == idx[j] + 1)
      s += std::log1p(theta_ * (1.0 - 2.0 * x_s[j]) * (1.0 - 2.0 * x_s[j + 1]));
  }
  return s;
}

} // namespace isde
