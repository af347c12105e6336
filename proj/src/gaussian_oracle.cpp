#include "isde/gaussian_oracle.hpp"

#include "isde/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace isde {

namespace {

void
check_sigma(double sigma)
{
  if (!(sigma >= 0.0 && sigma < 1.0))
    throw ParameterError("sigma must lie in [0, 1)");
}

double
log_ratio(int size, double sigma)
{
  // log((1 + (size-1) sigma) / (1 - sigma)); size 0 gives log 1 = 0.
  return std::log((1.0 + (size - 1) * sigma) / (1.0 - sigma));
}

} // namespace

void
GaussianBlockSpec::validate() const
{
  if (d < 1 || k_star < 1 || k_star > d || d % k_star != 0)
    throw ParameterError("block size k* must divide d");
  check_sigma(sigma);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw ParameterError("epsilon must be a nonnegative real");
  const double within = 1.0 + (k_star - 1) * sigma;
  if (!(within + (d - k_star) * epsilon > 0.0) ||
      (d > k_star && !(within - k_star * epsilon > 0.0)))
    throw ParameterError("(sigma, epsilon) does not give a positive-definite matrix");
}

Eigen::MatrixXd
GaussianBlockSpec::covariance() const
{
  validate();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(d, d, epsilon);
  for (int b = 0; b < d; b += k_star)
    cov.block(b, b, k_star, k_star) = equicorrelated_matrix(k_star, sigma);
  return cov;
}

FeaturePartition
GaussianBlockSpec::true_partition() const
{
  validate();
  return structure_partition(Structure{ std::vector<int>(d / k_star, k_star) });
}

Eigen::MatrixXd
equicorrelated_matrix(int p, double sigma)
{
  if (p < 1)
    throw ParameterError("matrix order must be positive");
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(p, p, sigma);
  a.diagonal().setOnes();
  return a;
}

double
det_equicorrelated(int p, double sigma)
{
  if (p < 1)
    throw ParameterError("matrix order must be positive");
  check_sigma(sigma);
  return std::pow(1.0 - sigma, p - 1) * (1.0 + (p - 1) * sigma);
}

double
det_block_perturbed(const GaussianBlockSpec& spec)
{
  spec.validate();
  const double d = spec.d;
  const double k = spec.k_star;
  const double s = spec.sigma;
  const double e = spec.epsilon;
  return std::pow(1.0 - s, (d / k) * (k - 1.0)) *
         (1.0 + (k - 1.0) * s + (d - k) * e) *
         std::pow(1.0 + (k - 1.0) * s - k * e, d / k - 1.0);
}

std::vector<EigenvalueMultiplicity>
block_spectrum(const GaussianBlockSpec& spec)
{
  spec.validate();
  const int d = spec.d;
  const int k = spec.k_star;
  const double s = spec.sigma;
  const double e = spec.epsilon;
  std::vector<EigenvalueMultiplicity> out;
  out.push_back({ 1.0 + (k - 1) * s + (d - k) * e, 1 });
  if (const int mult = (d / k) * (k - 1); mult > 0)
    out.push_back({ 1.0 - s, mult });
  if (const int mult = d / k - 1; mult > 0)
    out.push_back({ 1.0 + (k - 1) * s - k * e, mult });
  return out;
}

double
log_det_spd(const Eigen::MatrixXd& cov)
{
  if (cov.rows() != cov.cols() || cov.rows() == 0)
    throw FactorizationError("covariance must be a nonempty square matrix");
  if (!cov.isApprox(cov.transpose(), 1e-12))
    throw FactorizationError("covariance must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw FactorizationError("covariance is not positive definite");
  const Eigen::MatrixXd& l = llt.matrixLLT();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0))
      throw FactorizationError("covariance is not positive definite");
    log_det += 2.0 * std::log(l(i, i));
  }
  return log_det;
}

double
kl_block_projection(const Eigen::MatrixXd& cov, const FeaturePartition& partition)
{
  if (cov.rows() != partition.dimension())
    throw StructuralError("partition dimension does not match the covariance");
  const double full = log_det_spd(cov);
  double blocks = 0.0;
  for (const auto& b : partition.blocks()) {
    const auto idx = b.indices();
    blocks += log_det_spd(cov(idx, idx));
  }
  const double kl = 0.5 * (blocks - full);
  return (kl < 0.0 && kl > -1e-12) ? 0.0 : kl;
}

AlmostIndependenceKl
kl_almost_independent(const GaussianBlockSpec& spec)
{
  spec.validate();
  const double d = spec.d;
  const double k = spec.k_star;
  const double e = spec.epsilon;
  const double within = 1.0 + (k - 1.0) * spec.sigma;
  AlmostIndependenceKl out{};
  out.exact = -0.5 * std::log1p((d - k) / within * e) -
              0.5 * (d / k - 1.0) * std::log1p(-k / within * e);
  out.leading = d * (d - k) / (4.0 * within * within) * e * e;
  return out;
}

int
Structure::total() const
{
  int t = 0;
  for (int s : sizes)
    t += s;
  return t;
}

FeaturePartition
structure_partition(const Structure& structure)
{
  const int d = structure.total();
  std::vector<FeatureSubset> blocks;
  int start = 0;
  for (int s : structure.sizes) {
    if (s < 1)
      throw StructuralError("structure sizes must be positive");
    Mask m = 0;
    for (int i = start; i < start + s; ++i)
      m |= Mask{ 1 } << i;
    blocks.emplace_back(m, d);
    start += s;
  }
  return FeaturePartition(std::move(blocks), d);
}

double
kl_equicorrelated_structure(int d, double sigma, const Structure& s)
{
  check_sigma(sigma);
  if (s.sizes.empty() || s.total() != d)
    throw StructuralError("structure sizes must sum to d");
  double sum = 0.0;
  for (int size : s.sizes) {
    if (size < 1)
      throw StructuralError("structure sizes must be positive");
    sum += log_ratio(size, sigma);
  }
  return 0.5 * (sum - log_ratio(d, sigma));
}

Structure
optimal_structure(int d, int k, double sigma)
{
  if (d < 1 || k < 1 || k > d)
    throw ParameterError("optimal structure needs 1 <= k <= d");
  check_sigma(sigma);
  Structure s{ std::vector<int>(static_cast<std::size_t>(d / k), k) };
  if (d % k != 0)
    s.sizes.push_back(d % k);
  return s;
}

double
bias_upper_bound(const GaussianBlockSpec& spec, int k)
{
  spec.validate();
  const int k_star = spec.k_star;
  if (k < 1 || k >= k_star)
    throw ParameterError("bias bound needs 1 <= k < k*");
  const int p = k_star / k;
  const int r = k_star % k;
  const double s = spec.sigma;
  const double scale = static_cast<double>(spec.d) / (2.0 * k_star);
  return kl_almost_independent(spec).exact + scale * p * log_ratio(k, s) +
         scale * log_ratio(r, s) - scale * log_ratio(k_star, s);
}

FeaturePartition
bias_construction_partition(const GaussianBlockSpec& spec, int k)
{
  spec.validate();
  if (k < 1 || k >= spec.k_star)
    throw ParameterError("bias construction needs 1 <= k < k*");
  const auto inner = optimal_structure(spec.k_star, k, spec.sigma);
  Structure s;
  for (int b = 0; b < spec.d / spec.k_star; ++b)
    s.sizes.insert(s.sizes.end(), inner.sizes.begin(), inner.sizes.end());
  return structure_partition(s);
}

double
standard_normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double
standard_normal_quantile(double u)
{
  if (!(u > 0.0))
    return -std::numeric_limits<double>::infinity();
  if (!(u < 1.0))
    return std::numeric_limits<double>::infinity();
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

CenteredGaussian::CenteredGaussian(const Eigen::MatrixXd& cov)
  : cov_(cov)
  , llt_(cov)
  , log_det_(log_det_spd(cov))
{}

double
CenteredGaussian::log_density(std::span<const double> z) const
{
  if (static_cast<Eigen::Index>(z.size()) != cov_.rows())
    throw StructuralError("point dimension does not match the Gaussian");
  const Eigen::Map<const Eigen::VectorXd> v(z.data(), cov_.rows());
  const Eigen::VectorXd w = llt_.matrixL().solve(v);
  const double dim = static_cast<double>(cov_.rows());
  return -0.5 * (dim * std::log(2.0 * std::numbers::pi) + log_det_ + w.squaredNorm());
}

void
CenteredGaussian::sample(std::mt19937_64& rng, std::span<double> out) const
{
  std::normal_distribution<double> normal;
  Eigen::VectorXd xi(cov_.rows());
  for (Eigen::Index i = 0; i < xi.size(); ++i)
    xi[i] = normal(rng);
  const Eigen::VectorXd z = llt_.matrixL() * xi;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    out[static_cast<std::size_t>(i)] = z[i];
}

DataMatrix
sample_gaussian_copula_block(const GaussianBlockSpec& spec,
                             std::size_t n,
                             std::uint64_t seed)
{
  if (n < 1)
    throw ParameterError("sample count must be positive");
  const CenteredGaussian gaussian(spec.covariance());
  std::mt19937_64 rng(seed);
  DataMatrix out(n, static_cast<std::size_t>(spec.d));
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    gaussian.sample(rng, row);
    for (double& v : row)
      v = standard_normal_cdf(v);
  }
  return out;
}

} // namespace isde
