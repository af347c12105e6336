#include "isde/bounds.hpp"

#include "isde/combinatorics.hpp"
#include "isde/errors.hpp"

#include <cmath>

namespace isde {

namespace {

void
check_A(double A)
{
  if (!(A > 0.0) || !std::isfinite(A))
    throw ParameterError("bounding constant A must be positive");
}

void
check_size(int subset_size)
{
  if (subset_size < 1)
    throw ParameterError("subset size must be positive");
}

} // namespace

void
BoundParams::validate() const
{
  if (d < 1 || d > 63)
    throw ParameterError("d must lie in [1, 63]");
  if (k < 1 || k > d)
    throw ParameterError("k must lie in [1, d]");
  if (n < 1 || m < 1)
    throw ParameterError("sample counts n and m must be positive");
  check_A(A);
  if (!(delta_n > 0.0 && delta_n < 1.0))
    throw ParameterError("delta_n must lie in (0, 1)");
  if (!(delta_m > 0.0 && delta_m < 1.0))
    throw ParameterError("delta_m must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 2.0))
    throw ParameterError("beta must lie in (0, 2]");
  if (!(C_k > 0.0) || !std::isfinite(C_k))
    throw ParameterError("C_k must be positive");
}

Envelope
bc_envelope(double A, int subset_size, bool estimator)
{
  check_A(A);
  check_size(subset_size);
  const double c = estimator ? 2.0 : 1.0;
  const double e = c * A * subset_size;
  return { std::exp(-e), std::exp(e) };
}

double
uc_threshold(double A, int subset_size)
{
  check_A(A);
  check_size(subset_size);
  const double t = std::exp(-A * subset_size);
  return t * (1.0 - t);
}

double
selection_bound(const BoundParams& params)
{
  params.validate();
  const double subsets = static_cast<double>(count_subsets(params.d, params.k));
  return 2.0 * params.d *
         std::sqrt(2.0 * params.A * params.k / static_cast<double>(params.n)) *
         std::sqrt(std::log(2.0 * subsets / params.delta_n));
}

double
kl_upper_from_uc(double A, int subset_size, double eps)
{
  if (!(eps >= 0.0))
    throw ParameterError("uniform deviation eps must be nonnegative");
  if (eps >= uc_threshold(A, subset_size))
    throw PreconditionError(
      "eps is not below e^{-A|S|}(1 - e^{-A|S|}); the KL bound is not guaranteed");
  return std::exp(2.0 * A * subset_size) * eps;
}

FinalBound
final_bound(const BoundParams& params, int p_star_block_count)
{
  params.validate();
  if (p_star_block_count < 1 || p_star_block_count > params.d)
    throw ParameterError("|P*| must lie in [1, d]");
  const double log_subsets =
    std::log(static_cast<double>(count_subsets(params.d, params.k)));
  const double m = static_cast<double>(params.m);
  const double n = static_cast<double>(params.n);
  const double k = params.k;

  FinalBound out{};
  out.approximation = std::exp(2.0 * params.A * k) * std::sqrt(2.0) *
                      p_star_block_count * params.C_k *
                      std::sqrt(std::log(m) + log_subsets) *
                      std::pow(1.0 / m, params.beta / (2.0 * params.beta + k));
  out.selection = 2.0 * params.d * std::sqrt(std::log(n) + log_subsets) *
                  std::sqrt(params.A * k / n);
  out.total = out.approximation + out.selection;
  return out;
}

} // namespace isde
