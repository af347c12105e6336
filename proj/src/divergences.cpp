#include "isde/divergences.hpp"

#include "isde/errors.hpp"

#include <cmath>

namespace isde {

namespace {

void
check_pair(std::span<const double> p, std::span<const double> q)
{
  if (p.empty() || p.size() != q.size())
    throw ParameterError("distributions must share a nonempty finite support");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0))
      throw ParameterError("probabilities must be nonnegative");
}

} // namespace

double
kl_discrete(std::span<const double> p, std::span<const double> q)
{
  check_pair(p, q);
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0)
      continue;
    if (q[i] == 0.0)
      return INFINITY;
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double
js_discrete(std::span<const double> p, std::span<const double> q)
{
  check_pair(p, q);
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mid = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0)
      js += 0.5 * p[i] * std::log(p[i] / mid);
    if (q[i] > 0.0)
      js += 0.5 * q[i] * std::log(q[i] / mid);
  }
  return js;
}

KlJsCheck
kl_js_bound_check(std::span<const double> p,
                  std::span<const double> q,
                  double A,
                  int subset_size)
{
  check_pair(p, q);
  if (!(A > 0.0) || subset_size < 1)
    throw ParameterError("A must be positive and |S| at least 1");
  const double n = static_cast<double>(p.size());
  const double lo = std::exp(-A * subset_size);
  const double hi = std::exp(A * subset_size);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = n * p[i];
    const double b = n * q[i];
    if (!(a >= lo && a <= hi && b >= lo && b <= hi))
      throw PreconditionError("distribution leaves the bounding envelope e^{+-A|S|}");
  }
  KlJsCheck out{};
  out.kl = kl_discrete(p, q);
  out.js = js_discrete(p, q);
  const double factor = 8.0 * (1.0 + A * subset_size) / (2.0 * std::log(2.0) - 1.0);
  out.bound_holds = out.kl <= factor * out.js;
  return out;
}

} // namespace isde
