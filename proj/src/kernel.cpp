#include "isde/kernel.hpp"

#include "isde/errors.hpp"

#include <string>

namespace isde {

Kernel
Kernel::from_name(std::string_view name)
{
  if (name == "epanechnikov")
    return Kernel(KernelKind::epanechnikov);
  if (name == "triangular")
    return Kernel(KernelKind::triangular);
  if (name == "box")
    return Kernel(KernelKind::box);
  throw ParameterError("unknown kernel '" + std::string(name) +
                       "' (expected epanechnikov, triangular or box)");
}

std::string_view
Kernel::name() const
{
  switch (kind_) {
    case KernelKind::epanechnikov:
      return "epanechnikov";
    case KernelKind::triangular:
      return "triangular";
    case KernelKind::box:
      return "box";
  }
  return "epanechnikov";
}

double
Kernel::sup_norm() const
{
  switch (kind_) {
    case KernelKind::epanechnikov:
      return 0.75;
    case KernelKind::triangular:
      return 1.0;
    case KernelKind::box:
      return 0.5;
  }
  return 0.0;
}

double
Kernel::derivative_sup_norm() const
{
  switch (kind_) {
    case KernelKind::epanechnikov:
      return 1.5;
    case KernelKind::triangular:
      return 1.0;
    case KernelKind::box:
      return 0.0;
  }
  return 0.0;
}

double
product_kernel(const Kernel& kernel, std::span<const double> u)
{
  if (u.empty())
    throw ParameterError("product kernel needs at least one coordinate");
  double value = 1.0;
  for (double x : u)
    value *= kernel(x);
  return value;
}

} // namespace isde
