#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string_view>

namespace isde {

enum class KernelKind
{
  epanechnikov,
  triangular,
  box
};

//! Symmetric kernel supported on [-1, 1] with unit mass and zero first
//! moment. K(+-1) = 0 for every kind, so |u| >= 1 never contributes.
class Kernel
{
public:
  constexpr Kernel() = default;
  constexpr explicit Kernel(KernelKind kind)
    : kind_(kind)
  {}

  //! "epanechnikov" | "triangular" | "box"; throws ParameterError otherwise.
  static Kernel from_name(std::string_view name);

  constexpr KernelKind kind() const { return kind_; }
  std::string_view name() const;

  //! ||K||_inf
  double sup_norm() const;
  //! ||K'||_inf (a.e. for the box kernel)
  double derivative_sup_norm() const;

  //! K(x). NaN for non-finite input.
  double operator()(double x) const
  {
    if (!std::isfinite(x))
      return std::numeric_limits<double>::quiet_NaN();
    const double a = std::fabs(x);
    if (a >= 1.0)
      return 0.0;
    switch (kind_) {
      case KernelKind::epanechnikov:
        return 0.75 * (1.0 - x * x);
      case KernelKind::triangular:
        return 1.0 - a;
      case KernelKind::box:
        return 0.5;
    }
    return 0.0;
  }

  double evaluate(double x) const { return (*this)(x); }

  constexpr bool operator==(const Kernel&) const = default;

private:
  KernelKind kind_ = KernelKind::epanechnikov;
};

//! prod_j K(u_j). Throws ParameterError on an empty vector.
double product_kernel(const Kernel& kernel, std::span<const double> u);

} // namespace isde
