#pragma once

#include <span>

namespace isde {

//! sum_i p_i log(p_i / q_i) over a common finite support.
double kl_discrete(std::span<const double> p, std::span<const double> q);

//! 1/2 KL(p || m) + 1/2 KL(q || m), m = (p + q) / 2.
double js_discrete(std::span<const double> p, std::span<const double> q);

struct KlJsCheck
{
  double kl;
  double js;
  //! kl <= 8(1 + A|S|) / (2 log 2 - 1) * js
  bool bound_holds;
};

//! Checks the KL-by-JS control for two strictly positive distributions whose
//! support-normalized masses N p_i, N q_i lie in [e^{-A|S|}, e^{A|S|}].
//! Throws PreconditionError when the envelope is violated.
KlJsCheck kl_js_bound_check(std::span<const double> p,
                            std::span<const double> q,
                            double A,
                            int subset_size);

} // namespace isde
