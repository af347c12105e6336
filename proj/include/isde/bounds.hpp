#pragma once

#include <cstddef>
#include <utility>

namespace isde {

/// Inputs to the high-probability bounds. A is the bounding constant of
/// e^{-A|S|} <= f_S <= e^{A|S|}; C_k is the uniform-deviation constant, which
/// is never derived here and must be supplied.
struct BoundParams
{
  int d = 1;
  int k = 1;
  std::size_t n = 1;
  std::size_t m = 1;
  double A = 1.0;
  double delta_n = 0.05;
  double delta_m = 0.05;
  double beta = 2.0;
  double C_k = 1.0;

  void validate() const;
};

struct Envelope
{
  double lower;
  double upper;
};

//! (e^{-cA|S|}, e^{cA|S|}); c = 1 for the true marginal, c = 2 for the
//! estimator under uniform control.
Envelope bc_envelope(double A, int subset_size, bool estimator);

//! e^{-A|S|}(1 - e^{-A|S|}), the strict cap on the uniform deviation eps_S.
double uc_threshold(double A, int subset_size);

//! 2d sqrt(2Ak/n) sqrt(log(2 S_d^k / delta_n)).
double selection_bound(const BoundParams& params);

//! e^{2A|S|} eps; throws PreconditionError when eps >= uc_threshold.
double kl_upper_from_uc(double A, int subset_size, double eps);

struct FinalBound
{
  //! e^{2Ak} sqrt(2) |P*| C_k sqrt(log m + log S_d^k) m^{-beta/(2beta+k)}
  double approximation;
  //! 2d sqrt(log n + log S_d^k) sqrt(Ak/n)
  double selection;
  double total;
};

FinalBound final_bound(const BoundParams& params, int p_star_block_count);

} // namespace isde
