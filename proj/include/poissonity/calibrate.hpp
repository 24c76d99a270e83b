#pragma once

#include <cstdint>
#include <string>

#include "poissonity/distributions.hpp"

namespace poissonity {

inline constexpr double kDefaultTailEps = 1e-12;
inline constexpr std::size_t kMaxSeriesTerms = 1'000'000;

// Exact mean and variance of a floor-discretized spec by summing
// P(X = j) = S(j) - S(j+1) for j = 0, 1, ... until the remaining upper tail
// S(j+1) drops below tail_eps. Mass below zero (FloorNormal) is absorbed
// into P(X = 0).
//
// Throws UnsupportedSpecError for count families, DomainError for tail_eps
// outside (0, 1e-6], and NonConvergenceError past kMaxSeriesTerms terms.
Moments discretized_moments(const AlternativeSpec& spec, double tail_eps = kDefaultTailEps);

// Mean/variance for any spec: closed form where available, series otherwise.
Moments spec_moments(const AlternativeSpec& spec);

enum class FloorFamily { gamma, weibull };

std::string to_string(FloorFamily family);
// Throws DomainError for names other than "gamma" / "weibull".
FloorFamily parse_floor_family(const std::string& name);

AlternativeSpec make_floor_spec(FloorFamily family, double shape, double scale);

struct CalibrationOptions {
  double shape_lo = 0.5;
  double shape_hi = 100.0;
  double scale_lo = 0.01;
  double scale_hi = 100.0;
  double tail_eps = kDefaultTailEps;
};

struct CalibrationResult {
  FloorFamily family = FloorFamily::gamma;
  double shape = 0.0;
  double scale = 0.0;
  double achieved_mean = 0.0;
  double achieved_variance = 0.0;
  // |mean - target| + |variance - target|
  double residual = 0.0;
  int iterations = 0;
};

// Finds (shape, scale) so that floor(Z) has mean == variance == target,
// each within tol. Nested bisection: the inner loop solves the scale for the
// mean at fixed shape (mean is increasing in scale), the outer loop solves
// the shape for the variance (variance at fixed mean is decreasing in shape).
// Midpoints are geometric since both parameters are positive and
// scale-like.
//
// Throws DomainError for target < 2 or tol < 1e-10, and CalibrationError
// when a root is not bracketed by the configured ranges.
CalibrationResult calibrate_equidispersed(FloorFamily family, double target, double tol,
                                          const CalibrationOptions& options = {});

// Binomial weight w making w Bin(m_b, p) + (1-w) NegBin(m_nb, p) equidispersed.
// Requires equal component means and Var_b < mean < Var_nb.
double mixture_weight(std::int64_t m_b, std::int64_t m_nb, double p);

}  // namespace poissonity
