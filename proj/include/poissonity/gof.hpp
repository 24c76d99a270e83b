#pragma once

#include <cstddef>
#include <vector>

#include "poissonity/distributions.hpp"

namespace poissonity {

// Dispersion statistics. All are computed from raw sample values; no cell
// grouping is involved. Each throws UndefinedStatisticError when the
// sample mean is zero.

// c_hat = [sum X(X-1) / n] / Xbar^2.
double c_hat(const CountSample& sample);

// sqrt(n) (c_hat - 1), the dispersion test statistic.
double c_hat_statistic(const CountSample& sample);

// sqrt(n) (c_hat - 1) Xbar / sqrt(2); asymptotically N(0, 1) under a Poisson null.
double c_hat_normalized(const CountSample& sample);

// Poisson maximum-likelihood estimate (the sample mean).
double poisson_mle(const CountSample& sample);

double sample_mean(const CountSample& sample);

// Population-style variance, divisor n.
double sample_variance(const CountSample& sample);

// s^2 / Xbar.
double fisher_index(const CountSample& sample);

// Cells {x <= k_min}, {k_min+1}, ..., {k_max-1}, {x >= k_max} with Poisson(theta)
// probabilities. probs[0] is p_min, probs.back() is p_max.
struct CellPartition {
  Count k_min = 0;
  Count k_max = 1;
  double theta = 1.0;
  std::vector<double> probs;

  std::size_t cells() const { return probs.size(); }
  double p_min() const { return probs.front(); }
  double p_max() const { return probs.back(); }
};

struct CellCounts {
  std::vector<Count> counts;
  Count n = 0;
};

// Throws DomainError unless 0 <= k_min < k_max and theta > 0, or if any
// cell probability underflows to zero.
CellPartition build_cells(double theta, Count k_min, Count k_max);

// Zero-based cell index of a value.
std::size_t cell_index(Count x, const CellPartition& partition);

CellCounts cell_counts(const CountSample& sample, const CellPartition& partition);

// Standardized residuals Y_k = (nu_k - n p_k) / sqrt(n p_k).
std::vector<double> cell_residuals(const CellCounts& counts, const CellPartition& partition);

// T = max_k |sum_{j<=k} Y_j| / sqrt(K).
double gof_statistic(const CellCounts& counts, const CellPartition& partition);

}  // namespace poissonity
