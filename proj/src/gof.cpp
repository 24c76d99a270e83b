#include "poissonity/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "poissonity/error.hpp"

namespace poissonity {

namespace {

struct RawSums {
  double n;
  double sum;          // sum X
  double factorial2;   // sum X(X-1)
};

// Integer accumulation keeps the sums exact for any realistic sample.
RawSums raw_sums(const CountSample& sample) {
  std::int64_t s = 0;
  std::int64_t f = 0;
  for (Count x : sample.values()) {
    s += x;
    f += x * (x - 1);
  }
  return {static_cast<double>(sample.size()), static_cast<double>(s), static_cast<double>(f)};
}

RawSums checked_sums(const CountSample& sample, const char* who) {
  const RawSums r = raw_sums(sample);
  if (r.sum == 0.0) {
    throw UndefinedStatisticError(std::string(who) + ": sample mean is zero");
  }
  return r;
}

}  // namespace

double c_hat(const CountSample& sample) {
  const RawSums r = checked_sums(sample, "c_hat");
  const double mean = r.sum / r.n;
  return (r.factorial2 / r.n) / (mean * mean);
}

double c_hat_statistic(const CountSample& sample) {
  return std::sqrt(static_cast<double>(sample.size())) * (c_hat(sample) - 1.0);
}

double c_hat_normalized(const CountSample& sample) {
  return c_hat_statistic(sample) * sample_mean(sample) / std::sqrt(2.0);
}

double poisson_mle(const CountSample& sample) {
  const RawSums r = raw_sums(sample);
  if (r.sum == 0.0) throw UndefinedStatisticError("poisson_mle: degenerate all-zero sample");
  return r.sum / r.n;
}

double sample_mean(const CountSample& sample) {
  const RawSums r = raw_sums(sample);
  return r.sum / r.n;
}

double sample_variance(const CountSample& sample) {
  const double mean = sample_mean(sample);
  double ss = 0.0;
  for (Count x : sample.values()) {
    const double d = static_cast<double>(x) - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(sample.size());
}

double fisher_index(const CountSample& sample) {
  const double mean = sample_mean(sample);
  if (mean == 0.0) throw UndefinedStatisticError("fisher_index: sample mean is zero");
  return sample_variance(sample) / mean;
}

CellPartition build_cells(double theta, Count k_min, Count k_max) {
  if (!(std::isfinite(theta) && theta > 0.0)) throw DomainError("build_cells: theta must be positive");
  if (k_min < 0 || k_min >= k_max) throw DomainError("build_cells: require 0 <= k_min < k_max");

  CellPartition part;
  part.k_min = k_min;
  part.k_max = k_max;
  part.theta = theta;
  part.probs.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  part.probs.push_back(poisson_cdf(theta, k_min));
  for (Count x = k_min + 1; x < k_max; ++x) part.probs.push_back(poisson_pmf(theta, x));
  part.probs.push_back(poisson_sf(theta, k_max));

  for (double p : part.probs) {
    if (!(p > 0.0)) throw DomainError("build_cells: a cell probability is zero at this theta");
  }
  return part;
}

std::size_t cell_index(Count x, const CellPartition& partition) {
  const Count clamped = std::clamp(x, partition.k_min, partition.k_max);
  return static_cast<std::size_t>(clamped - partition.k_min);
}

CellCounts cell_counts(const CountSample& sample, const CellPartition& partition) {
  CellCounts out;
  out.counts.assign(partition.cells(), 0);
  for (Count x : sample.values()) ++out.counts[cell_index(x, partition)];
  out.n = static_cast<Count>(sample.size());
  return out;
}

std::vector<double> cell_residuals(const CellCounts& counts, const CellPartition& partition) {
  if (counts.counts.size() != partition.cells()) {
    throw DomainError("cell_residuals: counts and partition disagree on K");
  }
  if (counts.n < 1) throw DomainError("cell_residuals: n must be >= 1");
  const double n = static_cast<double>(counts.n);
  std::vector<double> y(partition.cells());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double p = partition.probs[k];
    if (!(p > 0.0)) throw DomainError("cell_residuals: zero cell probability");
    const double expected = n * p;
    y[k] = (static_cast<double>(counts.counts[k]) - expected) / std::sqrt(expected);
  }
  return y;
}

double gof_statistic(const CellCounts& counts, const CellPartition& partition) {
  const std::vector<double> y = cell_residuals(counts, partition);
  double partial = 0.0;
  double widest = 0.0;
  for (double v : y) {
    partial += v;
    widest = std::max(widest, std::abs(partial));
  }
  return widest / std::sqrt(static_cast<double>(y.size()));
}

}  // namespace poissonity
