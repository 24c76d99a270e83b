#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "poissonity/distributions.hpp"
#include "poissonity/gof.hpp"

namespace poissonity {

enum class Sided { one_sided_upper, two_sided };

// The three tests applied to every half-sample.
enum class TestKind { c_hat, gof_theta, gof_mle };

inline constexpr std::array<TestKind, 3> kAllTests{TestKind::c_hat, TestKind::gof_theta,
                                                   TestKind::gof_mle};

// "c_hat", "gof_theta", "gof_mle".
std::string to_string(TestKind test);
std::string to_string(Sided sided);

// c_hat is two-sided on sqrt(n)(c_hat - 1); both T tests are one-sided upper.
Sided sidedness(TestKind test);

struct ExperimentConfig {
  double lambda = 1.0;
  AlternativeSpec alternative = Poisson{1.0};
  std::size_t n = 100;
  std::size_t replications = 5000;
  Count k_min = 0;
  Count k_max = 1;
  std::vector<double> alpha_levels{0.01, 0.05, 0.10};
  std::uint64_t master_seed = 1;
  double expected_count_floor = 4.0;
};

// Throws DomainError for an invalid configuration. Returns soft warnings
// (currently: alternative mean differs from lambda by more than 0.05).
std::vector<std::string> validate(const ExperimentConfig& config);

struct EdfPoint {
  double value;
  double fraction;
};

struct PowerEntry {
  TestKind test;
  Sided sided;
  double alpha;
  double critical_value;
  double power;
};

struct TestOutcome {
  TestKind test;
  std::vector<double> null_stats;
  std::vector<double> alt_stats;
  std::vector<EdfPoint> null_edf;
  std::vector<EdfPoint> alt_edf;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::array<TestOutcome, 3> tests;  // ordered as kAllTests
  std::vector<PowerEntry> power;     // test-major, then alpha_levels order
  std::vector<std::string> warnings;
  std::size_t null_failures = 0;
  std::size_t alt_failures = 0;

  const TestOutcome& outcome(TestKind test) const;
  // Throws DomainError if (test, alpha) is not in the table.
  const PowerEntry& power_at(TestKind test, double alpha) const;
};

struct RunOptions {
  // 0 selects std::thread::hardware_concurrency(). Never affects results.
  unsigned workers = 0;
};

// Paired null/alternative Monte Carlo experiment. Replication r draws its
// null sample from stream 2r and its alternative sample from stream 2r+1
// under config.master_seed, so results do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

// The three statistics of one sample. Throws on degenerate samples.
std::array<double, 3> sample_statistics(const CountSample& sample, const CellPartition& fixed,
                                        Count k_min, Count k_max);

// Right-continuous EDF: one point per distinct value, height = fraction of
// values <= it.
std::vector<EdfPoint> edf_points(std::span<const double> values);

// Height of the EDF at x.
double edf_at(std::span<const EdfPoint> curve, double x);

// ceil((1 - alpha)(R + 1))-th order statistic of the values (of |values|
// when two-sided). Requires R >= 20 and 1/(R+1) < alpha < 1.
double mc_critical_value(std::span<const double> null_stats, double alpha, Sided sided);

// Fraction of statistics strictly above the critical value (|stat| when
// two-sided).
double empirical_power(std::span<const double> alt_stats, double critical, Sided sided);

// One warning per cell whose expected count n p_k falls below floor.
std::vector<std::string> expected_count_check(const CellPartition& partition, std::size_t n,
                                              double floor);

}  // namespace poissonity
