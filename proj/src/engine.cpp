#include "poissonity/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "poissonity/calibrate.hpp"
#include "poissonity/error.hpp"

namespace poissonity {

std::string to_string(TestKind test) {
  switch (test) {
    case TestKind::c_hat:
      return "c_hat";
    case TestKind::gof_theta:
      return "gof_theta";
    case TestKind::gof_mle:
      return "gof_mle";
  }
  return "unknown";
}

std::string to_string(Sided sided) {
  return sided == Sided::two_sided ? "two_sided" : "one_sided_upper";
}

Sided sidedness(TestKind test) {
  return test == TestKind::c_hat ? Sided::two_sided : Sided::one_sided_upper;
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  if (!(std::isfinite(config.lambda) && config.lambda > 0.0)) {
    throw DomainError("config: lambda must be positive");
  }
  validate(config.alternative);
  if (config.n < 2) throw DomainError("config: n must be >= 2");
  if (config.replications < 1) throw DomainError("config: replications must be >= 1");
  if (config.k_min < 0 || config.k_min >= config.k_max) {
    throw DomainError("config: require 0 <= k_min < k_max");
  }
  for (double a : config.alpha_levels) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("config: every alpha must lie in (0, 1)");
    if (config.replications < 20 || !(a > 1.0 / static_cast<double>(config.replications + 1))) {
      std::ostringstream os;
      os << "config: alpha " << a << " needs replications >= 20 and alpha > 1/(R+1)";
      throw DomainError(os.str());
    }
  }
  if (!(config.expected_count_floor >= 0.0)) {
    throw DomainError("config: expected_count_floor must be non-negative");
  }

  std::vector<std::string> warnings;
  const Moments m = spec_moments(config.alternative);
  if (std::abs(m.mean - config.lambda) > 0.05) {
    std::ostringstream os;
    os << "alternative mean " << m.mean << " differs from lambda " << config.lambda
       << " by more than 0.05";
    warnings.push_back(os.str());
  }
  return warnings;
}

const TestOutcome& ExperimentResult::outcome(TestKind test) const {
  return tests[static_cast<std::size_t>(test)];
}

const PowerEntry& ExperimentResult::power_at(TestKind test, double alpha) const {
  for (const auto& e : power) {
    if (e.test == test && std::abs(e.alpha - alpha) < 1e-12) return e;
  }
  throw DomainError("power table has no entry for " + to_string(test) + " at the given alpha");
}

std::array<double, 3> sample_statistics(const CountSample& sample, const CellPartition& fixed,
                                        Count k_min, Count k_max) {
  std::array<double, 3> out{};
  out[0] = c_hat_statistic(sample);
  out[1] = gof_statistic(cell_counts(sample, fixed), fixed);
  const double mle = poisson_mle(sample);
  if (mle == fixed.theta && fixed.k_min == k_min && fixed.k_max == k_max) {
    out[2] = out[1];
  } else {
    const CellPartition fitted = build_cells(mle, k_min, k_max);
    out[2] = gof_statistic(cell_counts(sample, fitted), fitted);
  }
  return out;
}

namespace {

struct HalfResults {
  std::vector<std::array<double, 3>> stats;
  std::vector<char> ok;

  explicit HalfResults(std::size_t r) : stats(r), ok(r, 0) {}
};

void run_replication(const ExperimentConfig& config, const CellPartition& fixed, std::size_t r,
                     HalfResults& null_half, HalfResults& alt_half) {
  const std::uint64_t rep = static_cast<std::uint64_t>(r) + 1;
  const AlternativeSpec null_spec = Poisson{config.lambda};
  const auto one = [&](const AlternativeSpec& spec, std::uint64_t stream_index,
                       HalfResults& half) {
    try {
      RngStream stream(config.master_seed, stream_index);
      const CountSample sample = draw(spec, config.n, stream);
      half.stats[r] = sample_statistics(sample, fixed, config.k_min, config.k_max);
      half.ok[r] = 1;
    } catch (const Error&) {
      half.ok[r] = 0;
    }
  };
  one(null_spec, 2 * rep, null_half);
  one(config.alternative, 2 * rep + 1, alt_half);
}

std::size_t failures(const HalfResults& half) {
  return static_cast<std::size_t>(std::count(half.ok.begin(), half.ok.end(), 0));
}

std::vector<double> collect(const HalfResults& half, std::size_t test) {
  std::vector<double> out;
  out.reserve(half.stats.size());
  for (std::size_t r = 0; r < half.stats.size(); ++r) {
    if (half.ok[r]) out.push_back(half.stats[r][test]);
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentResult result;
  result.config = config;
  result.warnings = validate(config);

  const CellPartition fixed = build_cells(config.lambda, config.k_min, config.k_max);
  for (auto& w : expected_count_check(fixed, config.n, config.expected_count_floor)) {
    result.warnings.push_back(std::move(w));
  }
  if (const auto top = support_max(config.alternative); top && *top < config.k_max) {
    std::ostringstream os;
    os << "top cell {x >= " << config.k_max << "} is always empty under the alternative "
       << "(support ends at " << *top << ")";
    result.warnings.push_back(os.str());
  }

  const std::size_t reps = config.replications;
  HalfResults null_half(reps);
  HalfResults alt_half(reps);

  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      run_replication(config, fixed, r, null_half, alt_half);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  result.null_failures = failures(null_half);
  result.alt_failures = failures(alt_half);
  const double limit = 0.01 * static_cast<double>(reps);
  if (static_cast<double>(result.null_failures) > limit ||
      static_cast<double>(result.alt_failures) > limit) {
    std::ostringstream os;
    os << "run_experiment: too many degenerate replications (null " << result.null_failures
       << ", alternative " << result.alt_failures << " of " << reps << ")";
    throw Error(os.str());
  }
  if (result.null_failures + result.alt_failures > 0) {
    std::ostringstream os;
    os << "excluded degenerate replications: null " << result.null_failures << ", alternative "
       << result.alt_failures;
    result.warnings.push_back(os.str());
  }

  for (std::size_t t = 0; t < kAllTests.size(); ++t) {
    TestOutcome& out = result.tests[t];
    out.test = kAllTests[t];
    out.null_stats = collect(null_half, t);
    out.alt_stats = collect(alt_half, t);
    out.null_edf = edf_points(out.null_stats);
    out.alt_edf = edf_points(out.alt_stats);
    const Sided sided = sidedness(out.test);
    for (double alpha : config.alpha_levels) {
      const double critical = mc_critical_value(out.null_stats, alpha, sided);
      result.power.push_back(
          {out.test, sided, alpha, critical, empirical_power(out.alt_stats, critical, sided)});
    }
  }
  return result;
}

std::vector<EdfPoint> edf_points(std::span<const double> values) {
  if (values.empty()) throw DomainError("edf_points: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double total = static_cast<double>(sorted.size());
  std::vector<EdfPoint> curve;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    curve.push_back({sorted[i], static_cast<double>(i + 1) / total});
  }
  return curve;
}

double edf_at(std::span<const EdfPoint> curve, double x) {
  const auto it = std::upper_bound(curve.begin(), curve.end(), x,
                                   [](double v, const EdfPoint& p) { return v < p.value; });
  if (it == curve.begin()) return 0.0;
  return std::prev(it)->fraction;
}

double mc_critical_value(std::span<const double> null_stats, double alpha, Sided sided) {
  const std::size_t reps = null_stats.size();
  if (reps < 20) throw DomainError("mc_critical_value: need at least 20 null statistics");
  const double r1 = static_cast<double>(reps + 1);
  if (!(alpha > 1.0 / r1 && alpha < 1.0)) {
    throw DomainError("mc_critical_value: alpha must lie in (1/(R+1), 1)");
  }
  // The small offset keeps e.g. 0.95 * 100 from rounding up to 96.
  const double rank = std::ceil((1.0 - alpha) * r1 - 1e-9);
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, reps);

  std::vector<double> v(null_stats.begin(), null_stats.end());
  if (sided == Sided::two_sided) {
    for (double& x : v) x = std::abs(x);
  }
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k - 1), v.end());
  return v[k - 1];
}

double empirical_power(std::span<const double> alt_stats, double critical, Sided sided) {
  if (alt_stats.empty()) throw DomainError("empirical_power: empty input");
  std::size_t hits = 0;
  for (double x : alt_stats) {
    const double s = sided == Sided::two_sided ? std::abs(x) : x;
    if (s > critical) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(alt_stats.size());
}

std::vector<std::string> expected_count_check(const CellPartition& partition, std::size_t n,
                                              double floor) {
  std::vector<std::string> warnings;
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < partition.cells(); ++k) {
    const double expected = nd * partition.probs[k];
    if (expected >= floor) continue;
    std::ostringstream os;
    os << "cell " << (k + 1) << " (";
    if (k == 0) {
      os << "x <= " << partition.k_min;
    } else if (k + 1 == partition.cells()) {
      os << "x >= " << partition.k_max;
    } else {
      os << "x = " << partition.k_min + static_cast<Count>(k);
    }
    os.precision(4);
    os << "): expected count " << expected << " below " << floor;
    warnings.push_back(os.str());
  }
  return warnings;
}

}  // namespace poissonity
