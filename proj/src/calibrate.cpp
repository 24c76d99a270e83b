#include "poissonity/calibrate.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "poissonity/error.hpp"

namespace poissonity {

Moments discretized_moments(const AlternativeSpec& spec, double tail_eps) {
  if (!is_floor_discretized(spec)) {
    throw UnsupportedSpecError("discretized_moments: " + family_name(spec) +
                               " is not floor-discretized");
  }
  if (!(tail_eps > 0.0 && tail_eps <= 1e-6)) {
    throw DomainError("discretized_moments: tail_eps must lie in (0, 1e-6]");
  }
  validate(spec);

  std::vector<double> probs;
  double upper = 1.0;  // P(X >= j); X = 0 absorbs everything below 1.
  for (std::size_t j = 0;; ++j) {
    if (j >= kMaxSeriesTerms) {
      throw NonConvergenceError("discretized_moments: tail did not fall below tail_eps within " +
                                std::to_string(kMaxSeriesTerms) + " terms");
    }
    const double next = continuous_survival(spec, static_cast<double>(j + 1));
    probs.push_back(upper - next);
    upper = next;
    if (upper < tail_eps) break;
  }

  double mean = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) mean += static_cast<double>(j) * probs[j];
  double variance = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double d = static_cast<double>(j) - mean;
    variance += d * d * probs[j];
  }
  return {mean, variance};
}

Moments spec_moments(const AlternativeSpec& spec) {
  return is_floor_discretized(spec) ? discretized_moments(spec) : analytic_moments(spec);
}

std::string to_string(FloorFamily family) {
  return family == FloorFamily::gamma ? "gamma" : "weibull";
}

FloorFamily parse_floor_family(const std::string& name) {
  if (name == "gamma") return FloorFamily::gamma;
  if (name == "weibull") return FloorFamily::weibull;
  throw DomainError("unknown family '" + name + "' (expected gamma or weibull)");
}

AlternativeSpec make_floor_spec(FloorFamily family, double shape, double scale) {
  if (family == FloorFamily::gamma) return FloorGamma{shape, scale};
  return FloorWeibull{shape, scale};
}

namespace {

constexpr int kMaxBisections = 200;

struct ScaleSolution {
  double scale;
  Moments moments;
};

std::string range_text(const char* name, double lo, double hi) {
  std::ostringstream os;
  os << name << " in [" << lo << ", " << hi << "]";
  return os.str();
}

// Solves mean(shape, scale) = target over scale.
ScaleSolution solve_scale(FloorFamily family, double shape, double target, double tol,
                          const CalibrationOptions& opt, int& iterations) {
  double lo = opt.scale_lo;
  double hi = opt.scale_hi;
  bool seen_below = false;
  bool seen_above = false;
  ScaleSolution best{0.0, {0.0, 0.0}};
  double best_err = INFINITY;
  for (int i = 0; i < kMaxBisections; ++i) {
    ++iterations;
    const double mid = std::sqrt(lo * hi);
    const Moments m = discretized_moments(make_floor_spec(family, shape, mid), opt.tail_eps);
    const double err = m.mean - target;
    if (std::abs(err) < best_err) {
      best_err = std::abs(err);
      best = {mid, m};
    }
    if (std::abs(err) <= tol) return {mid, m};
    if (err < 0.0) {
      seen_below = true;
      lo = mid;
    } else {
      seen_above = true;
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  if (!(seen_below && seen_above)) {
    std::ostringstream os;
    os << "calibrate: mean " << target << " not bracketed for shape " << shape
       << " with " << range_text("scale", opt.scale_lo, opt.scale_hi);
    throw CalibrationError(os.str());
  }
  return best;
}

}  // namespace

CalibrationResult calibrate_equidispersed(FloorFamily family, double target, double tol,
                                          const CalibrationOptions& opt) {
  if (!(target >= 2.0) || !std::isfinite(target)) {
    throw DomainError("calibrate: target must be >= 2");
  }
  if (!(tol >= 1e-10)) throw DomainError("calibrate: tol must be >= 1e-10");
  if (!(0.0 < opt.shape_lo && opt.shape_lo < opt.shape_hi && 0.0 < opt.scale_lo &&
        opt.scale_lo < opt.scale_hi)) {
    throw DomainError("calibrate: invalid bracketing ranges");
  }

  const double inner_tol = tol / 16.0;
  CalibrationResult result;
  result.family = family;

  double lo = opt.shape_lo;
  double hi = opt.shape_hi;
  bool seen_below = false;
  bool seen_above = false;
  double best_err = INFINITY;
  for (int i = 0; i < kMaxBisections; ++i) {
    const double shape = std::sqrt(lo * hi);
    const ScaleSolution s = solve_scale(family, shape, target, inner_tol, opt, result.iterations);
    const double err = s.moments.variance - target;
    const double residual = std::abs(s.moments.mean - target) + std::abs(err);
    if (residual < best_err) {
      best_err = residual;
      result.shape = shape;
      result.scale = s.scale;
      result.achieved_mean = s.moments.mean;
      result.achieved_variance = s.moments.variance;
      result.residual = residual;
    }
    if (std::abs(err) <= tol && std::abs(s.moments.mean - target) <= tol) return result;
    // Variance falls as the shape grows.
    if (err > 0.0) {
      seen_above = true;
      lo = shape;
    } else {
      seen_below = true;
      hi = shape;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }

  std::ostringstream os;
  if (!(seen_below && seen_above)) {
    os << "calibrate: variance " << target << " not bracketed; scanned "
       << range_text("shape", opt.shape_lo, opt.shape_hi) << " and "
       << range_text("scale", opt.scale_lo, opt.scale_hi);
  } else {
    os << "calibrate: no solution within tol " << tol << " (best residual " << best_err
       << " at shape " << result.shape << ", scale " << result.scale << ")";
  }
  throw CalibrationError(os.str());
}

double mixture_weight(std::int64_t m_b, std::int64_t m_nb, double p) {
  if (m_b < 1 || m_nb < 1) throw DomainError("mixture_weight: m_b and m_nb must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("mixture_weight: p must lie in (0, 1)");
  const double mb = static_cast<double>(m_b);
  const double mnb = static_cast<double>(m_nb);
  const double mean = mb * p;
  const double mean_nb = mnb * (1.0 - p) / p;
  if (std::abs(mean - mean_nb) > 1e-9 * std::max(mean, mean_nb)) {
    throw DomainError("mixture_weight: component means differ");
  }
  const double var_b = mb * p * (1.0 - p);
  const double var_nb = mnb * (1.0 - p) / (p * p);
  if (!(var_b < mean && mean < var_nb)) {
    throw DomainError("mixture_weight: component variances do not straddle the mean");
  }
  return (var_nb - mean) / (var_nb - var_b);
}

}  // namespace poissonity
