#include "poissonity/distributions.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "poissonity/error.hpp"

namespace poissonity {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

[[noreturn]] void bad(const std::string& what) { throw DomainError(what); }

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Sequential inversion from x = 0. exp(-lambda) must not underflow.
Count sample_poisson(double lambda, RngStream& rng) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cum = p;
  Count x = 0;
  while (u >= cum) {
    ++x;
    p *= lambda / static_cast<double>(x);
    const double next = cum + p;
    if (next == cum) break;  // remaining mass below rounding of u
    cum = next;
  }
  return x;
}

// Sum of Bernoulli trials.
Count sample_binomial(std::int64_t trials, double p, RngStream& rng) {
  Count x = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    if (rng.uniform() < p) ++x;
  }
  return x;
}

// Failures before the first success, by inversion.
Count sample_geometric(double p, RngStream& rng) {
  if (p >= 1.0) return 0;
  return static_cast<Count>(std::floor(std::log(rng.uniform_pos()) / std::log1p(-p)));
}

Count sample_negative_binomial(std::int64_t successes, double p, RngStream& rng) {
  Count x = 0;
  for (std::int64_t i = 0; i < successes; ++i) x += sample_geometric(p, rng);
  return x;
}

// Box-Muller, one variate per call (the sine partner is discarded so the
// stream carries no hidden state).
double sample_standard_normal(RngStream& rng) {
  const double u1 = rng.uniform_pos();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang squeeze/rejection; shapes below 1 use the
// Gamma(k+1) * U^(1/k) boost.
double sample_gamma(double shape, double scale, RngStream& rng) {
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    return scale * g * std::pow(rng.uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
  }
}

double sample_beta(double alpha, double beta, RngStream& rng) {
  const double x = sample_gamma(alpha, 1.0, rng);
  const double y = sample_gamma(beta, 1.0, rng);
  return x / (x + y);
}

Count floor_to_count(double z) {
  if (!(z > 0.0)) return 0;
  return static_cast<Count>(std::floor(z));
}

Count sample_unchecked(const AlternativeSpec& spec, RngStream& rng) {
  return std::visit(
      overloaded{
          [&](const Poisson& s) { return sample_poisson(s.lambda, rng); },
          [&](const Binomial& s) { return sample_binomial(s.trials, s.p, rng); },
          [&](const NegativeBinomial& s) {
            return sample_negative_binomial(s.successes, s.p, rng);
          },
          [&](const BetaBinomial& s) {
            const double p = sample_beta(s.alpha, s.beta, rng);
            return sample_binomial(s.trials, p, rng);
          },
          [&](const BinNegBinMixture& s) {
            if (rng.uniform() < s.w) return sample_binomial(s.m_b, s.p, rng);
            return sample_negative_binomial(s.m_nb, s.p, rng);
          },
          [&](const FloorNormal& s) {
            const double z = s.a + 0.5 + std::sqrt(s.a) * sample_standard_normal(rng);
            return floor_to_count(z);
          },
          [&](const FloorGamma& s) { return floor_to_count(sample_gamma(s.k, s.b, rng)); },
          [&](const FloorWeibull& s) {
            // Inverse CDF on 1 - U in (0, 1].
            const double e = -std::log(rng.uniform_pos());
            return floor_to_count(s.b * std::pow(e, 1.0 / s.k));
          },
      },
      spec);
}

}  // namespace

void validate(const AlternativeSpec& spec) {
  std::visit(
      overloaded{
          [](const Poisson& s) {
            if (!positive(s.lambda)) bad("Poisson: lambda must be positive");
            // Sequential inversion starts from exp(-lambda).
            if (s.lambda > 700.0) bad("Poisson: lambda above 700 is not supported by the sampler");
          },
          [](const Binomial& s) {
            if (s.trials < 1) bad("Binomial: trials must be >= 1");
            if (!probability(s.p)) bad("Binomial: p must lie in [0, 1]");
          },
          [](const NegativeBinomial& s) {
            if (s.successes < 1) bad("NegativeBinomial: successes must be >= 1");
            if (!probability(s.p) || s.p == 0.0) bad("NegativeBinomial: p must lie in (0, 1]");
          },
          [](const BetaBinomial& s) {
            if (s.trials < 1) bad("BetaBinomial: trials must be >= 1");
            if (!positive(s.alpha) || !positive(s.beta))
              bad("BetaBinomial: alpha and beta must be positive");
          },
          [](const BinNegBinMixture& s) {
            if (!probability(s.w)) bad("BinNegBinMixture: w must lie in [0, 1]");
            if (s.m_b < 1 || s.m_nb < 1) bad("BinNegBinMixture: m_b and m_nb must be >= 1");
            if (!probability(s.p) || s.p == 0.0) bad("BinNegBinMixture: p must lie in (0, 1]");
          },
          [](const FloorNormal& s) {
            if (!positive(s.a)) bad("FloorNormal: a must be positive");
          },
          [](const FloorGamma& s) {
            if (!positive(s.k) || !positive(s.b)) bad("FloorGamma: k and b must be positive");
          },
          [](const FloorWeibull& s) {
            if (!positive(s.k) || !positive(s.b)) bad("FloorWeibull: k and b must be positive");
          },
      },
      spec);
}

std::string family_name(const AlternativeSpec& spec) {
  return std::visit(overloaded{
                        [](const Poisson&) { return "poisson"; },
                        [](const Binomial&) { return "binomial"; },
                        [](const NegativeBinomial&) { return "negative_binomial"; },
                        [](const BetaBinomial&) { return "beta_binomial"; },
                        [](const BinNegBinMixture&) { return "bin_negbin_mixture"; },
                        [](const FloorNormal&) { return "floor_normal"; },
                        [](const FloorGamma&) { return "floor_gamma"; },
                        [](const FloorWeibull&) { return "floor_weibull"; },
                    },
                    spec);
}

std::string describe(const AlternativeSpec& spec) {
  std::ostringstream os;
  os.precision(6);
  std::visit(overloaded{
                 [&](const Poisson& s) { os << "Poisson(lambda=" << s.lambda << ")"; },
                 [&](const Binomial& s) {
                   os << "Binomial(m_b=" << s.trials << ", p_b=" << s.p << ")";
                 },
                 [&](const NegativeBinomial& s) {
                   os << "NegativeBinomial(m_nb=" << s.successes << ", p_nb=" << s.p << ")";
                 },
                 [&](const BetaBinomial& s) {
                   os << "BetaBinomial(m_b=" << s.trials << ", alpha=" << s.alpha
                      << ", beta=" << s.beta << ")";
                 },
                 [&](const BinNegBinMixture& s) {
                   os << "BinNegBinMixture(w=" << s.w << ", m_b=" << s.m_b
                      << ", m_nb=" << s.m_nb << ", p=" << s.p << ")";
                 },
                 [&](const FloorNormal& s) { os << "FloorNormal(a=" << s.a << ")"; },
                 [&](const FloorGamma& s) {
                   os << "FloorGamma(k=" << s.k << ", b=" << s.b << ")";
                 },
                 [&](const FloorWeibull& s) {
                   os << "FloorWeibull(k=" << s.k << ", b=" << s.b << ")";
                 },
             },
             spec);
  return os.str();
}

bool is_floor_discretized(const AlternativeSpec& spec) {
  return std::holds_alternative<FloorNormal>(spec) ||
         std::holds_alternative<FloorGamma>(spec) ||
         std::holds_alternative<FloorWeibull>(spec);
}

std::optional<Count> support_max(const AlternativeSpec& spec) {
  if (const auto* s = std::get_if<Binomial>(&spec)) return s->trials;
  if (const auto* s = std::get_if<BetaBinomial>(&spec)) return s->trials;
  if (const auto* s = std::get_if<BinNegBinMixture>(&spec)) {
    if (s->w == 1.0) return s->m_b;
  }
  return std::nullopt;
}

CountSample::CountSample(std::vector<Count> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("CountSample: sample must be non-empty");
  for (Count v : values_) {
    if (v < 0) throw DomainError("CountSample: counts must be non-negative");
  }
}

double poisson_pmf(double lambda, Count x) {
  if (!positive(lambda)) throw DomainError("poisson_pmf: lambda must be positive");
  if (x < 0) return 0.0;
  const double xd = static_cast<double>(x);
  return std::exp(-lambda + xd * std::log(lambda) - std::lgamma(xd + 1.0));
}

double poisson_cdf(double lambda, Count x) {
  if (!positive(lambda)) throw DomainError("poisson_cdf: lambda must be positive");
  double sum = 0.0;
  for (Count j = 0; j <= x; ++j) {
    const double term = poisson_pmf(lambda, j);
    sum += term;
    // Past the mode terms only shrink; stop once they no longer register.
    if (static_cast<double>(j) > lambda && term < sum * 1e-18) break;
  }
  return std::min(sum, 1.0);
}

double poisson_sf(double lambda, Count k) {
  if (!positive(lambda)) throw DomainError("poisson_sf: lambda must be positive");
  if (k <= 0) return 1.0;
  // P(X >= k) = P(k, lambda), the regularized lower incomplete gamma.
  return boost::math::gamma_p(static_cast<double>(k), lambda);
}

double binomial_pmf(std::int64_t trials, double p, Count x) {
  if (trials < 1 || !probability(p)) throw DomainError("binomial_pmf: invalid parameters");
  if (x < 0 || x > trials) return 0.0;
  if (p == 0.0) return x == 0 ? 1.0 : 0.0;
  if (p == 1.0) return x == trials ? 1.0 : 0.0;
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(x);
  return std::exp(log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p));
}

double negative_binomial_pmf(std::int64_t successes, double p, Count x) {
  if (successes < 1 || !probability(p) || p == 0.0)
    throw DomainError("negative_binomial_pmf: invalid parameters");
  if (x < 0) return 0.0;
  if (p == 1.0) return x == 0 ? 1.0 : 0.0;
  const double m = static_cast<double>(successes);
  const double k = static_cast<double>(x);
  return std::exp(std::lgamma(k + m) - std::lgamma(m) - std::lgamma(k + 1.0) +
                  m * std::log(p) + k * std::log1p(-p));
}

double beta_binomial_pmf(std::int64_t trials, double alpha, double beta, Count x) {
  if (trials < 1 || !positive(alpha) || !positive(beta))
    throw DomainError("beta_binomial_pmf: invalid parameters");
  if (x < 0 || x > trials) return 0.0;
  const double n = static_cast<double>(trials);
  const double k = static_cast<double>(x);
  return std::exp(log_choose(n, k) + log_beta(k + alpha, n - k + beta) - log_beta(alpha, beta));
}

double continuous_survival(const AlternativeSpec& spec, double z) {
  validate(spec);
  if (const auto* s = std::get_if<FloorNormal>(&spec)) {
    return 0.5 * std::erfc((z - (s->a + 0.5)) / std::sqrt(2.0 * s->a));
  }
  if (const auto* s = std::get_if<FloorGamma>(&spec)) {
    if (z <= 0.0) return 1.0;
    return boost::math::gamma_q(s->k, z / s->b);
  }
  if (const auto* s = std::get_if<FloorWeibull>(&spec)) {
    if (z <= 0.0) return 1.0;
    return std::exp(-std::pow(z / s->b, s->k));
  }
  throw UnsupportedSpecError("continuous_survival: " + family_name(spec) +
                             " is not floor-discretized");
}

double alternative_pmf(const AlternativeSpec& spec, Count x) {
  validate(spec);
  if (x < 0) return 0.0;
  return std::visit(
      overloaded{
          [&](const Poisson& s) { return poisson_pmf(s.lambda, x); },
          [&](const Binomial& s) { return binomial_pmf(s.trials, s.p, x); },
          [&](const NegativeBinomial& s) { return negative_binomial_pmf(s.successes, s.p, x); },
          [&](const BetaBinomial& s) { return beta_binomial_pmf(s.trials, s.alpha, s.beta, x); },
          [&](const BinNegBinMixture& s) {
            return s.w * binomial_pmf(s.m_b, s.p, x) +
                   (1.0 - s.w) * negative_binomial_pmf(s.m_nb, s.p, x);
          },
          [&](const auto&) {
            const double xd = static_cast<double>(x);
            if (x == 0) return 1.0 - continuous_survival(spec, 1.0);
            return continuous_survival(spec, xd) - continuous_survival(spec, xd + 1.0);
          },
      },
      spec);
}

Count draw_one(const AlternativeSpec& spec, RngStream& stream) {
  validate(spec);
  return sample_unchecked(spec, stream);
}

CountSample draw(const AlternativeSpec& spec, std::size_t n, RngStream& stream) {
  validate(spec);
  if (n < 1) throw DomainError("draw: n must be >= 1");
  std::vector<Count> values(n);
  for (auto& v : values) v = sample_unchecked(spec, stream);
  return CountSample(std::move(values));
}

Moments analytic_moments(const AlternativeSpec& spec) {
  validate(spec);
  return std::visit(
      overloaded{
          [](const Poisson& s) { return Moments{s.lambda, s.lambda}; },
          [](const Binomial& s) {
            const double m = static_cast<double>(s.trials);
            return Moments{m * s.p, m * s.p * (1.0 - s.p)};
          },
          [](const NegativeBinomial& s) {
            const double m = static_cast<double>(s.successes);
            return Moments{m * (1.0 - s.p) / s.p, m * (1.0 - s.p) / (s.p * s.p)};
          },
          [](const BetaBinomial& s) {
            const double m = static_cast<double>(s.trials);
            const double p0 = s.alpha / (s.alpha + s.beta);
            const double rho = 1.0 / (s.alpha + s.beta + 1.0);
            return Moments{m * p0, m * p0 * (1.0 - p0) * (1.0 + (m - 1.0) * rho)};
          },
          [](const BinNegBinMixture& s) {
            // Raw moments mix linearly.
            const double mb = static_cast<double>(s.m_b);
            const double mnb = static_cast<double>(s.m_nb);
            const double mean_b = mb * s.p;
            const double var_b = mb * s.p * (1.0 - s.p);
            const double mean_nb = mnb * (1.0 - s.p) / s.p;
            const double var_nb = mnb * (1.0 - s.p) / (s.p * s.p);
            const double mean = s.w * mean_b + (1.0 - s.w) * mean_nb;
            const double second = s.w * (var_b + mean_b * mean_b) +
                                  (1.0 - s.w) * (var_nb + mean_nb * mean_nb);
            return Moments{mean, second - mean * mean};
          },
          [&](const auto&) -> Moments {
            throw UnsupportedSpecError("analytic_moments: " + family_name(spec) +
                                       " has no closed form; use discretized_moments");
          },
      },
      spec);
}

double theoretical_c(const AlternativeSpec& spec) {
  validate(spec);
  if (std::holds_alternative<Poisson>(spec)) return 1.0;
  if (const auto* s = std::get_if<Binomial>(&spec)) {
    const double m = static_cast<double>(s->trials);
    return (m - 1.0) / m;
  }
  if (const auto* s = std::get_if<NegativeBinomial>(&spec)) {
    const double m = static_cast<double>(s->successes);
    return (m + 1.0) / m;
  }
  throw UnsupportedSpecError("theoretical_c: not characterized for " + family_name(spec));
}

}  // namespace poissonity
