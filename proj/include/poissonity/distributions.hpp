#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "poissonity/rng.hpp"

namespace poissonity {

using Count = std::int64_t;

// Generating distributions. Each alternative is a plain aggregate; the
// tagged union AlternativeSpec selects among them.

struct Poisson {
  double lambda;
};

struct Binomial {
  std::int64_t trials;
  double p;
};

// Counts failures before the `successes`-th success; `p` is the per-trial
// success probability. Mean m(1-p)/p, variance m(1-p)/p^2.
struct NegativeBinomial {
  std::int64_t successes;
  double p;
};

struct BetaBinomial {
  std::int64_t trials;
  double alpha;
  double beta;
};

// With probability `w` a Binomial(m_b, p) draw, otherwise NegativeBinomial(m_nb, p).
struct BinNegBinMixture {
  double w;
  std::int64_t m_b;
  std::int64_t m_nb;
  double p;
};

// X = floor(Z), Z ~ Normal(a + 0.5, variance a). Draws with Z < 0 are
// clamped to X = 0.
struct FloorNormal {
  double a;
};

// X = floor(Z), Z ~ Gamma(shape k, scale b).
struct FloorGamma {
  double k;
  double b;
};

// X = floor(Z), Z ~ Weibull(shape k, scale b).
struct FloorWeibull {
  double k;
  double b;
};

using AlternativeSpec =
    std::variant<Poisson, Binomial, NegativeBinomial, BetaBinomial,
                 BinNegBinMixture, FloorNormal, FloorGamma, FloorWeibull>;

// Throws DomainError if any parameter is outside its valid range.
void validate(const AlternativeSpec& spec);

// Stable lowercase identifier, e.g. "negative_binomial".
std::string family_name(const AlternativeSpec& spec);

// Human-readable one-liner with parameters.
std::string describe(const AlternativeSpec& spec);

bool is_floor_discretized(const AlternativeSpec& spec);

// Largest attainable value, or nullopt for unbounded support.
std::optional<Count> support_max(const AlternativeSpec& spec);

// An ordered sample of non-negative counts, n >= 1.
class CountSample {
 public:
  explicit CountSample(std::vector<Count> values);

  std::span<const Count> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  Count operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<Count> values_;
};

struct Moments {
  double mean;
  double variance;
};

// Poisson pmf/cdf, evaluated through log-gamma.
double poisson_pmf(double lambda, Count x);
double poisson_cdf(double lambda, Count x);
// Upper tail P(X >= k), accurate where 1 - poisson_cdf would cancel.
double poisson_sf(double lambda, Count k);

double binomial_pmf(std::int64_t trials, double p, Count x);
double negative_binomial_pmf(std::int64_t successes, double p, Count x);
// Beta-function ratio C(m,x) B(x+alpha, m-x+beta) / B(alpha, beta).
double beta_binomial_pmf(std::int64_t trials, double alpha, double beta, Count x);

// Survival function P(Z > z) of the continuous variable behind a
// floor-discretized spec. Throws UnsupportedSpecError for count families.
double continuous_survival(const AlternativeSpec& spec, double z);

// Exact pmf of any alternative. Floor-discretized specs use
// P(X = j) = S(j) - S(j+1), with P(X = 0) = 1 - S(1).
double alternative_pmf(const AlternativeSpec& spec, Count x);

// One variate.
Count draw_one(const AlternativeSpec& spec, RngStream& stream);

// n independent variates. Validates the spec once.
CountSample draw(const AlternativeSpec& spec, std::size_t n, RngStream& stream);

// Closed-form mean and variance. Floor-discretized specs throw
// UnsupportedSpecError; use discretized_moments() for them.
Moments analytic_moments(const AlternativeSpec& spec);

// c = E[X(X-1)] / (E X)^2 for Poisson (1), Binomial ((m-1)/m) and
// NegativeBinomial ((m+1)/m). Other families throw UnsupportedSpecError.
double theoretical_c(const AlternativeSpec& spec);

}  // namespace poissonity
