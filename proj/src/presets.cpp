#include "poissonity/presets.hpp"

#include "poissonity/error.hpp"

namespace poissonity {

namespace {

ExperimentConfig make(double lambda, AlternativeSpec alt, std::size_t n, Count k_min,
                      Count k_max) {
  ExperimentConfig c;
  c.lambda = lambda;
  c.alternative = alt;
  c.n = n;
  c.replications = 5000;
  c.k_min = k_min;
  c.k_max = k_max;
  return c;
}

}  // namespace

const std::array<Preset, 9>& preset_catalog() {
  // Null lambda equals the alternative's mean in every experiment.
  static const std::array<Preset, 9> catalog{{
      {1, "Binomial alternative", make(7, Binomial{50, 0.14}, 100, 3, 12), 0.082, 0.053},
      {2, "Negative binomial alternative",
       make(7, NegativeBinomial{70, 10.0 / 11.0}, 100, 3, 12), 0.082, 0.053},
      {3, "First beta-binomial alternative", make(5, BetaBinomial{10, 4, 4}, 100, 1, 9), 0.040,
       0.068},
      {4, "Second beta-binomial alternative", make(6, BetaBinomial{10, 3, 2}, 100, 2, 10), 0.062,
       0.084},
      {5, "Third beta-binomial alternative", make(14, BetaBinomial{21, 6, 3}, 100, 8, 20), 0.062,
       0.077},
      {6, "Binomial/negative-binomial mixture",
       make(10, BinNegBinMixture{2.0 / 3.0, 20, 10, 0.5}, 100, 5, 15), 0.067, 0.083},
      {7, "Floor-discretized normal alternative", make(8, FloorNormal{8}, 200, 3, 14), 0.042,
       0.034},
      {8, "Floor-discretized gamma alternative", make(10, FloorGamma{11.025, 0.952}, 200, 4, 17),
       0.029, 0.027},
      {9, "Floor-discretized Weibull alternative",
       make(10, FloorWeibull{3.698, 11.637}, 200, 4, 17), 0.029, 0.027},
  }};
  return catalog;
}

const Preset& find_preset(int id) {
  if (id < 1 || id > 9) throw DomainError("unknown preset " + std::to_string(id) + " (valid: 1-9)");
  return preset_catalog()[static_cast<std::size_t>(id - 1)];
}

ExperimentConfig preset(int id) { return find_preset(id).config; }

}  // namespace poissonity
