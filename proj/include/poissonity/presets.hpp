#pragma once

#include <array>
#include <string>

#include "poissonity/engine.hpp"

namespace poissonity {

// One of the nine reference power-comparison experiments.
struct Preset {
  int id;
  std::string title;
  ExperimentConfig config;
  // Reference extreme-cell probabilities for the fixed-lambda partition.
  double reference_p_min;
  double reference_p_max;
};

const std::array<Preset, 9>& preset_catalog();

// Throws DomainError for ids outside 1..9.
const Preset& find_preset(int id);
ExperimentConfig preset(int id);

}  // namespace poissonity
