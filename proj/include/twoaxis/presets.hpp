#pragma once

#include <string>
#include <vector>

#include "twoaxis/scenario.hpp"

namespace twoaxis {

enum class PresetKind { coherence, sweep };

struct PresetCurve {
  std::string label;
  Scenario scenario;
};

/// A named bundle of scenarios reproducing one published figure panel.
struct Preset {
  std::string name;
  PresetKind kind = PresetKind::coherence;
  std::vector<PresetCurve> curves;
};

std::vector<std::string> preset_names();

/// Throws std::invalid_argument for an unknown name.
Preset make_preset(const std::string& name);

}  // namespace twoaxis
