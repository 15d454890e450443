#ifndef MF_CONFIG_H_
#define MF_CONFIG_H_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "mf/buoyancy.h"
#include "mf/context.h"
#include "mf/extraction.h"
#include "mf/preservation.h"

namespace mf {

struct EngineConfig {
  BuoyancyParams buoyancy;
  ContextParams context;
  PreservationParams preservation;
  InflectionRule extraction;
  double reorder_window_s = 60.0;
  uint64_t seed = 42;
};

nlohmann::json ConfigToJson(const EngineConfig &config);

// Keys missing from `overrides` keep their defaults. Throws InvalidConfig for
// unknown keys, wrong types, or values out of range.
EngineConfig ConfigFromJson(const nlohmann::json &overrides);

// Throws InvalidConfig.
void ValidateConfig(const EngineConfig &config);

// Reads and parses a config file. Throws IoError / InvalidConfig.
EngineConfig LoadConfigFile(const std::string &path);

}  // namespace mf

#endif  // MF_CONFIG_H_
