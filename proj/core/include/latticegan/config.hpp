#pragma once

#include <map>
#include <string>

#include "latticegan/orchestrator.hpp"

namespace latticegan {

// All defaults: ring Z=6 r=1, sequential, 300 generations, the 8-Gaussian
// ring benchmark, and the standard training hyperparameters (initial
// learning rate 2e-4, mutation probability 0.5, mutation scale 1e-4,
// tournament size 2, batch 100).
ExperimentConfig default_experiment_config();

struct ParsedExperiment {
  ExperimentConfig config;
  std::string canonical_text;  // emit_config of the effective config
};

// Parses INI-style text (sections, `key = value`, `#`/`;` comments).
// Unspecified keys take the documented defaults; unknown keys are errors
// naming the line. `overrides` maps "section.key" to replacement values and
// is applied after the file.
ParsedExperiment parse_config_text(const std::string& text,
                                   const std::map<std::string, std::string>& overrides = {});

ParsedExperiment parse_config_file(const std::string& path,
                                   const std::map<std::string, std::string>& overrides = {});

// Collects LATTICEGAN_<SECTION>__<KEY> environment variables as an override
// map ("section.key" form).
std::map<std::string, std::string> env_config_overrides();

// Canonical text form; parse_config_text(emit_config(cfg)) reproduces cfg.
std::string emit_config(const ExperimentConfig& cfg);

// Stable hex digest of a canonical config text; used as the run id.
std::string config_digest(const std::string& canonical_text);

}  // namespace latticegan
