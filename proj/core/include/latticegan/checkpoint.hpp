#pragma once

#include <cstdint>
#include <string>

#include "latticegan/orchestrator.hpp"

namespace latticegan {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Self-contained snapshot of a run: the effective config text plus every
// cell's generator/discriminator (layers, flat parameters, learning rate,
// Adam state) and generation counter.
struct Checkpoint {
  std::string config_text;
  Population population;

  bool operator==(const Checkpoint&) const = default;
};

// Versioned little-endian container with a trailing CRC-32 digest. The write
// goes to a temporary file that is renamed into place, so a crash never
// leaves a partial checkpoint at `path`.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

// Throws on bad magic, version mismatch, truncation, or digest mismatch;
// never returns partial state.
Checkpoint load_checkpoint(const std::string& path);

struct CheckpointInfo {
  std::uint32_t version = 0;
  std::size_t cell_count = 0;
  std::uint64_t min_generation = 0;
  std::uint64_t max_generation = 0;
  std::size_t generator_params = 0;
  std::size_t discriminator_params = 0;
  std::string config_text;
};

CheckpointInfo inspect_checkpoint(const std::string& path);

std::uint32_t crc32(const unsigned char* data, std::size_t size);

}  // namespace latticegan
