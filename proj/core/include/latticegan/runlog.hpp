#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace latticegan {

inline constexpr int kMetricsSchemaVersion = 1;

// One line of the run log: the state of one cell after one generation.
// Generation 0 records describe the freshly initialized population. tvd is
// absent for data sources without known mode centers.
struct MetricsRecord {
  std::string run_id;
  std::uint64_t generation = 0;
  std::size_t cell = 0;
  std::uint64_t wall_clock_ms = 0;
  double best_fitness = 0.0;
  double frechet = 0.0;
  std::optional<double> tvd;
  double mean_l2_diversity = 0.0;
  double learning_rate = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

using MetricsSink = std::function<void(const MetricsRecord&)>;

std::string metrics_to_json_line(const MetricsRecord& record);
MetricsRecord metrics_from_json_line(const std::string& line);

std::vector<MetricsRecord> read_metrics_file(const std::string& path);

// Per-generation median of the Fréchet score across cells, as plot-ready
// CSV ("generation,median_frechet").
std::string frechet_median_csv(const std::vector<MetricsRecord>& records);

}  // namespace latticegan
