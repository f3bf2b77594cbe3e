#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latticegan/orchestrator.hpp"

namespace latticegan {

struct TrainOptions {
  std::string config_path;  // empty runs the built-in defaults
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<ExecutionMode> mode;
  // Applied between the config file and the CLI flags; defaults to the
  // LATTICEGAN_<SECTION>__<KEY> environment variables.
  std::optional<std::map<std::string, std::string>> overrides;
};

// Runs a full experiment and writes, under out_dir: config_effective.ini,
// metrics.jsonl (one record per cell per generation, line-atomic appends),
// frechet_median.csv, checkpoint.bin, mixture.json, and run_summary.json.
// The summary is written last and marks the run complete; exit status 0 iff
// every output was fully written.
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);

struct CompareRow {
  std::string label;
  std::size_t runs = 0;  // aggregated runs behind this label
  double mean_total_ms = 0.0;
  double std_total_ms = 0.0;
  double median_final_frechet = 0.0;
  double best_final_frechet = 0.0;
  std::optional<double> median_final_tvd;
  double mean_final_l2 = 0.0;
  double pct_longer_than_fastest = 0.0;
};

struct CompareReport {
  std::vector<CompareRow> rows;
};

// Each argument is either a completed run directory or a directory of
// completed run directories (aggregated as one method).
CompareReport compare_runs(const std::vector<std::string>& run_dirs);

std::string format_compare(const CompareReport& report);

int cmd_compare(const std::vector<std::string>& run_dirs, std::ostream& out, std::ostream& err);

int cmd_inspect_checkpoint(const std::string& path, std::ostream& out, std::ostream& err);

}  // namespace latticegan
