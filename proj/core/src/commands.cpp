#include "latticegan/commands.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "latticegan/checkpoint.hpp"
#include "latticegan/config.hpp"
#include "latticegan/runlog.hpp"

namespace latticegan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::runtime_error("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

json mixture_to_json(const MixtureOutcome& outcome, const std::string& run_id) {
  json j;
  j["schema"] = 1;
  j["run_id"] = run_id;
  j["cell"] = outcome.cell;
  j["fitness"] = outcome.fitness;
  j["weights"] = outcome.model.weights;
  json generators = json::array();
  for (const auto& g : outcome.model.generators) {
    json layers = json::array();
    for (const auto& l : g.network.layers) {
      layers.push_back({{"input_dim", l.input_dim},
                        {"output_dim", l.output_dim},
                        {"activation", l.activation == Activation::Tanh       ? "tanh"
                                       : l.activation == Activation::Sigmoid ? "sigmoid"
                                                                             : "identity"}});
    }
    generators.push_back(
        {{"layers", layers}, {"params", g.network.params}, {"learning_rate", g.learning_rate}});
  }
  j["generators"] = generators;
  return j;
}

struct LoadedRun {
  std::string dir;
  double total_wall_clock_ms = 0.0;
  std::vector<MetricsRecord> records;
};

LoadedRun load_run(const std::string& dir) {
  const fs::path summary_path = fs::path(dir) / "run_summary.json";
  if (!fs::exists(summary_path)) {
    throw std::runtime_error("run '" + dir + "' is incomplete (missing run_summary.json)");
  }
  std::ifstream in(summary_path);
  json summary;
  try {
    in >> summary;
  } catch (const json::exception& e) {
    throw std::runtime_error("run '" + dir + "': malformed run_summary.json: " + e.what());
  }

  LoadedRun run;
  run.dir = dir;
  try {
    run.total_wall_clock_ms = summary.at("total_wall_clock_ms").get<double>();
  } catch (const json::exception&) {
    throw std::runtime_error("run '" + dir + "': run_summary.json missing total_wall_clock_ms");
  }

  const fs::path metrics_path = fs::path(dir) / "metrics.jsonl";
  if (!fs::exists(metrics_path)) {
    throw std::runtime_error("run '" + dir + "' is missing its metrics file " +
                             metrics_path.string());
  }
  run.records = read_metrics_file(metrics_path.string());
  if (run.records.empty()) {
    throw std::runtime_error("run '" + dir + "' has an empty metrics file");
  }
  return run;
}

std::vector<LoadedRun> load_method_runs(const std::string& dir) {
  if (fs::exists(fs::path(dir) / "run_summary.json")) {
    return {load_run(dir)};
  }
  std::vector<std::string> subdirs;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / "run_summary.json")) {
        subdirs.push_back(entry.path().string());
      }
    }
  }
  if (subdirs.empty()) {
    throw std::runtime_error("'" + dir + "' contains no completed runs");
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<LoadedRun> runs;
  runs.reserve(subdirs.size());
  for (const auto& sub : subdirs) runs.push_back(load_run(sub));
  return runs;
}

}  // namespace

int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  try {
    std::map<std::string, std::string> overrides =
        options.overrides.has_value() ? *options.overrides : env_config_overrides();
    if (options.seed.has_value()) overrides["run.seed"] = std::to_string(*options.seed);
    if (options.mode.has_value()) {
      overrides["run.mode"] =
          *options.mode == ExecutionMode::SequentialDeterministic ? "sequential" : "async";
    }

    std::string text;
    if (!options.config_path.empty()) {
      std::ifstream in(options.config_path);
      if (!in) throw std::runtime_error("cannot open config file '" + options.config_path + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    const ParsedExperiment parsed = parse_config_text(text, overrides);
    const ExperimentConfig& cfg = parsed.config;
    const std::string run_id = config_digest(parsed.canonical_text);

    if (options.out_dir.empty()) throw std::runtime_error("train: missing output directory");
    fs::create_directories(options.out_dir);
    const fs::path out_dir(options.out_dir);

    {
      std::ofstream config_out(out_dir / "config_effective.ini", std::ios::trunc);
      config_out << parsed.canonical_text;
      if (!config_out) throw std::runtime_error("failed to write config_effective.ini");
    }

    std::ofstream metrics_out(out_dir / "metrics.jsonl", std::ios::trunc);
    if (!metrics_out) throw std::runtime_error("failed to open metrics.jsonl for writing");
    const MetricsSink sink = [&metrics_out](const MetricsRecord& record) {
      const std::string line = metrics_to_json_line(record) + "\n";
      metrics_out.write(line.data(), static_cast<std::streamsize>(line.size()));
      metrics_out.flush();
      if (!metrics_out) throw std::runtime_error("failed to append to metrics.jsonl");
    };

    out << "run " << run_id << ": " << cfg.topology.cell_count() << " cells, "
        << (cfg.mode == ExecutionMode::SequentialDeterministic ? "sequential" : "async") << "\n";

    const auto start = std::chrono::steady_clock::now();
    const TrainingResult result = run_training(cfg, sink, run_id);
    const auto total_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    metrics_out.close();

    {
      std::ofstream csv(out_dir / "frechet_median.csv", std::ios::trunc);
      csv << frechet_median_csv(result.log);
      if (!csv) throw std::runtime_error("failed to write frechet_median.csv");
    }

    save_checkpoint((out_dir / "checkpoint.bin").string(),
                    Checkpoint{parsed.canonical_text, result.population});

    {
      std::ofstream mixture_out(out_dir / "mixture.json", std::ios::trunc);
      mixture_out << mixture_to_json(result.best_mixture, run_id).dump(2) << "\n";
      if (!mixture_out) throw std::runtime_error("failed to write mixture.json");
    }

    std::uint64_t max_generation = 0;
    for (const auto& cell : result.population.cells) {
      max_generation = std::max(max_generation, cell.generation);
    }

    json summary;
    summary["schema"] = 1;
    summary["run_id"] = run_id;
    summary["mode"] =
        cfg.mode == ExecutionMode::SequentialDeterministic ? "sequential" : "async";
    summary["cells"] = cfg.topology.cell_count();
    summary["max_generation"] = max_generation;
    summary["records"] = result.log.size();
    summary["total_wall_clock_ms"] = total_ms;
    summary["best_mixture"] = {{"cell", result.best_mixture.cell},
                               {"fitness", result.best_mixture.fitness},
                               {"weights", result.best_mixture.model.weights}};
    {
      std::ofstream summary_out(out_dir / "run_summary.json", std::ios::trunc);
      summary_out << summary.dump(2) << "\n";
      if (!summary_out) throw std::runtime_error("failed to write run_summary.json");
    }

    out << "finished in " << total_ms << " ms; best mixture fitness "
        << result.best_mixture.fitness << " at cell " << result.best_mixture.cell << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "train: " << e.what() << "\n";
    err << "train: run incomplete, no run_summary.json written\n";
    return 1;
  }
}

CompareReport compare_runs(const std::vector<std::string>& run_dirs) {
  if (run_dirs.size() < 2) {
    throw std::runtime_error("compare needs at least two run directories");
  }

  CompareReport report;
  for (const auto& dir : run_dirs) {
    const std::vector<LoadedRun> runs = load_method_runs(dir);

    CompareRow row;
    row.label = dir;
    row.runs = runs.size();

    std::vector<double> totals;
    std::vector<double> medians;
    std::vector<double> bests;
    std::vector<double> tvds;
    std::vector<double> l2s;
    for (const auto& run : runs) {
      totals.push_back(run.total_wall_clock_ms);

      std::uint64_t final_generation = 0;
      for (const auto& r : run.records) final_generation = std::max(final_generation, r.generation);
      std::vector<double> frechets;
      std::vector<double> run_tvds;
      std::vector<double> run_l2s;
      for (const auto& r : run.records) {
        if (r.generation != final_generation) continue;
        frechets.push_back(r.frechet);
        if (r.tvd.has_value()) run_tvds.push_back(*r.tvd);
        run_l2s.push_back(r.mean_l2_diversity);
      }
      medians.push_back(median_of(frechets));
      bests.push_back(*std::min_element(frechets.begin(), frechets.end()));
      if (!run_tvds.empty()) tvds.push_back(median_of(run_tvds));
      l2s.push_back(median_of(run_l2s));
    }

    double mean = 0.0;
    for (const double t : totals) mean += t;
    mean /= static_cast<double>(totals.size());
    double var = 0.0;
    for (const double t : totals) var += (t - mean) * (t - mean);
    row.mean_total_ms = mean;
    row.std_total_ms = totals.size() > 1
                           ? std::sqrt(var / static_cast<double>(totals.size() - 1))
                           : 0.0;
    row.median_final_frechet = median_of(medians);
    row.best_final_frechet = *std::min_element(bests.begin(), bests.end());
    if (!tvds.empty()) row.median_final_tvd = median_of(tvds);
    row.mean_final_l2 = median_of(l2s);
    report.rows.push_back(std::move(row));
  }

  double fastest = report.rows.front().mean_total_ms;
  for (const auto& row : report.rows) fastest = std::min(fastest, row.mean_total_ms);
  for (auto& row : report.rows) {
    row.pct_longer_than_fastest =
        fastest > 0.0 ? (row.mean_total_ms - fastest) / fastest * 100.0 : 0.0;
  }
  return report;
}

std::string format_compare(const CompareReport& report) {
  auto fixed = [](double v, int precision) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
  };

  std::ostringstream out;
  out << std::left << std::setw(32) << "run" << std::right << std::setw(4) << "n"
      << std::setw(16) << "wall-clock[ms]" << std::setw(12) << "(std)" << std::setw(12)
      << "frechet" << std::setw(12) << "best" << std::setw(10) << "tvd" << std::setw(12)
      << "L2 div" << std::setw(14) << "vs fastest"
      << "\n";
  for (const auto& row : report.rows) {
    out << std::left << std::setw(32) << row.label << std::right << std::setw(4) << row.runs
        << std::setw(16) << fixed(row.mean_total_ms, 1) << std::setw(12)
        << fixed(row.std_total_ms, 1) << std::setw(12) << fixed(row.median_final_frechet, 4)
        << std::setw(12) << fixed(row.best_final_frechet, 4) << std::setw(10)
        << (row.median_final_tvd.has_value() ? fixed(*row.median_final_tvd, 3) : "-")
        << std::setw(12) << fixed(row.mean_final_l2, 4) << std::setw(13)
        << ("+" + fixed(row.pct_longer_than_fastest, 1) + "%") << "\n";
  }
  for (const auto& row : report.rows) {
    if (row.pct_longer_than_fastest > 0.0) {
      out << row.label << " needed " << fixed(row.pct_longer_than_fastest, 2)
          << "% longer than the fastest run\n";
    }
  }
  return out.str();
}

int cmd_compare(const std::vector<std::string>& run_dirs, std::ostream& out, std::ostream& err) {
  try {
    out << format_compare(compare_runs(run_dirs));
    return 0;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << "\n";
    return 1;
  }
}

int cmd_inspect_checkpoint(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const CheckpointInfo info = inspect_checkpoint(path);
    out << "checkpoint version: " << info.version << "\n";
    out << "cells: " << info.cell_count << "\n";
    out << "generation: ";
    if (info.min_generation == info.max_generation) {
      out << info.min_generation << "\n";
    } else {
      out << info.min_generation << ".." << info.max_generation << "\n";
    }
    out << "generator params per cell: " << info.generator_params << "\n";
    out << "discriminator params per cell: " << info.discriminator_params << "\n";
    out << "digest: ok\n";
    out << "embedded config:\n" << info.config_text;
    return 0;
  } catch (const std::exception& e) {
    err << "inspect-checkpoint: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace latticegan
