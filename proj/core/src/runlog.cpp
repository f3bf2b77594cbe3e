#include "latticegan/runlog.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace latticegan {

using nlohmann::json;

std::string metrics_to_json_line(const MetricsRecord& r) {
  json j;
  j["schema"] = kMetricsSchemaVersion;
  j["run_id"] = r.run_id;
  j["generation"] = r.generation;
  j["cell"] = r.cell;
  j["wall_clock_ms"] = r.wall_clock_ms;
  j["best_fitness"] = r.best_fitness;
  j["frechet"] = r.frechet;
  if (r.tvd.has_value()) {
    j["tvd"] = *r.tvd;
  } else {
    j["tvd"] = nullptr;
  }
  j["mean_l2_diversity"] = r.mean_l2_diversity;
  j["learning_rate"] = r.learning_rate;
  return j.dump();
}

MetricsRecord metrics_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("metrics record is not valid JSON: ") + e.what());
  }
  if (!j.contains("schema") || !j["schema"].is_number_integer()) {
    throw std::runtime_error("metrics record missing schema version");
  }
  if (j["schema"].get<int>() != kMetricsSchemaVersion) {
    throw std::runtime_error("unsupported metrics schema version " +
                             std::to_string(j["schema"].get<int>()));
  }
  MetricsRecord r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.generation = j.at("generation").get<std::uint64_t>();
    r.cell = j.at("cell").get<std::size_t>();
    r.wall_clock_ms = j.at("wall_clock_ms").get<std::uint64_t>();
    r.best_fitness = j.at("best_fitness").get<double>();
    r.frechet = j.at("frechet").get<double>();
    if (!j.at("tvd").is_null()) r.tvd = j.at("tvd").get<double>();
    r.mean_l2_diversity = j.at("mean_l2_diversity").get<double>();
    r.learning_rate = j.at("learning_rate").get<double>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed metrics record: ") + e.what());
  }
  return r;
}

std::vector<MetricsRecord> read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file '" + path + "'");
  std::vector<MetricsRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(metrics_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::string frechet_median_csv(const std::vector<MetricsRecord>& records) {
  std::map<std::uint64_t, std::vector<double>> by_generation;
  for (const auto& r : records) by_generation[r.generation].push_back(r.frechet);

  std::ostringstream out;
  out << "generation,median_frechet\n";
  for (auto& [generation, values] : by_generation) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    out << generation << "," << median << "\n";
  }
  return out.str();
}

}  // namespace latticegan
