#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "latticegan/runlog.hpp"

using namespace latticegan;

namespace {

MetricsRecord sample_record() {
  MetricsRecord r;
  r.run_id = "abcd1234";
  r.generation = 17;
  r.cell = 3;
  r.wall_clock_ms = 4200;
  r.best_fitness = -1.25;
  r.frechet = 0.375;
  r.tvd = 0.125;
  r.mean_l2_diversity = 2.5;
  r.learning_rate = 0.0002;
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("test_runlog") {

TEST_CASE("records survive a json round trip") {
  const MetricsRecord r = sample_record();
  CHECK(metrics_from_json_line(metrics_to_json_line(r)) == r);

  MetricsRecord no_tvd = r;
  no_tvd.tvd.reset();
  const std::string line = metrics_to_json_line(no_tvd);
  CHECK(line.find("\"tvd\":null") != std::string::npos);
  CHECK(metrics_from_json_line(line) == no_tvd);
}

TEST_CASE("schema violations are rejected") {
  CHECK_THROWS_WITH_AS(metrics_from_json_line("{not json"), doctest::Contains("JSON"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(metrics_from_json_line("{\"generation\": 1}"),
                       doctest::Contains("schema"), std::runtime_error);
  CHECK_THROWS_WITH_AS(metrics_from_json_line("{\"schema\": 999, \"generation\": 1}"),
                       doctest::Contains("schema version"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      metrics_from_json_line("{\"schema\": 1, \"generation\": 1}"),
      doctest::Contains("malformed"), std::runtime_error);
}

TEST_CASE("metrics files read back with line diagnostics") {
  const std::string path = temp_path("latticegan_metrics_fixture.jsonl");
  {
    std::ofstream out(path, std::ios::trunc);
    out << metrics_to_json_line(sample_record()) << "\n";
    MetricsRecord second = sample_record();
    second.cell = 4;
    out << metrics_to_json_line(second) << "\n";
  }
  const auto records = read_metrics_file(path);
  REQUIRE(records.size() == 2);
  CHECK(records[1].cell == 4);

  {
    std::ofstream out(path, std::ios::app);
    out << "garbage\n";
  }
  CHECK_THROWS_WITH_AS(read_metrics_file(path), doctest::Contains(":3"), std::runtime_error);
}

TEST_CASE("median frechet csv reduces per generation across cells") {
  std::vector<MetricsRecord> records;
  for (std::size_t cell = 0; cell < 3; ++cell) {
    MetricsRecord r = sample_record();
    r.generation = 0;
    r.cell = cell;
    r.frechet = static_cast<double>(cell);  // 0, 1, 2 -> median 1
    records.push_back(r);
    r.generation = 1;
    r.frechet = static_cast<double>(cell * 10);  // 0, 10, 20 -> median 10
    records.push_back(r);
  }
  MetricsRecord extra = sample_record();
  extra.generation = 1;
  extra.cell = 3;
  extra.frechet = 30.0;  // 0, 10, 20, 30 -> median 15
  records.push_back(extra);

  CHECK(frechet_median_csv(records) ==
        "generation,median_frechet\n"
        "0,1\n"
        "1,15\n");
}

}  // TEST_SUITE
