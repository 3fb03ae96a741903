#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "anthemius/harness.hpp"

using namespace anthemius;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

ExperimentConfig small_config(std::string_view workload) {
  ExperimentConfig cfg;
  cfg.workload = preset(workload);
  cfg.maxlen = 200;
  cfg.num_batches = 3;
  cfg.worker_counts = {2, 8};
  cfg.mode = Mode::kDecoupled;
  return cfg;
}

// Everything except wall-clock scheduling time.
void check_same_simulation(const RunReport& a, const RunReport& b) {
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    RunRow x = a.rows[i];
    RunRow y = b.rows[i];
    x.sched_s = y.sched_s = 0;
    CHECK(x == y);
  }
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("names parse and print") {
  CHECK(parse_builder(to_string(Builder::kFifo)) == Builder::kFifo);
  CHECK(parse_engine(to_string(Engine::kOptimistic)) == Engine::kOptimistic);
  CHECK(parse_mode(to_string(Mode::kDecoupled)) == Mode::kDecoupled);
  CHECK(parse_format("json") == ReportFormat::kJson);
  CHECK_THROWS_AS((void)parse_builder("greedy"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_engine("magic"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_mode("both"), std::invalid_argument);
  CHECK_THROWS_AS((void)parse_format("xml"), std::invalid_argument);
}

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> xs(100);
  std::iota(xs.begin(), xs.end(), 1.0);
  std::reverse(xs.begin(), xs.end());
  CHECK(percentile(xs, 50) == 50);
  CHECK(percentile(xs, 90) == 90);
  CHECK(percentile(xs, 10) == 10);
  CHECK(percentile(xs, 0) == 1);
  CHECK(percentile(xs, 100) == 100);
  CHECK(percentile(std::vector<double>{}, 50) == 0);
  CHECK(percentile(std::vector<double>{4.0}, 25) == 4.0);
  CHECK_THROWS_AS((void)percentile(xs, 101), std::invalid_argument);
}

TEST_CASE("independent equal-gas transactions pack perfectly under fifo") {
  ExperimentConfig cfg;
  cfg.workload.reads_per_tx = {0, 0};
  cfg.workload.writes_per_tx = {0, 0};
  cfg.workload.gas_range = {5, 5};
  cfg.builders = {Builder::kFifo};
  cfg.worker_counts = {4};
  cfg.num_batches = 1;
  cfg.maxlen = 10'000;
  cfg.gas_per_second = 2'000;
  cfg.mode = Mode::kDecoupled;
  const RunRow row = run_throughput(cfg).rows.at(0);
  const double makespan = 10'000.0 * 5 / 4;
  CHECK(row.blocks == 1);
  CHECK(row.exec_gas == 12'500);
  CHECK(row.throughput_txps == doctest::Approx(10'000 / (makespan / 2'000)));
  CHECK(row.simulated_throughput() == doctest::Approx(row.throughput_txps));
}

TEST_CASE("a single block gives every transaction the same latency") {
  ExperimentConfig cfg = small_config("p2ptx");
  cfg.num_batches = 1;
  cfg.worker_counts = {4};
  for (const RunRow& row : run_latency(cfg).rows) {
    CAPTURE(to_string(row.builder));
    REQUIRE(row.blocks == 1);
    REQUIRE(row.latency_s.size() == 200);
    const double expected = static_cast<double>(row.exec_gas) / cfg.gas_per_second;
    for (double l : row.latency_s) REQUIRE(l == expected);
    CHECK(row.p10 == expected);
    CHECK(row.p90 == expected);
  }
}

TEST_CASE("coupled mode adds scheduling time") {
  ExperimentConfig cfg = small_config("dexavg");
  cfg.builders = {Builder::kAnthemius};
  const auto decoupled = run_throughput(cfg);
  cfg.mode = Mode::kCoupled;
  const auto coupled = run_throughput(cfg);
  for (std::size_t i = 0; i < coupled.rows.size(); ++i) {
    CHECK(decoupled.rows[i].throughput_txps >= coupled.rows[i].throughput_txps);
    CHECK(coupled.rows[i].sched_s > 0);
    CHECK(coupled.rows[i].exec_gas == decoupled.rows[i].exec_gas);
  }
}

TEST_CASE("runs conserve transactions and finish the target batches") {
  for (auto name : kPresetNames) {
    CAPTURE(name);
    const ExperimentConfig cfg = small_config(name);
    for (const RunRow& row : run_throughput(cfg).rows) {
      CHECK(row.executed_txs <= row.generated_txs);
      CHECK(row.latency_s.size() == cfg.maxlen);
      CHECK(row.executed_txs >= cfg.maxlen);
    }
    for (const RunRow& row : run_latency(cfg).rows) {
      CHECK(row.executed_txs == row.generated_txs);
      CHECK(row.latency_s.size() == row.generated_txs);
      CHECK(row.p10 <= row.p25);
      CHECK(row.p25 <= row.p50);
      CHECK(row.p50 <= row.p75);
      CHECK(row.p75 <= row.p90);
    }
  }
}

TEST_CASE("simulated columns are reproducible") {
  ExperimentConfig cfg = small_config("mixed");
  cfg.engines = {Engine::kGuided, Engine::kOptimistic};
  check_same_simulation(run_throughput(cfg), run_throughput(cfg));
  check_same_simulation(run_latency(cfg), run_latency(cfg));
}

TEST_CASE("fifo execution time never grows with more workers") {
  ExperimentConfig cfg = small_config("dexbursty");
  cfg.builders = {Builder::kFifo};
  cfg.worker_counts = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32};
  const auto rows = run_throughput(cfg).rows;
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].exec_gas <= rows[i - 1].exec_gas);
}

TEST_CASE("guards") {
  ExperimentConfig cfg = small_config("nft");
  cfg.max_blocks = 1;
  CHECK_THROWS_AS((void)run_latency(cfg), GuardFailure);

  // Transactions heavier than any relaxed limit can never be scheduled.
  cfg = small_config("p2ptx");
  cfg.builders = {Builder::kAnthemius};
  cfg.overrides.maxgas = 40;
  cfg.overrides.maxrelaxrate = 1;
  CHECK_THROWS_AS((void)run_throughput(cfg), GuardFailure);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config("p2ptx");
  cfg.worker_counts = {};
  CHECK_THROWS_AS((void)cfg.validate(), std::invalid_argument);
  cfg = small_config("p2ptx");
  cfg.gas_per_second = 0;
  CHECK_THROWS_AS((void)cfg.validate(), std::invalid_argument);
  cfg = small_config("p2ptx");
  cfg.overrides.lim = cfg.maxlen;
  CHECK_THROWS_AS((void)cfg.validate(), std::invalid_argument);
  cfg = small_config("p2ptx");
  CHECK(cfg.params_for(4).maxgas.value() == cfg.maxlen * cfg.workload.gas_range.hi);
  cfg.overrides.maxhotr = 2;
  CHECK(cfg.params_for(4).maxhotr == 2);
}

TEST_CASE("empty report is a bare CSV header") {
  std::ostringstream out;
  emit_report(RunReport{}, out, ReportFormat::kCsv);
  CHECK(out.str() == std::string(kCsvHeader) + "\n");
}

TEST_CASE("CSV rows follow the schema") {
  ExperimentConfig cfg = small_config("dexavg");
  std::ostringstream out;
  emit_report(run_throughput(cfg), out, ReportFormat::kCsv);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  CHECK(header == std::vector<std::string>{"builder", "engine", "workload", "c", "mode", "seed",
                                           "blocks", "throughput_txps", "sched_s", "exec_s",
                                           "p10", "p25", "p50", "p75", "p90"});
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = split(line);
    REQUIRE(f.size() == header.size());
    CHECK((f[0] == "anthemius" || f[0] == "fifo"));
    CHECK(f[1] == "guided");
    CHECK(f[2] == "dexavg");
    CHECK(f[4] == "decoupled");
    for (std::size_t i = 7; i < f.size(); ++i) CHECK_NOTHROW((void)std::stod(f[i]));
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("JSON round-trips exactly") {
  ExperimentConfig cfg = small_config("nft");
  cfg.mode = Mode::kCoupled;
  const RunReport report = run_latency(cfg);
  std::ostringstream out;
  emit_report(report, out, ReportFormat::kJson);
  CHECK(report_from_json(out.str()) == report);
  std::ostringstream empty;
  emit_report(RunReport{}, empty, ReportFormat::kJson);
  CHECK(report_from_json(empty.str()).rows.empty());
}

TEST_CASE("reports write to files") {
  const auto path = std::filesystem::temp_directory_path() / "anthemius_report_test.csv";
  emit_report(RunReport{}, path, ReportFormat::kCsv);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == kCsvHeader);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)emit_report(RunReport{}, std::filesystem::path("/nonexistent/dir/x.csv"),
                              ReportFormat::kCsv),
                  std::runtime_error);
}

}
