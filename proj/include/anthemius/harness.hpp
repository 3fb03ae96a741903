#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "anthemius/core.hpp"
#include "anthemius/workload.hpp"

namespace anthemius {

enum class Builder { kAnthemius, kFifo };
enum class Engine { kGuided, kOptimistic };
enum class Mode { kCoupled, kDecoupled };

std::string_view to_string(Builder b);
std::string_view to_string(Engine e);
std::string_view to_string(Mode m);
Builder parse_builder(std::string_view s);
Engine parse_engine(std::string_view s);
Mode parse_mode(std::string_view s);

/// Per-run replacements for the scheduler defaults.
struct SchedulerOverrides {
  std::optional<std::uint64_t> maxgas;
  std::optional<std::size_t> lim;
  std::optional<std::size_t> maxhotr;
  std::optional<std::size_t> maxrelaxnum;
  std::optional<double> maxrelaxrate;
  std::optional<double> target_inc_rate;
  std::optional<double> target_scale;
};

struct ExperimentConfig {
  std::vector<Builder> builders{Builder::kAnthemius, Builder::kFifo};
  std::vector<Engine> engines{Engine::kGuided};
  WorkloadConfig workload = preset("dexavg");
  std::vector<std::uint32_t> worker_counts{4, 8, 12, 16, 20, 24, 28, 32};
  std::size_t num_batches = 5;
  /// Block length cap; batches are generated with this many transactions.
  std::size_t maxlen = 10'000;
  SchedulerOverrides overrides;
  double gas_per_second = 1e6;
  Mode mode = Mode::kCoupled;
  std::uint64_t seed = 0;
  /// Runs per cell; simulated columns are identical across repetitions and
  /// only the scheduling wall time is averaged.
  std::size_t repetitions = 1;
  /// Runs that need more blocks than this fail with GuardFailure.
  std::size_t max_blocks = 100;

  /// Throws std::invalid_argument.
  void validate() const;

  /// Scheduler parameters for `c` workers. Unless overridden, maxgas is
  /// maxlen * workload.gas_range.hi, so any full batch fits in one block.
  [[nodiscard]] SchedulerParams params_for(std::uint32_t c) const;
};

/// A run that exceeded max_blocks or stopped making progress.
class GuardFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunRow {
  Builder builder = Builder::kAnthemius;
  Engine engine = Engine::kGuided;
  std::string workload;
  std::uint32_t c = 1;
  Mode mode = Mode::kCoupled;
  std::uint64_t seed = 0;
  std::uint64_t blocks = 0;
  double throughput_txps = 0;
  double sched_s = 0;
  double exec_s = 0;
  double p10 = 0;
  double p25 = 0;
  double p50 = 0;
  double p75 = 0;
  double p90 = 0;

  // Not part of the CSV schema.
  std::uint64_t executed_txs = 0;
  std::uint64_t generated_txs = 0;
  std::uint64_t exec_gas = 0;
  std::uint64_t reexecutions = 0;
  /// Transactions whose gas exceeds the fully relaxed sequential limit and
  /// therefore can never be admitted by the good-block builder.
  std::uint64_t oversized_txs = 0;
  std::vector<double> latency_s;

  /// executed / exec_s, ignoring scheduling time.
  [[nodiscard]] double simulated_throughput() const;

  friend bool operator==(const RunRow&, const RunRow&) = default;
};

struct RunReport {
  std::vector<RunRow> rows;
  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Builds blocks until every transaction of the first batch has executed.
/// Throughput counts every executed transaction over the whole run.
[[nodiscard]] RunReport run_throughput(const ExperimentConfig& cfg);

/// Builds blocks until every generated transaction has executed. A
/// transaction's latency is the completion time of its block: cumulative
/// simulated execution, plus cumulative scheduling time in coupled mode.
[[nodiscard]] RunReport run_latency(const ExperimentConfig& cfg);

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample
/// (the smallest for p = 0). Returns 0 for no samples.
[[nodiscard]] double percentile(std::span<const double> samples, double p);

enum class ReportFormat { kCsv, kJson };
ReportFormat parse_format(std::string_view s);

inline constexpr std::string_view kCsvHeader =
    "builder,engine,workload,c,mode,seed,blocks,throughput_txps,sched_s,exec_s,p10,p25,p50,p75,p90";

void emit_report(const RunReport& report, std::ostream& out, ReportFormat format);
/// Writes to `path`; throws std::runtime_error when the file cannot be written.
void emit_report(const RunReport& report, const std::filesystem::path& path, ReportFormat format);

[[nodiscard]] RunReport report_from_json(std::string_view text);

}  // namespace anthemius
