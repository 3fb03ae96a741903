#include "anthemius/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "anthemius/execsim.hpp"
#include "anthemius/mempool.hpp"
#include "anthemius/scheduler.hpp"

namespace anthemius {

namespace {

using json = nlohmann::json;

enum class StopWhen { kFirstBatchExecuted, kAllExecuted };

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

RunRow run_cell(const ExperimentConfig& cfg, Builder builder, Engine engine, std::uint32_t c,
                StopWhen stop) {
  const SchedulerParams params = cfg.params_for(c);
  WorkloadConfig workload = cfg.workload;
  workload.seed = cfg.seed;

  RunRow row;
  row.builder = builder;
  row.engine = engine;
  row.workload = workload.name;
  row.c = c;
  row.mode = cfg.mode;
  row.seed = cfg.seed;

  // A full inclusion rate gives the largest relaxation factor.
  const Gas max_seqlimit =
      std::max(params.base_seqlimit(), relaxed_seqlimit(params, InclusionRate{1, 1}));

  double sched_total = 0;
  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    Mempool pool(cfg.maxlen);
    std::unordered_set<TxId> targets;
    std::uint64_t generated = 0;
    std::uint64_t oversized = 0;
    for (std::size_t b = 0; b < cfg.num_batches; ++b) {
      Batch batch = generate_batch(workload, cfg.maxlen, b);
      for (const auto& tx : batch.txs) {
        if (b == 0 || stop == StopWhen::kAllExecuted) targets.insert(tx.tx_id());
        if (builder == Builder::kAnthemius && tx.gas() > max_seqlimit) ++oversized;
      }
      generated += batch.txs.size();
      pool.push(std::move(batch.txs));
    }

    std::uint64_t sim_gas = 0;
    std::uint64_t executed = 0;
    std::uint64_t blocks = 0;
    std::uint64_t reexecutions = 0;
    double sched_s = 0;
    std::vector<double> latencies;
    latencies.reserve(targets.size());

    while (!targets.empty()) {
      if (blocks >= cfg.max_blocks) {
        throw GuardFailure("run exceeded " + std::to_string(cfg.max_blocks) + " blocks with " +
                           std::to_string(targets.size()) + " target transactions pending");
      }
      const auto t0 = std::chrono::steady_clock::now();
      Block block = builder == Builder::kAnthemius ? create_good_block(pool, params).block
                                                   : fifo_block(pool, params);
      const auto t1 = std::chrono::steady_clock::now();
      sched_s += std::chrono::duration<double>(t1 - t0).count();
      if (block.empty()) {
        throw GuardFailure("no transaction could be scheduled; " + std::to_string(targets.size()) +
                           " target transactions starve");
      }
      const ExecutionReport exec =
          engine == Engine::kGuided ? guided_makespan(block, c) : optimistic_execute(block, c);
      sim_gas += exec.makespan.value();
      reexecutions += exec.reexecutions;
      ++blocks;

      const double done_at = static_cast<double>(sim_gas) / cfg.gas_per_second +
                             (cfg.mode == Mode::kCoupled ? sched_s : 0.0);
      for (const auto& tx : block.txs()) {
        ++executed;
        if (targets.erase(tx.tx_id()) == 1) latencies.push_back(done_at);
      }
    }

    sched_total += sched_s;
    if (rep == 0) {
      row.blocks = blocks;
      row.executed_txs = executed;
      row.generated_txs = generated;
      row.exec_gas = sim_gas;
      row.reexecutions = reexecutions;
      row.oversized_txs = oversized;
      row.latency_s = std::move(latencies);
    }
  }

  row.sched_s = sched_total / static_cast<double>(cfg.repetitions);
  row.exec_s = static_cast<double>(row.exec_gas) / cfg.gas_per_second;
  const double total = row.exec_s + (cfg.mode == Mode::kCoupled ? row.sched_s : 0.0);
  row.throughput_txps = total > 0 ? static_cast<double>(row.executed_txs) / total : 0.0;

  // Coupled latencies carry wall-clock time from the first repetition only.
  std::vector<double> sorted = row.latency_s;
  std::sort(sorted.begin(), sorted.end());
  row.p10 = percentile(sorted, 10);
  row.p25 = percentile(sorted, 25);
  row.p50 = percentile(sorted, 50);
  row.p75 = percentile(sorted, 75);
  row.p90 = percentile(sorted, 90);
  return row;
}

RunReport run(const ExperimentConfig& cfg, StopWhen stop) {
  cfg.validate();
  RunReport report;
  for (Builder builder : cfg.builders) {
    for (Engine engine : cfg.engines) {
      for (std::uint32_t c : cfg.worker_counts) {
        report.rows.push_back(run_cell(cfg, builder, engine, c, stop));
      }
    }
  }
  return report;
}

json row_to_json(const RunRow& r) {
  return json{{"builder", to_string(r.builder)},
              {"engine", to_string(r.engine)},
              {"workload", r.workload},
              {"c", r.c},
              {"mode", to_string(r.mode)},
              {"seed", r.seed},
              {"blocks", r.blocks},
              {"throughput_txps", r.throughput_txps},
              {"sched_s", r.sched_s},
              {"exec_s", r.exec_s},
              {"p10", r.p10},
              {"p25", r.p25},
              {"p50", r.p50},
              {"p75", r.p75},
              {"p90", r.p90},
              {"executed_txs", r.executed_txs},
              {"generated_txs", r.generated_txs},
              {"exec_gas", r.exec_gas},
              {"reexecutions", r.reexecutions},
              {"oversized_txs", r.oversized_txs},
              {"latency_s", r.latency_s}};
}

RunRow row_from_json(const json& j) {
  RunRow r;
  r.builder = parse_builder(j.at("builder").get<std::string>());
  r.engine = parse_engine(j.at("engine").get<std::string>());
  r.workload = j.at("workload").get<std::string>();
  r.c = j.at("c").get<std::uint32_t>();
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.blocks = j.at("blocks").get<std::uint64_t>();
  r.throughput_txps = j.at("throughput_txps").get<double>();
  r.sched_s = j.at("sched_s").get<double>();
  r.exec_s = j.at("exec_s").get<double>();
  r.p10 = j.at("p10").get<double>();
  r.p25 = j.at("p25").get<double>();
  r.p50 = j.at("p50").get<double>();
  r.p75 = j.at("p75").get<double>();
  r.p90 = j.at("p90").get<double>();
  r.executed_txs = j.at("executed_txs").get<std::uint64_t>();
  r.generated_txs = j.at("generated_txs").get<std::uint64_t>();
  r.exec_gas = j.at("exec_gas").get<std::uint64_t>();
  r.reexecutions = j.at("reexecutions").get<std::uint64_t>();
  r.oversized_txs = j.at("oversized_txs").get<std::uint64_t>();
  r.latency_s = j.at("latency_s").get<std::vector<double>>();
  return r;
}

}  // namespace

std::string_view to_string(Builder b) { return b == Builder::kAnthemius ? "anthemius" : "fifo"; }
std::string_view to_string(Engine e) { return e == Engine::kGuided ? "guided" : "optimistic"; }
std::string_view to_string(Mode m) { return m == Mode::kCoupled ? "coupled" : "decoupled"; }

Builder parse_builder(std::string_view s) {
  if (s == "anthemius") return Builder::kAnthemius;
  if (s == "fifo") return Builder::kFifo;
  throw std::invalid_argument("unknown builder '" + std::string(s) + "'");
}

Engine parse_engine(std::string_view s) {
  if (s == "guided") return Engine::kGuided;
  if (s == "optimistic") return Engine::kOptimistic;
  throw std::invalid_argument("unknown engine '" + std::string(s) + "'");
}

Mode parse_mode(std::string_view s) {
  if (s == "coupled") return Mode::kCoupled;
  if (s == "decoupled") return Mode::kDecoupled;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

ReportFormat parse_format(std::string_view s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
  if (builders.empty()) throw std::invalid_argument("at least one builder is required");
  if (engines.empty()) throw std::invalid_argument("at least one engine is required");
  if (worker_counts.empty()) throw std::invalid_argument("worker_counts must not be empty");
  for (auto c : worker_counts) {
    if (c < 1) throw std::invalid_argument("worker counts must be >= 1");
  }
  if (num_batches < 1) throw std::invalid_argument("num_batches must be >= 1");
  if (maxlen < 1) throw std::invalid_argument("maxlen must be >= 1");
  if (!(gas_per_second > 0) || !std::isfinite(gas_per_second)) {
    throw std::invalid_argument("gas_per_second must be positive");
  }
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (max_blocks < 1) throw std::invalid_argument("max_blocks must be >= 1");
  workload.validate();
  for (auto c : worker_counts) params_for(c).validate();
}

SchedulerParams ExperimentConfig::params_for(std::uint32_t c) const {
  const Gas maxgas{overrides.maxgas.value_or(Gas{workload.gas_range.hi}.times(maxlen).value())};
  SchedulerParams p = SchedulerParams::defaults(maxgas, c, maxlen, maxlen);
  if (overrides.lim) p.lim = *overrides.lim;
  if (overrides.maxhotr) p.maxhotr = *overrides.maxhotr;
  if (overrides.maxrelaxnum) p.maxrelaxnum = *overrides.maxrelaxnum;
  if (overrides.maxrelaxrate) p.maxrelaxrate = *overrides.maxrelaxrate;
  if (overrides.target_inc_rate) p.target_inc_rate = *overrides.target_inc_rate;
  if (overrides.target_scale) p.target_scale = *overrides.target_scale;
  return p;
}

double RunRow::simulated_throughput() const {
  return exec_s > 0 ? static_cast<double>(executed_txs) / exec_s : 0.0;
}

RunReport run_throughput(const ExperimentConfig& cfg) {
  return run(cfg, StopWhen::kFirstBatchExecuted);
}

RunReport run_latency(const ExperimentConfig& cfg) { return run(cfg, StopWhen::kAllExecuted); }

double percentile(std::span<const double> samples, double p) {
  if (samples.empty()) return 0.0;
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must be in [0, 100]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  return sorted[rank == 0 ? 0 : rank - 1];
}

void emit_report(const RunReport& report, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(row_to_json(r));
    out << json{{"rows", rows}}.dump(2) << '\n';
  } else {
    out << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
      out << to_string(r.builder) << ',' << to_string(r.engine) << ',' << r.workload << ','
          << r.c << ',' << to_string(r.mode) << ',' << r.seed << ',' << r.blocks << ','
          << format_double(r.throughput_txps) << ',' << format_double(r.sched_s) << ','
          << format_double(r.exec_s) << ',' << format_double(r.p10) << ','
          << format_double(r.p25) << ',' << format_double(r.p50) << ','
          << format_double(r.p75) << ',' << format_double(r.p90) << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed to write report");
}

void emit_report(const RunReport& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_report(report, out, format);
  out.close();
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

RunReport report_from_json(std::string_view text) {
  const json doc = json::parse(text);
  RunReport report;
  for (const auto& row : doc.at("rows")) report.rows.push_back(row_from_json(row));
  return report;
}

}  // namespace anthemius
