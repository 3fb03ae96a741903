// Command-line driver for the throughput and latency experiments.
//
//   anthemius throughput --preset dexbursty --threads 4,8,16 --out results.csv
//   anthemius latency --workload my.cfg --builder anthemius,fifo --format json

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anthemius/harness.hpp"
#include "anthemius/workload.hpp"

namespace {

using namespace anthemius;

constexpr int kConfigError = 2;
constexpr int kGuardFailure = 3;

struct Options {
  std::string preset;
  std::string workload_file;
  std::vector<std::string> builders{"anthemius", "fifo"};
  std::vector<std::string> engines{"guided"};
  std::vector<std::uint32_t> threads{4, 8, 12, 16, 20, 24, 28, 32};
  std::size_t batches = 5;
  std::string mode = "coupled";
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "csv";
  std::size_t maxlen = 10'000;
  std::optional<std::uint64_t> maxgas;
  std::optional<std::size_t> lim;
  std::optional<std::size_t> maxhotr;
  std::optional<std::size_t> maxrelaxnum;
  std::optional<double> maxrelaxrate;
  std::optional<double> target_inc_rate;
  std::optional<double> target_scale;
  double gas_per_second = 1e6;
  std::size_t repeat = 1;
  std::size_t max_blocks = 100;
};

void add_experiment_options(CLI::App& cmd, Options& o) {
  auto* source = cmd.add_option_group("workload source");
  source->add_option("--preset", o.preset, "Workload preset")
      ->check(CLI::IsMember({"p2ptx", "dexavg", "dexbursty", "nft", "mixed"}));
  source->add_option("--workload", o.workload_file, "Workload config file (key = value)")
      ->check(CLI::ExistingFile);
  source->require_option(1);

  cmd.add_option("--builder", o.builders, "Block builders (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"anthemius", "fifo"}))
      ->capture_default_str();
  cmd.add_option("--engine", o.engines, "Execution engines (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"guided", "optimistic"}))
      ->capture_default_str();
  cmd.add_option("--threads", o.threads, "Worker counts (comma separated)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--batches", o.batches, "Number of generated batches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--mode", o.mode, "Count scheduling time (coupled) or not (decoupled)")
      ->check(CLI::IsMember({"coupled", "decoupled"}))
      ->capture_default_str();
  cmd.add_option("--seed", o.seed, "Workload seed")->capture_default_str();
  cmd.add_option("--out", o.out, "Output path, '-' for stdout")->capture_default_str();
  cmd.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--maxlen", o.maxlen, "Block length cap and batch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--maxgas", o.maxgas, "Block gas budget (default maxlen * max tx gas)");
  cmd.add_option("--lim", o.lim, "Hot-read free zone at both block ends (default maxlen/10)");
  cmd.add_option("--maxhotr", o.maxhotr, "Hot reads that defer a transaction");
  cmd.add_option("--maxrelaxnum", o.maxrelaxnum, "Relaxations allowed per block");
  cmd.add_option("--maxrelaxrate", o.maxrelaxrate, "Largest relaxation factor");
  cmd.add_option("--target-inc-rate", o.target_inc_rate, "Inclusion rate that avoids relaxation");
  cmd.add_option("--target-scale", o.target_scale, "Relaxation multiplier (default 2*maxlen/c)");
  cmd.add_option("--gas-per-second", o.gas_per_second, "Simulated execution speed")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--repeat", o.repeat, "Runs per cell; scheduling wall time is averaged")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--max-blocks", o.max_blocks, "Fail a run that needs more blocks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig cfg;
  cfg.workload = o.workload_file.empty() ? preset(o.preset) : load_workload_config(o.workload_file);
  cfg.builders.clear();
  for (const auto& b : o.builders) cfg.builders.push_back(parse_builder(b));
  cfg.engines.clear();
  for (const auto& e : o.engines) cfg.engines.push_back(parse_engine(e));
  cfg.worker_counts = o.threads;
  cfg.num_batches = o.batches;
  cfg.maxlen = o.maxlen;
  cfg.mode = parse_mode(o.mode);
  cfg.seed = o.seed;
  cfg.gas_per_second = o.gas_per_second;
  cfg.repetitions = o.repeat;
  cfg.max_blocks = o.max_blocks;
  cfg.overrides.maxgas = o.maxgas;
  cfg.overrides.lim = o.lim;
  cfg.overrides.maxhotr = o.maxhotr;
  cfg.overrides.maxrelaxnum = o.maxrelaxnum;
  cfg.overrides.maxrelaxrate = o.maxrelaxrate;
  cfg.overrides.target_inc_rate = o.target_inc_rate;
  cfg.overrides.target_scale = o.target_scale;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependency-aware block construction experiments"};
  app.require_subcommand(1);

  Options throughput_opts;
  Options latency_opts;
  auto* throughput = app.add_subcommand("throughput", "Run until the first batch has executed");
  auto* latency = app.add_subcommand("latency", "Run until every batch has executed");
  add_experiment_options(*throughput, throughput_opts);
  add_experiment_options(*latency, latency_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  const bool is_latency = latency->parsed();
  const Options& opts = is_latency ? latency_opts : throughput_opts;

  ExperimentConfig cfg;
  ReportFormat format{};
  try {
    cfg = to_config(opts);
    format = parse_format(opts.format);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const RunReport report = is_latency ? run_latency(cfg) : run_throughput(cfg);
    if (opts.out == "-") {
      emit_report(report, std::cout, format);
    } else {
      emit_report(report, std::filesystem::path(opts.out), format);
    }
  } catch (const GuardFailure& e) {
    std::cerr << "run aborted: " << e.what() << '\n';
    return kGuardFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
