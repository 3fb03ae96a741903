#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "anthemius/execsim.hpp"
#include "anthemius/harness.hpp"
#include "anthemius/scheduler.hpp"
#include "anthemius/workload.hpp"

namespace py = pybind11;
using namespace anthemius;

namespace {

std::vector<ResourceId> to_resources(const std::vector<std::uint64_t>& ids) {
  std::vector<ResourceId> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back({id});
  return out;
}

std::vector<std::uint64_t> to_ids(std::span<const ResourceId> rs) {
  std::vector<std::uint64_t> out;
  for (auto r : rs) out.push_back(r.id);
  return out;
}

Block to_block(const std::vector<Transaction>& txs) {
  Block b;
  for (const auto& tx : txs) b.append(tx);
  return b;
}

std::string_view reason_name(SkipReason r) {
  switch (r) {
    case SkipReason::kSkippedClient: return "skipped_client";
    case SkipReason::kHotReads: return "hot_reads";
    case SkipReason::kChainLimit: return "chain_limit";
    case SkipReason::kBlockGas: return "block_gas";
  }
  return "unknown";
}

py::dict schedule(const std::vector<Transaction>& txs, std::uint64_t seqlimit,
                  const SchedulerParams& params) {
  Block block;
  ResourceMap resmap;
  std::set<ClientId> skipped;
  SchedulingReport report;
  const auto rate = schedule_batch(block, txs, Gas{seqlimit}, params, resmap, skipped, &report);

  py::dict out;
  std::vector<TxId> ids;
  for (const auto& tx : block.txs()) ids.push_back(tx.tx_id());
  out["block"] = ids;
  out["included"] = rate.included;
  out["batch_size"] = rate.batch_size;
  out["rate"] = rate.value();
  std::vector<std::uint64_t> clients;
  for (auto c : skipped) clients.push_back(c.id);
  out["skipped_clients"] = clients;
  std::map<std::uint64_t, std::uint64_t> chains;
  for (const auto& [r, g] : resmap.entries()) chains[r.id] = g.value();
  out["resmap"] = chains;
  out["resmap_accesses"] = report.resmap_accesses;
  std::vector<std::pair<TxId, std::string>> skips;
  for (const auto& s : report.skips) skips.emplace_back(s.tx_id, std::string(reason_name(s.reason)));
  out["skips"] = skips;
  return out;
}

std::vector<py::dict> run(bool latency, const std::string& workload_text,
                          const std::vector<std::string>& builders,
                          const std::vector<std::string>& engines,
                          const std::vector<std::uint32_t>& threads, std::size_t batches,
                          std::size_t maxlen, const std::string& mode, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.workload = parse_workload_config(workload_text);
  cfg.builders.clear();
  for (const auto& b : builders) cfg.builders.push_back(parse_builder(b));
  cfg.engines.clear();
  for (const auto& e : engines) cfg.engines.push_back(parse_engine(e));
  cfg.worker_counts = threads;
  cfg.num_batches = batches;
  cfg.maxlen = maxlen;
  cfg.mode = parse_mode(mode);
  cfg.seed = seed;

  RunReport report;
  {
    py::gil_scoped_release release;
    report = latency ? run_latency(cfg) : run_throughput(cfg);
  }
  std::vector<py::dict> rows;
  for (const RunRow& r : report.rows) {
    py::dict d;
    d["builder"] = std::string(to_string(r.builder));
    d["engine"] = std::string(to_string(r.engine));
    d["workload"] = r.workload;
    d["c"] = r.c;
    d["mode"] = std::string(to_string(r.mode));
    d["seed"] = r.seed;
    d["blocks"] = r.blocks;
    d["throughput_txps"] = r.throughput_txps;
    d["sched_s"] = r.sched_s;
    d["exec_s"] = r.exec_s;
    d["p10"] = r.p10;
    d["p25"] = r.p25;
    d["p50"] = r.p50;
    d["p75"] = r.p75;
    d["p90"] = r.p90;
    d["executed_txs"] = r.executed_txs;
    d["reexecutions"] = r.reexecutions;
    rows.push_back(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_anthemius, m) {
  m.doc() = "Dependency-aware block construction and execution simulators";

  py::class_<Transaction>(m, "Transaction")
      .def(py::init([](TxId id, std::uint64_t sender, const std::vector<std::uint64_t>& reads,
                       const std::vector<std::uint64_t>& writes, std::uint64_t gas) {
             return Transaction(id, ClientId{sender}, to_resources(reads), to_resources(writes),
                                Gas{gas});
           }),
           py::arg("tx_id"), py::arg("sender"), py::arg("reads"), py::arg("writes"),
           py::arg("gas"))
      .def_property_readonly("tx_id", &Transaction::tx_id)
      .def_property_readonly("sender", [](const Transaction& t) { return t.sender().id; })
      .def_property_readonly("reads", [](const Transaction& t) { return to_ids(t.read_set()); })
      .def_property_readonly("writes", [](const Transaction& t) { return to_ids(t.write_set()); })
      .def_property_readonly("gas", [](const Transaction& t) { return t.gas().value(); })
      .def("__eq__", [](const Transaction& a, const Transaction& b) { return a == b; })
      .def("__repr__", [](const Transaction& t) {
        return "Transaction(" + std::to_string(t.tx_id()) + ", gas=" +
               std::to_string(t.gas().value()) + ")";
      });

  m.def("conflicts", py::overload_cast<const Transaction&, const Transaction&>(&conflicts));

  py::enum_<ChainUpdate>(m, "ChainUpdate")
      .value("INCLUDE_WRITER", ChainUpdate::kIncludeWriter)
      .value("LITERAL", ChainUpdate::kLiteral);
  py::enum_<HotReadRule>(m, "HotReadRule")
      .value("MIDDLE_OF_BLOCK", HotReadRule::kMiddleOfBlock)
      .value("LITERAL_DISJUNCTION", HotReadRule::kLiteralDisjunction);

  py::class_<SchedulerParams>(m, "SchedulerParams")
      .def_static("defaults",
                  [](std::uint64_t maxgas, std::uint32_t c, std::size_t maxlen,
                     std::size_t batch_capacity) {
                    return SchedulerParams::defaults(Gas{maxgas}, c, maxlen, batch_capacity);
                  },
                  py::arg("maxgas"), py::arg("c"), py::arg("maxlen") = 10'000,
                  py::arg("batch_capacity") = 0)
      .def_property("maxgas", [](const SchedulerParams& p) { return p.maxgas.value(); },
                    [](SchedulerParams& p, std::uint64_t g) { p.maxgas = Gas{g}; })
      .def_readwrite("c", &SchedulerParams::c)
      .def_readwrite("maxlen", &SchedulerParams::maxlen)
      .def_readwrite("lim", &SchedulerParams::lim)
      .def_readwrite("maxhotr", &SchedulerParams::maxhotr)
      .def_readwrite("maxrelaxnum", &SchedulerParams::maxrelaxnum)
      .def_readwrite("maxrelaxrate", &SchedulerParams::maxrelaxrate)
      .def_readwrite("target_inc_rate", &SchedulerParams::target_inc_rate)
      .def_readwrite("target_scale", &SchedulerParams::target_scale)
      .def_readwrite("chain_update", &SchedulerParams::chain_update)
      .def_readwrite("hot_read_rule", &SchedulerParams::hot_read_rule)
      .def("validate", &SchedulerParams::validate);

  m.def("schedule_batch", &schedule, py::arg("txs"), py::arg("seqlimit"), py::arg("params"),
        "Schedule one batch into an empty block; returns the block ids and the scheduler state.");

  py::class_<ExecutionReport>(m, "ExecutionReport")
      .def_property_readonly("makespan", [](const ExecutionReport& r) { return r.makespan.value(); })
      .def_property_readonly("total_work",
                             [](const ExecutionReport& r) { return r.total_work.value(); })
      .def_readonly("reexecutions", &ExecutionReport::reexecutions)
      .def_readonly("workers_used", &ExecutionReport::workers_used)
      .def_property_readonly("finish_time", [](const ExecutionReport& r) {
        std::vector<std::uint64_t> out;
        for (auto g : r.finish_time) out.push_back(g.value());
        return out;
      });

  m.def("critical_path",
        [](const std::vector<Transaction>& txs) { return critical_path(to_block(txs)).value(); });
  m.def("guided_makespan", [](const std::vector<Transaction>& txs, std::uint32_t c) {
    return guided_makespan(to_block(txs), c);
  });
  m.def("optimistic_execute", [](const std::vector<Transaction>& txs, std::uint32_t c) {
    return optimistic_execute(to_block(txs), c);
  });
  m.def("brute_force_min_makespan", [](const std::vector<Transaction>& txs, std::uint32_t c) {
    return brute_force_min_makespan(to_block(txs), c).value();
  });

  m.def("preset_names", [] {
    return std::vector<std::string>(kPresetNames.begin(), kPresetNames.end());
  });
  m.def("preset_config", [](const std::string& name) { return to_config_text(preset(name)); },
        "Workload preset as key = value text.");
  m.def("generate_batch",
        [](const std::string& config_text, std::size_t size, std::uint64_t batch_index) {
          return generate_batch(parse_workload_config(config_text), size, batch_index).txs;
        },
        py::arg("config"), py::arg("size"), py::arg("batch_index") = 0);

  const auto bind_run = [&m](const char* name, bool latency) {
    m.def(name,
          [latency](const std::string& workload, const std::vector<std::string>& builders,
                    const std::vector<std::string>& engines,
                    const std::vector<std::uint32_t>& threads, std::size_t batches,
                    std::size_t maxlen, const std::string& mode, std::uint64_t seed) {
            return run(latency, workload, builders, engines, threads, batches, maxlen, mode, seed);
          },
          py::arg("workload"), py::arg("builders") = std::vector<std::string>{"anthemius", "fifo"},
          py::arg("engines") = std::vector<std::string>{"guided"},
          py::arg("threads") = std::vector<std::uint32_t>{16}, py::arg("batches") = 5,
          py::arg("maxlen") = 1000, py::arg("mode") = "decoupled", py::arg("seed") = 0);
  };
  bind_run("run_throughput", false);
  bind_run("run_latency", true);

  m.attr("CSV_HEADER") = std::string(kCsvHeader);
  py::register_exception<GuardFailure>(m, "GuardFailure", PyExc_RuntimeError);
}
