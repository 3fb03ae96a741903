#pragma once

#include <cstdint>
#include <vector>

#include "anthemius/core.hpp"

namespace anthemius {

/// Outcome of simulating a block on c workers. Times are in gas units
/// (1 gas = 1 tick); finish_time is indexed by block position.
struct ExecutionReport {
  Gas makespan;
  Gas total_work;
  std::uint64_t reexecutions = 0;
  std::vector<Gas> finish_time;
  /// Worker count whose schedule was reported (guided engine may use fewer than c).
  std::uint32_t workers_used = 0;

  friend bool operator==(const ExecutionReport&, const ExecutionReport&) = default;
};

/// Immediate conflict predecessors of each block position, derived per
/// resource: the last earlier writer of anything read or written, plus the
/// readers since that writer for anything written. Waiting for these is
/// equivalent to waiting for every earlier conflicting transaction.
class DependencyGraph {
 public:
  explicit DependencyGraph(const Block& block);

  [[nodiscard]] std::size_t size() const { return offsets_.size() - 1; }
  [[nodiscard]] std::span<const std::uint32_t> predecessors(std::size_t j) const {
    return {preds_.data() + offsets_[j], preds_.data() + offsets_[j + 1]};
  }
  [[nodiscard]] std::span<const std::uint32_t> successors(std::size_t i) const {
    return {succs_.data() + succ_offsets_[i], succs_.data() + succ_offsets_[i + 1]};
  }

 private:
  std::vector<std::uint32_t> preds_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> succs_;
  std::vector<std::size_t> succ_offsets_;
};

/// Heaviest conflict-ordered chain of the block (0 for an empty block).
[[nodiscard]] Gas critical_path(const Block& block);

/// Event-driven list schedule on exactly `workers` workers: whenever a
/// worker is idle it takes the lowest-index transaction whose conflicting
/// predecessors have all finished. Idle workers are served lowest index first.
[[nodiscard]] ExecutionReport list_schedule(const Block& block, std::uint32_t workers);

/// Speculative (Block-STM-like) execution on exactly `workers` workers.
/// Idle workers take the lowest-index runnable transaction without looking
/// at dependencies. At finish, an attempt is valid only if every earlier
/// conflicting transaction had already finished a valid attempt before this
/// one started; otherwise it aborts and reruns once its blockers have all
/// committed. Committed attempts are never invalidated later, so each
/// transaction aborts at most once. Every attempt is charged full gas.
[[nodiscard]] ExecutionReport speculative_schedule(const Block& block, std::uint32_t workers);

/// Dependency-guided engine with c workers. Knowing the conflict graph up
/// front, it can follow either dispatch policy above with any number of
/// workers in [1, c] and never pays for aborted attempts; it reports the
/// best of those schedules (ties prefer the list schedule, then more workers).
[[nodiscard]] ExecutionReport guided_makespan(const Block& block, std::uint32_t c);

/// Optimistic engine: speculative_schedule on all c workers.
[[nodiscard]] ExecutionReport optimistic_execute(const Block& block, std::uint32_t c);

/// Exact minimum makespan over non-preemptive precedence-respecting
/// schedules. Exponential; limited to 8 transactions and 3 workers
/// (std::invalid_argument beyond that).
[[nodiscard]] Gas brute_force_min_makespan(const Block& block, std::uint32_t c);

}  // namespace anthemius
