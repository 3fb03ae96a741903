#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "anthemius/core.hpp"

namespace anthemius {

/// Fraction of a batch admitted in one pass. An empty batch reads as 1.
struct InclusionRate {
  std::uint64_t included = 0;
  std::uint64_t batch_size = 0;

  [[nodiscard]] double value() const {
    return batch_size == 0 ? 1.0
                           : static_cast<double>(included) / static_cast<double>(batch_size);
  }
  [[nodiscard]] bool is_zero() const { return batch_size != 0 && included == 0; }
  friend bool operator==(const InclusionRate&, const InclusionRate&) = default;
};

/// Source of batches for block construction. Transactions not placed in a
/// block are handed back through requeue_front, in their original order.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual Batch poll_batch() = 0;
  virtual void requeue_front(std::vector<Transaction> txs) = 0;
};

struct ReadAnalysis {
  Gas chain_cost;
  std::size_t hot_resources = 0;
};

/// One admitted transaction, with the limits in force when it was admitted.
struct Admission {
  TxId tx_id = 0;
  Gas chain_cost;
  Gas seqlimit;
  Gas block_gas_after;
};

enum class SkipReason { kSkippedClient, kHotReads, kChainLimit, kBlockGas };

struct Skip {
  TxId tx_id = 0;
  SkipReason reason = SkipReason::kSkippedClient;
};

struct SchedulingReport {
  std::uint64_t included = 0;
  std::uint64_t skipped = 0;
  std::uint64_t relaxations_used = 0;
  Gas final_seqlimit;
  std::uint64_t resmap_accesses = 0;
  std::vector<InclusionRate> per_batch_inclusion_rates;
  std::set<ClientId> skipped_clients;
  std::vector<Admission> admissions;
  std::vector<Skip> skips;
};

/// Longest recorded chain among the read set, and how many of those reads
/// exceed the block's per-core share floor(block_gas / c).
[[nodiscard]] ReadAnalysis analyze_reads(const Transaction& tx, const ResourceMap& resmap,
                                         Gas block_gas, std::uint32_t c);

/// Offers every transaction of `batch`, in order, to `block`. Scheduling of
/// the batch stops once the block holds params.maxlen transactions; the
/// remaining transactions are neither included nor counted as skipped.
/// When `report` is given, counters, admissions and skips are appended to it.
InclusionRate schedule_batch(Block& block, std::span<const Transaction> batch, Gas seqlimit,
                             const SchedulerParams& params, ResourceMap& resmap,
                             std::set<ClientId>& skipped_clients,
                             SchedulingReport* report = nullptr);

struct BuildResult {
  Block block;
  SchedulingReport report;
};

/// Batch handler: polls batches from `source` and schedules them into a
/// fresh block, relaxing the sequential-path limit when inclusion stays
/// below target. Everything polled but not included goes back to the front
/// of `source` in original order. If polling throws, all polled
/// transactions are returned to the source before the exception propagates.
[[nodiscard]] BuildResult create_good_block(BatchSource& source, const SchedulerParams& params);

/// Dependency-blind baseline: the longest arrival-order prefix that fits
/// within maxlen transactions and maxgas.
[[nodiscard]] Block fifo_block(BatchSource& source, const SchedulerParams& params);

/// Sequential-path limit after a relaxation triggered by `rate`:
/// floor(floor(maxgas/c) * min(maxrelaxrate, rate * target_scale)), at least 1.
[[nodiscard]] Gas relaxed_seqlimit(const SchedulerParams& params, InclusionRate rate);

}  // namespace anthemius
