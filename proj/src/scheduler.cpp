#include "anthemius/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anthemius {

namespace {

bool in_hot_read_region(const SchedulerParams& params, std::size_t block_len) {
  switch (params.hot_read_rule) {
    case HotReadRule::kMiddleOfBlock:
      return params.lim < block_len && block_len < params.maxlen - params.lim;
    case HotReadRule::kLiteralDisjunction:
      return params.lim < block_len || block_len < params.maxlen - params.lim;
  }
  return true;
}

// Everything in `polled` that is not in `block`, in polled order. The block
// holds a subsequence of the polled transactions.
std::vector<Transaction> leftovers(std::vector<Batch>& polled, const Block& block) {
  std::vector<Transaction> out;
  const auto& kept = block.txs();
  std::size_t k = 0;
  for (auto& batch : polled) {
    for (auto& tx : batch.txs) {
      if (k < kept.size() && kept[k].tx_id() == tx.tx_id()) {
        ++k;
      } else {
        out.push_back(std::move(tx));
      }
    }
  }
  return out;
}

void return_all(BatchSource& source, std::vector<Batch>& polled) {
  std::vector<Transaction> all;
  for (auto& batch : polled) {
    std::move(batch.txs.begin(), batch.txs.end(), std::back_inserter(all));
  }
  source.requeue_front(std::move(all));
}

}  // namespace

ReadAnalysis analyze_reads(const Transaction& tx, const ResourceMap& resmap, Gas block_gas,
                           std::uint32_t c) {
  const Gas share = block_gas.per_core(c);
  ReadAnalysis out;
  for (ResourceId r : tx.read_set()) {
    const Gas* cost = resmap.find(r);
    if (cost == nullptr) continue;
    out.chain_cost = std::max(out.chain_cost, *cost);
    if (*cost > share) ++out.hot_resources;
  }
  return out;
}

InclusionRate schedule_batch(Block& block, std::span<const Transaction> batch, Gas seqlimit,
                             const SchedulerParams& params, ResourceMap& resmap,
                             std::set<ClientId>& skipped_clients, SchedulingReport* report) {
  const std::uint64_t accesses_before = resmap.accesses();
  const Gas block_limit = seqlimit.times(params.c);
  InclusionRate rate{0, batch.size()};

  auto skip = [&](const Transaction& tx, SkipReason reason) {
    if (reason != SkipReason::kSkippedClient) skipped_clients.insert(tx.sender());
    if (report != nullptr) {
      ++report->skipped;
      report->skips.push_back({tx.tx_id(), reason});
    }
  };

  for (const Transaction& tx : batch) {
    if (block.len() >= params.maxlen) break;
    if (skipped_clients.contains(tx.sender())) {
      skip(tx, SkipReason::kSkippedClient);
      continue;
    }
    const ReadAnalysis reads = analyze_reads(tx, resmap, block.gas(), params.c);
    if (reads.hot_resources >= params.maxhotr && in_hot_read_region(params, block.len())) {
      skip(tx, SkipReason::kHotReads);
      continue;
    }
    const Gas path = reads.chain_cost + tx.gas();
    if (path > seqlimit) {
      skip(tx, SkipReason::kChainLimit);
      continue;
    }
    if (block.gas() + tx.gas() > block_limit) {
      skip(tx, SkipReason::kBlockGas);
      continue;
    }

    block.append(tx);
    ++rate.included;
    const Gas recorded = params.chain_update == ChainUpdate::kIncludeWriter ? path
                                                                             : reads.chain_cost;
    for (ResourceId w : tx.write_set()) resmap.raise(w, recorded);
    if (report != nullptr) {
      ++report->included;
      report->admissions.push_back({tx.tx_id(), reads.chain_cost, seqlimit, block.gas()});
    }
  }

  if (report != nullptr) report->resmap_accesses += resmap.accesses() - accesses_before;
  return rate;
}

Gas relaxed_seqlimit(const SchedulerParams& params, InclusionRate rate) {
  const long double base = static_cast<long double>(params.base_seqlimit().value());
  const long double factor =
      std::min<long double>(params.maxrelaxrate, rate.value() * params.target_scale);
  const long double relaxed = std::floor(base * factor);
  if (relaxed < 1.0L) return Gas{1};
  if (relaxed >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) {
    return Gas{std::numeric_limits<std::uint64_t>::max()};
  }
  return Gas{static_cast<std::uint64_t>(relaxed)};
}

BuildResult create_good_block(BatchSource& source, const SchedulerParams& params) {
  params.validate();
  BuildResult out;
  Gas seqlimit = params.base_seqlimit();
  ResourceMap resmap;
  std::vector<Batch> polled;

  try {
    while (out.block.len() < params.maxlen) {
      Batch batch = source.poll_batch();
      if (batch.txs.empty()) break;
      polled.push_back(std::move(batch));
      const Batch& current = polled.back();

      const InclusionRate rate = schedule_batch(out.block, current.txs, seqlimit, params, resmap,
                                                out.report.skipped_clients, &out.report);
      out.report.per_batch_inclusion_rates.push_back(rate);
      if (out.block.len() >= params.maxlen) break;

      if (rate.value() < params.target_inc_rate) {
        if (out.report.relaxations_used >= params.maxrelaxnum ||
            (rate.is_zero() && current.is_full())) {
          break;
        }
        seqlimit = relaxed_seqlimit(params, rate);
        ++out.report.relaxations_used;
      }
    }
  } catch (...) {
    return_all(source, polled);
    throw;
  }

  out.report.final_seqlimit = seqlimit;
  source.requeue_front(leftovers(polled, out.block));
  return out;
}

Block fifo_block(BatchSource& source, const SchedulerParams& params) {
  params.validate();
  Block block;
  std::vector<Batch> polled;
  try {
    bool open = true;
    while (open && block.len() < params.maxlen) {
      Batch batch = source.poll_batch();
      if (batch.txs.empty()) break;
      polled.push_back(std::move(batch));
      for (const Transaction& tx : polled.back().txs) {
        if (block.len() >= params.maxlen || block.gas() + tx.gas() > params.maxgas) {
          open = false;
          break;
        }
        block.append(tx);
      }
    }
  } catch (...) {
    return_all(source, polled);
    throw;
  }
  source.requeue_front(leftovers(polled, block));
  return block;
}

}  // namespace anthemius
