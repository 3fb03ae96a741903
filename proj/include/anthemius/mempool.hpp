#pragma once

#include <deque>
#include <span>
#include <unordered_set>
#include <vector>

#include "anthemius/core.hpp"
#include "anthemius/scheduler.hpp"

namespace anthemius {

/// FIFO transaction store that hands out fixed-capacity batches.
///
/// Per-client submission order is preserved by every operation: push
/// appends, requeue_front restores skipped transactions ahead of the rest,
/// and fast_track drags a client's earlier pending transactions along with
/// the promoted one.
class Mempool final : public BatchSource {
 public:
  explicit Mempool(std::size_t batch_capacity);

  /// Appends in order. Rejects the whole list (std::invalid_argument) if any
  /// tx_id is already pending or repeated within `txs`. Transactions
  /// carrying the fast_track flag are promoted after insertion.
  void push(std::vector<Transaction> txs);

  /// Removes up to batch_capacity transactions from the head.
  Batch poll_batch() override;

  /// Puts `txs` back at the head, keeping their relative order.
  void requeue_front(std::vector<Transaction> txs) override;

  /// Moves `tx_id` to the head, preceded by the sender's earlier pending
  /// transactions. Throws std::out_of_range for an unknown id.
  void fast_track(TxId tx_id);

  [[nodiscard]] std::size_t size() const { return pending_.size(); }
  [[nodiscard]] bool empty() const { return pending_.empty(); }
  [[nodiscard]] std::size_t batch_capacity() const { return batch_capacity_; }
  [[nodiscard]] const std::deque<Transaction>& pending() const { return pending_; }

 private:
  std::deque<Transaction> pending_;
  std::unordered_set<TxId> ids_;
  std::size_t batch_capacity_;
};

}  // namespace anthemius
