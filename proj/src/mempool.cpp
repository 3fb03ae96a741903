#include "anthemius/mempool.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace anthemius {

Mempool::Mempool(std::size_t batch_capacity) : batch_capacity_(batch_capacity) {
  if (batch_capacity_ == 0) throw std::invalid_argument("batch capacity must be positive");
}

void Mempool::push(std::vector<Transaction> txs) {
  std::unordered_set<TxId> incoming;
  for (const auto& tx : txs) {
    if (ids_.contains(tx.tx_id()) || !incoming.insert(tx.tx_id()).second) {
      throw std::invalid_argument("duplicate tx_id " + std::to_string(tx.tx_id()));
    }
  }
  std::vector<TxId> promoted;
  for (auto& tx : txs) {
    if (tx.fast_track()) promoted.push_back(tx.tx_id());
    ids_.insert(tx.tx_id());
    pending_.push_back(std::move(tx));
  }
  // Later promotions land ahead of earlier ones, so walk backwards to keep
  // the promoted transactions in submission order at the head.
  for (auto it = promoted.rbegin(); it != promoted.rend(); ++it) fast_track(*it);
}

Batch Mempool::poll_batch() {
  Batch batch;
  batch.capacity = batch_capacity_;
  const std::size_t n = std::min(batch_capacity_, pending_.size());
  batch.txs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids_.erase(pending_.front().tx_id());
    batch.txs.push_back(std::move(pending_.front()));
    pending_.pop_front();
  }
  return batch;
}

void Mempool::requeue_front(std::vector<Transaction> txs) {
  for (const auto& tx : txs) {
    if (ids_.contains(tx.tx_id())) {
      throw std::invalid_argument("requeued tx_id " + std::to_string(tx.tx_id()) +
                                  " is already pending");
    }
  }
  for (const auto& tx : txs) ids_.insert(tx.tx_id());
  pending_.insert(pending_.begin(), std::make_move_iterator(txs.begin()),
                  std::make_move_iterator(txs.end()));
}

void Mempool::fast_track(TxId tx_id) {
  auto target = std::find_if(pending_.begin(), pending_.end(),
                             [&](const Transaction& tx) { return tx.tx_id() == tx_id; });
  if (target == pending_.end()) {
    throw std::out_of_range("fast_track: tx_id " + std::to_string(tx_id) + " is not pending");
  }
  const ClientId sender = target->sender();
  const auto end = std::next(target);
  // Stable partition of [begin, target] puts the sender's prefix first.
  std::stable_partition(pending_.begin(), end,
                        [&](const Transaction& tx) { return tx.sender() == sender; });
}

}  // namespace anthemius
