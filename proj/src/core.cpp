#include "anthemius/core.hpp"

#include <algorithm>
#include <string>

namespace anthemius {

namespace {

void normalize(std::vector<ResourceId>& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool intersects(std::span<const ResourceId> a, std::span<const ResourceId> b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return true;
    }
  }
  return false;
}

}  // namespace

Transaction::Transaction(TxId tx_id, ClientId sender, std::vector<ResourceId> read_set,
                         std::vector<ResourceId> write_set, Gas gas, bool fast_track)
    : tx_id_(tx_id),
      sender_(sender),
      read_set_(std::move(read_set)),
      write_set_(std::move(write_set)),
      gas_(gas),
      fast_track_(fast_track) {
  if (gas_.value() == 0) {
    throw std::invalid_argument("transaction " + std::to_string(tx_id) + " has zero gas");
  }
  normalize(read_set_);
  normalize(write_set_);
}

bool conflicts(const Transaction& a, const Transaction& b) {
  return intersects(a.write_set(), b.write_set()) || intersects(a.write_set(), b.read_set()) ||
         intersects(a.read_set(), b.write_set());
}

void Block::append(Transaction tx) {
  gas_ += tx.gas();
  txs_.push_back(std::move(tx));
}

void Block::check_invariants() const {
  Gas sum;
  for (const auto& tx : txs_) sum += tx.gas();
  if (sum != gas_) throw std::logic_error("block gas does not match the sum of its transactions");
}

bool preserves_client_order(std::span<const Transaction> txs,
                            const std::unordered_map<TxId, std::size_t>& rank) {
  std::unordered_map<ClientId, std::size_t> last;
  for (const auto& tx : txs) {
    auto it = rank.find(tx.tx_id());
    if (it == rank.end()) return false;
    auto [pos, inserted] = last.try_emplace(tx.sender(), it->second);
    if (!inserted) {
      if (it->second <= pos->second) return false;
      pos->second = it->second;
    }
  }
  return true;
}

const Gas* ResourceMap::find(ResourceId r) const {
  ++accesses_;
  auto it = map_.find(r);
  return it == map_.end() ? nullptr : &it->second;
}

Gas ResourceMap::raise(ResourceId r, Gas cost) {
  ++accesses_;
  auto [it, inserted] = map_.try_emplace(r, cost);
  if (!inserted && it->second < cost) it->second = cost;
  return it->second;
}

SchedulerParams SchedulerParams::defaults(Gas maxgas, std::uint32_t c, std::size_t maxlen,
                                          std::size_t batch_capacity) {
  if (c == 0) throw std::invalid_argument("c must be >= 1");
  if (batch_capacity == 0) batch_capacity = maxlen;
  SchedulerParams p;
  p.maxgas = maxgas;
  p.c = c;
  p.maxlen = maxlen;
  p.lim = maxlen / 10;
  p.maxhotr = 4;
  p.maxrelaxnum = 2;
  p.maxrelaxrate = 100.0;
  p.target_scale = 2.0 * static_cast<double>(maxlen) / c;
  p.target_inc_rate = std::min(1.0, 2.0 / c) * static_cast<double>(maxlen) /
                      static_cast<double>(batch_capacity);
  return p;
}

void SchedulerParams::validate() const {
  if (c < 1) throw std::invalid_argument("c must be >= 1");
  if (maxlen < 1) throw std::invalid_argument("maxlen must be >= 1");
  if (lim > maxlen / 2) throw std::invalid_argument("lim must be <= maxlen/2");
  if (maxhotr < 1) throw std::invalid_argument("maxhotr must be >= 1");
  if (!(maxrelaxrate > 0.0)) throw std::invalid_argument("maxrelaxrate must be positive");
  if (!(target_inc_rate > 0.0)) throw std::invalid_argument("target_inc_rate must be positive");
  if (!(target_scale > 0.0)) throw std::invalid_argument("target_scale must be positive");
  if (maxgas.per_core(c).value() == 0) {
    throw std::invalid_argument("maxgas/c must be at least 1 gas");
  }
}

}  // namespace anthemius
