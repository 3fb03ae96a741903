#pragma once

#include <initializer_list>
#include <vector>

#include "anthemius/core.hpp"

namespace testing {

using namespace anthemius;

inline std::vector<ResourceId> res(std::initializer_list<std::uint64_t> ids) {
  std::vector<ResourceId> out;
  for (auto id : ids) out.push_back({id});
  return out;
}

inline Transaction tx(TxId id, std::uint64_t sender, std::initializer_list<std::uint64_t> reads,
                      std::initializer_list<std::uint64_t> writes, std::uint64_t gas) {
  return Transaction(id, ClientId{sender}, res(reads), res(writes), Gas{gas});
}

inline Block block_of(const std::vector<Transaction>& txs) {
  Block b;
  for (const auto& t : txs) b.append(t);
  return b;
}

inline std::vector<TxId> ids_of(const std::vector<Transaction>& txs) {
  std::vector<TxId> out;
  for (const auto& t : txs) out.push_back(t.tx_id());
  return out;
}

// Resource and client names used by the hand-traced examples.
enum : std::uint64_t { kX = 1, kY = 2, kZ = 3 };
enum : std::uint64_t { kA = 10, kB = 11, kC = 12, kD = 13 };

}  // namespace testing
