#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace anthemius {

/// Abstract execution cost. Arithmetic is checked: overflow throws
/// std::overflow_error instead of wrapping.
class Gas {
 public:
  constexpr Gas() = default;
  constexpr explicit Gas(std::uint64_t value) : value_(value) {}

  [[nodiscard]] constexpr std::uint64_t value() const { return value_; }

  constexpr Gas& operator+=(Gas other) {
    if (value_ > std::numeric_limits<std::uint64_t>::max() - other.value_) {
      throw std::overflow_error("gas addition overflows");
    }
    value_ += other.value_;
    return *this;
  }
  friend constexpr Gas operator+(Gas a, Gas b) { return a += b; }

  /// Floor division by the concurrency parameter.
  [[nodiscard]] constexpr Gas per_core(std::uint32_t c) const {
    if (c == 0) throw std::invalid_argument("concurrency parameter must be >= 1");
    return Gas{value_ / c};
  }

  /// Checked multiplication by a worker count.
  [[nodiscard]] constexpr Gas times(std::uint64_t k) const {
    if (k != 0 && value_ > std::numeric_limits<std::uint64_t>::max() / k) {
      throw std::overflow_error("gas multiplication overflows");
    }
    return Gas{value_ * k};
  }

  friend constexpr auto operator<=>(Gas, Gas) = default;

 private:
  std::uint64_t value_ = 0;
};

/// Opaque identifier of a piece of state (an address in a real chain).
struct ResourceId {
  std::uint64_t id = 0;
  friend constexpr auto operator<=>(ResourceId, ResourceId) = default;
};

/// Opaque sender identifier.
struct ClientId {
  std::uint64_t id = 0;
  friend constexpr auto operator<=>(ClientId, ClientId) = default;
};

using TxId = std::uint64_t;

}  // namespace anthemius

template <>
struct std::hash<anthemius::ResourceId> {
  std::size_t operator()(anthemius::ResourceId r) const noexcept {
    return std::hash<std::uint64_t>{}(r.id);
  }
};

template <>
struct std::hash<anthemius::ClientId> {
  std::size_t operator()(anthemius::ClientId c) const noexcept {
    return std::hash<std::uint64_t>{}(c.id);
  }
};

namespace anthemius {

/// A transaction with pre-declared read/write hints. The sets are stored
/// sorted and deduplicated.
class Transaction {
 public:
  Transaction(TxId tx_id, ClientId sender, std::vector<ResourceId> read_set,
              std::vector<ResourceId> write_set, Gas gas, bool fast_track = false);

  [[nodiscard]] TxId tx_id() const { return tx_id_; }
  [[nodiscard]] ClientId sender() const { return sender_; }
  [[nodiscard]] std::span<const ResourceId> read_set() const { return read_set_; }
  [[nodiscard]] std::span<const ResourceId> write_set() const { return write_set_; }
  [[nodiscard]] Gas gas() const { return gas_; }
  [[nodiscard]] bool fast_track() const { return fast_track_; }
  void set_fast_track(bool on) { fast_track_ = on; }

  friend bool operator==(const Transaction&, const Transaction&) = default;

 private:
  TxId tx_id_;
  ClientId sender_;
  std::vector<ResourceId> read_set_;
  std::vector<ResourceId> write_set_;
  Gas gas_;
  bool fast_track_;
};

/// RAW, WAR or WAW overlap between the declared sets.
[[nodiscard]] bool conflicts(const Transaction& a, const Transaction& b);

struct Batch {
  std::vector<Transaction> txs;
  std::size_t capacity = 0;

  /// A zero-capacity batch counts as full.
  [[nodiscard]] bool is_full() const { return txs.size() == capacity; }
};

class Block {
 public:
  Block() = default;

  void append(Transaction tx);

  [[nodiscard]] const std::vector<Transaction>& txs() const { return txs_; }
  [[nodiscard]] Gas gas() const { return gas_; }
  [[nodiscard]] std::size_t len() const { return txs_.size(); }
  [[nodiscard]] bool empty() const { return txs_.empty(); }

  /// Recomputes the gas sum; throws std::logic_error on mismatch.
  void check_invariants() const;

 private:
  std::vector<Transaction> txs_;
  Gas gas_;
};

/// True when, for every client, the client's transactions appear in
/// increasing submission rank. Transactions missing from `rank` fail.
[[nodiscard]] bool preserves_client_order(std::span<const Transaction> txs,
                                          const std::unordered_map<TxId, std::size_t>& rank);

/// resource -> cost of the longest chain ending in a write to it.
/// Every lookup or update counts as one access.
class ResourceMap {
 public:
  [[nodiscard]] const Gas* find(ResourceId r) const;

  /// Stores max(current, cost) in a single access. Returns the stored value.
  Gas raise(ResourceId r, Gas cost);

  [[nodiscard]] std::uint64_t accesses() const { return accesses_; }
  [[nodiscard]] std::size_t size() const { return map_.size(); }
  [[nodiscard]] const std::unordered_map<ResourceId, Gas>& entries() const { return map_; }

 private:
  std::unordered_map<ResourceId, Gas> map_;
  mutable std::uint64_t accesses_ = 0;
};

/// How a block's chain cost is recorded for written resources.
enum class ChainUpdate {
  kIncludeWriter,  ///< store chain_cost + tx.gas
  kLiteral,        ///< store chain_cost (compatibility switch)
};

/// Where the hot-read limit applies.
enum class HotReadRule {
  kMiddleOfBlock,      ///< only while lim < |block| < maxlen - lim
  kLiteralDisjunction, ///< |block| > lim || |block| < maxlen - lim (compatibility switch)
};

struct SchedulerParams {
  Gas maxgas{0};
  std::uint32_t c = 1;
  std::size_t maxlen = 10'000;
  std::size_t lim = 1'000;
  std::size_t maxhotr = 4;
  std::size_t maxrelaxnum = 2;
  double maxrelaxrate = 100.0;
  double target_inc_rate = 1.0;
  double target_scale = 1.0;
  ChainUpdate chain_update = ChainUpdate::kIncludeWriter;
  HotReadRule hot_read_rule = HotReadRule::kMiddleOfBlock;

  /// Evaluation defaults: lim = maxlen/10, maxhotr 4, two relaxations of at
  /// most 100x, target_scale = 2*maxlen/c and
  /// target_inc_rate = min(1, 2/c) * maxlen/batch_capacity.
  /// batch_capacity 0 means "same as maxlen".
  static SchedulerParams defaults(Gas maxgas, std::uint32_t c, std::size_t maxlen = 10'000,
                                  std::size_t batch_capacity = 0);

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  [[nodiscard]] Gas base_seqlimit() const { return maxgas.per_core(c); }
};

}  // namespace anthemius
