#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "anthemius/core.hpp"

namespace anthemius {

/// xoshiro256** seeded through splitmix64. Fixed algorithm so generated
/// workloads are identical on every platform.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t operator()();

  /// Uniform integer in [lo, hi] (modulo with rejection).
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the batch_index-th batch in a stream rooted at `seed`.
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch_index);

/// Zipf(s) over ranks 0..n-1 by inverse CDF on cumulative weights 1/(k+1)^s.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s);

  std::size_t operator()(Xoshiro256& rng) const;
  [[nodiscard]] double probability(std::size_t rank) const;
  [[nodiscard]] std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

struct IntRange {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct WorkloadConfig {
  std::string name = "custom";
  std::uint64_t num_resources = 1000;
  double resource_zipf_s = 0.0;
  std::uint64_t num_clients = 1000;
  double client_zipf_s = 0.0;
  IntRange reads_per_tx{1, 1};
  IntRange writes_per_tx{1, 1};
  IntRange gas_range{1, 1};
  /// Writes are read-modify-write: each written resource is also read.
  /// reads_per_tx then counts the read-only accesses on top of the writes.
  bool rmw_writes = false;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  friend bool operator==(const WorkloadConfig&, const WorkloadConfig&) = default;
};

inline constexpr std::array<std::string_view, 5> kPresetNames{"p2ptx", "dexavg", "dexbursty",
                                                              "nft", "mixed"};

/// Named approximations of the five evaluation workloads.
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] WorkloadConfig preset(std::string_view name);

/// Deterministic batch of `size` transactions. Transaction ids are
/// (batch_index << 32) + position, so batches of one stream never collide,
/// and the RNG is seeded with batch_seed(cfg.seed, batch_index).
[[nodiscard]] Batch generate_batch(const WorkloadConfig& cfg, std::size_t size,
                                   std::uint64_t batch_index = 0);

/// key = value lines; '#' starts a comment. A `preset` key loads that preset
/// first, later keys override it. Ranges are written "lo,hi" or a single
/// value. Throws std::invalid_argument on unknown keys or malformed values.
[[nodiscard]] WorkloadConfig parse_workload_config(std::string_view text);
[[nodiscard]] WorkloadConfig load_workload_config(const std::filesystem::path& path);
[[nodiscard]] std::string to_config_text(const WorkloadConfig& cfg);

}  // namespace anthemius
