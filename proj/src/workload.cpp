#include "anthemius/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anthemius {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Distinct ranks appended to `out`, skipping anything already in `out`.
void draw_distinct(const ZipfSampler& zipf, Xoshiro256& rng, std::size_t count,
                   std::vector<ResourceId>& out) {
  const std::size_t max_attempts = 64 * (count + 1);
  for (std::size_t k = 0; k < count; ++k) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      const ResourceId r{zipf(rng)};
      if (std::find(out.begin(), out.end(), r) == out.end()) {
        out.push_back(r);
        placed = true;
      }
    }
    // Extreme skew: fall back to the most popular unused rank.
    for (std::uint64_t rank = 0; !placed; ++rank) {
      const ResourceId r{rank};
      if (std::find(out.begin(), out.end(), r) == out.end()) {
        out.push_back(r);
        placed = true;
      }
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("workload config: bad integer for '" + std::string(key) + "': '" +
                                std::string(v) + "'");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("workload config: bad number for '" + std::string(key) + "': '" +
                                std::string(v) + "'");
  }
  return out;
}

IntRange parse_range(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos) {
    const auto x = parse_uint(key, v);
    return {x, x};
  }
  return {parse_uint(key, trim(v.substr(0, comma))), parse_uint(key, trim(v.substr(comma + 1)))};
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("workload config: bad boolean for '" + std::string(key) + "'");
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t batch_index) {
  return splitmix64(seed ^ splitmix64(batch_index + 0x632be59bd9b4e019ULL));
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (std::uint64_t i = 0; i < s_.size(); ++i) {
    s_[i] = splitmix64(seed + i * 0x9e3779b97f4a7c15ULL);
  }
}

std::uint64_t Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Xoshiro256::uniform(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform: empty range");
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return (*this)();
  const std::uint64_t range = span + 1;
  // Reject the low (2^64 mod range) values so the modulo is unbiased.
  const std::uint64_t threshold = (0 - range) % range;
  std::uint64_t x = (*this)();
  while (x < threshold) x = (*this)();
  return lo + x % range;
}

double Xoshiro256::unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

ZipfSampler::ZipfSampler(std::size_t n, double s) {
  if (n == 0) throw std::invalid_argument("zipf: empty support");
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("zipf: bad exponent");
  cdf_.resize(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    total += 1.0 / std::pow(static_cast<double>(k + 1), s);
    cdf_[k] = total;
  }
  for (double& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

std::size_t ZipfSampler::operator()(Xoshiro256& rng) const {
  const double u = rng.unit();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

double ZipfSampler::probability(std::size_t rank) const {
  return rank == 0 ? cdf_[0] : cdf_[rank] - cdf_[rank - 1];
}

void WorkloadConfig::validate() const {
  auto check_range = [](const IntRange& r, const char* what) {
    if (r.lo > r.hi) throw std::invalid_argument(std::string("workload: empty range ") + what);
  };
  check_range(reads_per_tx, "reads_per_tx");
  check_range(writes_per_tx, "writes_per_tx");
  check_range(gas_range, "gas_range");
  if (gas_range.lo < 1) throw std::invalid_argument("workload: gas_range lo must be >= 1");
  if (num_clients < 1) throw std::invalid_argument("workload: num_clients must be >= 1");
  if (num_resources < reads_per_tx.hi + writes_per_tx.hi || num_resources < 1) {
    throw std::invalid_argument("workload: num_resources smaller than reads + writes per tx");
  }
  if (!(resource_zipf_s >= 0.0) || !std::isfinite(resource_zipf_s)) {
    throw std::invalid_argument("workload: resource_zipf_s must be finite and >= 0");
  }
  if (!(client_zipf_s >= 0.0) || !std::isfinite(client_zipf_s)) {
    throw std::invalid_argument("workload: client_zipf_s must be finite and >= 0");
  }
}

WorkloadConfig preset(std::string_view name) {
  WorkloadConfig cfg;
  cfg.name = std::string(name);
  cfg.rmw_writes = true;
  if (name == "p2ptx") {
    // Transfers between mostly distinct accounts.
    cfg.num_resources = 100'000;
    cfg.resource_zipf_s = 0.6;
    cfg.num_clients = 20'000;
    cfg.client_zipf_s = 0.5;
    cfg.reads_per_tx = {0, 0};
    cfg.writes_per_tx = {2, 2};
    cfg.gas_range = {20, 40};
  } else if (name == "dexavg") {
    cfg.num_resources = 10'000;
    cfg.resource_zipf_s = 0.9;
    cfg.num_clients = 10'000;
    cfg.client_zipf_s = 0.6;
    cfg.reads_per_tx = {1, 3};
    cfg.writes_per_tx = {2, 3};
    cfg.gas_range = {40, 80};
  } else if (name == "dexbursty") {
    // A handful of pools take most of the traffic.
    cfg.num_resources = 10'000;
    cfg.resource_zipf_s = 1.1;
    cfg.num_clients = 10'000;
    cfg.client_zipf_s = 0.6;
    cfg.reads_per_tx = {0, 1};
    cfg.writes_per_tx = {1, 2};
    cfg.gas_range = {40, 80};
  } else if (name == "nft") {
    // Few, very active senders hammering one collection contract.
    cfg.num_resources = 5'000;
    cfg.resource_zipf_s = 1.6;
    cfg.num_clients = 100;
    cfg.client_zipf_s = 1.2;
    cfg.reads_per_tx = {1, 2};
    cfg.writes_per_tx = {1, 2};
    cfg.gas_range = {50, 100};
  } else if (name == "mixed") {
    cfg.num_resources = 50'000;
    cfg.resource_zipf_s = 1.1;
    cfg.num_clients = 5'000;
    cfg.client_zipf_s = 0.8;
    cfg.reads_per_tx = {0, 1};
    cfg.writes_per_tx = {1, 2};
    cfg.gas_range = {10, 400};
  } else {
    throw std::invalid_argument("unknown workload preset '" + std::string(name) + "'");
  }
  return cfg;
}

Batch generate_batch(const WorkloadConfig& cfg, std::size_t size, std::uint64_t batch_index) {
  cfg.validate();
  if (size >= (std::uint64_t{1} << 32)) throw std::invalid_argument("batch too large");
  Xoshiro256 rng(batch_seed(cfg.seed, batch_index));
  const ZipfSampler resources(cfg.num_resources, cfg.resource_zipf_s);
  const ZipfSampler clients(cfg.num_clients, cfg.client_zipf_s);

  Batch batch;
  batch.capacity = size;
  batch.txs.reserve(size);
  std::vector<ResourceId> reads;
  std::vector<ResourceId> writes;
  for (std::size_t i = 0; i < size; ++i) {
    const ClientId sender{clients(rng)};
    const std::size_t n_reads = rng.uniform(cfg.reads_per_tx.lo, cfg.reads_per_tx.hi);
    const std::size_t n_writes = rng.uniform(cfg.writes_per_tx.lo, cfg.writes_per_tx.hi);
    reads.clear();
    writes.clear();
    if (cfg.rmw_writes) {
      draw_distinct(resources, rng, n_writes, writes);
      reads = writes;
      draw_distinct(resources, rng, n_reads, reads);
    } else {
      draw_distinct(resources, rng, n_reads, reads);
      draw_distinct(resources, rng, n_writes, writes);
    }
    const Gas gas{rng.uniform(cfg.gas_range.lo, cfg.gas_range.hi)};
    batch.txs.emplace_back((batch_index << 32) + i, sender, reads, writes, gas);
  }
  return batch;
}

WorkloadConfig parse_workload_config(std::string_view text) {
  WorkloadConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("workload config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "preset") {
      const auto seed = cfg.seed;
      cfg = preset(value);
      cfg.seed = seed;
    } else if (key == "name") {
      cfg.name = std::string(value);
    } else if (key == "num_resources") {
      cfg.num_resources = parse_uint(key, value);
    } else if (key == "resource_zipf_s") {
      cfg.resource_zipf_s = parse_double(key, value);
    } else if (key == "num_clients") {
      cfg.num_clients = parse_uint(key, value);
    } else if (key == "client_zipf_s") {
      cfg.client_zipf_s = parse_double(key, value);
    } else if (key == "reads_per_tx") {
      cfg.reads_per_tx = parse_range(key, value);
    } else if (key == "writes_per_tx") {
      cfg.writes_per_tx = parse_range(key, value);
    } else if (key == "gas_range") {
      cfg.gas_range = parse_range(key, value);
    } else if (key == "rmw_writes") {
      cfg.rmw_writes = parse_bool(key, value);
    } else if (key == "seed") {
      cfg.seed = parse_uint(key, value);
    } else {
      throw std::invalid_argument("workload config line " + std::to_string(line_no) +
                                  ": unknown key '" + std::string(key) + "'");
    }
  }
  cfg.validate();
  return cfg;
}

WorkloadConfig load_workload_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload_config(buf.str());
}

std::string to_config_text(const WorkloadConfig& cfg) {
  std::ostringstream out;
  out << "name = " << cfg.name << '\n'
      << "num_resources = " << cfg.num_resources << '\n'
      << "resource_zipf_s = " << format_double(cfg.resource_zipf_s) << '\n'
      << "num_clients = " << cfg.num_clients << '\n'
      << "client_zipf_s = " << format_double(cfg.client_zipf_s) << '\n'
      << "reads_per_tx = " << cfg.reads_per_tx.lo << ',' << cfg.reads_per_tx.hi << '\n'
      << "writes_per_tx = " << cfg.writes_per_tx.lo << ',' << cfg.writes_per_tx.hi << '\n'
      << "gas_range = " << cfg.gas_range.lo << ',' << cfg.gas_range.hi << '\n'
      << "rmw_writes = " << (cfg.rmw_writes ? "true" : "false") << '\n'
      << "seed = " << cfg.seed << '\n';
  return out.str();
}

}  // namespace anthemius
