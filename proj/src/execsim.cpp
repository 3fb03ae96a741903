#include "anthemius/execsim.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace anthemius {

namespace {

template <typename T>
using MinHeap = std::priority_queue<T, std::vector<T>, std::greater<T>>;

struct ResourceState {
  std::int64_t last_writer = -1;
  std::vector<std::uint32_t> readers;  // since last_writer
};

struct Running {
  std::uint64_t finish;
  std::uint32_t tx;
  std::uint32_t worker;
  std::uint64_t start;
  auto operator<=>(const Running&) const = default;
};

std::uint64_t gas_of(const Block& block, std::size_t j) { return block.txs()[j].gas().value(); }

Gas max_finish(const std::vector<Gas>& finish) {
  Gas out;
  for (Gas f : finish) out = std::max(out, f);
  return out;
}

}  // namespace

DependencyGraph::DependencyGraph(const Block& block) {
  const auto& txs = block.txs();
  if (txs.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("block too large for dependency graph");
  }
  std::unordered_map<ResourceId, ResourceState> state;
  offsets_.reserve(txs.size() + 1);
  offsets_.push_back(0);
  std::vector<std::uint32_t> preds;

  for (std::uint32_t j = 0; j < txs.size(); ++j) {
    const auto& tx = txs[j];
    preds.clear();
    for (ResourceId r : tx.read_set()) {
      auto it = state.find(r);
      if (it != state.end() && it->second.last_writer >= 0) {
        preds.push_back(static_cast<std::uint32_t>(it->second.last_writer));
      }
    }
    for (ResourceId r : tx.write_set()) {
      auto it = state.find(r);
      if (it == state.end()) continue;
      if (it->second.last_writer >= 0) {
        preds.push_back(static_cast<std::uint32_t>(it->second.last_writer));
      }
      preds.insert(preds.end(), it->second.readers.begin(), it->second.readers.end());
    }
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    preds_.insert(preds_.end(), preds.begin(), preds.end());
    offsets_.push_back(preds_.size());

    const auto writes = tx.write_set();
    for (ResourceId r : tx.read_set()) {
      if (!std::binary_search(writes.begin(), writes.end(), r)) state[r].readers.push_back(j);
    }
    for (ResourceId r : writes) {
      auto& s = state[r];
      s.last_writer = j;
      s.readers.clear();
    }
  }

  // Transpose into successor lists.
  std::vector<std::size_t> counts(txs.size() + 1, 0);
  for (std::uint32_t p : preds_) ++counts[p + 1];
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  succ_offsets_ = counts;
  succs_.resize(preds_.size());
  for (std::uint32_t j = 0; j < txs.size(); ++j) {
    for (std::uint32_t p : predecessors(j)) succs_[counts[p]++] = j;
  }
}

Gas critical_path(const Block& block) {
  const DependencyGraph graph(block);
  std::vector<Gas> cost(block.len());
  Gas longest;
  for (std::size_t j = 0; j < block.len(); ++j) {
    Gas before;
    for (std::uint32_t p : graph.predecessors(j)) before = std::max(before, cost[p]);
    cost[j] = before + block.txs()[j].gas();
    longest = std::max(longest, cost[j]);
  }
  return longest;
}

ExecutionReport list_schedule(const Block& block, std::uint32_t workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  const std::size_t n = block.len();
  const DependencyGraph graph(block);

  ExecutionReport report;
  report.finish_time.assign(n, Gas{});
  report.total_work = block.gas();
  report.workers_used = workers;

  std::vector<std::size_t> waiting(n);
  MinHeap<std::uint32_t> ready;
  for (std::uint32_t j = 0; j < n; ++j) {
    waiting[j] = graph.predecessors(j).size();
    if (waiting[j] == 0) ready.push(j);
  }
  MinHeap<std::uint32_t> idle;
  for (std::uint32_t w = 0; w < workers; ++w) idle.push(w);
  MinHeap<Running> running;

  std::uint64_t now = 0;
  while (true) {
    while (!idle.empty() && !ready.empty()) {
      const std::uint32_t j = ready.top();
      ready.pop();
      running.push({now + gas_of(block, j), j, idle.top(), now});
      idle.pop();
    }
    if (running.empty()) break;
    now = running.top().finish;
    while (!running.empty() && running.top().finish == now) {
      const Running done = running.top();
      running.pop();
      report.finish_time[done.tx] = Gas{done.finish};
      idle.push(done.worker);
      for (std::uint32_t s : graph.successors(done.tx)) {
        if (--waiting[s] == 0) ready.push(s);
      }
    }
  }
  report.makespan = max_finish(report.finish_time);
  return report;
}

ExecutionReport speculative_schedule(const Block& block, std::uint32_t workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
  const std::size_t n = block.len();
  const DependencyGraph graph(block);

  enum class State { kRunnable, kRunning, kWaiting, kDone };
  std::vector<State> state(n, State::kRunnable);
  std::vector<std::uint64_t> finish(n, 0);

  ExecutionReport report;
  report.workers_used = workers;
  std::uint64_t work = 0;

  MinHeap<std::uint32_t> runnable;
  for (std::uint32_t j = 0; j < n; ++j) runnable.push(j);
  MinHeap<std::uint32_t> idle;
  for (std::uint32_t w = 0; w < workers; ++w) idle.push(w);
  MinHeap<Running> running;

  auto preds_done = [&](std::uint32_t j) {
    for (std::uint32_t p : graph.predecessors(j)) {
      if (state[p] != State::kDone) return false;
    }
    return true;
  };

  std::uint64_t now = 0;
  while (true) {
    while (!idle.empty() && !runnable.empty()) {
      const std::uint32_t j = runnable.top();
      runnable.pop();
      state[j] = State::kRunning;
      work += gas_of(block, j);
      running.push({now + gas_of(block, j), j, idle.top(), now});
      idle.pop();
    }
    if (running.empty()) break;
    now = running.top().finish;

    std::vector<Running> finished;
    while (!running.empty() && running.top().finish == now) {
      finished.push_back(running.top());
      running.pop();
    }
    std::sort(finished.begin(), finished.end(),
              [](const Running& a, const Running& b) { return a.tx < b.tx; });

    for (const Running& attempt : finished) {
      idle.push(attempt.worker);
      const std::uint32_t j = attempt.tx;
      bool valid = true;
      for (std::uint32_t p : graph.predecessors(j)) {
        if (state[p] != State::kDone || finish[p] > attempt.start) {
          valid = false;
          break;
        }
      }
      if (!valid) {
        // Every blocker has now finished or is still pending; either rerun
        // immediately or wait until the last blocker commits.
        ++report.reexecutions;
        if (preds_done(j)) {
          state[j] = State::kRunnable;
          runnable.push(j);
        } else {
          state[j] = State::kWaiting;
        }
        continue;
      }
      state[j] = State::kDone;
      finish[j] = now;
      for (std::uint32_t s : graph.successors(j)) {
        if (state[s] == State::kWaiting && preds_done(s)) {
          state[s] = State::kRunnable;
          runnable.push(s);
        }
      }
    }
  }

  report.finish_time.reserve(n);
  for (std::uint64_t f : finish) report.finish_time.emplace_back(f);
  report.makespan = max_finish(report.finish_time);
  report.total_work = Gas{work};
  return report;
}

ExecutionReport guided_makespan(const Block& block, std::uint32_t c) {
  if (c < 1) throw std::invalid_argument("c must be >= 1");
  const std::uint32_t useful = static_cast<std::uint32_t>(
      std::min<std::size_t>(c, std::max<std::size_t>(block.len(), 1)));

  ExecutionReport best;
  bool have = false;
  bool best_is_list = false;
  for (std::uint32_t k = useful; k >= 1; --k) {
    ExecutionReport listed = list_schedule(block, k);
    if (!have || listed.makespan < best.makespan ||
        (listed.makespan == best.makespan && !best_is_list)) {
      best = std::move(listed);
      best_is_list = true;
      have = true;
    }
    ExecutionReport committed = speculative_schedule(block, k);
    if (committed.makespan < best.makespan) {
      committed.reexecutions = 0;
      committed.total_work = block.gas();
      best = std::move(committed);
      best_is_list = false;
    }
  }
  return best;
}

ExecutionReport optimistic_execute(const Block& block, std::uint32_t c) {
  return speculative_schedule(block, c);
}

Gas brute_force_min_makespan(const Block& block, std::uint32_t c) {
  const std::size_t n = block.len();
  if (n > 8) throw std::invalid_argument("brute force limited to 8 transactions");
  if (c < 1 || c > 3) throw std::invalid_argument("brute force limited to 1..3 workers");
  if (n == 0) return Gas{};

  // Precedence straight from the pairwise conflict predicate.
  std::vector<std::uint32_t> pred_mask(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (conflicts(block.txs()[i], block.txs()[j])) pred_mask[j] |= 1u << i;
    }
  }
  std::vector<std::uint64_t> gas(n);
  for (std::size_t j = 0; j < n; ++j) gas[j] = gas_of(block, j);
  const std::uint32_t all = (1u << n) - 1;

  // State: finished set plus (task, remaining) for running tasks, sorted.
  using Key = std::vector<std::uint64_t>;
  std::map<Key, std::uint64_t> memo;

  std::function<std::uint64_t(std::uint32_t, std::vector<std::pair<std::uint32_t, std::uint64_t>>)>
      solve = [&](std::uint32_t done, std::vector<std::pair<std::uint32_t, std::uint64_t>> run)
      -> std::uint64_t {
    if (done == all) return 0;
    std::sort(run.begin(), run.end());
    Key key{done};
    for (auto [t, r] : run) {
      key.push_back(t);
      key.push_back(r);
    }
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    std::uint32_t started = done;
    for (auto [t, r] : run) started |= 1u << t;
    std::vector<std::uint32_t> avail;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (!(started & (1u << j)) && (pred_mask[j] & ~done) == 0) avail.push_back(j);
    }
    const std::size_t free_workers = c - run.size();
    const std::size_t max_pick = std::min(free_workers, avail.size());

    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    // Every subset of available tasks that fits on the idle workers,
    // including starting nothing (deliberate idling).
    for (std::uint32_t subset = 0; subset < (1u << avail.size()); ++subset) {
      if (static_cast<std::size_t>(__builtin_popcount(subset)) > max_pick) continue;
      auto next = run;
      for (std::size_t a = 0; a < avail.size(); ++a) {
        if (subset & (1u << a)) next.emplace_back(avail[a], gas[avail[a]]);
      }
      if (next.empty()) continue;
      std::uint64_t step = std::numeric_limits<std::uint64_t>::max();
      for (auto [t, r] : next) step = std::min(step, r);
      std::uint32_t next_done = done;
      std::vector<std::pair<std::uint32_t, std::uint64_t>> still;
      for (auto [t, r] : next) {
        if (r == step) {
          next_done |= 1u << t;
        } else {
          still.emplace_back(t, r - step);
        }
      }
      best = std::min(best, step + solve(next_done, std::move(still)));
    }
    memo.emplace(std::move(key), best);
    return best;
  };

  return Gas{solve(0, {})};
}

}  // namespace anthemius
