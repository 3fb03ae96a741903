#include <doctest.h>

#include <random>

#include "anthemius/execsim.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace testing;

namespace {

// t1 w{x} g10; t2 r{x} g5; t3 independent g7.
Block three_tx_example() {
  return block_of({tx(1, kA, {}, {kX}, 10), tx(2, kB, {kX}, {}, 5), tx(3, kC, {}, {kY}, 7)});
}

Block independent(std::initializer_list<std::uint64_t> gas) {
  std::vector<Transaction> txs;
  TxId id = 0;
  for (auto g : gas) {
    txs.push_back(tx(id, id, {}, {100 + id}, g));
    ++id;
  }
  return block_of(txs);
}

}  // namespace

TEST_SUITE("execsim") {

TEST_CASE("critical path examples") {
  CHECK(critical_path(Block{}).value() == 0);
  CHECK(critical_path(block_of({tx(1, kA, {}, {kX}, 10), tx(2, kB, {}, {kX}, 10),
                                tx(3, kC, {}, {kX}, 10)}))
            .value() == 30);
  CHECK(critical_path(three_tx_example()).value() == 15);
}

TEST_CASE("dependency graph keeps immediate predecessors") {
  // w(x), r(x), r(x), w(x): the last writer waits for both readers.
  const Block b = block_of({tx(0, kA, {}, {kX}, 1), tx(1, kB, {kX}, {}, 1),
                            tx(2, kC, {kX}, {}, 1), tx(3, kD, {}, {kX}, 1)});
  const DependencyGraph g(b);
  REQUIRE(g.size() == 4);
  CHECK(g.predecessors(0).empty());
  CHECK(std::vector<std::uint32_t>(g.predecessors(1).begin(), g.predecessors(1).end()) ==
        std::vector<std::uint32_t>{0});
  CHECK(std::vector<std::uint32_t>(g.predecessors(3).begin(), g.predecessors(3).end()) ==
        std::vector<std::uint32_t>{0, 1, 2});
  CHECK(g.successors(0).size() == 3);
}

TEST_CASE("guided examples") {
  const auto r = guided_makespan(three_tx_example(), 2);
  CHECK(r.makespan.value() == 15);
  CHECK(r.reexecutions == 0);
  CHECK(r.total_work.value() == 22);
  CHECK(r.finish_time == std::vector<Gas>{Gas{10}, Gas{15}, Gas{7}});

  CHECK(guided_makespan(independent({4, 9, 2}), 3).makespan.value() == 9);
  CHECK(guided_makespan(independent({4, 9, 2}), 8).makespan.value() == 9);
  CHECK(guided_makespan(three_tx_example(), 1).makespan.value() == 22);
  CHECK(guided_makespan(Block{}, 4).makespan.value() == 0);
}

TEST_CASE("list schedule matches the event-driven oracle") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 500; ++round) {
    const auto txs = oracle::random_txs(rng, 1 + rng() % 14, {});
    const Block b = block_of(txs);
    const std::uint32_t k = 1 + rng() % 4;
    const auto got = list_schedule(b, k);
    const auto want = oracle::list_schedule(txs, k);
    REQUIRE(got.makespan.value() == want.makespan);
    for (std::size_t i = 0; i < txs.size(); ++i) {
      REQUIRE(got.finish_time[i].value() == want.finish[i]);
    }
  }
}

TEST_CASE("optimistic examples") {
  const Block pair = block_of({tx(1, kA, {}, {kX}, 10), tx(2, kB, {kX}, {}, 10)});
  const auto r = optimistic_execute(pair, 2);
  CHECK(r.makespan.value() == 20);
  CHECK(r.reexecutions == 1);
  CHECK(r.total_work.value() == 30);

  const Block free = independent({3, 8, 5, 5, 1});
  for (std::uint32_t c = 1; c <= 6; ++c) {
    const auto o = optimistic_execute(free, c);
    CHECK(o.makespan == guided_makespan(free, c).makespan);
    CHECK(o.reexecutions == 0);
  }

  const auto seq = optimistic_execute(three_tx_example(), 1);
  CHECK(seq.makespan.value() == 22);
  CHECK(seq.reexecutions == 0);
}

TEST_CASE("brute force examples") {
  const Block chain = block_of({tx(1, kA, {}, {kX}, 4), tx(2, kB, {kX}, {kX}, 6),
                                tx(3, kC, {kX}, {}, 3)});
  for (std::uint32_t c = 1; c <= 3; ++c) CHECK(brute_force_min_makespan(chain, c).value() == 13);
  CHECK(brute_force_min_makespan(independent({3, 3, 3, 3}), 2).value() == 6);
  CHECK(brute_force_min_makespan(three_tx_example(), 2).value() == 15);
  CHECK(brute_force_min_makespan(Block{}, 2).value() == 0);
  CHECK_THROWS_AS((void)brute_force_min_makespan(independent({1, 1, 1, 1, 1, 1, 1, 1, 1}), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)brute_force_min_makespan(chain, 4), std::invalid_argument);
}

TEST_CASE("brute force beats the index-order greedy") {
  // Greedy runs t2 before the long t3 that t0 unlocks; the optimum does not.
  const Block b = block_of({tx(0, kA, {}, {kX}, 1), tx(1, kB, {}, {kY}, 4),
                            tx(2, kC, {}, {kZ}, 4), tx(3, kD, {kX}, {}, 8)});
  const auto best = brute_force_min_makespan(b, 2).value();
  CHECK(best == 9);
  CHECK(best <= guided_makespan(b, 2).makespan.value());
}

TEST_CASE("worker count must be positive") {
  CHECK_THROWS_AS((void)guided_makespan(three_tx_example(), 0), std::invalid_argument);
  CHECK_THROWS_AS((void)optimistic_execute(three_tx_example(), 0), std::invalid_argument);
}

}
