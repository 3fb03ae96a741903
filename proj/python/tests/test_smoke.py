import csv
import io

import pytest

import anthemius as am


def traced_batch():
    x, y = 1, 2
    return [
        am.Transaction(1, 10, [], [x], 10),
        am.Transaction(2, 11, [x], [x], 10),
        am.Transaction(3, 12, [x], [y], 10),
        am.Transaction(4, 11, [], [], 5),
    ]


def example_params():
    p = am.SchedulerParams.defaults(40, 2, 10)
    p.lim = 0
    return p


def test_traced_batch():
    out = am.schedule_batch(traced_batch(), 20, example_params())
    assert out["block"] == [1, 2, 4]
    assert (out["included"], out["batch_size"]) == (3, 4)
    assert out["resmap"] == {1: 20}
    assert out["skipped_clients"] == [12]
    assert out["skips"] == [(3, "chain_limit")]


def test_literal_chain_update():
    p = example_params()
    p.chain_update = am.ChainUpdate.LITERAL
    assert am.schedule_batch(traced_batch(), 20, p)["block"] == [1, 2, 3, 4]


def test_engines():
    pair = [am.Transaction(1, 10, [], [1], 10), am.Transaction(2, 11, [1], [], 10)]
    assert am.conflicts(*pair)
    r = am.optimistic_execute(pair, 2)
    assert (r.makespan, r.reexecutions, r.total_work) == (20, 1, 30)
    g = am.guided_makespan(pair, 2)
    assert g.makespan == am.critical_path(pair) == 20
    assert g.reexecutions == 0
    assert am.brute_force_min_makespan(pair, 2) == 20
    with pytest.raises(ValueError):
        am.guided_makespan(pair, 0)


def test_workload_generation_is_deterministic():
    cfg = am.preset_config("dexavg")
    a = am.generate_batch(cfg, 50, 3)
    b = am.generate_batch(cfg, 50, 3)
    assert a == b
    assert len(a) == 50
    assert a[0].tx_id == 3 << 32
    assert set(am.preset_names()) == {"p2ptx", "dexavg", "dexbursty", "nft", "mixed"}


def test_runs_follow_the_csv_schema():
    rows = am.run_throughput(am.preset_config("nft"), threads=[4, 8], maxlen=200, batches=2)
    assert len(rows) == 4
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=am.CSV_COLUMNS, extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
    assert [r["c"] for r in parsed] == ["4", "8", "4", "8"]
    assert all(float(r["throughput_txps"]) > 0 for r in parsed)

    lat = am.run_latency(am.preset_config("nft"), threads=[4], maxlen=200, batches=2)
    assert all(r["p10"] <= r["p50"] <= r["p90"] for r in lat)
    again = am.run_latency(am.preset_config("nft"), threads=[4], maxlen=200, batches=2)
    for x, y in zip(lat, again):
        x.pop("sched_s"), y.pop("sched_s")
        assert x == y


def test_bad_arguments():
    with pytest.raises(ValueError):
        am.preset_config("unknown")
    with pytest.raises(ValueError):
        am.run_throughput(am.preset_config("nft"), builders=["greedy"])
