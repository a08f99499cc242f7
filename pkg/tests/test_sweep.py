import io
import json

import pytest

import oracles
from klcube.sweep import SweepSummary, default_jobs, sweep, write_jsonl


def run(*args, **kw):
    items = list(sweep(*args, **kw))
    summary = items.pop()
    assert isinstance(summary, SweepSummary)
    return items, summary


def test_s3_all_trivial():
    recs, s = run(3, "theorem", workers=1)
    assert s.ok and s.records == s.passed == 13
    assert all(r["dP"] == [1] * len(r["dP"]) for r in recs)


@pytest.mark.parametrize("mode, records", [("theorem", 189), ("conjecture", 594)])
def test_s4_full(mode, records):
    recs, s = run(4, mode, workers=1, deterministic=True)
    assert s.ok and s.records == records and s.passed == records
    assert s.gamma_negative == 0 and s.q_negative == 0
    assert s.seconds is None and s.timestamp is None
    assert len(recs) == records


def test_record_keys():
    recs, _ = run(4, "theorem", workers=1)
    keys = {"x", "y", "z", "dP", "I", "Q", "pass", "gamma_nonneg"}
    for r in recs:
        assert keys <= set(r) <= keys | {"degenerate"}


def test_degenerate_count():
    _, s = run(4, "theorem", workers=1)
    # exactly the pairs x < y with 0 in the same place
    expected = sum(
        1
        for y in oracles.group(4)
        for x in oracles.lower_set(y)
        if x != y and x.index(0) == y.index(0)
    )
    assert s.degenerate == expected == 52


def test_seeded_theorem_sample():
    a, sa = run(5, "theorem", sample=40, seed=3, workers=1, deterministic=True)
    b, _ = run(5, "theorem", sample=40, seed=3, workers=1, deterministic=True)
    c, _ = run(5, "theorem", sample=40, seed=4, workers=1, deterministic=True)
    assert a == b and a != c
    assert sa.records == 40 and sa.ok
    assert len({(r["x"], r["y"]) for r in a}) == 40


def test_seeded_conjecture_sample():
    a, sa = run(5, "conjecture", sample=60, seed=1, workers=1)
    assert sa.records == 60 and sa.ok
    assert len({(r["x"], r["y"], r["z"]) for r in a}) == 60


def test_sample_exhausts_small_group():
    recs, s = run(2, "conjecture", sample=5, seed=0, workers=1)
    assert s.records == 1 and recs[0]["z"] == "01"


def test_sample_larger_than_population():
    _, s = run(3, "theorem", sample=1000, seed=0, workers=1)
    assert s.records == 13


def test_workers_do_not_change_output():
    a, _ = run(4, "conjecture", workers=1, deterministic=True)
    b, _ = run(4, "conjecture", workers=2, deterministic=True)
    assert a == b
    c, _ = run(5, "conjecture", sample=30, seed=9, workers=2, deterministic=True)
    d, _ = run(5, "conjecture", sample=30, seed=9, workers=1, deterministic=True)
    assert c == d


def test_dedup():
    raw, s_raw = run(4, "theorem", workers=1)
    ded, s = run(4, "theorem", workers=1, dedup=True)
    assert s.classes == s.records == len(ded) < s_raw.records
    assert s.classes + s.duplicates == s_raw.records
    assert s.ok


def test_bad_arguments():
    with pytest.raises(ValueError):
        list(sweep(1))
    with pytest.raises(ValueError):
        list(sweep(4, "guess"))
    with pytest.raises(ValueError):
        list(sweep(4, sample=0))


def test_write_jsonl():
    buf = io.StringIO()
    s = write_jsonl(sweep(3, "conjecture", workers=1, deterministic=True), buf)
    lines = buf.getvalue().splitlines()
    assert json.loads(lines[-1]) == s.to_json()
    assert json.loads(lines[-1])["summary"]["ok"] is True
    assert all("pass" in json.loads(l) for l in lines[:-1])


def test_default_jobs(monkeypatch):
    monkeypatch.setenv("KLCUBE_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("KLCUBE_JOBS", "many")
    with pytest.raises(ValueError):
        default_jobs()
    monkeypatch.delenv("KLCUBE_JOBS")
    assert default_jobs() >= 1
