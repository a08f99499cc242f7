"""
Batch verification of dP = I + Q over whole symmetric groups.

Theorem mode checks the coset decomposition L of every interval; conjecture
mode checks every hypercube decomposition that :func:`enumerate_decompositions`
finds.  Work items are generated in the parent in a fixed order, farmed out
to worker processes, and collected back in the same order, so the output
only depends on (n, mode, sample, seed).
"""

from __future__ import annotations

import json
import multiprocessing
import os
import random
import time
from dataclasses import asdict, dataclass
from typing import Iterator, Optional

from .decomp import canonical_L, enumerate_decompositions, validate
from .graph import SymmetricGroup, canonical_key, iter_bits
from .klbase import KLTable
from .formula import VerificationRecord, check_formula
from .perm import Permutation

__all__ = ["SweepSummary", "sweep", "default_jobs", "write_jsonl"]

JOBS_ENV = "KLCUBE_JOBS"
_CHUNK = 64
_MAX_REPEATS = 10_000

# per-process state: the group and its KL table
_STATE: dict = {}


def default_jobs() -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{JOBS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


@dataclass
class SweepSummary:
    n: int
    mode: str
    sample: Optional[int]
    seed: Optional[int]
    intervals: int = 0
    records: int = 0
    passed: int = 0
    failed: int = 0
    errors: int = 0
    degenerate: int = 0
    gamma_negative: int = 0
    q_negative: int = 0
    independence_violations: int = 0
    duplicates: int = 0
    classes: Optional[int] = None
    seconds: Optional[float] = None
    timestamp: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.errors == 0 and self.independence_violations == 0

    def to_json(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if v is not None}
        d["ok"] = self.ok
        return {"summary": d}

    def human(self) -> str:
        parts = [
            f"n={self.n} mode={self.mode}",
            f"{self.passed}/{self.records} passed",
            f"{self.failed} failed",
            f"{self.errors} errors",
            f"{self.degenerate} degenerate",
            f"{self.gamma_negative} negative gamma",
            f"{self.q_negative} negative Q",
        ]
        if self.mode == "conjecture":
            parts.append(f"{self.independence_violations} independence violations")
        if self.classes is not None:
            parts.append(f"{self.classes} classes, {self.duplicates} duplicates skipped")
        if self.seconds is not None:
            parts.append(f"{self.seconds:.1f}s")
        return ", ".join(parts)


# -- worker side ----------------------------------------------------------------


def _init(n: int, table: Optional[KLTable] = None) -> None:
    if _STATE.get("n") != n:
        _STATE["n"] = n
        _STATE["group"] = SymmetricGroup(n)
        _STATE["table"] = KLTable(n)
    if table is not None:
        _STATE["table"] = table


def _record_json(rec: VerificationRecord) -> dict:
    d = rec.to_json()
    if rec.degenerate:
        d["degenerate"] = True
    return d


def _error_json(G: SymmetricGroup, xi: int, yi: int, zi, exc: BaseException) -> dict:
    return {
        "x": str(Permutation(G.perms[xi])),
        "y": str(Permutation(G.perms[yi])),
        "z": None if zi is None else str(Permutation(G.perms[zi])),
        "pass": False,
        "error": f"{type(exc).__name__}: {exc}",
    }


def _key(g, D) -> bytes:
    return canonical_key(g, [(v in D) for v in range(len(g))])


def _run_theorem(task: tuple[int, int], dedup: bool) -> list:
    xi, yi = task
    G, T = _STATE["group"], _STATE["table"]
    try:
        g = G.interval(xi, yi)
        D = canonical_L(g)
        rec = check_formula(g, D, T)
        return [(_record_json(rec), rec, _key(g, D) if dedup else None)]
    except Exception as exc:  # failures are data
        return [(_error_json(G, xi, yi, None, exc), None, None)]


def _run_conjecture(task: tuple[int, int], dedup: bool) -> list:
    xi, yi = task
    G, T = _STATE["group"], _STATE["table"]
    out = []
    try:
        g = G.interval(xi, yi)
        for D in enumerate_decompositions(g):
            rec = check_formula(g, D, T)
            out.append((_record_json(rec), rec, _key(g, D) if dedup else None))
    except Exception as exc:
        out.append((_error_json(G, xi, yi, None, exc), None, None))
    return out


def _run_triple(task: tuple[int, int, int], dedup: bool) -> list:
    # a sampled (x, y, z); invalid decompositions come back empty
    xi, yi, zi = task
    G, T = _STATE["group"], _STATE["table"]
    try:
        g = G.interval(xi, yi)
        try:
            D = validate(g, g.index(G.perms[zi]))
        except Exception:
            return []
        rec = check_formula(g, D, T)
        return [(_record_json(rec), rec, _key(g, D) if dedup else None)]
    except Exception as exc:
        return [(_error_json(G, xi, yi, zi, exc), None, None)]


_RUNNERS = {"theorem": _run_theorem, "conjecture": _run_conjecture, "triple": _run_triple}


def _run_chunk(args: tuple[str, list, bool]) -> list:
    kind, tasks, dedup = args
    run = _RUNNERS[kind]
    return [run(t, dedup) for t in tasks]


# -- task generation --------------------------------------------------------------


def _nth_bit(mask: int, k: int) -> int:
    for i, b in enumerate(iter_bits(mask)):
        if i == k:
            return b
    raise IndexError(k)


def _all_pairs(G: SymmetricGroup) -> Iterator[tuple[int, int]]:
    for yi, m in enumerate(G.below):
        for xi in iter_bits(m & ~(1 << yi)):
            yield xi, yi


def _pair_at(G: SymmetricGroup, cum: list[int], r: int) -> tuple[int, int]:
    # cum[y] = number of strict pairs with top index < y
    lo, hi = 0, len(cum) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if cum[mid] <= r:
            lo = mid
        else:
            hi = mid - 1
    yi = lo
    return _nth_bit(G.below[yi] & ~(1 << yi), r - cum[yi]), yi


def _cumulative(G: SymmetricGroup) -> list[int]:
    cum = [0]
    for yi, m in enumerate(G.below):
        cum.append(cum[-1] + m.bit_count() - 1)
    return cum


def _sampled_pairs(G: SymmetricGroup, k: int, rng: random.Random) -> list[tuple[int, int]]:
    cum = _cumulative(G)
    total = cum[-1]
    picks = sorted(rng.sample(range(total), min(k, total)))
    return [_pair_at(G, cum, r) for r in picks]


def _candidate_triples(G: SymmetricGroup, rng: random.Random) -> Iterator[tuple[int, int, int]]:
    """Uniform pair, then a uniform vertex z != y of its interval; repeats skipped."""
    cum = _cumulative(G)
    total = cum[-1]
    if total == 0:
        return
    seen = set()
    repeats = 0
    # a long run of repeats means the (small) candidate space is used up
    while repeats < _MAX_REPEATS:
        xi, yi = _pair_at(G, cum, rng.randrange(total))
        mask = G.below[yi] & G.above[xi] & ~(1 << yi)
        zi = _nth_bit(mask, rng.randrange(mask.bit_count()))
        if (xi, yi, zi) in seen:
            repeats += 1
            continue
        repeats = 0
        seen.add((xi, yi, zi))
        yield xi, yi, zi


def _results(pool, kind: str, tasks, dedup: bool, workers: int):
    """Chunk results in task order.  Tasks are handed out in bounded rounds
    because the sampled-triple stream is unbounded."""
    chunks = _chunks(tasks, _CHUNK)
    while True:
        batch = [(kind, c, dedup) for _, c in zip(range(4 * workers), chunks)]
        if not batch:
            return
        yield from (pool.imap(_run_chunk, batch) if pool is not None else map(_run_chunk, batch))


def _chunks(it, size: int):
    buf = []
    for t in it:
        buf.append(t)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


# -- driver ---------------------------------------------------------------------------


def sweep(
    n: int,
    mode: str = "theorem",
    sample: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
    dedup: bool = False,
    table: Optional[KLTable] = None,
    deterministic: bool = False,
) -> Iterator:
    """
    Yield record dicts (JSON-ready) in a fixed order, then the
    :class:`SweepSummary` as the last item.

    ``n`` is the window size, so the group is S_n acting on {0, ..., n-1}.
    With ``sample`` set, theorem mode draws that many distinct intervals and
    conjecture mode keeps drawing (interval, z) candidates until that many
    valid decompositions have been checked (or the candidates run out).
    """
    if n < 2:
        raise ValueError("window size must be at least 2")
    if mode not in ("theorem", "conjecture"):
        raise ValueError(f"unknown mode {mode!r}")
    if sample is not None and sample < 1:
        raise ValueError("sample size must be positive")
    if table is not None and table.size != n:
        raise ValueError("KL table has the wrong window size")
    workers = default_jobs() if workers is None else max(1, workers)
    t0 = time.time()
    _init(n, table)
    G = _STATE["group"]
    rng = random.Random(seed)
    summary = SweepSummary(n=n, mode=mode, sample=sample, seed=seed if sample is not None else None)
    if dedup:
        summary.classes = 0

    if sample is None:
        kind = mode
        tasks = _all_pairs(G)
    elif mode == "theorem":
        kind = mode
        tasks = iter(_sampled_pairs(G, sample, rng))
    else:
        kind = "triple"
        tasks = _candidate_triples(G, rng)
    pool = None
    if workers > 1:
        ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn")
        pool = ctx.Pool(workers, initializer=_init, initargs=(n,))
    results = _results(pool, kind, tasks, dedup, workers)

    seen_keys: set = set()
    try:
        for chunk in results:
            for task_out in chunk:
                if kind != "triple":
                    summary.intervals += 1
                elif task_out:
                    summary.intervals += 1
                sums = set()
                for d, rec, key in task_out:
                    if dedup and rec is not None:
                        if key in seen_keys:
                            summary.duplicates += 1
                            continue
                        seen_keys.add(key)
                        summary.classes += 1
                    summary.records += 1
                    if rec is None:
                        summary.errors += 1
                    else:
                        summary.passed += rec.passed
                        summary.failed += not rec.passed
                        summary.degenerate += rec.degenerate
                        summary.gamma_negative += not rec.gamma_nonneg
                        summary.q_negative += not rec.q_nonneg
                        sums.add(rec.I + rec.Q)
                    yield d
                    if kind == "triple" and summary.records >= sample:
                        break
                if len(sums) > 1:
                    summary.independence_violations += 1
                if kind == "triple" and summary.records >= sample:
                    break
            if kind == "triple" and summary.records >= sample:
                break
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()

    if not deterministic:
        summary.seconds = round(time.time() - t0, 3)
        summary.timestamp = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    yield summary


def write_jsonl(items, fh) -> SweepSummary:
    """Write sweep output as JSONL, summary last; returns the summary."""
    summary = None
    for item in items:
        if isinstance(item, SweepSummary):
            summary = item
            fh.write(json.dumps(item.to_json(), sort_keys=True) + "\n")
        else:
            fh.write(json.dumps(item, separators=(",", ":")) + "\n")
    return summary
