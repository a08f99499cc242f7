"""
Hypercubes inside ranked DAGs and the hypercube map.

Three routes to the hypercube map at the base of a coset decomposition:

* :func:`theta` -- the graph-theoretic definition: take the maximal edges of
  F and return the crown of the hypercube they span;
* :func:`theta_explicit` -- the permutation ``sigma_I * x`` built from the
  greedy decreasing subsequence of I;
* :func:`theta_corner_rank` -- the permutation whose corner rank matrix is
  that of x, raised by one wherever the perturbed column adds rank.

Edge sets into a base vertex are given as ``(source, base)`` pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import RankedDigraph, iter_bits
from .perm import Permutation, compose, corner_rank_matrix

__all__ = [
    "EHypercube",
    "HypercubeEmbedding",
    "ClusterFailure",
    "spans_hypercube",
    "count_embeddings",
    "spans_cluster",
    "cluster_crowns",
    "maximal_edges",
    "theta",
    "greedy_decreasing",
    "theta_explicit",
    "theta_corner_rank",
]


@dataclass(frozen=True)
class EHypercube:
    """H_E: subsets of ``ground`` (as bitmasks), with an edge I -> I minus one element."""

    ground: tuple

    @property
    def dimension(self) -> int:
        return len(self.ground)

    def vertices(self) -> list[int]:
        return list(range(1 << len(self.ground)))

    def edges(self) -> list[tuple[int, int]]:
        return [(s, s ^ (1 << i)) for s in self.vertices() for i in range(len(self.ground)) if (s >> i) & 1]

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.ground[i] for i in iter_bits(mask))


@dataclass
class HypercubeEmbedding:
    """
    An injective map of H_E into a graph: ``assignment[mask]`` is the image of
    the subset of ``edges`` selected by ``mask``.
    """

    base: int
    edges: tuple[tuple[int, int], ...]
    assignment: dict[int, int] = field(repr=False)

    @property
    def crown(self) -> int:
        return self.assignment[(1 << len(self.edges)) - 1]

    def image(self, subset: Iterable[tuple[int, int]]) -> int:
        pos = {e: i for i, e in enumerate(self.edges)}
        mask = 0
        for e in subset:
            mask |= 1 << pos[e]
        return self.assignment[mask]


class ClusterFailure(Exception):
    """Internal signal: an antichain of edges does not span a unique hypercube."""

    def __init__(self, base: int, sources: tuple[int, ...], embeddings: int):
        super().__init__(f"edges from {sources} into {base} admit {embeddings} hypercube embeddings")
        self.base = base
        self.sources = sources
        self.embeddings = embeddings


def _sources(g: RankedDigraph, base: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    srcs = []
    for e in edges:
        try:
            s, t = e
        except (TypeError, ValueError):
            raise ValueError(f"malformed edge {e!r}") from None
        if t != base:
            raise ValueError(f"edge {e} does not end at base {base}")
        if not g.has_edge(s, t):
            raise ValueError(f"{e} is not an edge of the graph")
        srcs.append(s)
    if len(set(srcs)) != len(srcs):
        raise ValueError("edge sources must be pairwise distinct")
    return srcs


def _search_embeddings(g: RankedDigraph, base: int, srcs: Sequence[int], limit: int) -> list[dict[int, int]]:
    """Up to ``limit`` injective embeddings of H_E, by backtracking in subset-size order."""
    k = len(srcs)
    start = {0: base}
    for i, s in enumerate(srcs):
        start[1 << i] = s
    if len(set(start.values())) != len(start):
        return []
    order = sorted((m for m in range(1 << k) if bin(m).count("1") >= 2), key=lambda m: (bin(m).count("1"), m))
    up_masks = g.up_masks
    found: list[dict[int, int]] = []
    assign = dict(start)
    used = 0
    for v in start.values():
        used |= 1 << v

    def step(pos: int, used: int) -> None:
        if len(found) >= limit:
            return
        if pos == len(order):
            found.append(dict(assign))
            return
        mask = order[pos]
        cand = ~used
        for i in iter_bits(mask):
            cand &= up_masks[assign[mask ^ (1 << i)]]
            if not cand:
                return
        for v in iter_bits(cand):
            assign[mask] = v
            step(pos + 1, used | (1 << v))
            if len(found) >= limit:
                break
        assign.pop(mask, None)

    step(0, used)
    return found


def count_embeddings(g: RankedDigraph, base: int, edges: Iterable[tuple[int, int]], limit: int = 2) -> int:
    """Number of embeddings of H_E with the prescribed base edges, capped at ``limit``."""
    base = g.index(base)
    return len(_search_embeddings(g, base, _sources(g, base, edges), limit))


def spans_hypercube(g: RankedDigraph, base, edges: Iterable[tuple[int, int]]) -> Optional[HypercubeEmbedding]:
    """The embedding of H_E if there is exactly one, else None."""
    base = g.index(base)
    edges = tuple(edges)
    found = _search_embeddings(g, base, _sources(g, base, edges), limit=2)
    if len(found) != 1:
        return None
    return HypercubeEmbedding(base, edges, found[0])


def _antichains(g: RankedDigraph, srcs: Sequence[int]) -> list[int]:
    """All nonempty antichains of ``srcs`` as bitmasks over positions, smallest first."""
    k = len(srcs)
    incomparable = [0] * k
    for i in range(k):
        for j in range(k):
            if i != j and not g.comparable(srcs[i], srcs[j]):
                incomparable[i] |= 1 << j
    out: list[int] = []

    def grow(mask: int, allowed: int) -> None:
        for i in iter_bits(allowed):
            new = mask | (1 << i)
            out.append(new)
            # only extend with larger positions to avoid repeats
            grow(new, allowed & incomparable[i] & ~((2 << i) - 1))

    grow(0, (1 << k) - 1)
    out.sort(key=lambda m: (bin(m).count("1"), m))
    return out


def cluster_crowns(g: RankedDigraph, base: int, srcs: Sequence[int]) -> dict[int, int]:
    """
    Crowns of all antichains of the edges ``src -> base``, keyed by bitmask
    over positions in ``srcs`` (the empty mask maps to ``base``).

    Antichains are processed by size.  Once every proper sub-antichain spans a
    unique hypercube, any embedding of the larger cube must restrict to those,
    so only the crown is free: it must cover the crowns of all co-singletons
    and avoid the (necessarily distinct) images already forced.

    Raises :class:`ClusterFailure` at the first antichain that fails.
    """
    up_masks = g.up_masks
    crowns = {0: base}
    for i, s in enumerate(srcs):
        crowns[1 << i] = s
    for mask in _antichains(g, srcs):
        bits = list(iter_bits(mask))
        if len(bits) < 2:
            continue
        images = set()
        for sub in _proper_submasks(mask):
            images.add(crowns[sub])
        if len(images) != (1 << len(bits)) - 1:
            raise ClusterFailure(base, tuple(srcs[i] for i in bits), 0)
        cand = -1
        for i in bits:
            cand &= up_masks[crowns[mask ^ (1 << i)]]
        for v in images:
            cand &= ~(1 << v)
        n_cand = bin(cand).count("1") if cand > 0 else 0
        if n_cand != 1:
            raise ClusterFailure(base, tuple(srcs[i] for i in bits), min(n_cand, 2))
        crowns[mask] = cand.bit_length() - 1
    return crowns


def _proper_submasks(mask: int):
    sub = (mask - 1) & mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def spans_cluster(g: RankedDigraph, base, edges: Iterable[tuple[int, int]]) -> bool:
    """True iff every subset of edges with pairwise incomparable sources spans a hypercube."""
    base = g.index(base)
    srcs = _sources(g, base, edges)
    try:
        cluster_crowns(g, base, srcs)
    except ClusterFailure:
        return False
    return True


def maximal_edges(g: RankedDigraph, edges: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Edges whose source is not strictly below another edge's source."""
    edges = list(edges)
    return [
        e for e in edges
        if not any(f[0] != e[0] and g.leq(e[0], f[0]) for f in edges)
    ]


def theta(g: RankedDigraph, base, edges: Iterable[tuple[int, int]], subset: Iterable[tuple[int, int]]) -> int:
    """Crown of the hypercube spanned by the maximal edges of ``subset``."""
    base = g.index(base)
    edges = list(edges)
    sub = list(subset)
    if not set(sub) <= set(edges):
        raise ValueError("subset is not contained in the edge set")
    top = maximal_edges(g, sub)
    if not top:
        return base
    emb = spans_hypercube(g, base, top)
    if emb is None:
        raise RuntimeError(f"maximal edges {top} do not span a hypercube; the edge set is not a cluster")
    return emb.crown


# -- explicit descriptions on permutations ----------------------------------------


def _allowed_values(x: Sequence[int]) -> tuple[int, list[int]]:
    m = list(x).index(0)
    return m, list(x[m + 1:])


def greedy_decreasing(x: Sequence[int], values: Iterable[int]) -> tuple[int, ...]:
    """
    Greedy decreasing subsequence of the values I, read in their order in x:
    the maximum, then the maximum of what lies to its right, and so on.

    >>> greedy_decreasing((0, 3, 2, 1), {1, 2, 3})
    (3, 2, 1)
    >>> greedy_decreasing((0, 1, 2, 3), {1, 2, 3})
    (3,)
    """
    m, allowed = _allowed_values(x)
    chosen = set(values)
    if not chosen <= set(allowed):
        raise ValueError(f"values {sorted(chosen - set(allowed))} are not right of 0 in {Permutation(x)}")
    seq = [v for v in allowed if v in chosen]
    out = []
    while seq:
        top = max(seq)
        out.append(top)
        seq = seq[seq.index(top) + 1:]
    return tuple(out)


def theta_explicit(x: Sequence[int], values: Iterable[int]) -> Permutation:
    """
    ``sigma_I * x``, where sigma_I is the cycle 0 -> i_1 -> i_2 -> ... -> i_l -> 0
    on the greedy decreasing subsequence (i_1, ..., i_l): in string notation
    i_1 moves to the old position of 0, each i_k moves to the old position of
    i_{k-1}, and 0 ends up where i_l was.
    """
    dec = greedy_decreasing(x, values)
    if not dec:
        return Permutation(x)
    sigma = list(range(len(x)))
    cycle = (0,) + dec
    for a, b in zip(cycle, cycle[1:] + (0,)):
        sigma[a] = b
    return compose(sigma, x)


def theta_corner_rank(x: Sequence[int], values: Iterable[int]) -> Permutation:
    """
    Recover the hypercube map from corner ranks: column m = x^{-1}(0) gains
    entries in the rows of I, which raises the rank of the corner at (p, q),
    q >= m, exactly when some row of I that is >= p is not already occupied by
    x(0..q).  Row 0 is excluded from the raise since it already holds the 1 of
    column m.
    """
    m, _ = _allowed_values(x)
    chosen = set(values)
    greedy_decreasing(x, chosen)  # validates the value set
    n = len(x)
    base = corner_rank_matrix(x)
    rows = []
    for p in range(n):
        need = {i for i in chosen if i >= p}
        row = []
        seen: set[int] = set()
        for q in range(n):
            seen.add(x[q])
            bump = p >= 1 and q >= m and not need <= seen
            row.append(base[p][q] + (1 if bump else 0))
        rows.append(row)
    images = []
    for q in range(n):
        prev = [rows[p][q - 1] if q else 0 for p in range(n)]
        hits = [p for p in range(n) if rows[p][q] - prev[p] == 1]
        if not hits:
            raise RuntimeError(f"corner rank data has no pivot in column {q}")
        images.append(max(hits))
    try:
        u = Permutation(images)
    except ValueError as exc:
        raise RuntimeError(f"corner rank data is not a permutation rank matrix: {exc}") from None
    if corner_rank_matrix(u) != tuple(tuple(r) for r in rows):
        raise RuntimeError("corner rank data is not a permutation rank matrix")
    return u
