"""
Hypercube decompositions of an interval: validation, enumeration and the
coset decomposition L = {v : v^{-1}(0) = x^{-1}(0)}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .graph import BruhatInterval, RankedDigraph, diamond_violation, iter_bits
from .hypercube import ClusterFailure, cluster_crowns

__all__ = [
    "HypercubeDecomposition",
    "DecompositionFailure",
    "validate",
    "try_validate",
    "canonical_L",
    "coset_members",
    "enumerate_decompositions",
]


class DecompositionFailure(Exception):
    """
    ``J = down_set(z)`` is not a hypercube decomposition.

    ``kind`` is ``"diamond"`` (witness: the incomplete diamond as
    ``(top, left, right, bottom)``) or ``"cluster"`` (witness: ``(vertex,
    sources)`` for an antichain of incoming edges that does not span a unique
    hypercube).
    """

    def __init__(self, kind: str, witness: tuple, message: str):
        super().__init__(message)
        self.kind = kind
        self.witness = witness

    def to_json(self) -> dict:
        return {"kind": self.kind, "witness": _jsonable(self.witness), "message": str(self)}


def _jsonable(obj):
    if isinstance(obj, tuple):
        return [_jsonable(o) for o in obj]
    return obj


@dataclass
class HypercubeDecomposition:
    graph: RankedDigraph
    z: int
    member_mask: int
    # v -> sources of the edges u -> v with u outside J
    hypercube_edges: dict[int, tuple[int, ...]]
    # crowns of the antichains of hypercube edges at the bottom vertex
    base_crowns: dict[int, int] = field(repr=False)
    # True only for an interval lying entirely in one coset (J is everything)
    degenerate: bool = False

    @property
    def members(self) -> frozenset[int]:
        return frozenset(iter_bits(self.member_mask))

    def __contains__(self, v: int) -> bool:
        return (self.member_mask >> v) & 1 == 1

    @property
    def base(self) -> int:
        return self.graph.bottom

    @property
    def base_sources(self) -> tuple[int, ...]:
        return self.hypercube_edges.get(self.base, ())

    def to_json(self) -> dict:
        g = self.graph
        name = (lambda v: str(g.labels[v])) if isinstance(g, BruhatInterval) else (lambda v: v)
        return {
            "z": name(self.z),
            "members": sorted(self.members),
            "hypercube_edges": {
                str(v): [[u, v] for u in srcs] for v, srcs in sorted(self.hypercube_edges.items()) if srcs
            },
        }


def _check_args(g: RankedDigraph, z) -> tuple[int, int]:
    top = g.top
    if top is None:
        raise ValueError("graph has no unique maximal vertex")
    if g.bottom is None:
        raise ValueError("graph has no unique minimal vertex")
    zi = g.index(z)
    return zi, top


def _build(g: RankedDigraph, zi: int, members: int, degenerate: bool) -> HypercubeDecomposition:
    viol = diamond_violation(g, members)
    if viol is not None:
        t, left, right, b = viol
        raise DecompositionFailure(
            "diamond", viol, f"diamond {viol} meets J in two edges but is not contained in J"
        )
    hyper: dict[int, tuple[int, ...]] = {}
    base = g.bottom
    base_crowns: dict[int, int] = {0: base}
    for v in iter_bits(members):
        srcs = tuple(u for u in g.up[v] if not (members >> u) & 1)
        hyper[v] = srcs
        try:
            crowns = cluster_crowns(g, v, srcs)
        except ClusterFailure as exc:
            raise DecompositionFailure(
                "cluster", (v, exc.sources),
                f"edges from {exc.sources} into {v} admit {exc.embeddings} hypercube embeddings",
            ) from None
        if v == base:
            base_crowns = crowns
    return HypercubeDecomposition(g, zi, members, hyper, base_crowns, degenerate)


def validate(g: RankedDigraph, z) -> HypercubeDecomposition:
    """
    Check that ``J = {v <= z}`` is a hypercube decomposition of ``g``.

    Raises ``ValueError`` if z is the top vertex or not a vertex, and
    :class:`DecompositionFailure` with a witness if J is not a decomposition.
    """
    zi, top = _check_args(g, z)
    if zi == top:
        raise ValueError("z must differ from the top vertex")
    return _build(g, zi, g.below[zi], degenerate=False)


def try_validate(g: RankedDigraph, z) -> Optional[HypercubeDecomposition]:
    try:
        return validate(g, z)
    except DecompositionFailure:
        return None


def coset_members(interval: BruhatInterval) -> int:
    """Bitmask of vertices v with v^{-1}(0) = x^{-1}(0)."""
    m = interval.x.index(0)
    mask = 0
    for v, p in enumerate(interval.labels):
        if p[m] == 0:
            mask |= 1 << v
    return mask


def canonical_L(interval: BruhatInterval) -> HypercubeDecomposition:
    """
    The coset decomposition L.

    If y itself lies in L then every vertex does, and L is the whole interval;
    that case is returned with ``degenerate=True`` (no hypercube edges at all).
    Any other failure is a hard error.
    """
    if len(interval) < 2:
        raise ValueError("x = y admits no decomposition")
    members = coset_members(interval)
    tops = [v for v in iter_bits(members) if interval.below[v] & members == members]
    if len(tops) != 1 or interval.below[tops[0]] != members:
        raise RuntimeError(
            f"coset set of [{interval.x}, {interval.y}] is not a principal down-set"
        )
    c = tops[0]
    try:
        return _build(interval, c, members, degenerate=(c == interval.top))
    except DecompositionFailure as exc:
        raise RuntimeError(f"coset decomposition of [{interval.x}, {interval.y}] is invalid: {exc}") from exc


def enumerate_decompositions(g: RankedDigraph) -> list[HypercubeDecomposition]:
    """Every valid ``J = {v <= z}`` over z != top, in vertex order."""
    if len(g) < 2:
        raise ValueError("a one-vertex graph admits no decomposition")
    _, top = _check_args(g, 0)
    out = []
    for z in range(len(g)):
        if z == top:
            continue
        try:
            out.append(_build(g, z, g.below[z], degenerate=False))
        except DecompositionFailure:
            pass
    return out
