"""
Ranked directed acyclic graphs, Bruhat intervals and their combinatorics.

Vertices are local indices ``0..N-1``.  Every edge points strictly downwards
in level, so the reachability relation ("u <= v iff there is a directed path
from v to u") is a partial order.  Down-sets are kept as Python int bitmasks:
bit u of ``below[v]`` is set iff u <= v.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Optional, Sequence

from .perm import Permutation, all_permutations, bruhat_leq, length

__all__ = [
    "RankedDigraph",
    "BruhatInterval",
    "SymmetricGroup",
    "build_interval",
    "down_set",
    "diamonds",
    "is_diamond_complete",
    "is_regular_undirected",
    "has_full_up_degrees",
    "diamond_violation",
    "canonical_key",
    "iter_bits",
    "to_dot",
    "interval_to_json",
    "digraph_from_json",
]


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RankedDigraph:
    """
    A DAG with an integer level per vertex and edges (source, target) with
    ``level[source] > level[target]``.
    """

    def __init__(
        self,
        levels: Sequence[int],
        edges: Iterable[tuple[int, int]],
        labels: Optional[Sequence[Hashable]] = None,
        edge_labels: Optional[dict[tuple[int, int], Hashable]] = None,
    ):
        self.levels = list(levels)
        n = len(self.levels)
        self.down: list[list[int]] = [[] for _ in range(n)]
        self.up: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for s, t in edges:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"edge ({s}, {t}) out of range")
            if self.levels[s] <= self.levels[t]:
                raise ValueError(f"edge ({s}, {t}) does not decrease level")
            if (s, t) in seen:
                continue
            seen.add((s, t))
            self.down[s].append(t)
            self.up[t].append(s)
        for lst in self.down:
            lst.sort()
        for lst in self.up:
            lst.sort()
        self.labels = list(labels) if labels is not None else list(range(n))
        if len(self.labels) != n:
            raise ValueError("one label per vertex required")
        self.edge_labels = dict(edge_labels or {})
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.below = self._reachability()

    def _reachability(self) -> list[int]:
        order = sorted(range(len(self.levels)), key=lambda v: self.levels[v])
        below = [0] * len(self.levels)
        for v in order:
            m = 1 << v
            for u in self.down[v]:
                m |= below[u]
            below[v] = m
        return below

    def __len__(self) -> int:
        return len(self.levels)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(vertices={len(self)}, edges={self.n_edges})"

    @property
    def n_edges(self) -> int:
        return sum(len(d) for d in self.down)

    def edges(self) -> list[tuple[int, int]]:
        return [(s, t) for s in range(len(self)) for t in self.down[s]]

    def has_edge(self, s: int, t: int) -> bool:
        return t in self.down[s]

    def index(self, vertex) -> int:
        """Resolve a vertex given by index or by label."""
        if isinstance(vertex, int) and not isinstance(vertex, bool):
            if 0 <= vertex < len(self):
                return vertex
            raise KeyError(f"vertex index {vertex} out of range")
        try:
            return self._index[vertex]
        except (KeyError, TypeError):
            raise KeyError(f"{vertex!r} is not a vertex") from None

    def leq(self, u: int, v: int) -> bool:
        return (self.below[v] >> u) & 1 == 1

    def comparable(self, u: int, v: int) -> bool:
        return self.leq(u, v) or self.leq(v, u)

    @cached_property
    def above(self) -> list[int]:
        """Bit v of ``above[u]`` is set iff u <= v."""
        above = [0] * len(self)
        for v, m in enumerate(self.below):
            for u in iter_bits(m):
                above[u] |= 1 << v
        return above

    @cached_property
    def up_masks(self) -> list[int]:
        out = []
        for lst in self.up:
            m = 0
            for s in lst:
                m |= 1 << s
            out.append(m)
        return out

    @cached_property
    def down_masks(self) -> list[int]:
        out = []
        for lst in self.down:
            m = 0
            for t in lst:
                m |= 1 << t
            out.append(m)
        return out

    def maximal_vertices(self) -> list[int]:
        return [v for v in range(len(self)) if not self.up[v]]

    def minimal_vertices(self) -> list[int]:
        return [v for v in range(len(self)) if not self.down[v]]

    @property
    def top(self) -> Optional[int]:
        m = self.maximal_vertices()
        return m[0] if len(m) == 1 else None

    @property
    def bottom(self) -> Optional[int]:
        m = self.minimal_vertices()
        return m[0] if len(m) == 1 else None


class BruhatInterval(RankedDigraph):
    """
    The full subgraph of the Bruhat graph on ``{u : x <= u <= y}``.

    Labels are permutations, ``level = l(u) - l(x)``, vertices are ordered by
    level and then by string notation, and the edge ``v -> u`` carries the
    transposition ``(i, j)`` with ``u = t_(i,j) * v``.
    """

    def __init__(self, x, y, perms, levels, edges, edge_labels):
        super().__init__(levels, edges, labels=perms, edge_labels=edge_labels)
        self.x = Permutation(x)
        self.y = Permutation(y)

    @property
    def rank(self) -> int:
        """l(y) - l(x)."""
        return self.levels[-1]

    def perm(self, v: int) -> Permutation:
        return Permutation(self.labels[v])


def _value_swap_label(v: Sequence[int], i: int, j: int) -> tuple[int, int]:
    a, b = v[i], v[j]
    return (a, b) if a < b else (b, a)


def build_interval(x: Sequence[int], y: Sequence[int]) -> BruhatInterval:
    """Build [x, y] by a downward search from y that stays above x."""
    x, y = tuple(x), tuple(y)
    if len(x) != len(y):
        raise ValueError("window sizes differ")
    if not bruhat_leq(x, y):
        raise ValueError(f"{Permutation(x)} is not below {Permutation(y)}")
    n = len(y)
    found = {y}
    frontier = [y]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                for j in range(i + 1, n):
                    if v[i] > v[j]:
                        u = list(v)
                        u[i], u[j] = u[j], u[i]
                        u = tuple(u)
                        if u not in found and bruhat_leq(x, u):
                            found.add(u)
                            nxt.append(u)
        frontier = nxt
    lx = length(x)
    lens = {p: length(p) for p in found}
    perms = sorted(found, key=lambda p: (lens[p], p))
    index = {p: k for k, p in enumerate(perms)}
    edges = []
    edge_labels = {}
    for k, v in enumerate(perms):
        for i in range(n):
            for j in range(i + 1, n):
                if v[i] > v[j]:
                    u = list(v)
                    u[i], u[j] = u[j], u[i]
                    t = index.get(tuple(u))
                    if t is not None:
                        edges.append((k, t))
                        edge_labels[(k, t)] = _value_swap_label(v, i, j)
    levels = [lens[p] - lx for p in perms]
    return BruhatInterval(x, y, [Permutation(p) for p in perms], levels, edges, edge_labels)


class SymmetricGroup:
    """
    Whole-group Bruhat data for fast interval extraction in sweeps.

    Permutations are indexed in (length, lexicographic) order; ``below[i]`` is
    the bitmask of the lower set of permutation i.
    """

    def __init__(self, size: int):
        self.size = size
        self.perms = [tuple(p) for p in all_permutations(size)]
        self.index = {p: i for i, p in enumerate(self.perms)}
        self.lengths = [length(p) for p in self.perms]
        n = size
        self.down: list[list[tuple[int, tuple[int, int]]]] = []
        for v in self.perms:
            lst = []
            for i in range(n):
                for j in range(i + 1, n):
                    if v[i] > v[j]:
                        u = list(v)
                        u[i], u[j] = u[j], u[i]
                        lst.append((self.index[tuple(u)], _value_swap_label(v, i, j)))
            lst.sort()
            self.down.append(lst)
        below = [0] * len(self.perms)
        for k in range(len(self.perms)):
            m = 1 << k
            for u, _ in self.down[k]:
                m |= below[u]
            below[k] = m
        self.below = below
        above = [0] * len(self.perms)
        for v, m in enumerate(below):
            bit = 1 << v
            for u in iter_bits(m):
                above[u] |= bit
        self.above = above

    def __len__(self) -> int:
        return len(self.perms)

    def leq(self, u: int, v: int) -> bool:
        return (self.below[v] >> u) & 1 == 1

    def n_comparable_pairs(self, strict: bool = True) -> int:
        total = sum(m.bit_count() for m in self.below)
        return total - len(self.perms) if strict else total

    def interval(self, x, y) -> BruhatInterval:
        xi = x if isinstance(x, int) else self.index[tuple(x)]
        yi = y if isinstance(y, int) else self.index[tuple(y)]
        mask = self.below[yi] & self.above[xi]
        if not mask:
            raise ValueError(f"{Permutation(self.perms[xi])} is not below {Permutation(self.perms[yi])}")
        members = list(iter_bits(mask))
        local = {g: k for k, g in enumerate(members)}
        lx = self.lengths[xi]
        edges = []
        edge_labels = {}
        for k, g in enumerate(members):
            for gu, lab in self.down[g]:
                t = local.get(gu)
                if t is not None:
                    edges.append((k, t))
                    edge_labels[(k, t)] = lab
        perms = [Permutation(self.perms[g]) for g in members]
        levels = [self.lengths[g] - lx for g in members]
        return BruhatInterval(self.perms[xi], self.perms[yi], perms, levels, edges, edge_labels)


# -- order-theoretic queries ------------------------------------------------


def down_set(g: RankedDigraph, z) -> frozenset[int]:
    """All v <= z, z included."""
    return frozenset(iter_bits(g.below[g.index(z)]))


def diamonds(g: RankedDigraph) -> list[tuple[int, int, int, int]]:
    """
    All (top, left, right, bottom) with edges top->left, top->right,
    left->bottom, right->bottom and left < right (unordered side pair).
    """
    out = []
    down_masks = g.down_masks
    for t in range(len(g)):
        kids = g.down[t]
        for a in range(len(kids)):
            la = kids[a]
            for b in range(a + 1, len(kids)):
                r = kids[b]
                for bot in iter_bits(down_masks[la] & down_masks[r]):
                    out.append((t, la, r, bot))
    return out


def diamond_violation(g: RankedDigraph, members: int) -> Optional[tuple[int, int, int, int]]:
    """
    First diamond whose red edges lie in the full subgraph on ``members``
    (a bitmask) without the whole diamond lying there, or None.

    The three configurations are the top pair (t->l, t->r), a side pair
    (t->l, l->b or t->r, r->b) and the bottom pair (l->b, r->b).
    """
    down_masks = g.down_masks
    up_masks = g.up_masks
    for b in iter_bits(members):
        # bottom pair: l, r, b in J; every common parent of l and r must be in J
        ups = [u for u in g.up[b] if (members >> u) & 1]
        for a in range(len(ups)):
            la = ups[a]
            for c in range(a + 1, len(ups)):
                r = ups[c]
                missing = up_masks[la] & up_masks[r] & ~members
                if missing:
                    t = (missing & -missing).bit_length() - 1
                    return (t, la, r, b)
    for t in iter_bits(members):
        kids = [k for k in g.down[t] if (members >> k) & 1]
        # top pair: t, l, r in J; every common child of l and r must be in J
        for a in range(len(kids)):
            la = kids[a]
            for c in range(a + 1, len(kids)):
                r = kids[c]
                missing = down_masks[la] & down_masks[r] & ~members
                if missing:
                    b = (missing & -missing).bit_length() - 1
                    return (t, la, r, b)
        # side pair: t, l, b in J; every r with t->r->b must be in J
        tdown = down_masks[t]
        for la in kids:
            for b in g.down[la]:
                if not (members >> b) & 1:
                    continue
                missing = tdown & up_masks[b] & ~members & ~(1 << la)
                if missing:
                    r = (missing & -missing).bit_length() - 1
                    return (t, la, r, b) if la < r else (t, r, la, b)
    return None


def is_diamond_complete(g: RankedDigraph, members: Iterable[int]) -> bool:
    mask = 0
    for v in members:
        mask |= 1 << g.index(v)
    return diamond_violation(g, mask) is None


def is_regular_undirected(g: RankedDigraph) -> bool:
    """All vertices have the same degree once edge orientations are forgotten."""
    degrees = {len(g.down[v]) + len(g.up[v]) for v in range(len(g))}
    return len(degrees) <= 1


def has_full_up_degrees(g: RankedDigraph) -> bool:
    """
    Every vertex v has exactly ``level(top) - level(v)`` edges going up.

    For a Bruhat interval [x, y] this is the rational smoothness criterion:
    it holds iff P_{u,y} = 1 for all u in [x, y], and hence iff P_{x,y} = 1.
    Plain regularity implies it, but not conversely.
    """
    top = g.top
    if top is None:
        raise ValueError("graph has no unique maximal vertex")
    return all(len(g.up[v]) == g.levels[top] - g.levels[v] for v in range(len(g)))


# -- canonical form ------------------------------------------------------------


def _refine(g: RankedDigraph, color: list[int]) -> list[int]:
    n_classes = len(set(color))
    while True:
        sigs = [
            (
                color[v],
                tuple(sorted(color[u] for u in g.down[v])),
                tuple(sorted(color[u] for u in g.up[v])),
            )
            for v in range(len(g))
        ]
        rank = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [rank[s] for s in sigs]
        if len(rank) == n_classes:
            return new
        color, n_classes = new, len(rank)


def _certificate(g: RankedDigraph, color: list[int], extra: list) -> tuple:
    # color is discrete: vertex v goes to position color[v]
    n = len(g)
    order = sorted(range(n), key=lambda v: color[v])
    edges = sorted((color[s], color[t]) for s in range(n) for t in g.down[s])
    return (
        tuple(g.levels[v] for v in order),
        tuple(extra[v] for v in order),
        tuple(edges),
    )


def canonical_key(g: RankedDigraph, colors: Optional[Sequence[Hashable]] = None) -> bytes:
    """
    A byte string that is equal for two graphs iff they are isomorphic by a
    level-preserving (and color-preserving, if ``colors`` is given) map.

    Color refinement by level and neighbor colors, then individualization
    with backtracking over whatever symmetry is left; the lexicographically
    least certificate over all discrete leaves wins.
    """
    n = len(g)
    extra = list(colors) if colors is not None else [0] * n
    if len(extra) != n:
        raise ValueError("one color per vertex required")
    extra_rank = {c: k for k, c in enumerate(sorted(set(map(repr, extra))))}
    extra = [extra_rank[repr(c)] for c in extra]
    init = [(g.levels[v], extra[v], len(g.down[v]), len(g.up[v])) for v in range(n)]
    rank = {s: k for k, s in enumerate(sorted(set(init)))}
    color = _refine(g, [rank[s] for s in init])

    best: list = [None]

    def search(color: list[int]) -> None:
        counts: dict[int, int] = {}
        for c in color:
            counts[c] = counts.get(c, 0) + 1
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            cert = _certificate(g, color, extra)
            if best[0] is None or cert < best[0]:
                best[0] = cert
            return
        for v in range(n):
            if color[v] != target:
                continue
            split = [2 * c + (1 if (c == target and w != v) else 0) for w, c in enumerate(color)]
            rank = {s: k for k, s in enumerate(sorted(set(split)))}
            search(_refine(g, [rank[s] for s in split]))

    search(color)
    return repr((n, best[0])).encode("ascii")


# -- import / export -------------------------------------------------------------


def _vertex_name(g: RankedDigraph, v: int) -> str:
    lab = g.labels[v]
    if isinstance(lab, Permutation):
        return str(lab)
    if isinstance(lab, tuple) and all(isinstance(i, int) for i in lab):
        return str(Permutation(lab))
    return str(lab)


def to_dot(
    g: RankedDigraph,
    members: Optional[Iterable[int]] = None,
    hypercube_edges: Optional[Iterable[tuple[int, int]]] = None,
    name: str = "interval",
) -> str:
    """
    Graphviz source; vertices of ``members`` are filled, hypercube edges
    are drawn in blue.
    """
    member_set = set(members or ())
    hyper = set(hypercube_edges or ())
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=ellipse];"]
    for v in range(len(g)):
        attrs = [f'label="{_vertex_name(g, v)}\\nlevel {g.levels[v]}"']
        if v in member_set:
            attrs.append('style=filled fillcolor="#f4a6a6"')
        lines.append(f"  v{v} [{' '.join(attrs)}];")
    for s, t in g.edges():
        attrs = []
        lab = g.edge_labels.get((s, t))
        if lab is not None:
            attrs.append(f'label="{lab}"'.replace(" ", ""))
        if (s, t) in hyper:
            attrs.append('color="#1f5fd6" penwidth=2')
        suffix = f" [{' '.join(attrs)}]" if attrs else ""
        lines.append(f"  v{s} -> v{t}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def interval_to_json(g: BruhatInterval) -> dict:
    edges = []
    for s, t in g.edges():
        lab = g.edge_labels.get((s, t))
        edges.append([s, t, f"({lab[0]},{lab[1]})" if lab else None])
    return {
        "x": str(g.x),
        "y": str(g.y),
        "vertices": [_vertex_name(g, v) for v in range(len(g))],
        "levels": list(g.levels),
        "edges": edges,
    }


def digraph_from_json(data) -> RankedDigraph:
    """Load ``{"levels": [...], "edges": [[s, t], ...]}`` (text or parsed)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        levels = [int(v) for v in data["levels"]]
        edges = [(int(e[0]), int(e[1])) for e in data["edges"]]
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ValueError(f"malformed graph fixture: {exc}") from None
    labels = data.get("labels")
    return RankedDigraph(levels, edges, labels=labels)
