"""
Brute-force reference implementations, deliberately naive and independent of
the package internals (only IntPolynomial arithmetic is shared).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

from klcube.poly import IntPolynomial

ONE = IntPolynomial([1])
ZERO = IntPolynomial([])
Q = IntPolynomial([0, 1])


def inversions(p) -> int:
    return sum(1 for i, j in combinations(range(len(p)), 2) if p[i] > p[j])


def swap_positions(p, i, j) -> tuple:
    w = list(p)
    w[i], w[j] = w[j], w[i]
    return tuple(w)


@lru_cache(maxsize=None)
def lower_set(y: tuple) -> frozenset:
    """Everything reachable from y by downward Bruhat-graph edges."""
    seen = {y}
    stack = [y]
    while stack:
        v = stack.pop()
        for i, j in combinations(range(len(v)), 2):
            if v[i] > v[j]:
                w = swap_positions(v, i, j)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return frozenset(seen)


def leq_by_paths(u, v) -> bool:
    return tuple(u) in lower_set(tuple(v))


def group(size: int) -> list[tuple]:
    return sorted(permutations(range(size)), key=lambda p: (inversions(p), p))


def interval_vertices(x, y) -> list[tuple]:
    return [u for u in lower_set(tuple(y)) if leq_by_paths(x, u)]


def interval_edges(x, y) -> set[tuple[tuple, tuple]]:
    verts = set(interval_vertices(x, y))
    out = set()
    for v in verts:
        for i, j in combinations(range(len(v)), 2):
            if v[i] > v[j]:
                w = swap_positions(v, i, j)
                if w in verts:
                    out.add((v, w))
    return out


def diamonds_brute(n_vertices: int, edges) -> set[tuple]:
    """All (top, left, right, bottom) with left < right as integers."""
    es = set(edges)
    out = set()
    vs = range(n_vertices)
    for t in vs:
        for b in vs:
            mids = [m for m in vs if (t, m) in es and (m, b) in es]
            for left, right in combinations(sorted(mids), 2):
                out.add((t, left, right, b))
    return out


# -- KL polynomials via R-polynomials ---------------------------------------------------
#
# R_{x,w}: with s a right descent of w (ws < w),
#   R_{x,w} = R_{xs,ws}                      if xs < x
#   R_{x,w} = (q-1) R_{x,ws} + q R_{xs,ws}   otherwise
# and P is the unique solution of
#   q^{l(w)-l(x)} P_{x,w}(1/q) - P_{x,w}(q) = sum_{x < y <= w} R_{x,y} P_{y,w}
# with deg P_{x,w} <= (l(w)-l(x)-1)/2.


def _right_mult(p, i) -> tuple:
    return swap_positions(p, i, i + 1)


@lru_cache(maxsize=None)
def r_poly(x: tuple, w: tuple) -> IntPolynomial:
    if x == w:
        return ONE
    if not leq_by_paths(x, w):
        return ZERO
    i = next(k for k in range(len(w) - 1) if w[k] > w[k + 1])
    ws = _right_mult(w, i)
    xs = _right_mult(x, i)
    if x[i] > x[i + 1]:
        return r_poly(xs, ws)
    return (Q - ONE) * r_poly(x, ws) + Q * r_poly(xs, ws)


@lru_cache(maxsize=None)
def kl_brute(x: tuple, w: tuple) -> IntPolynomial:
    if x == w:
        return ONE
    if not leq_by_paths(x, w):
        return ZERO
    d = inversions(w) - inversions(x)
    rhs = ZERO
    for y in interval_vertices(x, w):
        if y != x:
            rhs = rhs + r_poly(x, y) * kl_brute(y, w)
    # the -P_{x,w} term owns every degree <= (d-1)/2
    return IntPolynomial([-rhs[k] for k in range((d - 1) // 2 + 1)])


def q_derivative_brute(p: IntPolynomial, n: int) -> IntPolynomial:
    """(P - q^N P(1/q)) / (1 - q) by long division."""
    rev = [0] * (n + 1)
    for k, c in enumerate(p.to_list()):
        rev[n - k] += c
    num = [a - b for a, b in zip(p.to_list() + [0] * (n + 1), rev + [0] * (len(p.to_list()) + 1))]
    # divide by (1 - q): coefficients are prefix sums
    out, acc = [], 0
    for c in num[: max(n, 1)]:
        acc += c
        out.append(acc)
    return IntPolynomial(out)
