"""
Classical Kazhdan-Lusztig polynomials of S_{n+1} (the independent oracle).

Polynomials are computed a column at a time: ``column(y)`` holds P_{x,y} for
every x <= y.  With s = s_i the leftmost left descent of y and z = s y,

    P_{x,y} = P_{sx,y}                                                if sx > x
    P_{x,y} = P_{sx,z} + q P_{x,z} - sum_w mu(w,z) q^{(l(y)-l(w))/2} P_{x,w}   if sx < x

where w runs over x <= w < z with s w < w.  The lower set of y is
``{x <= z} | {s x : x <= z}`` (lifting property), so no Bruhat comparisons are
needed while filling a column.
"""

from __future__ import annotations

import ast
from typing import Iterator, Optional, Sequence

from .perm import Permutation, bruhat_leq, left_descents, length
from .poly import ONE, ZERO, IntPolynomial, partial_transform

__all__ = ["KLTable", "KLCacheError"]


class KLCacheError(ValueError):
    """An on-disk KL cache failed validation."""


def _swap_values(p: tuple, i: int) -> tuple:
    out = list(p)
    a = out.index(i)
    b = out.index(i + 1)
    out[a], out[b] = i + 1, i
    return tuple(out)


class KLTable:
    """
    Memoized map (x, y) -> P_{x,y} for a fixed window size.

    Keys are plain tuples; :class:`~klcube.perm.Permutation` instances hash and
    compare equal to them.  Inserts are idempotent, so a table may be shared
    read-mostly or simply rebuilt per worker.
    """

    def __init__(self, size: int):
        if size < 1:
            raise ValueError("window size must be positive")
        self.size = size
        self._columns: dict[tuple, dict[tuple, IntPolynomial]] = {}
        self._lengths: dict[tuple, int] = {}
        self._mu_lists: dict[tuple, list[tuple[tuple, int]]] = {}

    def __repr__(self) -> str:
        return f"KLTable(size={self.size}, columns={len(self._columns)})"

    def _len(self, p: tuple) -> int:
        ell = self._lengths.get(p)
        if ell is None:
            ell = self._lengths[p] = length(p)
        return ell

    def _check(self, p: Sequence[int]) -> tuple:
        if len(p) != self.size:
            raise ValueError(f"window size {len(p)} does not match table size {self.size}")
        return tuple(p)

    # -- core recursion ---------------------------------------------------

    def column(self, y: Sequence[int]) -> dict[tuple, IntPolynomial]:
        """All P_{x,y}, keyed by x, for x <= y.  Do not mutate the result."""
        y = self._check(y)
        col = self._columns.get(y)
        if col is not None:
            return col
        # walk down a chain of left descents iteratively, then fill upwards
        chain = []
        cur = y
        while cur not in self._columns:
            descents = left_descents(cur)
            if not descents:
                self._columns[cur] = {cur: ONE}
                break
            chain.append((cur, descents[0]))
            cur = _swap_values(cur, descents[0])
        for top, s in reversed(chain):
            self._fill_column(top, s)
        return self._columns[y]

    def _fill_column(self, y: tuple, s: int) -> None:
        z = _swap_values(y, s)
        colz = self.column(z)
        ly = self._len(y)
        mus = self._mu_list(z, s)
        # w-columns needed by the correction sum
        wcols = [(self.column(w), mu, (ly - self._len(w)) // 2) for w, mu in mus]
        col: dict[tuple, IntPolynomial] = {}
        pending = []
        for u in colz:
            su = _swap_values(u, s)
            for x, sx in ((u, su), (su, u)):
                if x in col:
                    continue
                pos_s = x.index(s)
                pos_s1 = x.index(s + 1)
                if pos_s < pos_s1:
                    # s x > x: copy from s x once it is known
                    pending.append((x, sx))
                    col[x] = ZERO
                    continue
                acc = colz.get(sx, ZERO) + colz.get(x, ZERO).shift(1)
                for wcol, mu, half in wcols:
                    pxw = wcol.get(x)
                    if pxw is not None:
                        acc = acc - pxw.scale(mu).shift(half)
                col[x] = acc
        for x, sx in pending:
            col[x] = col[sx]
        self._columns[y] = col

    def _mu_list(self, z: tuple, s: int) -> list[tuple[tuple, int]]:
        """Pairs (w, mu(w,z)) with w < z, s w < w and mu != 0."""
        key = (z, s)
        cached = self._mu_lists.get(key)
        if cached is not None:
            return cached
        colz = self.column(z)
        lz = self._len(z)
        out = []
        for w, p in colz.items():
            d = lz - self._len(w)
            if d % 2 == 0 or d <= 0:
                continue
            mu = p[(d - 1) // 2]
            if mu and w.index(s) > w.index(s + 1):
                out.append((w, mu))
        out.sort()
        self._mu_lists[key] = out
        return out

    # -- public queries -----------------------------------------------------

    def kl(self, x: Sequence[int], y: Sequence[int]) -> IntPolynomial:
        """P_{x,y}; zero unless x <= y."""
        x = self._check(x)
        return self.column(y).get(x, ZERO)

    def mu(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Coefficient of q^((l(y)-l(x)-1)/2) in P_{x,y}; zero for even length difference."""
        x, y = self._check(x), self._check(y)
        if x == y or not bruhat_leq(x, y):
            raise ValueError("mu(x, y) requires x < y")
        d = self._len(y) - self._len(x)
        if d % 2 == 0:
            return 0
        return self.kl(x, y)[(d - 1) // 2]

    def partial_kl(self, x: Sequence[int], y: Sequence[int]) -> IntPolynomial:
        """The q-derivative of P_{x,y}, taken with twist l(y) - l(x)."""
        x, y = self._check(x), self._check(y)
        p = self.kl(x, y)
        if not p:
            raise ValueError(f"{Permutation(x)} is not below {Permutation(y)}")
        return partial_transform(p, self._len(y) - self._len(x))

    def lower_set(self, y: Sequence[int]) -> list[tuple]:
        return list(self.column(y))

    def __len__(self) -> int:
        return sum(len(c) for c in self._columns.values())

    def items(self) -> Iterator[tuple[tuple, tuple, IntPolynomial]]:
        for y in sorted(self._columns, key=lambda p: (self._len(p), p)):
            col = self._columns[y]
            for x in sorted(col, key=lambda p: (self._len(p), p)):
                yield x, y, col[x]

    # -- on-disk cache ----------------------------------------------------

    def save(self, path) -> None:
        """One line per stored pair: ``x<TAB>y<TAB>[c0,c1,...]``."""
        with open(path, "w", encoding="utf-8") as fh:
            for x, y, p in self.items():
                fh.write(f"{Permutation(x)}\t{Permutation(y)}\t[{','.join(map(str, p.coeffs))}]\n")

    @classmethod
    def load(cls, path, size: Optional[int] = None) -> KLTable:
        """
        Read a cache written by :meth:`save`.  Every entry is checked against
        the table invariants and every column must be complete.
        """
        entries: dict[tuple, dict[tuple, IntPolynomial]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    xs, ys, cs = line.split("\t")
                    x = tuple(Permutation.parse(xs))
                    y = tuple(Permutation.parse(ys))
                    coeffs = ast.literal_eval(cs)
                    p = IntPolynomial(coeffs)
                except (ValueError, SyntaxError, TypeError) as exc:
                    raise KLCacheError(f"{path}:{lineno}: malformed record ({exc})") from None
                if size is None:
                    size = len(x)
                if len(x) != size or len(y) != size:
                    raise KLCacheError(f"{path}:{lineno}: window size mismatch")
                col = entries.setdefault(y, {})
                if x in col:
                    raise KLCacheError(f"{path}:{lineno}: duplicate record for {xs},{ys}")
                col[x] = p
        if size is None:
            raise KLCacheError(f"{path}: empty cache")
        table = cls(size)
        for y, col in entries.items():
            ly = table._len(y)
            if col.get(y) != ONE:
                raise KLCacheError(f"{path}: P_(y,y) != 1 for y={Permutation(y)}")
            for x, p in col.items():
                d = ly - table._len(x)
                if not p or not bruhat_leq(x, y):
                    raise KLCacheError(f"{path}: stored pair {Permutation(x)},{Permutation(y)} is not comparable")
                if x != y and 2 * p.degree > d - 1:
                    raise KLCacheError(f"{path}: degree bound violated at {Permutation(x)},{Permutation(y)}")
                if not p.is_nonnegative():
                    raise KLCacheError(f"{path}: negative coefficient at {Permutation(x)},{Permutation(y)}")
            table._columns[y] = col
        for y, col in list(table._columns.items()):
            expected = _lower_set_size(y)
            if len(col) != expected:
                raise KLCacheError(
                    f"{path}: column of {Permutation(y)} has {len(col)} entries, expected {expected}"
                )
        return table


def _lower_set_size(y: tuple) -> int:
    # counts {x <= y} by a downward search in the Bruhat graph
    size = len(y)
    seen = {y}
    frontier = [y]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(size):
                for j in range(i + 1, size):
                    if v[i] > v[j]:
                        w = list(v)
                        w[i], w[j] = w[j], w[i]
                        w = tuple(w)
                        if w not in seen:
                            seen.add(w)
                            nxt.append(w)
        frontier = nxt
    return len(seen)

