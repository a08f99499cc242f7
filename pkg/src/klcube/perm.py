"""
Permutations of {0, ..., n} in string notation.

A permutation is stored as the tuple of its images, so ``(2, 0, 3, 1)`` sends
0 -> 2, 1 -> 0, 2 -> 3 and 3 -> 1.  Products follow ``compose(a, b)(i) ==
a(b(i))``; multiplying by a transposition "on the left" (``t * u``) therefore
swaps two *values* of ``u``, while multiplying on the right swaps two
*positions*.

>>> x = Permutation.parse("0213")
>>> length(x)
1
>>> str(compose(transposition(4, 0, 2), x))
'2013'
>>> bruhat_leq(x, Permutation.parse("2301"))
True
"""

from __future__ import annotations

from itertools import permutations as _itertools_permutations
from typing import Iterable, Sequence

__all__ = [
    "MAX_SIZE",
    "Permutation",
    "CornerRankMatrix",
    "compose",
    "inverse",
    "length",
    "identity",
    "longest",
    "transposition",
    "corner_rank_matrix",
    "bruhat_leq",
    "pattern_restriction",
    "upper_transpositions",
    "all_permutations",
    "left_descents",
]

# fixed-width storage bound on the window size
MAX_SIZE = 16

# (n+1) x (n+1) matrix of lower-left corner ranks, row index first
CornerRankMatrix = tuple[tuple[int, ...], ...]


class Permutation(tuple):
    """An immutable permutation of ``range(len(self))`` in string notation."""

    __slots__ = ()

    def __new__(cls, images: Iterable[int] = ()) -> Permutation:
        self = super().__new__(cls, (int(i) for i in images))
        size = len(self)
        if not 1 <= size <= MAX_SIZE:
            raise ValueError(f"window size must be in 1..{MAX_SIZE}, got {size}")
        if sorted(self) != list(range(size)):
            raise ValueError(f"not a permutation of 0..{size - 1}: {tuple(self)}")
        return self

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse ``"2031"``, ``"2,0,3,1"`` or ``"(2, 0, 3, 1)"``."""
        body = text.strip()
        if body[:1] in ("(", "["):
            if body[-1:] != {"(": ")", "[": "]"}[body[0]]:
                raise ValueError(f"unbalanced brackets in {text!r}")
            body = body[1:-1]
        body = body.replace(" ", "")
        if not body:
            raise ValueError("empty permutation string")
        if "," in body:
            parts = body.split(",")
        else:
            parts = list(body)
        try:
            return cls(int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"cannot parse permutation {text!r}: {exc}") from None

    @property
    def size(self) -> int:
        return len(self)

    def __str__(self) -> str:
        if len(self) <= 10:
            return "".join(str(i) for i in self)
        return ",".join(str(i) for i in self)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __getnewargs__(self):
        return (tuple(self),)


def _check_same_size(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ValueError(f"window sizes differ: {len(a)} != {len(b)}")


def compose(a: Sequence[int], b: Sequence[int]) -> Permutation:
    """The product ``a * b``, i.e. ``i -> a(b(i))``."""
    _check_same_size(a, b)
    return Permutation(a[i] for i in b)


def inverse(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return Permutation(inv)


def length(p: Sequence[int]) -> int:
    """Number of inversions."""
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def identity(size: int) -> Permutation:
    return Permutation(range(size))


def longest(size: int) -> Permutation:
    return Permutation(range(size - 1, -1, -1))


def transposition(size: int, i: int, j: int) -> Permutation:
    """The transposition t_(i,j) exchanging ``i`` and ``j``."""
    if i == j or not (0 <= i < size and 0 <= j < size):
        raise ValueError(f"bad transposition ({i},{j}) in window {size}")
    images = list(range(size))
    images[i], images[j] = j, i
    return Permutation(images)


def corner_rank_matrix(p: Sequence[int]) -> CornerRankMatrix:
    """
    Entry ``(r, c)`` is the rank of the lower-left corner of the permutation
    matrix with rows ``>= r`` and columns ``<= c``; the matrix has a 1 at
    (p(c), c), so this counts ``a <= c`` with ``p(a) >= r``.

    >>> corner_rank_matrix((1, 2, 3, 0))
    ((1, 2, 3, 4), (1, 2, 3, 3), (0, 1, 2, 2), (0, 0, 1, 1))
    """
    n = len(p)
    rows = []
    for r in range(n):
        row = []
        count = 0
        for c in range(n):
            if p[c] >= r:
                count += 1
            row.append(count)
        rows.append(tuple(row))
    return tuple(rows)


def bruhat_leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """
    Bruhat order, tested by entrywise comparison of corner rank matrices.

    Columns are swept left to right keeping, for every threshold r, how many
    values ``>= r`` have been seen so far in each permutation.
    """
    _check_same_size(u, v)
    n = len(u)
    cu = [0] * n
    cv = [0] * n
    for c in range(n - 1):
        a, b = u[c], v[c]
        for r in range(a + 1):
            cu[r] += 1
        for r in range(b + 1):
            cv[r] += 1
        # row 0 and the last column agree for every permutation
        for r in range(1, n):
            if cu[r] > cv[r]:
                return False
    return True


def pattern_restriction(u: Sequence[int], positions: Iterable[int]) -> Permutation:
    """
    Flatten ``(u(i_1), ..., u(i_k))`` to the permutation of ``0..k-1`` with
    the same relative order.

    >>> str(pattern_restriction((2, 0, 3, 1), [0, 2]))
    '01'
    """
    pos = sorted(set(positions))
    if not pos:
        raise ValueError("positions must be nonempty")
    if pos[0] < 0 or pos[-1] >= len(u):
        raise ValueError(f"positions out of range for window {len(u)}")
    values = [u[i] for i in pos]
    rank = {v: k for k, v in enumerate(sorted(values))}
    return Permutation(rank[v] for v in values)


def upper_transpositions(u: Sequence[int]) -> set[tuple[int, int]]:
    """
    All ``(i, j)`` with ``i < j`` such that ``t_(i,j) * u`` is longer than u.

    Left multiplication swaps the values i and j, which lengthens u exactly
    when the smaller value i sits to the left of j.
    """
    pos = inverse(u)
    n = len(u)
    return {(i, j) for i in range(n) for j in range(i + 1, n) if pos[i] < pos[j]}


def left_descents(u: Sequence[int]) -> list[int]:
    """Indices i such that ``s_i * u < u`` with ``s_i = t_(i,i+1)``."""
    pos = inverse(u)
    return [i for i in range(len(u) - 1) if pos[i] > pos[i + 1]]


def all_permutations(size: int) -> list[Permutation]:
    """All permutations of the window, sorted by length and then lexicographically."""
    perms = [Permutation(p) for p in _itertools_permutations(range(size))]
    perms.sort(key=lambda p: (length(p), p))
    return perms
