"""
The hypercube formula dP_{x,y} = I_{x,y,J} + Q_{x,y,J}.

``Q`` (hypercube piece) only sees the part of [x, y] outside J, through the
hypercube map at x; ``I`` (inductive piece) only sees J, through the
expansion of the restricted column (P_{v,y})_{v in J} in the Kazhdan-Lusztig
basis of J.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .decomp import HypercubeDecomposition, canonical_L
from .graph import BruhatInterval, SymmetricGroup, build_interval, iter_bits
from .perm import Permutation, bruhat_leq
from .poly import ONE, ZERO, IntPolynomial, partial_transform, recover_from_partial, reverse_twist

__all__ = [
    "InductiveExpansion",
    "VerificationRecord",
    "theta_table",
    "q_tilde",
    "q_piece",
    "gamma_expansion",
    "inductive_piece",
    "check_formula",
    "FormulaKL",
]

_Q_MINUS_1 = IntPolynomial([-1, 1])


@dataclass
class InductiveExpansion:
    """Coefficients gamma_v of the restricted column in the KL basis of J, keyed by vertex."""

    gamma: dict[int, IntPolynomial]

    def nonnegative(self) -> bool:
        return all(g.is_nonnegative() for g in self.gamma.values())


@dataclass
class VerificationRecord:
    x: Permutation
    y: Permutation
    z: Permutation
    dP: IntPolynomial
    I: IntPolynomial
    Q: IntPolynomial
    passed: bool
    gamma_nonneg: bool
    q_nonneg: bool = True
    degenerate: bool = False
    gamma: dict = field(default_factory=dict, repr=False)
    P: Optional[IntPolynomial] = None

    def to_json(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "z": str(self.z),
            "dP": self.dP.to_list(),
            "I": self.I.to_list(),
            "Q": self.Q.to_list(),
            "pass": self.passed,
            "gamma_nonneg": self.gamma_nonneg,
        }


def _column(klt, y) -> dict:
    return klt.column(y)


def theta_table(interval: BruhatInterval, D: HypercubeDecomposition) -> dict[int, int]:
    """
    The hypercube map at x on every subset of the hypercube edges, keyed by
    bitmask over ``D.base_sources``: each subset goes to the crown of its
    maximal edges.
    """
    srcs = D.base_sources
    k = len(srcs)
    strictly_above = [0] * k
    for i in range(k):
        for j in range(k):
            if i != j and interval.leq(srcs[i], srcs[j]):
                strictly_above[i] |= 1 << j
    out = {}
    for mask in range(1 << k):
        top = 0
        for i in iter_bits(mask):
            if not strictly_above[i] & mask:
                top |= 1 << i
        out[mask] = D.base_crowns[top]
    return out


def q_tilde(interval: BruhatInterval, D: HypercubeDecomposition, klt) -> IntPolynomial:
    """Sum over nonempty I of (q-1)^{|I|-1} P_{theta(I), y}."""
    coly = _column(klt, interval.y)
    labels = interval.labels
    # group terms by (crown, |I|) before multiplying out
    counts: dict[tuple[int, int], int] = {}
    for mask, crown in theta_table(interval, D).items():
        if mask:
            key = (crown, bin(mask).count("1"))
            counts[key] = counts.get(key, 0) + 1
    powers = [ONE]
    total = ZERO
    for (crown, size), c in sorted(counts.items()):
        while len(powers) < size:
            powers.append(powers[-1] * _Q_MINUS_1)
        total = total + (powers[size - 1] * coly[labels[crown]]).scale(c)
    return total


def q_piece(interval: BruhatInterval, D: HypercubeDecomposition, klt) -> IntPolynomial:
    """q^{l(y)-l(x)-1} Qtilde(1/q)."""
    qt = q_tilde(interval, D, klt)
    if not qt:
        return ZERO
    return reverse_twist(qt, interval.rank - 1)


def gamma_expansion(interval: BruhatInterval, D: HypercubeDecomposition, klt) -> InductiveExpansion:
    """
    Solve sum_v gamma_v b_v = r over v in J minus x by unitriangular
    elimination, longest v first.
    """
    labels = interval.labels
    base = interval.bottom
    coly = _column(klt, interval.y)
    members = D.member_mask & ~(1 << base)
    order = sorted(iter_bits(members), key=lambda v: (interval.levels[v], labels[v]), reverse=True)
    residual = {v: coly.get(labels[v], ZERO) for v in order}
    gamma: dict[int, IntPolynomial] = {}
    for v in order:
        g = residual[v]
        if not g:
            continue
        gamma[v] = g
        colv = _column(klt, labels[v])
        for w in iter_bits(interval.below[v] & members):
            pwv = colv.get(labels[w])
            if pwv is not None:
                residual[w] = residual[w] - g * pwv
        if residual[v]:
            raise RuntimeError(f"nonzero residue at {labels[v]}: P_(v,v) != 1 in the KL table")
    return InductiveExpansion(gamma)


def inductive_piece(
    interval: BruhatInterval,
    D: HypercubeDecomposition,
    klt,
    expansion: Optional[InductiveExpansion] = None,
) -> IntPolynomial:
    """Sum of gamma_v * dP_{x,v} over v in J minus x."""
    if expansion is None:
        expansion = gamma_expansion(interval, D, klt)
    x = interval.labels[interval.bottom]
    total = ZERO
    for v, g in expansion.gamma.items():
        pxv = _column(klt, interval.labels[v])[x]
        total = total + g * partial_transform(pxv, interval.levels[v])
    return total


def check_formula(interval: BruhatInterval, D: HypercubeDecomposition, klt) -> VerificationRecord:
    """Compare I + Q against the q-derivative of the oracle's P_{x,y}."""
    p = klt.kl(interval.x, interval.y)
    dp = partial_transform(p, interval.rank)
    expansion = gamma_expansion(interval, D, klt)
    ind = inductive_piece(interval, D, klt, expansion)
    hyp = q_piece(interval, D, klt)
    return VerificationRecord(
        x=interval.x,
        y=interval.y,
        z=Permutation(interval.labels[D.z]),
        dP=dp,
        I=ind,
        Q=hyp,
        passed=(ind + hyp == dp),
        gamma_nonneg=expansion.nonnegative(),
        q_nonneg=hyp.is_nonnegative(),
        degenerate=D.degenerate,
        gamma={str(interval.labels[v]): g.to_list() for v, g in expansion.gamma.items()},
        P=p,
    )


class _FormulaColumns:
    """Adapter exposing already-known P_{u,v} (u, v in one interval) as KL columns."""

    def __init__(self, owner: FormulaKL, interval: BruhatInterval):
        self.owner = owner
        self.interval = interval

    def column(self, v):
        return self.owner.column_within(self.interval, v)

    def kl(self, x, y):
        return self.owner.kl(x, y)


class FormulaKL:
    """
    Kazhdan-Lusztig polynomials computed from the coset decomposition alone:
    P_{x,y} is recovered from dP = I + Q, where every polynomial on the right
    involves a strictly smaller pair of the same interval.

    An interval lying in a single coset (L is everything) gives no
    information, so the pair is reduced first: if x^{-1}(0) = y^{-1}(0) the
    inverse pair is tried, then the pair conjugated by w_0, then both.  If
    every variant is degenerate, the common 0 is deleted from both strings;
    this reduction preserves P (checked against the classical oracle for every
    such pair through S_6).
    """

    def __init__(self, size: int, group: Optional[SymmetricGroup] = None):
        self.size = size
        self.group = group
        self._memo: dict[tuple[tuple, tuple], IntPolynomial] = {}

    def _interval(self, x: tuple, y: tuple) -> BruhatInterval:
        if self.group is not None and len(x) == self.group.size:
            return self.group.interval(x, y)
        return build_interval(x, y)

    def kl(self, x, y) -> IntPolynomial:
        x, y = tuple(x), tuple(y)
        if len(x) != len(y):
            raise ValueError("window sizes differ")
        if x == y:
            return ONE
        key = (x, y)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if not bruhat_leq(x, y):
            self._memo[key] = ZERO
            return ZERO
        p = self._compute(x, y)
        self._memo[key] = p
        return p

    def _compute(self, x: tuple, y: tuple) -> IntPolynomial:
        for xv, yv in _variants(x, y):
            if xv.index(0) != yv.index(0):
                return self._via_formula(xv, yv)
        # every variant keeps 0 and n fixed in place: delete the common 0
        m = x.index(0)
        xs = tuple(v - 1 for i, v in enumerate(x) if i != m)
        ys = tuple(v - 1 for i, v in enumerate(y) if i != m)
        return self.kl(xs, ys)

    def column_within(self, interval: BruhatInterval, v) -> dict:
        """P_{u,v} for u <= v in the interval, leaving out the unknown P_{x,y}."""
        v = tuple(v)
        x, y = tuple(interval.x), tuple(interval.y)
        out = {}
        for u in iter_bits(interval.below[interval.index(v)]):
            lab = tuple(interval.labels[u])
            if v == y and lab == x:
                continue
            out[lab] = self.kl(lab, v)
        return out

    def _via_formula(self, x: tuple, y: tuple) -> IntPolynomial:
        interval = self._interval(x, y)
        D = canonical_L(interval)
        cols = _FormulaColumns(self, interval)
        ind = inductive_piece(interval, D, cols)
        hyp = q_piece(interval, D, cols)
        return recover_from_partial(ind + hyp, interval.rank)


def _conj_w0(p: tuple) -> tuple:
    n = len(p) - 1
    return tuple(n - p[n - i] for i in range(n + 1))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _variants(x: tuple, y: tuple):
    yield x, y
    yield _inv(x), _inv(y)
    yield _conj_w0(x), _conj_w0(y)
    yield _inv(_conj_w0(x)), _inv(_conj_w0(y))
