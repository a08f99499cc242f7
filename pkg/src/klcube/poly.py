"""
Exact integer polynomials in q, and the q-derivative transform.

Coefficients are dense: ``coeffs[i]`` is the coefficient of q^i, with no
trailing zeros, so the zero polynomial has ``coeffs == ()``.
"""

from __future__ import annotations

import re
from typing import Iterable, Union

__all__ = [
    "IntPolynomial",
    "ZERO",
    "ONE",
    "Q",
    "reverse_twist",
    "partial_transform",
    "recover_from_partial",
]


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class IntPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                if isinstance(c, float) and c.is_integer():
                    c = int(c)
                else:
                    raise TypeError(f"coefficients must be integers, got {c!r}")
            cs.append(int(c))
        self.coeffs = _trim(cs)

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...]) -> IntPolynomial:
        # caller guarantees canonical form
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPolynomial:
        if degree < 0:
            raise ValueError("negative degree")
        if coeff == 0:
            return ZERO
        return cls._raw((0,) * degree + (coeff,))

    @classmethod
    def parse(cls, text: str) -> IntPolynomial:
        """
        Parse ``"1 + 2*q + q^2"`` (also ``2q``, ``q**2``, ``-q``) or a bare
        coefficient list ``"[1,2,1]"``.
        """
        s = text.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise ValueError(f"unterminated coefficient list {text!r}")
            body = s[1:-1].strip()
            if not body:
                return ZERO
            return cls(int(c) for c in body.split(","))
        s = s.replace(" ", "").replace("**", "^")
        if not s:
            raise ValueError("empty polynomial string")
        if s[0] not in "+-":
            s = "+" + s
        terms = re.findall(r"[+-][^+-]*", s)
        if "".join(terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        acc: dict[int, int] = {}
        term_re = re.compile(r"^([+-])(\d*)\*?(q(?:\^(\d+))?)?$")
        for t in terms:
            m = term_re.match(t)
            if not m or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse term {t!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3) is None:
                deg = 0
            else:
                deg = int(m.group(4)) if m.group(4) else 1
            acc[deg] = acc.get(deg, 0) + sign * coeff
        top = max(acc)
        return cls(acc.get(i, 0) for i in range(top + 1))

    # -- basic queries --------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def is_nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("IntPolynomial", self.coeffs))

    # -- ring operations ------------------------------------------------

    def __add__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        if len(a) == len(b):
            return IntPolynomial._raw(_trim(out))
        return IntPolynomial._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        return (-self) + other

    def __mul__(self, other: Union[IntPolynomial, int]) -> IntPolynomial:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        # leading coefficient is a product of nonzero integers
        return IntPolynomial._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> IntPolynomial:
        if exponent < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, k: int) -> IntPolynomial:
        if k == 0 or not self.coeffs:
            return ZERO
        return IntPolynomial._raw(tuple(k * c for c in self.coeffs))

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by q^k, k >= 0."""
        if k < 0:
            raise ValueError("negative shift")
        if not self.coeffs or k == 0:
            return self
        return IntPolynomial._raw((0,) * k + self.coeffs)

    def truncate(self, max_degree: int) -> IntPolynomial:
        """Drop all terms of degree > max_degree."""
        if max_degree < 0:
            return ZERO
        return IntPolynomial._raw(_trim(list(self.coeffs[: max_degree + 1])))

    # -- text forms -------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "q" if i == 1 else f"q^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def _coerce(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return IntPolynomial._raw(_trim([value]))
    return NotImplemented


ZERO = IntPolynomial._raw(())
ONE = IntPolynomial._raw((1,))
Q = IntPolynomial._raw((0, 1))


def reverse_twist(p: IntPolynomial, n: int) -> IntPolynomial:
    """
    ``q^n * p(1/q)``: the coefficient list padded to length n+1 and reversed.

    >>> str(reverse_twist(IntPolynomial([1, 1]), 3))
    'q^2 + q^3'
    """
    if p.degree > n:
        raise ValueError(f"degree {p.degree} exceeds twist {n}; result is not a polynomial")
    if not p:
        return ZERO
    padded = p.coeffs + (0,) * (n + 1 - len(p.coeffs))
    return IntPolynomial._raw(_trim(list(reversed(padded))))


def partial_transform(p: IntPolynomial, n: int) -> IntPolynomial:
    """
    The q-derivative ``(p - q^n p(1/q)) / (1 - q)``.

    >>> str(partial_transform(IntPolynomial([1]), 3))
    '1 + q + q^2'
    """
    num = p - reverse_twist(p, n)
    # quotient by (1 - q): running prefix sums of the numerator
    out = []
    acc = 0
    for c in num.coeffs:
        acc += c
        out.append(acc)
    if acc != 0:
        raise ValueError("numerator is not divisible by 1 - q")
    return IntPolynomial._raw(_trim(out))


def recover_from_partial(d: IntPolynomial, n: int) -> IntPolynomial:
    """
    Inverse of :func:`partial_transform` on polynomials of degree at most
    ``(n - 1) / 2``: the low half of ``(1 - q) * d``.

    Raises ``ValueError`` if ``d`` is not such an image.
    """
    if n < 1:
        raise ValueError("q-derivative with n < 1 does not determine the polynomial")
    low = (1 - Q) * d
    p = low.truncate((n - 1) // 2)
    if partial_transform(p, n) != d:
        raise ValueError(f"{d} is not the q-derivative of a polynomial of degree <= {(n - 1) // 2}")
    return p
