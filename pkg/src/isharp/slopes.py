"""Exact surgery-slope arithmetic: reduced rationals, negative continued
fractions, convergents, and the surgery-triad construction.

Slopes are reduced pairs p/q with q >= 1, plus the single infinite slope
1/0.  Continued fractions here are the *negative* expansions

    [a0, a1, ..., an] = a0 - 1/(a1 - 1/(... - 1/an))

with a_i >= 2 for i >= 1 (a0 arbitrary); every rational has exactly one
such expansion.  All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class SlopeError(ValueError):
    """Invalid slope or continued-fraction input."""


@dataclass(frozen=True)
class Slope:
    """A reduced rational surgery coefficient p/q; q == 0 encodes infinity."""

    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or math.gcd(abs(self.p), self.q) != 1:
            raise SlopeError(f"not a reduced slope: {self.p}/{self.q}")
        if self.q == 0 and self.p != 1:
            raise SlopeError(f"infinite slope must be 1/0, got {self.p}/0")

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def is_integer(self) -> bool:
        return self.q == 1

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise SlopeError("infinite slope has no rational value")
        return Fraction(self.p, self.q)

    def floor(self) -> int:
        return self.p // self.q

    def ceil(self) -> int:
        return -((-self.p) // self.q)

    def __neg__(self) -> "Slope":
        if self.is_infinite:
            return self
        return Slope(-self.p, self.q)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else f"{self.p}/{self.q}"

    def __lt__(self, other: "Slope") -> bool:
        if self.is_infinite or other.is_infinite:
            raise SlopeError("infinite slope is not ordered")
        return self.p * other.q < other.p * self.q

    def __le__(self, other: "Slope") -> bool:
        return self == other or self < other


INFINITY = Slope(1, 0)


def reduce(p: int, q: int) -> Slope:
    """Canonical reduced slope for an arbitrary integer pair (p, q) != (0, 0)."""
    if p == 0 and q == 0:
        raise SlopeError("0/0 is not a slope")
    g = math.gcd(abs(p), abs(q))
    p, q = p // g, q // g
    if q < 0:
        p, q = -p, -q
    return Slope(p, q)


def parse_slope(text: str) -> Slope:
    """Parse "p/q", a bare integer, or "inf"."""
    text = text.strip()
    if text in ("inf", "1/0"):
        return INFINITY
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            return reduce(int(num), int(den))
        except ValueError as e:
            raise SlopeError(f"bad slope {text!r}: {e}") from None
    try:
        return Slope(int(text), 1)
    except ValueError:
        raise SlopeError(f"bad slope {text!r}") from None


def neg_cf(s: Slope) -> list[int]:
    """The unique negative continued fraction of a finite slope.

    a0 = ceil(p/q); then recurse on the reciprocal of a0 - p/q until the
    remainder vanishes.  The tail coefficients all come out >= 2.
    """
    if s.is_infinite:
        raise SlopeError("no continued fraction for the infinite slope")
    coeffs = []
    p, q = s.p, s.q
    while True:
        a = -((-p) // q)  # ceil(p/q)
        coeffs.append(a)
        p, q = q, a * q - p  # reciprocal of a - p/q
        if q == 0:
            return coeffs


def check_cf(coeffs: list[int]) -> None:
    if not coeffs:
        raise SlopeError("empty continued fraction")
    for a in coeffs[1:]:
        if a < 2:
            raise SlopeError(f"tail coefficient {a} < 2 in {coeffs}")


def eval_cf(coeffs: list[int]) -> Slope:
    """Exact value of [a0, a1, ..., an]."""
    check_cf(coeffs)
    p, q = convergents(coeffs)[-1]
    return reduce(p, q)


def convergents(coeffs: list[int]) -> list[tuple[int, int]]:
    """Convergent pairs (p_i, q_i) for i = -1, 0, ..., n.

    (p_-1, q_-1) = (1, 0), (p_0, q_0) = (a0, 1), and
    (p_i, q_i) = (a_i p_{i-1} - p_{i-2}, a_i q_{i-1} - q_{i-2});
    every consecutive pair satisfies q_i p_{i-1} - p_i q_{i-1} = 1.
    """
    check_cf(coeffs)
    pairs = [(1, 0), (coeffs[0], 1)]
    for a in coeffs[1:]:
        (p2, q2), (p1, q1) = pairs[-2], pairs[-1]
        pairs.append((a * p1 - p2, a * q1 - q2))
    return pairs


def format_cf(coeffs: list[int]) -> str:
    return "[" + ",".join(str(a) for a in coeffs) + "]"


def parse_cf(text: str) -> list[int]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise SlopeError(f"bad continued fraction {text!r}")
    coeffs = [int(t) for t in text[1:-1].split(",")]
    check_cf(coeffs)
    return coeffs


@dataclass(frozen=True)
class Triad:
    """The surgery triad of a non-integral finite slope p/q.

    ab and cd are the slopes sitting in exact triangles with p/q, and ef is
    the third slope of the companion triangle; sum_case records which of
    (a,b) = (c+e, d+f) or (c,d) = (a+e, b+f) holds.
    """

    ab: Slope
    cd: Slope
    ef: Slope
    sum_case: str  # "ab=cd+ef" or "cd=ab+ef"


def triad(s: Slope) -> Triad:
    """Construct the surgery triad of a finite slope with q >= 2.

    With [a0,...,an] the negative continued fraction of p/q and (p_i, q_i)
    its convergents:  a/b = (p_n - p_{n-1})/(q_n - q_{n-1}),
    c/d = p_{n-1}/q_{n-1}, and e/f is their difference, normalized so that
    f >= 0 (with f = 0 only for e/f = 1/0).
    """
    if s.is_infinite or s.is_integer:
        raise SlopeError(f"no triad for integer or infinite slope {s}")
    pairs = convergents(neg_cf(s))
    (pn1, qn1), (pn, qn) = pairs[-2], pairs[-1]
    a, b = pn - pn1, qn - qn1
    c, d = pn1, qn1
    if b == d:
        e, f = 1, 0
        case = "cd=ab+ef" if a + e == c and b + f == d else "ab=cd+ef"
    elif b > d:
        e, f = a - c, b - d
        case = "ab=cd+ef"
    else:
        e, f = c - a, d - b
        case = "cd=ab+ef"
    return Triad(Slope(a, b), Slope(c, d), Slope(e, f), case)
