"""Exact values, intervals with parity constraints, and the unknown state.

The deduction engine narrows each invariant through a lattice of states:
completely unknown, a bounded or half-bounded interval (optionally with a
mod-2 parity constraint for integer-valued invariants), or an exact
rational.  Narrowing two incompatible states raises Inconsistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

Rat = Union[int, Fraction]


class Inconsistency(ValueError):
    """Two deduction steps produced incompatible values."""


def _frac(x: Rat) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Val:
    """A known rational, an interval [lo, hi], or unknown (both ends None)."""

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    parity: Optional[int] = None  # residue mod 2 for integer-valued quantities

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise Inconsistency(f"empty interval [{self.lo}, {self.hi}]")
        if self.parity is not None and self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        if self.is_exact:
            v = self.lo
            if self.parity is not None:
                if v.denominator != 1 or v.numerator % 2 != self.parity:
                    raise Inconsistency(f"exact value {v} violates parity {self.parity}")
            elif v.denominator == 1:
                # canonical form: exact integers always carry their parity
                object.__setattr__(self, "parity", v.numerator % 2)

    @staticmethod
    def exact(x: Rat) -> "Val":
        x = _frac(x)
        parity = x.numerator % 2 if x.denominator == 1 else None
        return Val(x, x, parity)

    @staticmethod
    def between(lo: Optional[Rat], hi: Optional[Rat], parity: Optional[int] = None) -> "Val":
        v = Val(None if lo is None else _frac(lo),
                None if hi is None else _frac(hi), parity)
        return v.normalized()

    @staticmethod
    def unknown() -> "Val":
        return Val(None, None, None)

    @property
    def is_exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    @property
    def is_unknown(self) -> bool:
        return self.lo is None and self.hi is None and self.parity is None

    @property
    def is_bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError(f"value of non-exact {self}")
        return self.lo

    def int_value(self) -> int:
        v = self.value()
        if v.denominator != 1:
            raise ValueError(f"{v} is not an integer")
        return v.numerator

    def normalized(self) -> "Val":
        """Tighten integer/parity intervals to achievable endpoints."""
        lo, hi = self.lo, self.hi
        if self.parity is None:
            return self
        # parity constraints only make sense for integer-valued quantities
        if lo is not None:
            n = -((-lo.numerator) // lo.denominator)  # ceil
            if n % 2 != self.parity:
                n += 1
            lo = Fraction(n)
        if hi is not None:
            n = hi.numerator // hi.denominator  # floor
            if n % 2 != self.parity:
                n -= 1
            hi = Fraction(n)
        if lo is not None and hi is not None and lo > hi:
            raise Inconsistency(f"no value in [{self.lo}, {self.hi}] with parity {self.parity}")
        return Val(lo, hi, self.parity)

    def meet(self, other: "Val") -> "Val":
        """Intersection of the two states; raises Inconsistency when empty."""
        lo = max((x for x in (self.lo, other.lo) if x is not None), default=None)
        hi = min((x for x in (self.hi, other.hi) if x is not None), default=None)
        if self.parity is not None and other.parity is not None and self.parity != other.parity:
            raise Inconsistency(f"parity clash: {self} vs {other}")
        parity = self.parity if self.parity is not None else other.parity
        if lo is not None and hi is not None and lo > hi:
            raise Inconsistency(f"disjoint: {self} vs {other}")
        return Val(lo, hi, parity).normalized()

    def refines(self, other: "Val") -> bool:
        """True when self is at least as narrow as other."""
        if other.lo is not None and (self.lo is None or self.lo < other.lo):
            return False
        if other.hi is not None and (self.hi is None or self.hi > other.hi):
            return False
        if other.parity is not None and self.parity != other.parity:
            return False
        return True

    def contains(self, x: Rat) -> bool:
        x = _frac(x)
        if self.lo is not None and x < self.lo:
            return False
        if self.hi is not None and x > self.hi:
            return False
        if self.parity is not None and (x.denominator != 1 or x.numerator % 2 != self.parity):
            return False
        return True

    def candidates(self, limit: int = 64) -> Optional[list[Fraction]]:
        """Explicit finite candidate list for integer-valued states, or None."""
        if not self.is_bounded:
            return None
        if self.is_exact:
            return [self.lo]
        if self.parity is None:
            return None
        step = 2
        out = []
        x = self.lo
        while x <= self.hi:
            out.append(x)
            if len(out) > limit:
                return None
            x += step
        return out

    def __add__(self, other: "Val") -> "Val":
        lo = None if self.lo is None or other.lo is None else self.lo + other.lo
        hi = None if self.hi is None or other.hi is None else self.hi + other.hi
        parity = None
        if self.parity is not None and other.parity is not None:
            parity = (self.parity + other.parity) % 2
        return Val(lo, hi, parity)

    def __neg__(self) -> "Val":
        return Val(None if self.hi is None else -self.hi,
                   None if self.lo is None else -self.lo, self.parity)

    def __sub__(self, other: "Val") -> "Val":
        return self + (-other)

    def shift(self, c: Rat) -> "Val":
        c = _frac(c)
        parity = self.parity
        if parity is not None:
            parity = (parity + c.numerator) % 2 if c.denominator == 1 else None
        return Val(None if self.lo is None else self.lo + c,
                   None if self.hi is None else self.hi + c, parity)

    def scale(self, c: Rat) -> "Val":
        """Multiply by a positive rational constant."""
        c = _frac(c)
        if c <= 0:
            raise ValueError("scale expects a positive constant")
        parity = None
        if self.parity is not None and c.denominator == 1:
            parity = 0 if c.numerator % 2 == 0 else self.parity
        return Val(None if self.lo is None else self.lo * c,
                   None if self.hi is None else self.hi * c, parity)

    def abs_bounds(self) -> "Val":
        """Exact range of |x| over this state (parity preserved)."""
        if self.lo is None or self.hi is None:
            hi = None
            if self.lo is not None and self.lo > 0:
                lo = self.lo
            elif self.hi is not None and self.hi < 0:
                lo = -self.hi
            else:
                lo = Fraction(0)
            return Val(lo, hi, self.parity)
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        # straddles zero: minimum is the smallest achievable |x|
        lo = Fraction(0)
        if self.parity == 1:
            lo = Fraction(1)
        return Val(lo, max(-self.lo, self.hi), self.parity).normalized()

    def __str__(self) -> str:
        if self.is_unknown:
            return "?"
        if self.is_exact:
            return str(self.lo)
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        s = f"[{lo},{hi}]"
        if self.parity is not None:
            s += f" ({'even' if self.parity == 0 else 'odd'})"
        return s

    def to_json(self):
        if self.is_unknown:
            return None
        if self.is_exact:
            v = self.lo
            return v.numerator if v.denominator == 1 else [v.numerator, v.denominator]
        def end(x):
            if x is None:
                return None
            return x.numerator if x.denominator == 1 else [x.numerator, x.denominator]
        out = {"lo": end(self.lo), "hi": end(self.hi)}
        if self.parity is not None:
            out["parity"] = self.parity
        return out
