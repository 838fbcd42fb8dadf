"""Algebraic knot descriptions and their structural invariants.

Expressions are immutable trees built from named atoms, torus / twist /
pretzel / two-bridge family atoms, cables, and connected sums.  Mirrors
are normalized down to the atoms (a chirality flag or a sign), so a
normalized expression never contains an explicit mirror node.

Chirality follows the Rolfsen / Knot Atlas tables: 3_1 is the left-handed
trefoil, and the signature of the right-handed trefoil is -2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from .values import Val


class KnotError(ValueError):
    """Malformed knot expression or unresolvable alias."""


# ---------------------------------------------------------------------------
# Expression types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Unknot:
    pass


@dataclass(frozen=True)
class Named:
    name: str
    mirrored: bool = False


@dataclass(frozen=True)
class Torus:
    """T(p, q) with 2 <= p < q coprime; chirality is the sign of p."""

    p: int
    q: int

    def __post_init__(self):
        if not (2 <= abs(self.p) < self.q) or math.gcd(abs(self.p), self.q) != 1:
            raise KnotError(f"bad torus parameters ({self.p},{self.q})")


@dataclass(frozen=True)
class Twist:
    """Twist knot with a positive clasp and n >= 1 positive half-twists."""

    n: int
    mirrored: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise KnotError(f"twist knot needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class Pretzel:
    a: int
    b: int
    c: int
    mirrored: bool = False


@dataclass(frozen=True)
class TwoBridge:
    """Two twist regions with a and b signed crossings; not both odd."""

    a: int
    b: int

    def __post_init__(self):
        if self.a % 2 == 1 and self.b % 2 == 1:
            raise KnotError(f"two-bridge code ({self.a},{self.b}) has both entries odd")


@dataclass(frozen=True)
class Cable:
    """The (p, q)-cable, q >= 2 and gcd(p, q) = 1, of the companion knot."""

    p: int
    q: int
    companion: "KnotExpr"

    def __post_init__(self):
        if self.q < 2 or math.gcd(abs(self.p), self.q) != 1:
            raise KnotError(f"cable needs q >= 2 and gcd(p,q)=1, got ({self.p},{self.q})")


@dataclass(frozen=True)
class Sum:
    summands: tuple["KnotExpr", ...]

    def __post_init__(self):
        if len(self.summands) < 2:
            raise KnotError("connected sum needs at least two summands")


KnotExpr = Union[Unknot, Named, Torus, Twist, Pretzel, TwoBridge, Cable, Sum]


def make_torus(p: int, q: int) -> KnotExpr:
    """Normalize T(p, q): unordered parameters, sign = chirality."""
    if p == 0 or q == 0 or math.gcd(abs(p), abs(q)) != 1:
        raise KnotError(f"bad torus parameters ({p},{q})")
    if abs(p) == 1 or abs(q) == 1:
        return Unknot()
    sign = 1 if p * q > 0 else -1
    a, b = sorted((abs(p), abs(q)))
    return Torus(sign * a, b)


def mirror(k: KnotExpr) -> KnotExpr:
    """Mirror image, pushed down to the atoms."""
    if isinstance(k, Unknot):
        return k
    if isinstance(k, Named):
        return replace(k, mirrored=not k.mirrored)
    if isinstance(k, Torus):
        return Torus(-k.p, k.q)
    if isinstance(k, Twist):
        return replace(k, mirrored=not k.mirrored)
    if isinstance(k, Pretzel):
        return replace(k, mirrored=not k.mirrored)
    if isinstance(k, TwoBridge):
        return TwoBridge(-k.a, -k.b)
    if isinstance(k, Cable):
        return Cable(-k.p, k.q, mirror(k.companion))
    if isinstance(k, Sum):
        return make_sum([mirror(s) for s in k.summands])
    raise KnotError(f"cannot mirror {k!r}")


def _sort_key(k: KnotExpr) -> str:
    return format_knot(k)


def make_sum(summands: list[KnotExpr]) -> KnotExpr:
    """Flatten nested sums, drop unknots, sort for a canonical form."""
    flat: list[KnotExpr] = []
    for s in summands:
        if isinstance(s, Sum):
            flat.extend(s.summands)
        elif not isinstance(s, Unknot):
            flat.append(s)
    if not flat:
        return Unknot()
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(sorted(flat, key=_sort_key)))


# ---------------------------------------------------------------------------
# Grammar: parse and print
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[0-9]+_[0-9]+|K[0-9]+[an][0-9]+|k[0-9]+_[0-9]+")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str):
        raise KnotError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if not self.text.startswith(ch, self.pos):
            self.error(f"expected {ch!r}")
        self.pos += len(ch)

    def integer(self) -> int:
        self.skip_ws()
        m = re.match(r"[+-]?[0-9]+", self.text[self.pos:])
        if not m:
            self.error("expected an integer")
        self.pos += m.end()
        return int(m.group())

    def int_args(self, n: int) -> list[int]:
        self.expect("(")
        args = [self.integer()]
        for _ in range(n - 1):
            self.expect(",")
            args.append(self.integer())
        self.expect(")")
        return args

    def parse(self) -> KnotExpr:
        expr = self.sum_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return expr

    def sum_expr(self) -> KnotExpr:
        parts = [self.atom_expr()]
        while self.peek() == "#":
            self.expect("#")
            parts.append(self.atom_expr())
        return make_sum(parts) if len(parts) > 1 else parts[0]

    def atom_expr(self) -> KnotExpr:
        self.skip_ws()
        rest = self.text[self.pos:]
        if rest.startswith("m("):
            self.pos += 1
            self.expect("(")
            inner = self.sum_expr()
            self.expect(")")
            return mirror(inner)
        if rest.startswith("Cab("):
            self.pos += 3
            self.expect("(")
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect(";")
            companion = self.sum_expr()
            self.expect(")")
            return Cable(p, q, companion)
        if rest.startswith("Tw("):
            self.pos += 2
            (n,) = self.int_args(1)
            return Twist(n)
        if rest.startswith("TB("):
            self.pos += 2
            a, b = self.int_args(2)
            return TwoBridge(a, b)
        if rest.startswith("T("):
            self.pos += 1
            p, q = self.int_args(2)
            return make_torus(p, q)
        if rest.startswith("P("):
            self.pos += 1
            a, b, c = self.int_args(3)
            return Pretzel(a, b, c)
        if rest.startswith("U") and not _NAME_RE.match(rest):
            self.pos += 1
            return Unknot()
        m = _NAME_RE.match(rest)
        if m:
            self.pos += m.end()
            name = m.group()
            return Unknot() if name == "0_1" else Named(name)
        self.error("expected a knot expression")


def parse_knot(text: str) -> KnotExpr:
    """Parse the knot grammar: "3_1", "m(...)", "T(p,q)", "Tw(n)",
    "P(a,b,c)", "TB(a,b)", "Cab(p,q;K)", "K1 # K2", "U"."""
    return _Parser(text).parse()


def format_knot(k: KnotExpr) -> str:
    if isinstance(k, Unknot):
        return "U"
    if isinstance(k, Named):
        return f"m({k.name})" if k.mirrored else k.name
    if isinstance(k, Torus):
        return f"T({k.p},{k.q})"
    if isinstance(k, Twist):
        s = f"Tw({k.n})"
        return f"m({s})" if k.mirrored else s
    if isinstance(k, Pretzel):
        s = f"P({k.a},{k.b},{k.c})"
        return f"m({s})" if k.mirrored else s
    if isinstance(k, TwoBridge):
        return f"TB({k.a},{k.b})"
    if isinstance(k, Cable):
        return f"Cab({k.p},{k.q};{format_knot(k.companion)})"
    if isinstance(k, Sum):
        return " # ".join(format_knot(s) for s in k.summands)
    raise KnotError(f"cannot format {k!r}")


# ---------------------------------------------------------------------------
# Structural data
# ---------------------------------------------------------------------------

Tri = Optional[bool]  # True / False / unknown

FLAG_NAMES = (
    "alternating",
    "quasipositive",
    "positive",
    "slice",
    "amphichiral",
    "homogeneous",
    "instanton_lspace",
    "thin_odd_khovanov",
)


@dataclass(frozen=True)
class StructuralData:
    genus: Val = field(default_factory=Val.unknown)
    slice_genus: Val = field(default_factory=Val.unknown)
    signature: Optional[int] = None
    determinant: Optional[int] = None
    alexander: Optional[tuple[int, ...]] = None  # (a0, a1, a2, ...), symmetric
    sl_max: Optional[int] = None
    flags: dict = field(default_factory=dict)

    def flag(self, name: str) -> Tri:
        return self.flags.get(name)


def alexander_at_minus_one(coeffs: tuple[int, ...]) -> int:
    """Delta(-1) = a0 + 2 * sum_i (-1)^i a_i."""
    total = coeffs[0]
    for i, a in enumerate(coeffs[1:], start=1):
        total += 2 * a * (-1) ** i
    return total


def alexander_convolve(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    """Coefficients of the product of two symmetric Laurent polynomials."""
    def full(c):
        return list(reversed(c[1:])) + list(c)
    fx, fy = full(x), full(y)
    n = len(fx) + len(fy) - 1
    prod = [0] * n
    for i, a in enumerate(fx):
        for j, b in enumerate(fy):
            prod[i + j] += a * b
    mid = (n - 1) // 2
    return tuple(prod[mid:])


def alexander_zero_surgery_floor(coeffs: tuple[int, ...]) -> int:
    """Lower bound for dim of the zero-surgery invariant (mu bundle) of a
    genus <= 2 knot from its symmetric polynomial coefficients; the actual
    dimension is this value plus a nonnegative multiple of 4."""
    a = list(coeffs) + [0, 0, 0]
    if any(c != 0 for c in a[3:]):
        raise KnotError("floor formula needs genus <= 2 coefficients")
    return 4 * abs(a[2]) + 2 * abs(a[1] + 2 * a[2])


# ---------------------------------------------------------------------------
# Alias resolution against the loaded dataset
# ---------------------------------------------------------------------------

def _twist_from_two_bridge(k: TwoBridge):
    """K(2, 2n) is the twist knot with 2n-1 half-twists, K(-2, 2n) the one
    with 2n; mirrors for negated codes."""
    for a, b, mirrored in ((k.a, k.b, False), (-k.a, -k.b, True)):
        if a == 2 and b >= 2 and b % 2 == 0:
            return Twist(b - 1, mirrored)
        if a == -2 and b >= 2 and b % 2 == 0:
            return Twist(b, mirrored)
    return None


def atom_code(k: KnotExpr) -> Optional[str]:
    """Alias-table key for a family atom, ignoring the mirror flag."""
    if isinstance(k, Torus):
        return f"T({abs(k.p)},{k.q})"
    if isinstance(k, Twist):
        return f"Tw({k.n})"
    if isinstance(k, Pretzel):
        return f"P({k.a},{k.b},{k.c})"
    if isinstance(k, TwoBridge):
        return f"TB({k.a},{k.b})"
    return None


def resolve_atom(k: KnotExpr, dataset) -> Optional[tuple[str, bool]]:
    """Resolve an atomic expression to (canonical name, mirrored), if known."""
    if isinstance(k, Unknot):
        return ("0_1", False)
    if isinstance(k, Named):
        name, mirrored = k.name, k.mirrored
        if dataset.knot_record(name) is None:
            raise KnotError(f"unknown knot name {name!r}")
    elif isinstance(k, (Twist, Pretzel)):
        hit = dataset.alias(atom_code(replace(k, mirrored=False)))
        if hit is None and isinstance(k, Pretzel):
            hit = _pretzel_alias(k, dataset)
            if hit is None:
                return None
        if hit is None:
            return None
        name, m = hit
        mirrored = m != k.mirrored
    elif isinstance(k, Torus):
        # the table registers positive torus knots; the sign of p is the
        # chirality of the instance at hand
        hit = dataset.alias(f"T({abs(k.p)},{k.q})")
        if hit is None:
            return None
        name, m = hit
        mirrored = m != (k.p < 0)
    elif isinstance(k, TwoBridge):
        tw = _twist_from_two_bridge(k)
        if tw is not None:
            return resolve_atom(tw, dataset)
        hit, flip = dataset.alias(f"TB({k.a},{k.b})"), False
        if hit is None:
            hit, flip = dataset.alias(f"TB({-k.a},{-k.b})"), True
        if hit is None:
            return None
        name, m = hit
        mirrored = m != flip
    else:
        return None
    rec = dataset.knot_record(name)
    if rec is not None and rec.structural.flag("amphichiral"):
        mirrored = False
    return (name, mirrored)


def _pretzel_alias(k: Pretzel, dataset):
    """Pretzel atoms match alias entries up to permutation of the strands."""
    import itertools
    for perm in itertools.permutations((k.a, k.b, k.c)):
        hit = dataset.alias(f"P({perm[0]},{perm[1]},{perm[2]})")
        if hit is not None:
            return hit
        hit = dataset.alias(f"P({-perm[0]},{-perm[1]},{-perm[2]})")
        if hit is not None:
            return (hit[0], not hit[1])
    return None


def resolve_alias(code: str, dataset=None):
    """Resolve a family code or name to its canonical knot record.

    Returns (record, mirrored).  Raises KnotError for codes the tables do
    not cover; codes outside the registered identities are never guessed.
    """
    from . import datasets

    ds = dataset if dataset is not None else datasets.default()
    expr = parse_knot(code)
    hit = resolve_atom(expr, ds)
    if hit is None:
        raise KnotError(f"no registered alias for {code!r}")
    name, mirrored = hit
    rec = ds.knot_record(name)
    if rec is None:
        raise KnotError(f"alias {code!r} resolves to unknown record {name!r}")
    return rec, mirrored


# ---------------------------------------------------------------------------
# Structural invariants
# ---------------------------------------------------------------------------

def genus(k: KnotExpr, dataset=None) -> Val:
    """Seifert genus: exact for torus/twist/cable/sum and table atoms."""
    from . import datasets

    ds = dataset if dataset is not None else datasets.default()
    return structural(k, ds).genus


def _mirror_structural(s: StructuralData, rec=None) -> StructuralData:
    flags = dict(s.flags)
    for name in ("quasipositive", "positive"):
        stored = rec.mirror_flags.get(name) if rec is not None else None
        flags[name] = stored
    # instanton L-space surgeries are positive surgeries; not mirror-invariant
    flags["instanton_lspace"] = None
    sl = rec.mirror_sl_max if rec is not None else None
    return StructuralData(
        genus=s.genus,
        slice_genus=s.slice_genus,
        signature=None if s.signature is None else -s.signature,
        determinant=s.determinant,
        alexander=s.alexander,
        sl_max=sl,
        flags=flags,
    )


def structural(k: KnotExpr, dataset=None) -> StructuralData:
    """Best-known structural data; fields stay unknown when neither a
    family formula nor a table entry applies."""
    from . import datasets

    ds = dataset if dataset is not None else datasets.default()
    if isinstance(k, Unknot):
        return ds.knot_record("0_1").structural
    if isinstance(k, Sum):
        return _sum_structural(k, ds)
    if isinstance(k, Cable):
        return _cable_structural(k, ds)

    hit = resolve_atom(k, ds)
    rec = ds.knot_record(hit[0]) if hit else None
    if rec is not None:
        base = rec.structural
        table = _mirror_structural(base, rec) if hit[1] else base
    else:
        table = StructuralData()
    return _merge_structural(table, _family_structural(k))


def _merge_structural(a: StructuralData, b: StructuralData) -> StructuralData:
    flags = dict(b.flags)
    flags.update({n: v for n, v in a.flags.items() if v is not None})
    return StructuralData(
        genus=a.genus.meet(b.genus),
        slice_genus=a.slice_genus.meet(b.slice_genus),
        signature=a.signature if a.signature is not None else b.signature,
        determinant=a.determinant if a.determinant is not None else b.determinant,
        alexander=a.alexander if a.alexander is not None else b.alexander,
        sl_max=a.sl_max if a.sl_max is not None else b.sl_max,
        flags=flags,
    )


def _family_structural(k: KnotExpr) -> StructuralData:
    nonneg = Val.between(0, None)
    if isinstance(k, Torus):
        g = (abs(k.p) - 1) * (k.q - 1) // 2
        flags = {}
        if k.p > 0:
            flags = {"positive": True, "quasipositive": True, "homogeneous": True,
                     "instanton_lspace": True}
        return StructuralData(genus=Val.exact(g), slice_genus=Val.exact(g),
                              determinant=_torus_det(abs(k.p), k.q), flags=flags)
    if isinstance(k, Twist):
        # twist knots are alternating with Seifert genus 1; the odd ones have
        # a positive mirror, so their slice genus is exactly 1
        flags = {"alternating": True, "homogeneous": True}
        if k.n % 2 == 1:
            if k.mirrored:
                flags.update({"positive": True, "quasipositive": True})
            return StructuralData(genus=Val.exact(1), slice_genus=Val.exact(1),
                                  flags=flags)
        return StructuralData(genus=Val.exact(1), slice_genus=Val.between(0, 1),
                              flags=flags)
    if isinstance(k, Pretzel):
        if _pretzel_n33(k) is not None:
            # the P(n,3,-3) family is smoothly slice (band to the unlink)
            return StructuralData(slice_genus=Val.exact(0), genus=nonneg,
                                  flags={"slice": True})
        n = _pretzel_odd32(k)
        if n is not None:
            # alternating diagrams with signature -2n and slice genus n
            # (an n-fold crossing change reaches the unknot)
            sigma = -2 * n if not k.mirrored else 2 * n
            return StructuralData(slice_genus=Val.exact(n), genus=nonneg,
                                  signature=sigma,
                                  flags={"alternating": True, "homogeneous": True})
        return StructuralData(genus=nonneg, slice_genus=nonneg)
    if isinstance(k, TwoBridge):
        # two-bridge knots are alternating
        return StructuralData(genus=nonneg, slice_genus=nonneg,
                              flags={"alternating": True, "homogeneous": True})
    return StructuralData(genus=nonneg, slice_genus=nonneg)


def _torus_det(p: int, q: int) -> int:
    """det T(p,q) = |product over the torus-knot Alexander roots at -1|."""
    if p % 2 == 0 or q % 2 == 0:
        return p if q % 2 == 0 else q
    return 1


def _pretzel_n33(k: Pretzel) -> Optional[int]:
    """Match P(n, 3, -3) up to permutation; returns n."""
    args = [k.a, k.b, k.c]
    for i in range(3):
        rest = args[:i] + args[i + 1:]
        if sorted(rest) == [-3, 3]:
            return args[i]
    return None


def _pretzel_odd32(k: Pretzel) -> Optional[int]:
    """Match P(2n-1, 3, 2) with n >= 1 up to permutation; returns n."""
    args = [k.a, k.b, k.c]
    for i in range(3):
        rest = sorted(args[:i] + args[i + 1:])
        if rest == [2, 3] and args[i] % 2 == 1 and args[i] >= 1:
            return (args[i] + 1) // 2
    return None


def _sum_structural(k: Sum, ds) -> StructuralData:
    parts = [structural(s, ds) for s in k.summands]
    g = parts[0].genus
    for p in parts[1:]:
        g = g + p.genus
    gs_hi = Fraction(0)
    for p in parts:
        if p.slice_genus.hi is None:
            gs_hi = None
            break
        gs_hi += p.slice_genus.hi
    sigma = 0
    for p in parts:
        if p.signature is None:
            sigma = None
            break
        sigma += p.signature
    det = 1
    for p in parts:
        if p.determinant is None:
            det = None
            break
        det *= p.determinant
    alex = (1,)
    for p in parts:
        if p.alexander is None:
            alex = None
            break
        alex = alexander_convolve(alex, p.alexander)
    all_slice = all(p.flag("slice") for p in parts)
    is_slice = True if (all_slice or _is_mirror_paired(k)) else None
    gs = Val.exact(0) if is_slice else Val.between(0, gs_hi)
    flags = {"slice": is_slice}
    if all(p.flag("alternating") for p in parts):
        flags["alternating"] = None  # sums of alternating knots need not be
    if all(p.flag("quasipositive") for p in parts):
        flags["quasipositive"] = True
    if all(p.flag("positive") for p in parts):
        flags["positive"] = True
    return StructuralData(genus=g, slice_genus=gs, signature=sigma,
                          determinant=det, alexander=alex, flags=flags)


def _is_mirror_paired(k: Sum) -> bool:
    """True when the summands cancel in mirror pairs (a slice pattern)."""
    remaining = list(k.summands)
    while remaining:
        x = remaining.pop()
        mx = mirror(x)
        if mx in remaining:
            remaining.remove(mx)
        else:
            return False
    return True


def _cable_structural(k: Cable, ds) -> StructuralData:
    comp = structural(k.companion, ds)
    g = Val.unknown()
    if comp.genus.is_exact:
        g0 = comp.genus.value()
        g = Val.exact(Fraction(abs(k.p) - 1, 1) * (k.q - 1) / 2 + k.q * g0)
    return StructuralData(genus=g, slice_genus=Val.between(0, None), flags={})


def cable_genus_identity(k: Cable, dataset=None) -> bool:
    """Check 2 g(K_{p,q}) - 1 = |p| q + q (2 g(K) - 1 - |p|/q) exactly."""
    g_c = genus(k, dataset)
    g_k = genus(k.companion, dataset)
    if not (g_c.is_exact and g_k.is_exact):
        raise KnotError("cable genus identity needs exact genera")
    lhs = 2 * g_c.value() - 1
    rhs = abs(k.p) * k.q + k.q * (2 * g_k.value() - 1 - Fraction(abs(k.p), k.q))
    return lhs == rhs
