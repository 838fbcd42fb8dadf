"""Bundled table data: an integrity-checked loader for the line-delimited
record file, lookup by (table, key), and tab-separated export.

The record file is UTF-8 JSON lines, one object per line, with fields
{schema_version, table, key, payload, citation}.  Tables T1-T8 mirror the
published computations this library reproduces; KNOT rows hold structural
data per knot, and ALIAS rows hold the registered family identifications.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .values import Val

SCHEMA_VERSION = 1
KNOWN_TABLES = ("T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "KNOT", "ALIAS")

ENV_DATA_PATH = "ISHARP_DATA"


class DatasetError(ValueError):
    """Parse failure or integrity violation in a record file."""


@dataclass(frozen=True)
class TableEntry:
    table: str
    key: str
    payload: dict
    citation: str

    def to_json_line(self) -> str:
        obj = {
            "schema_version": SCHEMA_VERSION,
            "table": self.table,
            "key": self.key,
            "payload": self.payload,
            "citation": self.citation,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _val_from_payload(x) -> Val:
    """Payload encodings: null (unknown), int, [num, den], or
    {lo, hi, parity} with null for an unbounded end."""
    if x is None:
        return Val.unknown()
    if isinstance(x, int):
        return Val.exact(x)
    if isinstance(x, list):
        return Val.exact(Fraction(x[0], x[1]))
    if isinstance(x, dict):
        def end(v):
            if v is None:
                return None
            return Fraction(v[0], v[1]) if isinstance(v, list) else Fraction(v)
        return Val.between(end(x.get("lo")), end(x.get("hi")), x.get("parity"))
    raise DatasetError(f"bad value encoding {x!r}")


@dataclass
class InstantonFields:
    """Tabulated invariants stored on a knot record."""

    nu: Val = field(default_factory=Val.unknown)
    tau: Val = field(default_factory=Val.unknown)
    r0: Val = field(default_factory=Val.unknown)
    shape: Optional[str] = None  # "V" / "W" / None
    mu0_dim: Optional[int] = None  # pinned zero-surgery dimension, mu bundle


@dataclass
class KnotRecord:
    name: str
    structural: "StructuralData"
    instanton: InstantonFields
    aliases: tuple[str, ...]
    sigma2: Optional[str] = None  # registered double-branched-cover description
    khbar_dim: Optional[int] = None
    mirror_flags: dict = field(default_factory=dict)
    mirror_sl_max: Optional[int] = None
    citation: str = ""


def _knot_record_from_entry(entry: TableEntry) -> KnotRecord:
    from .knots import FLAG_NAMES, StructuralData

    p = entry.payload
    for name in p.get("flags", {}):
        if name not in FLAG_NAMES:
            raise DatasetError(f"knot record {entry.key}: unknown flag {name!r}")
    structural = StructuralData(
        genus=_val_from_payload(p.get("genus")),
        slice_genus=_val_from_payload(p.get("slice_genus")),
        signature=p.get("signature"),
        determinant=p.get("determinant"),
        alexander=None if p.get("alexander") is None else tuple(p["alexander"]),
        sl_max=p.get("sl_max"),
        flags={k: v for k, v in p.get("flags", {}).items()},
    )
    inst = p.get("instanton", {})
    instanton = InstantonFields(
        nu=_val_from_payload(inst.get("nu")),
        tau=_val_from_payload(inst.get("tau")),
        r0=_val_from_payload(inst.get("r0")),
        shape=inst.get("shape"),
        mu0_dim=inst.get("mu0_dim"),
    )
    return KnotRecord(
        name=entry.key,
        structural=structural,
        instanton=instanton,
        aliases=tuple(p.get("aliases", [])),
        sigma2=p.get("sigma2"),
        khbar_dim=p.get("khbar_dim"),
        mirror_flags=p.get("mirror_flags", {}),
        mirror_sl_max=p.get("mirror_sl_max"),
        citation=entry.citation,
    )


class Dataset:
    """Read-only view of a loaded record file."""

    def __init__(self, entries: list[TableEntry]):
        self.entries = entries
        self._by_table: dict[str, dict[str, TableEntry]] = {}
        for e in entries:
            bucket = self._by_table.setdefault(e.table, {})
            if e.key in bucket:
                raise DatasetError(f"duplicate key {e.key!r} in table {e.table}")
            bucket[e.key] = e
        self._knots = {
            key: _knot_record_from_entry(e)
            for key, e in self._by_table.get("KNOT", {}).items()
        }
        self._aliases: dict[str, tuple[str, bool]] = {}
        for key, e in self._by_table.get("ALIAS", {}).items():
            self._aliases[key] = (e.payload["name"], bool(e.payload.get("mirrored", False)))
        for rec in self._knots.values():
            for code in rec.aliases:
                self._aliases.setdefault(code, (rec.name, False))
        self.deduce_cache: dict = {}

    # -- lookups ------------------------------------------------------------

    def table(self, table: str) -> dict[str, TableEntry]:
        return self._by_table.get(table, {})

    def lookup(self, table: str, key) -> TableEntry:
        entry = self.table(table).get(str(key))
        if entry is None:
            raise KeyError(f"no entry {key!r} in table {table}")
        return entry

    def knot_record(self, name: str) -> Optional[KnotRecord]:
        return self._knots.get(name)

    def knot_names(self) -> list[str]:
        return sorted(self._knots)

    def alias(self, code: Optional[str]) -> Optional[tuple[str, bool]]:
        if code is None:
            return None
        return self._aliases.get(code)

    def tb_codes(self, name: str) -> list[tuple[int, int, bool]]:
        """All registered two-bridge codes resolving to the named knot;
        entries are (a, b, mirrored)."""
        out = []
        for code, (target, mirrored) in self._aliases.items():
            if target == name and code.startswith("TB("):
                a, b = (int(x) for x in code[3:-1].split(","))
                out.append((a, b, mirrored))
                out.append((-a, -b, not mirrored))
        return out

    def alias_codes(self, name: str) -> list[tuple[str, bool]]:
        """All registered codes resolving to the named knot."""
        return [(code, mirrored) for code, (target, mirrored) in self._aliases.items()
                if target == name]

    # -- integrity ----------------------------------------------------------

    def check_integrity(self) -> None:
        """Bound checks on every knot record; raises on the first violation."""
        from .knots import alexander_at_minus_one

        for rec in self._knots.values():
            inst = rec.instanton
            nu, tau, r0 = inst.nu, inst.tau, inst.r0
            where = f"knot record {rec.name}"
            if nu.is_exact and r0.is_exact:
                n, r = nu.value(), r0.value()
                if r < abs(n):
                    raise DatasetError(f"{where}: r0 = {r} < |nu| = {abs(n)}")
                if (r - n) % 2 != 0:
                    raise DatasetError(f"{where}: r0 = {r} and nu = {n} differ in parity")
            if nu.is_exact and tau.is_exact:
                if abs(2 * tau.value() - nu.value()) > 1:
                    raise DatasetError(f"{where}: |2 tau - nu| > 1")
            gs = rec.structural.slice_genus
            if nu.is_exact and gs.is_exact:
                bound = max(2 * gs.value() - 1, 0)
                if abs(nu.value()) > bound:
                    raise DatasetError(f"{where}: |nu| exceeds max(2 g_s - 1, 0) = {bound}")
            if inst.shape == "W" and nu.is_exact and nu.value() != 0:
                raise DatasetError(f"{where}: W-shaped but nu != 0")
            sig = rec.structural.signature
            if sig is not None and sig % 2 != 0:
                raise DatasetError(f"{where}: odd signature {sig}")
            det = rec.structural.determinant
            if det is not None and (det <= 0 or det % 2 == 0):
                raise DatasetError(f"{where}: determinant {det} not odd positive")
            alex = rec.structural.alexander
            if alex is not None and det is not None:
                if abs(alexander_at_minus_one(alex)) != det:
                    raise DatasetError(f"{where}: |Delta(-1)| != determinant")

    def cross_check_census(self) -> None:
        """Recompute every registered census route and compare to the
        stored dimensions (raises DatasetError on mismatch)."""
        from .verify import census_route_failures

        failures = census_route_failures(self)
        if failures:
            raise DatasetError("; ".join(failures))

    # -- serialization ------------------------------------------------------

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for e in self.entries:
                fh.write(e.to_json_line() + "\n")

    def export_tsv(self, table: str) -> str:
        """Tab-separated dump of one table in its published column order."""
        columns = _EXPORT_COLUMNS.get(table)
        if columns is None:
            raise DatasetError(f"no export format for table {table!r}")
        lines = ["\t".join(columns)]
        entries = self.table(table)
        for key in sorted(entries, key=_entry_sort_key):
            e = entries[key]
            row = []
            for col in columns:
                if col == "key":
                    row.append(e.key)
                else:
                    v = e.payload.get(col)
                    row.append("" if v is None else json.dumps(v, separators=(",", ":")))
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"


def _entry_sort_key(key: str):
    try:
        return (0, int(key), "")
    except ValueError:
        parts = key.split("_")
        try:
            return (1, int(parts[0]), f"{int(parts[1]):04d}" if len(parts) > 1 else key)
        except ValueError:
            return (2, 0, key)


_EXPORT_COLUMNS = {
    "T1": ["key", "nu", "r0"],
    "T2": ["key", "name", "h1", "dim"],
    "T3": ["key", "nu", "tau"],
    "T4": ["key", "n", "dim", "nu", "r0", "via"],
    "T5": ["key", "det", "khbar_dim", "sigma2", "dim"],
    "T6": ["key", "name", "knot", "slope", "h1", "dim"],
    "T7": ["key", "name", "knot", "qa", "h1", "dim"],
    "T8": ["key", "name", "h1", "components", "dim"],
}


def parse_record_line(line: str, lineno: int) -> TableEntry:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise DatasetError(f"line {lineno}: invalid JSON ({e})") from None
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise DatasetError(f"line {lineno}: unsupported schema_version {obj.get('schema_version')!r}")
    for fieldname in ("table", "key", "payload", "citation"):
        if fieldname not in obj:
            raise DatasetError(f"line {lineno}: missing field {fieldname!r}")
    if obj["table"] not in KNOWN_TABLES:
        raise DatasetError(f"line {lineno}: unknown table {obj['table']!r}")
    return TableEntry(obj["table"], str(obj["key"]), obj["payload"], obj["citation"])


def load(path: Optional[str] = None, check: bool = True) -> Dataset:
    """Load a record file (default: the bundled dataset) and run the
    integrity checks."""
    if path is None:
        path = os.environ.get(ENV_DATA_PATH)
    if path is None:
        text = resources.files("isharp").joinpath("data/tables.jsonl").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        entries.append(parse_record_line(line, lineno))
    ds = Dataset(entries)
    if check:
        ds.check_integrity()
        ds.cross_check_census()
    return ds


_default: Optional[Dataset] = None


def default() -> Dataset:
    """The process-wide dataset (bundled unless overridden)."""
    global _default
    if _default is None:
        _default = load()
    return _default


def set_default(ds: Dataset) -> None:
    global _default
    _default = ds
