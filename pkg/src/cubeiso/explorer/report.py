"""Scan reports, their mergeable partial form, and JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional


@dataclass
class Row:
    key: dict
    count: int
    value: Any = None
    witness: Optional[str] = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    set_hex: str
    check: str
    expected: Any
    actual: Any


@dataclass
class ScanReport:
    scan_id: str
    n: int
    parameters: dict
    rows: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return jsonable({
            "scan_id": self.scan_id,
            "n": self.n,
            "parameters": self.parameters,
            "summary": self.summary,
            "constants": self.constants,
            "rows": [
                {"key": r.key, "count": r.count, "value": r.value,
                 "witness": r.witness, **r.extra}
                for r in self.rows
            ],
            "violations": [
                {"set_hex": v.set_hex, "check": v.check,
                 "expected": v.expected, "actual": v.actual}
                for v in self.violations
            ],
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        """One line per bucket: key fields, count, value, witness, extras."""
        key_cols, extra_cols = [], []
        for r in self.rows:
            key_cols += [k for k in r.key if k not in key_cols]
            extra_cols += [k for k in r.extra if k not in extra_cols]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(key_cols + ["count", "value", "witness"] + extra_cols)
        for r in self.rows:
            w.writerow(
                [_cell(r.key.get(k)) for k in key_cols]
                + [r.count, _cell(r.value), r.witness or ""]
                + [_cell(r.extra.get(k)) for k in extra_cols])
        return buf.getvalue()


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def jsonable(x):
    """Exact rationals become {"num", "den"}; non-finite floats become strings."""
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "item"):
        return jsonable(x.item())
    raise TypeError(f"cannot serialize {type(x).__name__}")


class Partial:
    """Per-chunk scan state; merging is associative and commutative.

    Buckets keep (count, extremal value, witness mask); among equal values the
    smaller witness mask wins.
    """

    def __init__(self, mode: str = "min"):
        self.mode = mode
        self.buckets: dict = {}
        self.counters: Counter = Counter()
        self.violations: list = []

    def _better(self, value, mask, cur_value, cur_mask) -> bool:
        if cur_value is None:
            return True
        if value == cur_value:
            return mask < cur_mask
        return value < cur_value if self.mode == "min" else value > cur_value

    def add(self, key, count: int, value=None, mask: Optional[int] = None, **extra):
        slot = self.buckets.get(key)
        if slot is None:
            slot = self.buckets[key] = [0, None, None, Counter()]
        slot[0] += count
        if value is not None and self._better(value, mask, slot[1], slot[2]):
            slot[1], slot[2] = value, mask
        slot[3].update(extra)

    def merge(self, other: "Partial") -> "Partial":
        for key, (count, value, mask, extra) in other.buckets.items():
            self.add(key, count, value, mask, **extra)
        self.counters.update(other.counters)
        self.violations.extend(other.violations)
        return self
