"""Check records shared by the verification suites and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np


@dataclass
class CheckRecord:
    name: str
    anchor: str  # the identity being checked, written out
    subspace_dim: Optional[int]
    max_deviation: float
    passed: bool
    witness: Any = None

    def to_json(self) -> dict:
        d = asdict(self)
        w = d["witness"]
        if isinstance(w, np.ndarray):
            d["witness"] = [[float(z.real), float(z.imag)] for z in w.reshape(-1)]
        d["max_deviation"] = float(self.max_deviation)
        return d


@dataclass
class Report:
    records: list = field(default_factory=list)

    def add(self, name, anchor, deviation, tol, subspace_dim=None, witness=None, passed=None) -> CheckRecord:
        if passed is None:
            passed = bool(deviation <= tol)
        rec = CheckRecord(name, anchor, subspace_dim, float(deviation), bool(passed), witness)
        self.records.append(rec)
        return rec

    def extend(self, other: "Report") -> "Report":
        self.records.extend(other.records)
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def max_deviation(self) -> float:
        return max((r.max_deviation for r in self.records), default=0.0)

    def failures(self) -> list:
        return [r for r in self.records if not r.passed]

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def to_json(self) -> str:
        return json.dumps([r.to_json() for r in self.records], indent=2)

    def table(self) -> str:
        lines = [f"{'check':<44} {'dim':>5} {'max dev':>10}  result"]
        for r in self.records:
            dim = "-" if r.subspace_dim is None else str(r.subspace_dim)
            lines.append(f"{r.name[:44]:<44} {dim:>5} {r.max_deviation:>10.2e}  {'PASS' if r.passed else 'FAIL'}")
        return "\n".join(lines)
