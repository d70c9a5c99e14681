"""Certification records, verdicts and the aggregate report."""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class Tolerances:
    """Defects below ``pass_below`` pass, above ``fail_above`` fail, anything between is inconclusive."""

    pass_below: float = 1e-9
    fail_above: float = 1e-4

    def __post_init__(self):
        if not 0 < self.pass_below <= self.fail_above:
            raise ValueError(
                f"tolerances need 0 < pass_below <= fail_above, got "
                f"{self.pass_below}, {self.fail_above}"
            )

    def classify(self, defect: float) -> Verdict:
        return classify(defect, self)


def classify(defect: float, tolerances: Tolerances) -> Verdict:
    """Verdict from a defect value and thresholds alone; NaN is inconclusive."""
    if defect is None or math.isnan(defect):
        return Verdict.INCONCLUSIVE
    if defect < tolerances.pass_below:
        return Verdict.PASS
    if defect > tolerances.fail_above:
        return Verdict.FAIL
    return Verdict.INCONCLUSIVE


def jsonable(value: Any) -> Any:
    """Plain JSON types; complex numbers become [re, im]."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if not math.isfinite(value) else float(value)
    if isinstance(value, Enum):
        return value.value
    return value


@dataclass
class ReportRecord:
    """Outcome of one theorem cell."""

    theorem: str
    params: dict[str, Any]
    defect: float
    verdict: Verdict
    runtime_ms: float = 0.0
    seed: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "theorem": self.theorem,
            "params": jsonable(self.params),
            "defect": jsonable(float(self.defect)),
            "verdict": self.verdict.value,
            "runtime_ms": float(self.runtime_ms),
            "seed": int(self.seed),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRecord":
        defect = data["defect"]
        return cls(
            theorem=data["theorem"],
            params=data.get("params", {}),
            defect=math.nan if defect is None else float(defect),
            verdict=Verdict(data["verdict"]),
            runtime_ms=float(data.get("runtime_ms", 0.0)),
            seed=int(data.get("seed", 0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "ReportRecord":
        return cls.from_dict(json.loads(text))


@dataclass
class Report:
    """Records of a certification sweep."""

    records: list[ReportRecord] = field(default_factory=list)
    version: str = "0.1.0"

    def add(self, record: ReportRecord) -> None:
        self.records.append(record)

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)

    def counts(self) -> dict[str, int]:
        counts = {v.value: 0 for v in Verdict}
        for record in self.records:
            counts[record.verdict.value] += 1
        return counts

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "passed": self.passed,
            "counts": self.counts(),
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        return cls(
            records=[ReportRecord.from_dict(r) for r in data.get("records", [])],
            version=data.get("version", "0.1.0"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))
