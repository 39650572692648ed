"""Structured pass/fail records shared by every verification suite."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from .exactnum import format_q

MAX_STORED_FAILURES = 25


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {_key(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: repr(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return x
    if hasattr(x, "as_json"):
        return x.as_json()
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return format_q(x)
    return str(x)


def _key(k: Any) -> str:
    if isinstance(k, tuple):
        return ",".join(str(v) for v in k)
    return str(k)


@dataclass
class VerificationReport:
    suite: str
    type_tag: str | None = None
    seed: int | None = None
    window: Any = None
    params: Any = None
    relations: int = 0
    pairs: int = 0
    evaluations: int = 0
    failure_count: int = 0
    failures: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed_ms: int | None = None
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def fail(self, **payload) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_STORED_FAILURES:
            self.failures.append(payload)

    def absorb(self, other: "VerificationReport") -> None:
        """Fold counts and failures of a sub-report into this one."""
        self.relations += other.relations
        self.pairs += other.pairs
        self.evaluations += other.evaluations
        for f in other.failures:
            if len(self.failures) < MAX_STORED_FAILURES:
                self.failures.append(dict(f, sub=other.type_tag))
        self.failure_count += other.failure_count

    def stop_clock(self) -> "VerificationReport":
        self.elapsed_ms = int(1000 * (time.perf_counter() - self._t0))
        return self

    def as_json(self, *, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "type": self.type_tag,
            "seed": self.seed,
            "window": _jsonable(self.window),
            "params": _jsonable(self.params),
            "counts": {
                "relations": self.relations,
                "pairs": self.pairs,
                "evaluations": self.evaluations,
                "failures": self.failure_count,
            },
            "passed": self.passed,
            "failures": _jsonable(self.failures),
            "notes": _jsonable(self.notes),
            "elapsed_ms": self.elapsed_ms if timing else None,
        }

    def dumps(self, *, timing: bool = False) -> str:
        return json.dumps(self.as_json(timing=timing), indent=2, sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tag = f" {self.type_tag}" if self.type_tag else ""
        return (
            f"[{status}] {self.suite}{tag}: {self.pairs} pairs, "
            f"{self.evaluations} evaluations, {self.failure_count} failures"
        )
