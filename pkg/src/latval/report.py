"""Pass/fail bookkeeping for property suites."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class PropertyResult:
    passed: int = 0
    failed: int = 0
    counterexample: str | None = None

    def record(self, ok: bool, witness: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = witness

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class CheckReport:
    """Per-property tallies with the first counterexample kept verbatim."""

    results: dict[str, PropertyResult] = field(default_factory=dict)

    def prop(self, name: str) -> PropertyResult:
        return self.results.setdefault(name, PropertyResult())

    def record(self, name: str, ok: bool, witness: str = "") -> None:
        self.prop(name).record(ok, witness)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def failing(self) -> list[str]:
        return [name for name, r in self.results.items() if not r.ok]

    def to_dict(self) -> dict:
        return {
            name: {
                "pass": r.passed,
                "fail": r.failed,
                "counterexample": r.counterexample,
            }
            for name, r in self.results.items()
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def merged_with(self, other: "CheckReport") -> "CheckReport":
        out = CheckReport()
        for src in (self, other):
            for name, r in src.results.items():
                dst = out.prop(name)
                dst.passed += r.passed
                dst.failed += r.failed
                if dst.counterexample is None:
                    dst.counterexample = r.counterexample
        return out
