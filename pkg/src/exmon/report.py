"""Law reports: the shared result shape for all axiom-checking suites.

A report is a list of per-axiom entries; each entry records how many cases
were run and any counterexamples found.  Failures are data, not exceptions.
The JSON form is a list of ``{axiom, cases, failures}`` objects, where every
failure carries ``{inputs, expected, got}`` as strings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class LawFailure:
    inputs: tuple[str, ...]
    expected: str
    got: str

    def to_json(self) -> dict:
        return {"inputs": list(self.inputs), "expected": self.expected, "got": self.got}


@dataclass
class AxiomCheck:
    axiom: str
    cases: int = 0
    failures: list[LawFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, inputs: tuple[str, ...], expected: str, got: str) -> None:
        self.failures.append(LawFailure(inputs, expected, got))

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "cases": self.cases,
            "failures": [f.to_json() for f in self.failures],
        }


@dataclass
class LawReport:
    """Results for one checked subject (an instance, a map, a suite)."""

    subject: str
    checks: list[AxiomCheck] = field(default_factory=list)

    def new_check(self, axiom: str) -> AxiomCheck:
        check = AxiomCheck(axiom)
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing_axioms(self) -> list[str]:
        return [c.axiom for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "axioms": [c.to_json() for c in self.checks],
        }

    def to_json_str(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json(), indent=indent)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"[{status}] {self.subject}: {c.axiom} ({c.cases} cases)"
            if not c.passed:
                w = c.failures[0]
                line += f" witness inputs={list(w.inputs)} expected={w.expected} got={w.got}"
            lines.append(line)
        return lines
