"""Machine-readable verification reports.

A report is a suite identifier plus a list of instances; each instance
carries a theorem tag, a human description, dimension tables (spot ->
degree -> dimension), the expected concentration degree, and a verdict.
Verdict "fail" forces exit code 1; "conjecture-evidence" never affects
the exit code (the paper distinguishes proved theorems from conjectures,
and CI is meant to require theorem suites green while tracking
conjecture status separately).

Canonical JSON is deterministic: sorted keys, dimensions as integers or
the string "infinite".  Wall times are measured but reported only in the
pretty format, keeping the JSON byte-identical across runs.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

from .multigraded import GradedDimVector, Infinite

PASS = "pass"
FAIL = "fail"
CONJECTURE = "conjecture-evidence"


@dataclass
class Instance:
    theorem: str
    description: str
    tables: dict[str, GradedDimVector] = field(default_factory=dict)
    expected: int | None = None
    verdict: str = PASS
    wall_ms: float = 0.0

    def to_jsonable(self) -> dict:
        return {
            "theorem": self.theorem,
            "description": self.description,
            "tables": {str(k): v.to_jsonable() for k, v in sorted(self.tables.items())},
            "expected": self.expected,
            "verdict": self.verdict,
        }


@dataclass
class VerificationReport:
    suite: str
    instances: list[Instance] = field(default_factory=list)

    def add(self, instance: Instance) -> None:
        self.instances.append(instance)

    def verdicts(self) -> list[str]:
        return [inst.verdict for inst in self.instances]

    def passed(self) -> bool:
        return all(v != FAIL for v in self.verdicts())

    def exit_code(self) -> int:
        return 0 if self.passed() else 1

    def to_jsonable(self) -> dict:
        return {
            "suite": self.suite,
            "instances": [inst.to_jsonable() for inst in self.instances],
        }


def dims_table(dims_by_spot: dict[int, GradedDimVector]) -> dict[str, GradedDimVector]:
    return {str(k): v for k, v in dims_by_spot.items() if v}


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    """Render a report: canonical JSON, flat CSV, or human-oriented text."""
    if fmt == "json":
        return json.dumps(report.to_jsonable(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        out.write("suite,instance,theorem,nu,degree,dim,verdict\n")
        for inst in report.instances:
            rows = []
            for spot, vec in sorted(inst.tables.items()):
                for degree, dim in vec.items():
                    dim_s = "infinite" if isinstance(dim, Infinite) else str(dim)
                    rows.append((spot, str(degree), dim_s))
            if not rows:
                rows = [("", "", "")]
            for spot, degree, dim_s in rows:
                out.write(
                    f"{report.suite},{_csv(inst.description)},{inst.theorem},"
                    f"{spot},{degree},{dim_s},{inst.verdict}\n"
                )
        return out.getvalue()
    if fmt == "pretty":
        out = io.StringIO()
        out.write(f"suite: {report.suite}\n")
        for inst in report.instances:
            mark = {"pass": "ok", "fail": "FAIL", CONJECTURE: "conj"}[inst.verdict]
            out.write(f"  [{mark:>4}] {inst.theorem}: {inst.description}")
            if inst.expected is not None:
                out.write(f" (expected degree {inst.expected})")
            out.write(f" [{inst.wall_ms:.1f} ms]\n")
            for spot, vec in sorted(inst.tables.items()):
                if vec:
                    out.write(f"         spot {spot}: {dict(vec.items())}\n")
        status = "all pass" if report.passed() else "FAILURES PRESENT"
        out.write(f"  => {status}\n")
        return out.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def _csv(text: str) -> str:
    if any(c in text for c in ",\"\n"):
        return '"' + text.replace('"', '""') + '"'
    return text
