"""Machine-readable pass/fail reports.

One JSON document per run, stable key order, one record per executed
check.  Replays with identical config and seeds are byte-identical
except for the ``generated_at`` timestamp and the per-check runtimes.
Reports are written atomically (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str  # "pass" | "fail" | "timeout"
    runtime_s: float = 0.0
    witness: str = ""


@dataclass
class Report:
    suite: str
    prime: int
    seeds: list[int]
    budget_steps: int
    budget_degree: int
    checks: list[CheckResult] = field(default_factory=list)
    generated_at: str = ""

    def finalize(self) -> "Report":
        self.checks.sort(key=lambda c: c.id)
        ids = [c.id for c in self.checks]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate check ids: {dupes}")
        self.generated_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return self

    def summary(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "timeout": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def exit_code(self) -> int:
        s = self.summary()
        if s["fail"]:
            return 2
        if s["timeout"]:
            return 3
        return 0

    def to_json(self) -> str:
        doc = {
            "suite": self.suite,
            "prime": self.prime,
            "seeds": self.seeds,
            "budget": {"steps": self.budget_steps, "degree": self.budget_degree},
            "generated_at": self.generated_at,
            "checks": [asdict(c) for c in self.checks],
            "summary": self.summary(),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def write(self, path: str):
        directory = os.path.dirname(os.path.abspath(path)) or "."
        fd, tmp = tempfile.mkstemp(prefix=".report-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
