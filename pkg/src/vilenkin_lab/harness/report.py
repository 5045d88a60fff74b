"""Report objects and deterministic JSON/CSV emission."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import UsageError

SIG_DIGITS = 12
CHECK_COLUMNS = ("check", "passed", "detail", "witness")


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS}g")


def normalize(obj: Any) -> Any:
    """JSON-ready copy with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt_float(x) if not math.isfinite(x) else float(fmt_float(x))
    if isinstance(obj, complex):
        return [normalize(obj.real), normalize(obj.imag)]
    return obj


@dataclass
class Check:
    id: str
    passed: bool
    detail: str = ""
    witness: dict | None = None

    def as_dict(self) -> dict:
        return {"id": self.id, "passed": bool(self.passed), "detail": self.detail, "witness": self.witness}


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    constants: dict[str, float] = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)
    columns: tuple[str, ...] = ()
    provenance: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, id: str, passed: bool, detail: str = "", witness: dict | None = None) -> bool:
        self.checks.append(Check(id, bool(passed), detail, None if passed else (witness or {})))
        return bool(passed)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        doc = {
            "name": self.name,
            "passed": self.passed,
            "checks": [c.as_dict() for c in sorted(self.checks, key=lambda c: c.id)],
            "constants": self.constants,
            "provenance": self.provenance,
        }
        if self.rows:
            doc["rows"] = self.rows
        doc.update(self.extra)
        return normalize(doc)

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in sorted(self.checks, key=lambda c: c.id):
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.id} {c.detail}".rstrip())
        return "\n".join(lines)


def to_json(report: Report) -> str:
    return json.dumps(report.as_dict(), sort_keys=True, indent=2) + "\n"


def _cell(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(normalize(v), sort_keys=True)
    if v is None:
        return ""
    return str(v)


def to_csv(report: Report) -> str:
    """Rows under ``report.columns`` when present, otherwise one line per check."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if report.rows:
        cols = report.columns or tuple(report.rows[0])
        w.writerow(cols)
        for row in report.rows:
            w.writerow([_cell(row.get(c)) for c in cols])
    else:
        w.writerow(CHECK_COLUMNS)
        for c in sorted(report.checks, key=lambda c: c.id):
            w.writerow([c.id, "true" if c.passed else "false", c.detail, _cell(c.witness)])
    for key in sorted(report.constants):
        buf.write(f"# {key}={_cell(report.constants[key])}\n")
    return buf.getvalue()


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise UsageError(f"unknown output format {fmt!r}; use json or csv")


def emit(report: Report, fmt: str, path: str | Path | None = None) -> str:
    """Render ``report`` and write it to ``path`` (when given); returns the text."""
    text = render(report, fmt)
    if path is not None:
        p = Path(path)
        try:
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write report to {p}: {exc}") from exc
    return text
