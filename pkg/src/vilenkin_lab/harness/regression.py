"""Pinned empirical constants.

The kernel and lemma constants are never quantified analytically, so the
first run records them and later runs compare against the stored value:
integers exactly, floats to ``1e-9`` (relative, with the same absolute floor).
"""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

from .report import fmt_float

FLOAT_TOL = 1e-9


def default_path() -> Path:
    return Path(str(resources.files("vilenkin_lab") / "data" / "regression.json"))


class RegressionStore:
    def __init__(self, path: str | Path | None = None, record: bool = True):
        self.path = Path(path) if path is not None else default_path()
        self.record = record
        self.values: dict[str, float | int] = {}
        if self.path.exists():
            self.values = json.loads(self.path.read_text(encoding="utf-8"))
        self._dirty = False

    def check(self, key: str, value: float | int) -> tuple[bool, str]:
        """Compare against the stored constant, recording it when absent (if allowed)."""
        if key not in self.values:
            if not self.record:
                return False, f"no committed value for {key}"
            self.values[key] = value if isinstance(value, int) else float(fmt_float(value))
            self._dirty = True
            self.save()
            return True, f"recorded {key}={value}"
        stored = self.values[key]
        if isinstance(value, int) and isinstance(stored, int):
            ok = value == stored
        else:
            ok = math.isclose(float(value), float(stored), rel_tol=FLOAT_TOL, abs_tol=FLOAT_TOL)
        return ok, f"{key}: observed {fmt_float(float(value))}, committed {fmt_float(float(stored))}"

    def save(self) -> None:
        if not self._dirty:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text(json.dumps(self.values, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        self._dirty = False
