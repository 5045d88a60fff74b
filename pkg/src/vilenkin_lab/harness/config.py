"""Suite configuration: flat ``key = value`` files overridden by command-line flags."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import CapacityError, UsageError
from ..group import RadixSequence

DEFAULT_BUDGET = 65536

DEFAULT_TOL = {
    "character": 1e-10,
    "transform": 1e-10,
    "plancherel": 1e-9,
    "kernel": 1e-9,
    "condexp": 1e-10,
    "lemma3": 1e-9,
    "atom": 1e-10,
    "spectrum": 1e-9,
    "parseval": 1e-9,
}

KEYS = ("radix", "repeat", "resolution", "p", "family", "K", "trials", "seed", "out", "format", "budget",
        "regression")


@dataclass
class SuiteConfig:
    radix: RadixSequence
    resolution: int
    p_values: tuple[float, ...] = (0.5, 1.0)
    tol: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOL))
    seed: int = 0
    trials: int = 20
    family: str = "Mn+1"
    K: int | None = None
    out: str | None = None
    format: str = "json"
    budget: int = DEFAULT_BUDGET
    regression: str | None = None

    def __post_init__(self) -> None:
        if self.resolution > self.radix.n_max:
            raise UsageError(f"resolution {self.resolution} exceeds radix length {self.radix.n_max}")
        if self.resolution < 1:
            raise UsageError("resolution must be >= 1")
        if self.radix.M[self.resolution] > self.budget:
            raise CapacityError(
                f"M_{self.resolution} = {self.radix.M[self.resolution]} exceeds the cell budget {self.budget}"
            )
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")

    @property
    def cells(self) -> int:
        return self.radix.M[self.resolution]

    def echo(self) -> dict:
        return {
            "radix": list(self.radix.m[: self.resolution]),
            "resolution": self.resolution,
            "p": list(self.p_values),
            "seed": self.seed,
            "trials": self.trials,
            "family": self.family,
            "K": self.K,
            "budget": self.budget,
            "tol": dict(sorted(self.tol.items())),
        }


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in KEYS and not key.startswith("tol."):
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _parse_p(text: str) -> tuple[float, ...]:
    vals = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        if "/" in tok:
            a, b = tok.split("/", 1)
            vals.append(float(a) / float(b))
        else:
            vals.append(float(tok))
    if not vals:
        raise UsageError(f"empty p list {text!r}")
    return tuple(vals)


def build_config(settings: dict[str, object], defaults: dict[str, object] | None = None) -> SuiteConfig:
    """Merge ``defaults`` < ``settings`` (already file < flags) into a validated config."""
    merged = dict(defaults or {})
    merged.update({k: v for k, v in settings.items() if v is not None})
    try:
        radix_text = str(merged.get("radix", "2"))
        repeat = merged.get("repeat")
        resolution = merged.get("resolution")
        resolution = int(resolution) if resolution is not None else None
        if repeat is None:
            # a short pattern is cycled up to the requested resolution
            pattern_len = len([t for t in radix_text.split(",") if t.strip()])
            repeat = max(pattern_len, resolution or 0)
        radix = RadixSequence.parse(radix_text, int(repeat))
        if resolution is None:
            resolution = radix.n_max
        tol = dict(DEFAULT_TOL)
        for key, value in merged.items():
            if key.startswith("tol."):
                tol[key[4:]] = float(value)
        for item in merged.get("tol_overrides", None) or ():
            k, v = item.split("=", 1)
            tol[k.strip()] = float(v)
        K = merged.get("K")
        return SuiteConfig(
            radix=radix,
            resolution=resolution,
            p_values=_parse_p(merged.get("p", "1/2,1")),
            tol=tol,
            seed=int(merged.get("seed", 0)),
            trials=int(merged.get("trials", 20)),
            family=str(merged.get("family", "Mn+1")),
            K=int(K) if K is not None else None,
            out=merged.get("out"),
            format=str(merged.get("format", "json")),
            budget=int(merged.get("budget", DEFAULT_BUDGET)),
            regression=merged.get("regression"),
        )
    except ValueError as exc:
        if isinstance(exc, (UsageError, CapacityError)):
            raise
        raise UsageError(str(exc)) from exc
