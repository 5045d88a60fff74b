"""Restricted and weighted maximal operators of partial sums, and norm probes.

Every supremum over ``n`` is a finite maximum up to the working resolution
``N`` (indices ``n <= M_N``); reports carry ``N`` so truncation is explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .families import SubsequenceFamily
from .group import RadixSequence
from .hardy import Atom, hardy_norm, maximal_function
from .kernels import chopped_quasinorm, lp_quasinorm
from .transform import CylinderFunction, iter_partial_sums, partial_sums


def _members(f: CylinderFunction, family: SubsequenceFamily, K: int | None) -> list[int]:
    MN = f.radix.M[f.resolution]
    radix = f.radix
    if radix.n_max == f.resolution:
        # members up to M_N only read m[:N]; one padding digit lets M_N itself be produced
        radix = RadixSequence(radix.m + (radix.m[-1],))
    if K is None:
        return family.members(radix, limit=MN)
    if K < 0:
        raise UsageError("K must be >= 0")
    members = family.members(radix, K + 1)
    over = [a for a in members if a > MN]
    if over:
        raise CapacityError(f"family members {over} exceed M_{f.resolution} = {MN}")
    if len(members) < K + 1:
        raise CapacityError(f"family {family} has only {len(members)} members within the radix capacity")
    return members


def restricted_maximal(f: CylinderFunction, family: SubsequenceFamily, K: int | None = None) -> CylinderFunction:
    """``max_{k <= K} |S_{alpha_k} f|``; ``K=None`` takes every member ``<= M_N``."""
    members = _members(f, family, K)
    if not members:
        return CylinderFunction.zeros(f.radix, f.resolution)
    return CylinderFunction(f.radix, f.resolution, np.abs(partial_sums(f, members)).max(axis=0))


def dyadic_maximal(f: CylinderFunction) -> CylinderFunction:
    """``S^# f = max_n |S_{M_n} f|``."""
    return restricted_maximal(f, SubsequenceFamily.builtin("Mn"))


def weight(n: int, p: float) -> float:
    """``(n+1)^{1/p-1} log^{[p]}(n+1)``, ``[p]`` the integer part of ``p``."""
    return (n + 1) ** (1 / p - 1) * math.log(n + 1) ** math.floor(p)


def weighted_maximal(f: CylinderFunction, p: float) -> CylinderFunction:
    """``max_{1 <= n <= M_N} |S_n f| / weight(n, p)``."""
    if not 0 < p <= 1:
        raise DomainError(f"weighted maximal operator needs 0 < p <= 1, got {p}")
    best = np.zeros(f.size)
    for n, row in iter_partial_sums(f):
        np.maximum(best, np.abs(row) / weight(n, p), out=best)
    return CylinderFunction(f.radix, f.resolution, best)


@dataclass
class ProbeReport:
    operator: str
    p: float
    resolution: int
    trials: int
    max_ratio: float
    argmax: dict
    skipped: int = 0
    max_outside: float | None = None
    rows: list[dict] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "operator": self.operator,
            "p": self.p,
            "resolution": self.resolution,
            "trials": self.trials,
            "max_ratio": self.max_ratio,
            "argmax": self.argmax,
            "skipped": self.skipped,
            "max_outside": self.max_outside,
            "rows": self.rows,
        }


Operator = Callable[[CylinderFunction], CylinderFunction]
Generator = Callable[[np.random.Generator], "Atom | CylinderFunction"]


def probe_operator_norm(operator: Operator, p: float, trials: int, generator: Generator, seed: int = 0,
                        name: str = "T") -> ProbeReport:
    """Largest ``||T f||_p / ||f||_{H_p}`` over generated test inputs.

    Trial ``i`` draws from ``default_rng([seed, i])``, so rows do not depend on
    evaluation order.  For atoms the integral of ``|T a|^p`` off the support
    is recorded as well.
    """
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rows, skipped = [], 0
    best, arg = -math.inf, {}
    outside_max = None
    resolution = -1
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        item = generator(rng)
        f = item.values if isinstance(item, Atom) else item
        resolution = f.resolution
        h = hardy_norm(f, p)
        if h == 0:
            skipped += 1
            continue
        Tf = operator(f)
        t = chopped_quasinorm(Tf, p)
        row = {"trial": i, "ratio": t / h, "t_norm": t, "hardy_norm": h}
        if isinstance(item, Atom):
            off = ~item.support.mask(f.resolution)
            outside = float(np.sum(np.abs(Tf.values[off]) ** p) / f.size)
            row.update(depth=item.support.depth, outside=outside)
            outside_max = outside if outside_max is None else max(outside_max, outside)
        rows.append(row)
        if row["ratio"] > best:
            best, arg = row["ratio"], {k: row[k] for k in ("trial", "depth") if k in row}
    if not rows:
        best = math.nan
    return ProbeReport(name, p, resolution, trials, best, arg, skipped, outside_max, rows)


def identity(f: CylinderFunction) -> CylinderFunction:
    return f


def family_operator(family: SubsequenceFamily) -> Operator:
    def op(f: CylinderFunction) -> CylinderFunction:
        return restricted_maximal(f, family)

    op.__name__ = f"restricted_maximal[{family}]"
    return op


def maximal_operator(f: CylinderFunction) -> CylinderFunction:
    return maximal_function(f)


def sup_partial_sum_ratio(f: CylinderFunction, p: float) -> tuple[float, int]:
    """``max_n ||S_n f||_p / ||f||_p`` over ``1 <= n <= M_N`` with the maximizing ``n``."""
    base = lp_quasinorm(f, p)
    best, arg = -1.0, 0
    for n, row in iter_partial_sums(f):
        r = lp_quasinorm(row, p) / base
        if r > best:
            best, arg = r, n
    return best, arg

