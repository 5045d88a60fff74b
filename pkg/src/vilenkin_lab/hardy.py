"""Martingales, the maximal function, H_p atoms, and the divergence construction.

The filtration is generated by the ``I_n``-cosets, so the conditional
expectation at level ``n`` is the coset average, which coincides with the
partial sum ``S_{M_n} f``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .families import SubsequenceFamily
from .group import GroupPoint, Interval, RadixSequence, expand
from .kernels import chopped_quasinorm, dirichlet_block
from .transform import CylinderFunction, Spectrum, forward

ATOM_TOL = 1e-10


def coarsen(f: CylinderFunction, n: int) -> CylinderFunction:
    """The ``I_n``-coset averages of ``f``, stored at resolution ``n``."""
    N = f.resolution
    if not 0 <= n <= N:
        raise CapacityError(f"level {n} outside 0..{N}")
    Mn = f.radix.M[n]
    return CylinderFunction(f.radix, n, f.values.reshape(-1, Mn).mean(axis=0))


def condexp(f: CylinderFunction, n: int) -> CylinderFunction:
    """Conditional expectation on the ``n``-th sigma-algebra, at the resolution of ``f``."""
    return coarsen(f, n).refine(f.resolution)


def _level_stack(f: CylinderFunction) -> np.ndarray:
    """Rows ``|E_n f|`` for ``n = 0..N`` at full resolution."""
    N, M = f.resolution, f.size
    out = np.empty((N + 1, M))
    for n in range(N + 1):
        Mn = f.radix.M[n]
        out[n] = np.tile(np.abs(f.values.reshape(-1, Mn).mean(axis=0)), M // Mn)
    return out


def maximal_function(f: CylinderFunction) -> CylinderFunction:
    """``f* = max_{0 <= n <= N} |E_n f|``."""
    return CylinderFunction(f.radix, f.resolution, _level_stack(f).max(axis=0))


def hardy_norm(f: CylinderFunction, p: float) -> float:
    if not p > 0:
        raise DomainError(f"exponent p must be positive, got {p}")
    return chopped_quasinorm(maximal_function(f), p)


@dataclass
class Martingale:
    """Levels ``f_0, ..., f_N``; ``f_n`` is stored at resolution ``n``."""

    radix: RadixSequence
    levels: list[CylinderFunction]

    def __post_init__(self) -> None:
        for n, level in enumerate(self.levels):
            if level.resolution != n:
                raise UsageError(f"level {n} stored at resolution {level.resolution}")

    @classmethod
    def from_function(cls, f: CylinderFunction) -> "Martingale":
        return cls(f.radix, [coarsen(f, n) for n in range(f.resolution + 1)])

    @property
    def resolution(self) -> int:
        return len(self.levels) - 1

    @property
    def limit(self) -> CylinderFunction:
        return self.levels[-1]

    def adaptedness_error(self) -> float:
        """Largest deviation between ``f_n`` and the ``I_n``-average of ``f_{n+1}``."""
        err = 0.0
        for n in range(self.resolution):
            avg = coarsen(self.levels[n + 1], n)
            err = max(err, float(np.max(np.abs(avg.values - self.levels[n].values))))
        return err

    def is_adapted(self, tol: float = 1e-10) -> bool:
        return self.adaptedness_error() <= tol


@dataclass(frozen=True)
class Atom:
    support: Interval
    values: CylinderFunction
    p: float

    def __post_init__(self) -> None:
        if not 0 < self.p <= 1:
            raise DomainError(f"atoms need 0 < p <= 1, got {self.p}")
        if self.values.resolution < self.support.depth:
            raise UsageError("atom values coarser than its support interval")

    @property
    def bound(self) -> float:
        """``mu(I)^{-1/p}``."""
        return float(self.support.radix.M[self.support.depth]) ** (1.0 / self.p)


@dataclass
class AtomCheck:
    valid: bool
    mean: float
    sup: float
    bound: float
    leak: float
    reasons: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_atom(a: Atom, tol: float = ATOM_TOL) -> AtomCheck:
    """Zero mean on the support, sup bound (multiplicative slack), and confinement to the support."""
    vals = a.values.values
    inside = a.support.mask(a.values.resolution)
    mu = 1.0 / a.support.radix.M[a.support.depth]
    sup = float(np.abs(vals).max(initial=0.0))
    mean = float(abs(vals[inside].sum()) / vals.size)
    leak = float(np.abs(vals[~inside]).max(initial=0.0))
    reasons = []
    if mean > tol * max(1.0, sup * mu):
        reasons.append(f"nonzero mean {mean:.3e} on support")
    if sup > a.bound * (1 + tol):
        reasons.append(f"sup {sup:.6g} exceeds mu(I)^(-1/p) = {a.bound:.6g}")
    if leak > 0:
        reasons.append(f"nonzero values off the support (max {leak:.3e})")
    return AtomCheck(not reasons, mean, sup, a.bound, leak, reasons)


@dataclass
class AtomicDecomposition:
    coefficients: list[float]
    atoms: list[Atom]

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(self.atoms):
            raise UsageError("one coefficient per atom")

    def coefficient_sum(self, p: float) -> float:
        """``sum_k |lambda_k|^p``."""
        return float(sum(abs(c) ** p for c in self.coefficients))


def assemble(decomp: AtomicDecomposition, n: int, radix: RadixSequence | None = None,
             N: int | None = None) -> CylinderFunction:
    """``sum_k lambda_k E_n a_k``; ``radix``/``N`` are only needed for an empty decomposition."""
    if not decomp.atoms:
        if radix is None or N is None:
            raise UsageError("empty decomposition needs radix and resolution")
        if not 0 <= n <= N:
            raise CapacityError(f"level {n} outside 0..{N}")
        return CylinderFunction.zeros(radix, N)
    N = decomp.atoms[0].values.resolution
    if any(a.values.resolution != N for a in decomp.atoms):
        raise UsageError("atoms must share one resolution")
    total = np.zeros(decomp.atoms[0].values.size, dtype=np.complex128)
    for lam, a in zip(decomp.coefficients, decomp.atoms):
        total += lam * condexp(a.values, n).values
    return CylinderFunction(decomp.atoms[0].values.radix, N, total)


@dataclass(frozen=True)
class CounterexampleSpec:
    p: float
    indices: tuple[int, ...]
    resolution: int
    radix: RadixSequence

    def __post_init__(self) -> None:
        object.__setattr__(self, "indices", tuple(int(v) for v in self.indices))
        if not 0 < self.p < 1:
            raise DomainError(f"the construction needs 0 < p < 1, got p = {self.p}")
        if not self.indices:
            raise DomainError("no indices selected")
        self.radix.check_resolution(self.resolution)
        if self.indices[0] < 3:
            raise DomainError(f"n_0 >= 3 violated: n_0 = {self.indices[0]}")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise DomainError(f"indices must be strictly increasing: {self.indices}")
        highs = [expand(n, self.radix).high for n in self.indices]
        for n, h in zip(self.indices, highs):
            if h + 1 > self.resolution:
                raise DomainError(f"|n_k| + 1 <= N violated: n = {n}, |n| = {h}, N = {self.resolution}")
        if any(b <= a for a, b in zip(highs, highs[1:])):
            raise DomainError(f"blocks [M_|n_k|, M_|n_k|+1) must be disjoint: |n_k| = {highs}")

    def expansions(self):
        return [expand(n, self.radix) for n in self.indices]

    def growth_ratios(self) -> list[float]:
        """``(M_|n_k| / M_<n_k>)^{(1-p)/2}``: the quantity that must diverge."""
        M = self.radix.M
        return [(M[e.high] / M[e.low]) ** ((1 - self.p) / 2) for e in self.expansions()]

    def tail_sum(self) -> float:
        """Finite analogue of the convergent series of reciprocal ratios."""
        return float(sum(1.0 / r for r in self.growth_ratios()))


def select_subsequence(family: SubsequenceFamily, p: float, K: int, radix: RadixSequence,
                       N: int) -> CounterexampleSpec:
    """Greedy pick of ``K`` family members whose squared growth ratio at least doubles.

    The squared ratio is ``(M_|n| / M_<n>)^{1-p}``; starting from 1, each pick
    must reach twice the previous value.  Doubling makes the reciprocal ratios
    summable (geometric with quotient ``1/sqrt 2``) while the ratios diverge.
    """
    if not 0 < p < 1:
        raise DomainError(f"selection needs 0 < p < 1, got {p}")
    if K < 1:
        raise UsageError("K must be >= 1")
    if family.rho_bounded:
        raise DomainError(
            f"family {family} has bounded rho(alpha_k); the condition sup_k rho(alpha_k) = infinity cannot hold"
        )
    M = radix.M
    picked: list[int] = []
    last = 1.0
    for n in family.iter_members(radix, limit=M[N] - 1):
        if len(picked) == K:
            break
        if n < 3:
            continue
        e = expand(n, radix)
        if e.rho < 1:
            continue
        sq = (M[e.high] / M[e.low]) ** (1 - p)
        if sq >= 2 * last * (1 - 1e-12):
            picked.append(n)
            last = sq
    if len(picked) < K:
        raise DomainError(
            f"only {len(picked)} of {K} indices found below M_{N} with doubling ratio; "
            f"the condition sup_k rho(alpha_k) = infinity is not witnessed at this resolution"
        )
    return CounterexampleSpec(p, tuple(picked), N, radix)


def counterexample_atom(high: int, p: float, radix: RadixSequence, N: int) -> Atom:
    """``(M_h^{1/p-1} / m_*) (D_{M_{h+1}} - D_{M_h})`` supported on ``I_h``."""
    scale = radix.M[high] ** (1 / p - 1) / radix.m_star
    vals = scale * (dirichlet_block(high + 1, N, radix).values - dirichlet_block(high, N, radix).values)
    return Atom(Interval(GroupPoint.zero(N, radix), high), CylinderFunction(radix, N, vals), p)


def counterexample_coefficient(n: int, p: float, radix: RadixSequence) -> float:
    """``lambda_k = m_* M_<n>^{(1/p-1)/2} / M_|n|^{(1/p-1)/2}``."""
    e = expand(n, radix)
    q = (1 / p - 1) / 2
    return radix.m_star * radix.M[e.low] ** q / radix.M[e.high] ** q


def closed_form_spectrum(spec: CounterexampleSpec) -> np.ndarray:
    """``M_<n_k>^{(1/p-1)/2} M_|n_k|^{(1/p-1)/2}`` on each block, zero elsewhere."""
    M = spec.radix.M
    q = (1 / spec.p - 1) / 2
    out = np.zeros(M[spec.resolution], dtype=np.complex128)
    for e in spec.expansions():
        out[M[e.high] : M[e.high + 1]] = M[e.low] ** q * M[e.high] ** q
    return out


class Counterexample(NamedTuple):
    martingale: Martingale
    spectrum: Spectrum
    decomposition: AtomicDecomposition


def build_counterexample(spec: CounterexampleSpec) -> Counterexample:
    """Level ``n`` is ``sum_{|n_k| < n} lambda_k a_k``; returned with the limit's spectrum."""
    radix, N, p = spec.radix, spec.resolution, spec.p
    highs = [e.high for e in spec.expansions()]
    atoms = [counterexample_atom(h, p, radix, N) for h in highs]
    coeffs = [counterexample_coefficient(n, p, radix) for n in spec.indices]
    levels = []
    for n in range(N + 1):
        total = np.zeros(radix.M[N], dtype=np.complex128)
        for h, lam, a in zip(highs, coeffs, atoms):
            if h < n:
                total += lam * a.values.values
        levels.append(coarsen(CylinderFunction(radix, N, total), n))
    mart = Martingale(radix, levels)
    return Counterexample(mart, forward(mart.limit), AtomicDecomposition(coeffs, atoms))


def random_atom(radix: RadixSequence, N: int, p: float, rng: np.random.Generator,
                depth: int | None = None, real: bool = False) -> Atom:
    """Random phases (or signs) on ``I_depth(y)``, projected to zero mean, scaled to the sup bound."""
    if depth is None:
        depth = int(rng.integers(0, N))
    if not 0 <= depth < N:
        raise DomainError(f"atom depth must lie in 0..{N - 1}")
    y = GroupPoint(tuple(int(rng.integers(0, radix.m[j])) for j in range(N)), radix)
    support = Interval(y, depth)
    inside = support.mask(N)
    k = int(inside.sum())
    if real:
        v = rng.choice([-1.0, 1.0], size=k).astype(np.complex128)
    else:
        v = np.exp(2j * np.pi * rng.random(k))
    v -= v.mean()
    vals = np.zeros(radix.M[N], dtype=np.complex128)
    top = np.abs(v).max()
    if top > 0:
        vals[inside] = v * (radix.M[depth] ** (1.0 / p) / top)
    return Atom(support, CylinderFunction(radix, N, vals), p)


def block_atom(radix: RadixSequence, N: int, p: float, rng: np.random.Generator,
               depth: int | None = None) -> Atom:
    """Translate of the block-kernel atom ``D_{M_{d+1}} - D_{M_d}``, unit phase, sup bound met with equality."""
    if depth is None:
        depth = int(rng.integers(0, N))
    if not 0 <= depth < N:
        raise DomainError(f"atom depth must lie in 0..{N - 1}")
    y = GroupPoint(tuple(int(rng.integers(0, radix.m[j])) for j in range(N)), radix)
    base = dirichlet_block(depth + 1, N, radix).values - dirichlet_block(depth, N, radix).values
    coords = radix.coordinates(N)
    shifted = (coords - np.asarray(y.coords)) % np.asarray(radix.m[:N])
    vals = base[shifted @ np.asarray(radix.M[:N])]
    vals = vals * (radix.M[depth] ** (1.0 / p) / np.abs(vals).max()) * np.exp(2j * np.pi * rng.random())
    return Atom(Interval(y, depth), CylinderFunction(radix, N, vals), p)


def random_decomposition(radix: RadixSequence, N: int, p: float, rng: np.random.Generator,
                         count: int) -> AtomicDecomposition:
    atoms = [random_atom(radix, N, p, rng) for _ in range(count)]
    coeffs = list(rng.standard_normal(count))
    return AtomicDecomposition(coeffs, atoms)

