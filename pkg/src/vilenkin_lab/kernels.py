"""Dirichlet kernels, Lebesgue-type norms, and the two kernel lemmas' quantities."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import CapacityError, DomainError
from .group import GroupPoint, RadixSequence, annulus_index, expand
from .system import character_rows, phase_exponents, root_table
from .transform import CylinderFunction

_CHUNK = 512


def _check_n(n: int, N: int, radix: RadixSequence, lowest: int = 0) -> None:
    radix.check_resolution(N)
    if not lowest <= n <= radix.M[N]:
        raise CapacityError(f"kernel index {n} outside {lowest}..M_{N} = {radix.M[N]}")


def dirichlet_direct(n: int, N: int, radix: RadixSequence) -> CylinderFunction:
    """``D_n = sum_{k<n} psi_k`` by summing characters."""
    _check_n(n, N, radix)
    total = np.zeros(radix.M[N], dtype=np.complex128)
    for start in range(0, n, _CHUNK):
        total += character_rows(np.arange(start, min(start + _CHUNK, n)), radix, N).sum(axis=0)
    return CylinderFunction(radix, N, total)


def dirichlet_table(N: int, radix: RadixSequence) -> np.ndarray:
    """Rows ``D_0, ..., D_{M_N}`` at resolution ``N`` (cumulative character sums)."""
    M = radix.order(N)
    table = np.zeros((M + 1, M), dtype=np.complex128)
    running = np.zeros(M, dtype=np.complex128)
    for start in range(0, M, _CHUNK):
        stop = min(start + _CHUNK, M)
        block = np.cumsum(character_rows(np.arange(start, stop), radix, N), axis=0) + running
        table[start + 1 : stop + 1] = block
        running = block[-1]
    return table


def iter_dirichlet(N: int, radix: RadixSequence, stop: int | None = None) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, D_n values)`` for ``1 <= n < stop`` without holding the full table."""
    M = radix.order(N)
    stop = M if stop is None else stop
    _check_n(stop, N, radix)
    running = np.zeros(M, dtype=np.complex128)
    for start in range(0, stop - 1, _CHUNK):
        end = min(start + _CHUNK, stop - 1)
        block = np.cumsum(character_rows(np.arange(start, end), radix, N), axis=0) + running
        for i, row in enumerate(block):
            yield start + i + 1, row
        running = block[-1]


def dirichlet_block(k: int, N: int, radix: RadixSequence) -> CylinderFunction:
    """``D_{M_k}``: ``M_k`` on ``I_k`` and zero elsewhere."""
    radix.check_resolution(N)
    if not 0 <= k <= N:
        raise CapacityError(f"block index {k} outside 0..{N}")
    inside = np.all(radix.coordinates(N)[:, :k] == 0, axis=1)
    return CylinderFunction(radix, N, np.where(inside, float(radix.M[k]), 0.0))


def dirichlet_closed(n: int, N: int, radix: RadixSequence) -> CylinderFunction:
    """``D_n = psi_n * sum_j D_{M_j} * sum_{u=m_j-n_j}^{m_j-1} r_j^u``.

    Evaluated on coset representatives with ``x_j = 0`` for ``j >= N``, where
    ``r_j = 1``; this is what lets ``n = M_N`` be handled at resolution ``N``.
    """
    _check_n(n, N, radix, lowest=1)
    coords = radix.coordinates(N)
    table = root_table(radix)
    L = radix.lcm
    M = radix.M[N]
    digits = radix.digits_array([n % M], N)[0] if N else np.zeros(0, dtype=np.int64)
    overflow = n // M
    psi = table[phase_exponents(digits[None, :], coords, radix)[0]]
    total = np.zeros(M, dtype=np.complex128)
    in_block = np.ones(M, dtype=bool)
    for j in range(N):
        nj = int(digits[j])
        if nj:
            mj = radix.m[j]
            u = np.arange(mj - nj, mj)
            run = table[(np.outer(coords[:, j], u) * (L // mj)) % L].sum(axis=1)
            total += np.where(in_block, radix.M[j] * run, 0)
        in_block &= coords[:, j] == 0
    if overflow:
        total += np.where(in_block, float(M) * overflow, 0)
    return CylinderFunction(radix, N, psi * total)


def _as_values(f) -> np.ndarray:
    return f.values if isinstance(f, CylinderFunction) else np.asarray(f)


def _check_p(p: float) -> None:
    if not p > 0:
        raise DomainError(f"exponent p must be positive, got {p}")


def lp_quasinorm(f, p: float) -> float:
    """``(integral |f|^p)^{1/p}``; ``p = inf`` gives the sup norm."""
    _check_p(p)
    a = np.abs(_as_values(f))
    if np.isinf(p):
        return float(a.max())
    return float(np.mean(a**p) ** (1.0 / p))


# |v|^p for p < 1 magnifies rounding residue (1e-16 -> 1e-8 at p = 1/2), so
# quasinorms of computed functions zero out entries below this fraction of the sup before the quasinorm
CHOP = 1e-12


def chopped_quasinorm(f, p: float) -> float:
    """``lp_quasinorm`` after zeroing entries below ``CHOP`` times the sup."""
    a = np.abs(_as_values(f))
    return lp_quasinorm(np.where(a > CHOP * a.max(initial=0.0), a, 0.0), p)


def weak_lp_norm(f, p: float) -> float:
    """``sup_lambda lambda * mu(|f| > lambda)^{1/p}``, evaluated exactly.

    Between consecutive values of ``|f|`` the map is increasing in lambda, so
    the supremum is ``max_v v * mu(|f| >= v)^{1/p}`` over the attained values.
    """
    _check_p(p)
    return float(weak_lp_norms(np.atleast_2d(_as_values(f)), p)[0])


def weak_lp_norms(rows: np.ndarray, p: float) -> np.ndarray:
    """Row-wise weak-L_p norms of a 2-D array (uniform measure on each row)."""
    _check_p(p)
    a = -np.sort(-np.abs(rows), axis=1)
    tail = (np.arange(1, a.shape[1] + 1) / a.shape[1]) ** (1.0 / p)
    return (a * tail).max(axis=1)


def local_kernel_integral(n: int, x: GroupPoint, N: int) -> float:
    """``integral_{I_N} |D_n(x - t)| dmu(t)`` by enumerating ``t`` in ``I_N``.

    Runs at working resolution ``max(N, w)`` with ``w`` the least index such
    that ``n <= M_w``; ``D_n`` is constant on ``I_w``-cosets.
    """
    radix = x.radix
    if n < 1:
        raise DomainError("local kernel integral needs n >= 1")
    if x.resolution < N:
        raise DomainError(f"point resolution {x.resolution} below N = {N}")
    w = next((k for k, Mk in enumerate(radix.M) if n <= Mk), None)
    if w is None:
        raise CapacityError(f"n = {n} exceeds M[{radix.n_max}]")
    width = max(N, w)
    D = dirichlet_direct(n, width, radix).values
    xw = x.truncate(width)
    coords = radix.coordinates(width)
    t_in = coords[np.all(coords[:, :N] == 0, axis=1)]
    m = np.asarray(radix.m[:width])
    diff = (np.asarray(xw.coords) - t_in) % m
    ranks = diff @ np.asarray(radix.M[:width])
    return float(np.abs(D[ranks]).sum() / radix.M[width])


@dataclass(frozen=True)
class Lemma2Scan:
    radix: RadixSequence
    N: int
    width: int
    max_ratio: float
    argmax: tuple[int, int, int]  # (n, s, rank of x at resolution N)


def lemma2_scan(radix: RadixSequence, width: int, Ns=None) -> dict[int, Lemma2Scan]:
    """For each ``N`` in ``Ns`` (default ``1..width``): the max of ``(M_N/M_s) * integral_{I_N} |D_n(x - t)| dmu(t)``.

    Scans ``1 <= n < M_width`` and one ``x`` per ``I_N``-coset off ``I_N``.
    Since ``x - I_N = I_N(x)``, the integral is the sum of ``|D_n|`` over the
    coset of ``x`` divided by ``M_width``.
    """
    Ns = list(range(1, width + 1)) if Ns is None else list(Ns)
    if any(not 1 <= N <= width for N in Ns):
        raise DomainError(f"every N must satisfy 1 <= N <= width = {width}")
    Mw = radix.order(width)
    setup = {}
    for N in Ns:
        s_of = annulus_index(radix, N)
        off = np.flatnonzero(s_of < N)
        scale = radix.M[N] / np.asarray(radix.M, dtype=float)[s_of[off]]
        setup[N] = (s_of, off, scale)
    best = {N: (-1.0, (0, 0, 0)) for N in Ns}
    for n, row in iter_dirichlet(width, radix):
        a = np.abs(row)
        for N in Ns:
            s_of, off, scale = setup[N]
            integral = a.reshape(Mw // radix.M[N], radix.M[N]).sum(axis=0) / Mw
            ratios = integral[off] * scale
            i = int(np.argmax(ratios))
            if ratios[i] > best[N][0]:
                c = int(off[i])
                best[N] = (float(ratios[i]), (n, int(s_of[c]), c))
    return {N: Lemma2Scan(radix, N, width, *best[N]) for N in Ns}


@dataclass
class Lemma3Result:
    n: int
    low: int
    high: int
    passed: bool
    min_abs: float
    bound: int
    points: int
    failures: list[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def lemma3_minorant_check(n: int, N: int, radix: RadixSequence, table: np.ndarray | None = None,
                          tol: float = 1e-9) -> Lemma3Result:
    """On ``I_{<n>+1}(e_{<n>})`` check ``|D_n| = |D_{n - M_|n|}| >= M_<n>``.

    ``table`` may hold precomputed rows ``D_0..D_{M_N}`` at resolution ``N``.
    """
    e = expand(n, radix)
    if e.rho < 1:
        raise DomainError(f"n = {n} has <n> = |n| = {e.low}; the minorant needs rho(n) >= 1")
    if e.high + 1 > N:
        raise DomainError(f"|n| + 1 = {e.high + 1} exceeds resolution {N}")
    rest = n - radix.M[e.high]
    if table is None:
        Dn = dirichlet_direct(n, N, radix).values
        Dr = dirichlet_direct(rest, N, radix).values
    else:
        Dn, Dr = table[n], table[rest]
    coords = radix.coordinates(N)
    sel = np.all(coords[:, : e.low] == 0, axis=1) & (coords[:, e.low] == 1)
    a, b = np.abs(Dn[sel]), np.abs(Dr[sel])
    bound = radix.M[e.low]
    bad = np.flatnonzero((np.abs(a - b) > tol) | (a < bound - tol))
    ranks = np.flatnonzero(sel)
    failures = [
        {"n": n, "x_rank": int(ranks[i]), "abs_Dn": float(a[i]), "abs_Drest": float(b[i]), "bound": bound}
        for i in bad[:10]
    ]
    return Lemma3Result(n, e.low, e.high, bad.size == 0, float(a.min()), bound, int(sel.sum()), failures)


@dataclass(frozen=True)
class KernelReport:
    n: int
    low: int
    high: int
    rho: int
    l1_norm: float
    max_abs: float

    def row(self) -> list:
        return [self.n, self.low, self.high, self.rho, self.l1_norm, self.max_abs]


KERNEL_COLUMNS = ("n", "low", "high", "rho", "l1_norm", "max_abs")


def kernel_report(n: int, values: np.ndarray, radix: RadixSequence) -> KernelReport:
    e = expand(n, radix)
    a = np.abs(values)
    return KernelReport(n, e.low, e.high, e.rho, float(a.mean()), float(a.max()))


def kernel_reports(N: int, radix: RadixSequence, stop: int | None = None) -> Iterator[KernelReport]:
    """Reports for ``1 <= n < stop`` (default ``M_N``)."""
    for n, row in iter_dirichlet(N, radix, stop):
        yield kernel_report(n, row, radix)
