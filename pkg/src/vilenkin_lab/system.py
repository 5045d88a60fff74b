"""Generalized Rademacher functions and Vilenkin characters.

Every character value is an ``L``-th root of unity, ``L = lcm(m)``, so it is
read from one precomputed table instead of being built by repeated complex
multiplication:  ``psi_n(x) = w^{e}``, ``e = sum_j n_j x_j (L/m_j) mod L``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .group import GroupPoint, RadixSequence, expand

ATOL = 1e-10


@lru_cache(maxsize=None)
def _root_table(L: int) -> np.ndarray:
    u = np.arange(L)
    table = np.exp(2j * np.pi * u / L)
    # exact values at the quarter turns
    for k in range(0, L, max(1, L // 4)):
        if 4 * k % L == 0:
            table[k] = (1, 1j, -1, -1j)[4 * k // L]
    table.setflags(write=False)
    return table


def root_table(radix: RadixSequence) -> np.ndarray:
    """``exp(2 pi i u / L)`` for ``u < L``, read-only."""
    return _root_table(radix.lcm)


def phase_exponents(n_digits: np.ndarray, x_coords: np.ndarray, radix: RadixSequence) -> np.ndarray:
    """Integer exponents ``e[a, b]`` with ``psi_{n_a}(x_b) = w^{e[a, b]}``."""
    width = n_digits.shape[-1]
    if x_coords.shape[-1] != width:
        raise UsageError("digit and coordinate arrays must have the same width")
    weights = np.asarray([radix.lcm // mj for mj in radix.m[:width]], dtype=np.int64)
    return (n_digits * weights) @ x_coords.T % radix.lcm


def character_rows(ns, radix: RadixSequence, N: int) -> np.ndarray:
    """Values ``psi_n(x)`` for each ``n`` in ``ns`` over all ranks ``x`` at resolution ``N``."""
    ns = np.atleast_1d(np.asarray(ns, dtype=np.int64))
    digits = radix.digits_array(ns, N)
    exps = phase_exponents(digits, radix.coordinates(N), radix)
    return root_table(radix)[exps]


def character_table(radix: RadixSequence, N: int) -> np.ndarray:
    """Full ``(M_N, M_N)`` table, row ``n`` is ``psi_n``."""
    return character_rows(np.arange(radix.order(N)), radix, N)


def rademacher(k: int, x: GroupPoint) -> complex:
    if not 0 <= k < x.resolution:
        raise UsageError(f"Rademacher index {k} outside 0..{x.resolution - 1}")
    L = x.radix.lcm
    return complex(_root_table(L)[x.coords[k] * (L // x.radix.m[k]) % L])


def vilenkin(n: int, x: GroupPoint) -> complex:
    """``psi_n(x) = prod_k r_k(x)^{n_k}``."""
    N = x.resolution
    if not 0 <= n < x.radix.M[N]:
        raise CapacityError(f"character index {n} outside [0, M_{N} = {x.radix.M[N]})")
    if n == 0:
        return 1 + 0j
    radix = x.radix
    L = radix.lcm
    e = sum(d * x.coords[j] * (L // radix.m[j]) for j, d in enumerate(expand(n, radix).digits))
    return complex(_root_table(L)[e % L])


def rademacher_run_modulus(k: int, s: int, x: GroupPoint) -> float:
    """``|sum_{u<s} r_k(x)^u|`` in closed form ``sin(pi s x_k/m_k) / sin(pi x_k/m_k)``."""
    if not 0 <= k < x.resolution:
        raise UsageError(f"Rademacher index {k} outside 0..{x.resolution - 1}")
    mk = x.radix.m[k]
    if not 1 <= s <= mk:
        raise DomainError(f"run length s = {s} outside 1..{mk}")
    xk = x.coords[k]
    if xk == 0:
        return float(s)
    return abs(math.sin(math.pi * s * xk / mk) / math.sin(math.pi * xk / mk))
