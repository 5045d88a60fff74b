"""Brute-force references, deliberately independent of the fast paths.

Characters are rebuilt from floating phases ``sum_j n_j x_j / m_j`` with
``numpy.exp``; no root table, no axis passes, no running sums.
"""
from __future__ import annotations

import numpy as np

from ..group import RadixSequence


def _digits(values: np.ndarray, radix: RadixSequence, N: int) -> np.ndarray:
    out = np.empty((len(values), N), dtype=np.int64)
    rest = np.asarray(values, dtype=np.int64).copy()
    for j in range(N):
        out[:, j] = rest % radix.m[j]
        rest //= radix.m[j]
    return out


def naive_characters(ns, radix: RadixSequence, N: int) -> np.ndarray:
    """``exp(2 pi i sum_j n_j x_j / m_j)`` for the given ``ns`` over all points."""
    M = radix.M[N]
    nd = _digits(np.asarray(ns), radix, N).astype(float)
    xd = _digits(np.arange(M), radix, N).astype(float)
    inv_m = 1.0 / np.asarray(radix.m[:N], dtype=float)
    return np.exp(2j * np.pi * ((nd * inv_m) @ xd.T))


def naive_forward(values: np.ndarray, radix: RadixSequence, N: int, chunk: int = 256) -> np.ndarray:
    """O(M_N^2) coefficients of one function (1-D) or a stack of functions (columns of 2-D input)."""
    M = radix.M[N]
    vals = np.asarray(values, dtype=np.complex128)
    out = np.empty((M,) + vals.shape[1:], dtype=np.complex128)
    for start in range(0, M, chunk):
        ks = np.arange(start, min(start + chunk, M))
        out[ks] = naive_characters(ks, radix, N).conj() @ vals / M
    return out


def naive_dirichlet(n: int, radix: RadixSequence, N: int) -> np.ndarray:
    if n == 0:
        return np.zeros(radix.M[N], dtype=np.complex128)
    return naive_characters(np.arange(n), radix, N).sum(axis=0)
