"""Fourier coefficients, the fast Vilenkin transform, and partial sums.

The dual of a finite product of cyclic groups is the product of their duals,
so the transform is a length-``m_j`` DFT along each coordinate axis in turn;
no twiddle factors appear between axes.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CapacityError, UsageError
from .group import GroupPoint, RadixSequence, rank
from .system import character_rows, root_table


@dataclass(frozen=True, eq=False)
class _Grid:
    radix: RadixSequence
    resolution: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.radix.check_resolution(self.resolution)
        vals = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.radix.M[self.resolution]:
            raise UsageError(
                f"expected {self.radix.M[self.resolution]} values at resolution "
                f"{self.resolution}, got {vals.size}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return self.values.size

    def _same(self, other: "_Grid") -> None:
        if type(other) is not type(self) or other.radix.m[: other.resolution] != self.radix.m[: self.resolution] \
                or other.resolution != self.resolution:
            raise UsageError("operands must share type, radix and resolution")

    def _new(self, values) -> "_Grid":
        return type(self)(self.radix, self.resolution, values)

    def __add__(self, other):
        self._same(other)
        return self._new(self.values + other.values)

    def __sub__(self, other):
        self._same(other)
        return self._new(self.values - other.values)

    def __neg__(self):
        return self._new(-self.values)

    def __mul__(self, scalar):
        if isinstance(scalar, _Grid):
            self._same(scalar)
            return self._new(self.values * scalar.values)
        return self._new(self.values * scalar)

    __rmul__ = __mul__

    def allclose(self, other: "_Grid", atol: float = 1e-10) -> bool:
        self._same(other)
        return bool(np.max(np.abs(self.values - other.values), initial=0.0) <= atol)

    def to_json(self) -> str:
        doc = {
            "radix": list(self.radix.m),
            "resolution": self.resolution,
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str):
        doc = json.loads(text)
        vals = np.array([complex(re, im) for re, im in doc["values"]], dtype=np.complex128)
        return cls(RadixSequence(tuple(doc["radix"])), int(doc["resolution"]), vals)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "re", "im"])
        for t, v in enumerate(self.values):
            w.writerow([t, repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, radix: RadixSequence, resolution: int):
        rows = list(csv.DictReader(io.StringIO(text)))
        vals = np.zeros(len(rows), dtype=np.complex128)
        for row in rows:
            vals[int(row["rank"])] = complex(float(row["re"]), float(row["im"]))
        return cls(radix, resolution, vals)


class CylinderFunction(_Grid):
    """A function constant on every ``I_N``-coset, stored by point rank."""

    @classmethod
    def zeros(cls, radix: RadixSequence, N: int) -> "CylinderFunction":
        return cls(radix, N, np.zeros(radix.order(N)))

    @classmethod
    def constant(cls, c: complex, radix: RadixSequence, N: int) -> "CylinderFunction":
        return cls(radix, N, np.full(radix.order(N), c, dtype=np.complex128))

    @classmethod
    def character(cls, n: int, radix: RadixSequence, N: int) -> "CylinderFunction":
        if not 0 <= n < radix.order(N):
            raise CapacityError(f"character index {n} outside [0, M_{N})")
        return cls(radix, N, character_rows([n], radix, N)[0])

    @classmethod
    def from_callable(cls, fn: Callable[[GroupPoint], complex], radix: RadixSequence, N: int) -> "CylinderFunction":
        from .group import unrank

        return cls(radix, N, [fn(unrank(t, N, radix)) for t in range(radix.order(N))])

    def at(self, x: GroupPoint) -> complex:
        return complex(self.values[rank(x.truncate(self.resolution))])

    def refine(self, N: int) -> "CylinderFunction":
        """The same function stored at a finer resolution ``N``."""
        if N < self.resolution:
            raise UsageError(f"cannot refine from {self.resolution} down to {N}")
        reps = self.radix.order(N) // self.size
        return CylinderFunction(self.radix, N, np.tile(self.values, reps))

    def integral(self) -> complex:
        return complex(self.values.mean())


class Spectrum(_Grid):
    """Coefficients ``f^(n)`` for ``0 <= n < M_N``."""

    @property
    def coefficients(self) -> np.ndarray:
        return self.values


def _axis_pass(values: np.ndarray, radix: RadixSequence, N: int, sign: int) -> np.ndarray:
    if N == 0:
        return values.copy()
    table = root_table(radix)
    L = radix.lcm
    arr = values.reshape(radix.shape(N))
    for j in range(N):
        mj = radix.m[j]
        u = np.arange(mj)
        W = table[(sign * np.outer(u, u) * (L // mj)) % L]
        axis = N - 1 - j
        arr = np.moveaxis(np.tensordot(W, arr, axes=([1], [axis])), 0, axis)
    return arr.reshape(-1)


def forward(f: CylinderFunction) -> Spectrum:
    N = f.resolution
    coeffs = _axis_pass(f.values, f.radix, N, -1) / f.radix.M[N]
    return Spectrum(f.radix, N, coeffs)


def inverse(F: Spectrum) -> CylinderFunction:
    return CylinderFunction(F.radix, F.resolution, _axis_pass(F.values, F.radix, F.resolution, +1))


def fourier_coefficient(f: CylinderFunction, k: int) -> complex:
    """``(1/M_N) sum_x f(x) conj(psi_k(x))`` by direct summation."""
    N = f.resolution
    if not 0 <= k < f.radix.M[N]:
        raise CapacityError(f"coefficient index {k} outside [0, M_{N} = {f.radix.M[N]})")
    psi = character_rows([k], f.radix, N)[0]
    return complex(np.mean(f.values * psi.conj()))


def _check_index(f: CylinderFunction, n: int) -> None:
    if not 0 <= n <= f.radix.M[f.resolution]:
        raise CapacityError(f"partial-sum index {n} outside 0..M_{f.resolution} = {f.radix.M[f.resolution]}")


def partial_sum(f: CylinderFunction, n: int, spectrum: Spectrum | None = None) -> CylinderFunction:
    """``S_n f = sum_{k<n} f^(k) psi_k``; ``S_0 f = 0``."""
    _check_index(f, n)
    F = forward(f) if spectrum is None else spectrum
    coeffs = F.values.copy()
    coeffs[n:] = 0
    return inverse(Spectrum(f.radix, f.resolution, coeffs))


def partial_sums(f: CylinderFunction, ns) -> np.ndarray:
    """Stack of ``S_n f`` values, one row per ``n`` in ``ns``."""
    F = forward(f).values
    out = np.empty((len(ns), f.size), dtype=np.complex128)
    for i, n in enumerate(ns):
        _check_index(f, n)
        c = F.copy()
        c[n:] = 0
        out[i] = _axis_pass(c, f.radix, f.resolution, +1)
    return out


def difference_ranks(radix: RadixSequence, N: int) -> np.ndarray:
    """``table[x, t] = rank(x - t)`` using coordinate-wise group subtraction."""
    M = radix.order(N)
    coords = radix.coordinates(N)
    table = np.zeros((M, M), dtype=np.int64)
    for j in range(N):
        c = coords[:, j]
        table += ((c[:, None] - c[None, :]) % radix.m[j]) * radix.M[j]
    return table


def partial_sum_via_kernel(f: CylinderFunction, n: int) -> CylinderFunction:
    """``S_n f(x) = integral f(t) D_n(x - t) dmu(t)``, evaluated as a group convolution."""
    from .kernels import dirichlet_direct

    _check_index(f, n)
    N = f.resolution
    D = dirichlet_direct(n, N, f.radix).values
    diff = difference_ranks(f.radix, N)
    return CylinderFunction(f.radix, N, (D[diff] @ f.values) / f.size)



def partial_sum_blocks(f: CylinderFunction, stop: int | None = None, chunk: int = 256):
    """Yield ``(n0, block)`` where ``block[i]`` holds ``S_{n0+i} f`` for ``1 <= n <= stop`` (default ``M_N``)."""
    N = f.resolution
    M = f.radix.M[N]
    stop = M if stop is None else stop
    _check_index(f, stop)
    F = forward(f).values
    running = np.zeros(M, dtype=np.complex128)
    for start in range(0, stop, chunk):
        ks = np.arange(start, min(start + chunk, stop))
        block = np.cumsum(F[ks, None] * character_rows(ks, f.radix, N), axis=0) + running
        yield start + 1, block
        running = block[-1]


def iter_partial_sums(f: CylinderFunction, stop: int | None = None):
    """Yield ``(n, S_n f values)`` for ``1 <= n <= stop`` by running sums of characters."""
    for n0, block in partial_sum_blocks(f, stop):
        for i, row in enumerate(block):
            yield n0 + i, row
