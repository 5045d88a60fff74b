"""Mixed-radix arithmetic and the truncated Vilenkin group.

Points at resolution ``N`` are tuples ``(x_0, ..., x_{N-1})`` with
``0 <= x_j < m_j``.  They are stored in little-endian rank order, so the
point of rank ``t`` carries the mixed-radix digits of the integer ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, DomainError, UsageError


@dataclass(frozen=True)
class RadixSequence:
    """Generating sequence ``m`` with cumulative orders ``M``.

    ``M[0] = 1`` and ``M[k+1] = m[k] * M[k]``.  The stored sequence is finite,
    so ``m_star`` (its maximum) bounds every radix the group will ever use.
    """

    m: tuple[int, ...]

    def __post_init__(self) -> None:
        m = tuple(int(v) for v in self.m)
        if not m:
            raise UsageError("radix sequence must be non-empty")
        if any(v < 2 for v in m):
            raise UsageError(f"every radix must be >= 2, got {m}")
        object.__setattr__(self, "m", m)

    @classmethod
    def parse(cls, text: str, repeat: int | None = None) -> "RadixSequence":
        """Parse ``"2,3,2,4"``; ``repeat`` cycles the pattern to that length."""
        try:
            pattern = [int(tok) for tok in str(text).replace(" ", "").split(",") if tok]
        except ValueError as exc:
            raise UsageError(f"malformed radix list {text!r}") from exc
        if not pattern:
            raise UsageError(f"empty radix list {text!r}")
        if repeat is not None:
            if repeat < 1:
                raise UsageError("repeat must be >= 1")
            pattern = [pattern[k % len(pattern)] for k in range(repeat)]
        return cls(tuple(pattern))

    @classmethod
    def walsh(cls, length: int) -> "RadixSequence":
        return cls((2,) * length)

    @classmethod
    def cycle(cls, pattern: Sequence[int], length: int) -> "RadixSequence":
        return cls(tuple(pattern[k % len(pattern)] for k in range(length)))

    @property
    def n_max(self) -> int:
        return len(self.m)

    @cached_property
    def M(self) -> tuple[int, ...]:
        out = [1]
        for v in self.m:
            out.append(out[-1] * v)
        return tuple(out)

    @property
    def m_star(self) -> int:
        return max(self.m)

    @cached_property
    def lcm(self) -> int:
        return math.lcm(*self.m)

    def order(self, N: int) -> int:
        """``M_N``, the number of points at resolution ``N``."""
        self.check_resolution(N)
        return self.M[N]

    def check_resolution(self, N: int) -> None:
        if not 0 <= N <= self.n_max:
            raise CapacityError(f"resolution {N} outside 0..{self.n_max} for radix {self.m}")

    def coordinates(self, N: int) -> np.ndarray:
        """Array of shape ``(M_N, N)``; row ``t`` holds the coordinates of rank ``t``."""
        return _coordinates(self.m, N)

    def digits_array(self, values: Sequence[int] | np.ndarray, length: int) -> np.ndarray:
        """Mixed-radix digits of each value, zero-padded to ``length`` columns."""
        if length > self.n_max:
            raise CapacityError(f"{length} digits exceed stored radix length {self.n_max}")
        vals = np.asarray(values, dtype=np.int64)
        if vals.size and (vals.min() < 0 or vals.max() >= self.M[length]):
            raise CapacityError(f"values must lie in [0, {self.M[length]})")
        M = np.asarray(self.M[:length], dtype=np.int64)
        m = np.asarray(self.m[:length], dtype=np.int64)
        return (vals[..., None] // M) % m

    def shape(self, N: int) -> tuple[int, ...]:
        """C-order array shape whose flat index is the little-endian rank."""
        self.check_resolution(N)
        return tuple(reversed(self.m[:N]))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.m)


_COORD_CACHE: dict[tuple[tuple[int, ...], int], np.ndarray] = {}


def _coordinates(m: tuple[int, ...], N: int) -> np.ndarray:
    key = (m[:N], N)
    arr = _COORD_CACHE.get(key)
    if arr is None:
        if N > len(m):
            raise CapacityError(f"resolution {N} exceeds stored radix length {len(m)}")
        M = np.cumprod((1,) + m[:N], dtype=np.int64)
        t = np.arange(M[N], dtype=np.int64)
        arr = (t[:, None] // M[:N]) % np.asarray(m[:N], dtype=np.int64)
        arr.setflags(write=False)
        _COORD_CACHE[key] = arr
    return arr


@dataclass(frozen=True)
class DigitExpansion:
    """Digits of ``n >= 1`` with lowest/highest nonzero positions and their spread."""

    n: int
    digits: tuple[int, ...]
    low: int
    high: int

    @property
    def rho(self) -> int:
        return self.high - self.low


def expand(n: int, radix: RadixSequence) -> DigitExpansion:
    n = int(n)
    if n < 1:
        raise DomainError(f"expand needs n >= 1 (n = {n} has no nonzero digit)")
    if n >= radix.M[-1]:
        raise CapacityError(f"n = {n} >= M[{radix.n_max}] = {radix.M[-1]}")
    digits = []
    rest = n
    for mj in radix.m:
        if rest == 0:
            break
        digits.append(rest % mj)
        rest //= mj
    nonzero = [j for j, d in enumerate(digits) if d]
    return DigitExpansion(n=n, digits=tuple(digits), low=nonzero[0], high=nonzero[-1])


@dataclass(frozen=True)
class GroupPoint:
    coords: tuple[int, ...]
    radix: RadixSequence = field(compare=True)

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if len(coords) > self.radix.n_max:
            raise CapacityError(f"{len(coords)} coordinates exceed radix length {self.radix.n_max}")
        for j, c in enumerate(coords):
            if not 0 <= c < self.radix.m[j]:
                raise DomainError(f"coordinate x_{j} = {c} outside Z_{self.radix.m[j]}")
        object.__setattr__(self, "coords", coords)

    @property
    def resolution(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, N: int, radix: RadixSequence) -> "GroupPoint":
        return cls((0,) * N, radix)

    @classmethod
    def unit(cls, k: int, N: int, radix: RadixSequence) -> "GroupPoint":
        """``e_k``: only the ``k``-th coordinate equals one."""
        if not 0 <= k < N:
            raise DomainError(f"unit index {k} outside 0..{N - 1}")
        return cls(tuple(1 if j == k else 0 for j in range(N)), radix)

    def truncate(self, N: int) -> "GroupPoint":
        """Projection to resolution ``N``; pads with zeros when ``N`` is larger."""
        c = self.coords[:N] + (0,) * max(0, N - self.resolution)
        return GroupPoint(c, self.radix)

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        return add(self, other)

    def __neg__(self) -> "GroupPoint":
        return neg(self)

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        return add(self, neg(other))


def rank(x: GroupPoint) -> int:
    return sum(c * M for c, M in zip(x.coords, x.radix.M))


def unrank(t: int, N: int, radix: RadixSequence) -> GroupPoint:
    radix.check_resolution(N)
    if not 0 <= t < radix.M[N]:
        raise CapacityError(f"rank {t} outside [0, {radix.M[N]})")
    coords = []
    for mj in radix.m[:N]:
        coords.append(t % mj)
        t //= mj
    return GroupPoint(tuple(coords), radix)


def _same_group(x: GroupPoint, y: GroupPoint) -> None:
    if x.radix != y.radix or x.resolution != y.resolution:
        raise UsageError("points must share radix and resolution")


def add(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    _same_group(x, y)
    m = x.radix.m
    return GroupPoint(tuple((a + b) % m[j] for j, (a, b) in enumerate(zip(x.coords, y.coords))), x.radix)


def neg(x: GroupPoint) -> GroupPoint:
    m = x.radix.m
    return GroupPoint(tuple((-a) % m[j] for j, a in enumerate(x.coords)), x.radix)


@dataclass(frozen=True)
class Interval:
    """The cylinder ``I_depth(base)``: points agreeing with ``base`` on the first ``depth`` coordinates."""

    base: GroupPoint
    depth: int

    def __post_init__(self) -> None:
        if not 0 <= self.depth <= self.base.resolution:
            raise DomainError(f"depth {self.depth} outside 0..{self.base.resolution}")

    @property
    def radix(self) -> RadixSequence:
        return self.base.radix

    def contains(self, x: GroupPoint) -> bool:
        return contains(self, x)

    def measure(self) -> Fraction:
        return measure(self)

    def mask(self, N: int) -> np.ndarray:
        """Boolean membership over all ``M_N`` ranks (``N >= depth``)."""
        if N < self.depth:
            raise DomainError(f"resolution {N} below interval depth {self.depth}")
        coords = self.radix.coordinates(N)
        base = np.asarray(self.base.coords[: self.depth], dtype=np.int64)
        return np.all(coords[:, : self.depth] == base, axis=1)


def contains(interval: Interval, x: GroupPoint) -> bool:
    if x.radix != interval.radix:
        raise UsageError("point and interval use different radix sequences")
    if x.resolution < interval.depth:
        raise DomainError(f"point resolution {x.resolution} below interval depth {interval.depth}")
    d = interval.depth
    return x.coords[:d] == interval.base.coords[:d]


def measure(interval: Interval) -> Fraction:
    return Fraction(1, interval.radix.M[interval.depth])


def annulus(s: int, N: int, radix: RadixSequence) -> Iterator[GroupPoint]:
    """Points of ``I_s \\ I_{s+1}`` at resolution ``N``: zeros below ``s``, nonzero ``x_s``."""
    radix.check_resolution(N)
    if not 0 <= s < N:
        raise DomainError(f"annulus index s = {s} must satisfy 0 <= s < N = {N}")
    upper = RadixSequence(radix.m[s:N])
    for t in range(radix.M[N] // radix.M[s]):
        tail = unrank(t, N - s, upper).coords
        if tail[0] != 0:
            yield GroupPoint((0,) * s + tail, radix)


def annulus_index(radix: RadixSequence, N: int) -> np.ndarray:
    """For every rank at resolution ``N``: the ``s`` with ``x`` in ``I_s \\ I_{s+1}``, or ``N`` on ``I_N``."""
    coords = radix.coordinates(N)
    nz = coords != 0
    first = np.argmax(nz, axis=1)
    return np.where(nz.any(axis=1), first, N)
