"""Named subsequences ``alpha_k`` of the positive integers.

Built-in families are digit patterns: a set of offsets counted down from the
top digit plus a set of fixed low digits, every digit equal to one::

    alpha_n = sum_{d in top} M_{n-d} + sum_{a in low} M_a

``Mn`` is ``top=(0,)``, ``Mn+Mprev`` is ``top=(0, 1)`` and ``Mn+1`` is
``top=(0,), low=(0,)``.  With no low anchors the spread ``rho`` is the
constant ``max(top)``; a low anchor makes it grow with ``n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import UsageError
from .group import RadixSequence, expand

BUILTIN = {
    "Mn": ((0,), ()),
    "Mn+1": ((0,), (0,)),
    "Mn+Mprev": ((0, 1), ()),
}


@dataclass(frozen=True)
class SubsequenceFamily:
    kind: str
    top: tuple[int, ...] = ()
    low: tuple[int, ...] = ()
    values: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "explicit":
            vals = self.values
            if not vals or vals[0] < 1 or any(b <= a for a, b in zip(vals, vals[1:])):
                raise UsageError(f"explicit family must be strictly increasing positive integers: {vals}")
        elif self.kind in BUILTIN or self.kind == "pattern":
            if 0 not in self.top or min(self.top) < 0 or (self.low and min(self.low) < 0):
                raise UsageError("pattern needs top offsets containing 0 and non-negative low anchors")
        else:
            raise UsageError(f"unknown family kind {self.kind!r}")

    @classmethod
    def builtin(cls, name: str) -> "SubsequenceFamily":
        if name not in BUILTIN:
            raise UsageError(f"unknown family {name!r}; choose from {sorted(BUILTIN)}")
        top, low = BUILTIN[name]
        return cls(name, top, low)

    @classmethod
    def explicit(cls, values) -> "SubsequenceFamily":
        return cls("explicit", values=tuple(int(v) for v in values))

    @classmethod
    def pattern(cls, top, low=()) -> "SubsequenceFamily":
        return cls("pattern", tuple(sorted(set(top))), tuple(sorted(set(low))))

    @classmethod
    def parse(cls, text: str) -> "SubsequenceFamily":
        """``Mn``, ``Mn+1``, ``Mn+Mprev``, ``list:3,5,9`` or ``pattern:top=0,1;low=0``."""
        text = text.strip()
        if text in BUILTIN:
            return cls.builtin(text)
        if text.startswith("list:"):
            try:
                return cls.explicit(int(v) for v in text[5:].split(",") if v)
            except ValueError as exc:
                raise UsageError(f"malformed family list {text!r}") from exc
        if text.startswith("pattern:"):
            parts = dict(item.split("=", 1) for item in text[8:].split(";") if item)
            try:
                top = [int(v) for v in parts.get("top", "0").split(",") if v]
                low = [int(v) for v in parts.get("low", "").split(",") if v]
            except ValueError as exc:
                raise UsageError(f"malformed family pattern {text!r}") from exc
            return cls.pattern(top, low)
        raise UsageError(f"unknown family {text!r}")

    @property
    def rho_bounded(self) -> bool | None:
        """True when ``rho(alpha_k)`` is bounded by construction; None when unknown."""
        if self.kind == "explicit":
            return None
        return not self.low

    def _first_n(self) -> int:
        # every top digit must sit strictly above every low anchor
        return max(self.top) + (max(self.low) + 1 if self.low else 0)

    def iter_members(self, radix: RadixSequence, limit: int | None = None) -> Iterator[int]:
        """Members in increasing order, stopping before ``limit`` or the radix capacity."""
        cap = radix.M[-1] - 1 if limit is None else min(limit, radix.M[-1] - 1)
        if self.kind == "explicit":
            for v in self.values:
                if v > cap:
                    return
                yield v
            return
        n = self._first_n()
        while n < len(radix.M):
            value = sum(radix.M[n - d] for d in self.top) + sum(radix.M[a] for a in self.low)
            if value > cap:
                return
            yield value
            n += 1

    def members(self, radix: RadixSequence, K: int | None = None, limit: int | None = None) -> list[int]:
        out = []
        for v in self.iter_members(radix, limit):
            if K is not None and len(out) >= K:
                break
            out.append(v)
        return out

    def __str__(self) -> str:
        if self.kind == "explicit":
            return "list:" + ",".join(map(str, self.values))
        if self.kind == "pattern":
            return f"pattern:top={','.join(map(str, self.top))};low={','.join(map(str, self.low))}"
        return self.kind


def family_members(family: SubsequenceFamily, K: int, radix: RadixSequence) -> list[int]:
    """The first ``K`` members."""
    if K < 1:
        raise UsageError("K must be >= 1")
    return family.members(radix, K)


def family_rho_sup(family: SubsequenceFamily, K: int, radix: RadixSequence) -> int:
    return max(expand(a, radix).rho for a in family_members(family, K, radix))
