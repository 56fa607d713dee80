"""Permutations on the points 1..n.

Products read left to right: ``p * q`` applies ``p`` first, then ``q``.
Internally images are stored 0-based; every user-facing surface is 1-based.
"""
from __future__ import annotations

import math
import re
from typing import Iterable, Sequence

from .errors import CycleParseError, DegreeMismatch

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def compose_raw(p: tuple, q: tuple) -> tuple:
    return tuple([q[x] for x in p])


def invert_raw(p: tuple) -> tuple:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


class Permutation:
    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int], *, zero_based: bool = False):
        img = tuple(images) if zero_based else tuple(x - 1 for x in images)
        n = len(img)
        if n == 0:
            raise ValueError("degree must be positive")
        if sorted(img) != list(range(n)):
            raise ValueError(f"images do not form a bijection on 1..{n}")
        self._img = img
        self._hash = hash(img)

    @classmethod
    def _raw(cls, img: tuple) -> "Permutation":
        p = object.__new__(cls)
        p._img = img
        p._hash = hash(img)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be positive")
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Product of the given cycles (1-based), applied left to right."""
        result = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise CycleParseError(f"repeated point in cycle {tuple(cyc)}")
            for x in cyc:
                if not 1 <= x <= degree:
                    raise CycleParseError(f"point {x} out of range 1..{degree}")
            if len(cyc) < 2:
                continue
            step = list(range(degree))
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                step[a - 1] = b - 1
            result = [step[x] for x in result]
        return cls._raw(tuple(result))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as ``"(1 2 3)(4 5)"``; ``"()"`` is the identity."""
        stripped = text.strip()
        if not stripped:
            raise CycleParseError("empty permutation string", text, 0)
        cycles = []
        pos = 0
        for m in _CYCLE_RE.finditer(text):
            gap = text[pos:m.start()]
            if gap.strip():
                raise CycleParseError(f"unexpected {gap.strip()!r}", text, pos + 1)
            body = m.group(1).replace(",", " ").split()
            try:
                cycles.append([int(tok) for tok in body])
            except ValueError:
                raise CycleParseError(f"non-integer point in {m.group(0)!r}", text, m.start() + 1) from None
            cyc = cycles[-1]
            bad = next((x for x in cyc if not 1 <= x <= degree), None)
            if bad is not None:
                raise CycleParseError(f"point {bad} out of range 1..{degree}", text, m.start() + 1)
            if len(set(cyc)) != len(cyc):
                raise CycleParseError(f"repeated point in {m.group(0)!r}", text, m.start() + 1)
            pos = m.end()
        if text[pos:].strip() or not cycles:
            raise CycleParseError(f"malformed cycle string {text!r}", text, pos + 1)
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple:
        return tuple(x + 1 for x in self._img)

    def __call__(self, point: int) -> int:
        return self._img[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other._img) != len(self._img):
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        return Permutation._raw(compose_raw(self._img, other._img))

    compose = __mul__

    def inverse(self) -> "Permutation":
        return Permutation._raw(invert_raw(self._img))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """``g^-1 * self * g``."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint nontrivial cycles, each starting at its least point, sorted."""
        seen = set()
        out = []
        for start in range(len(self._img)):
            if start in seen or self._img[start] == start:
                continue
            cyc = [start + 1]
            seen.add(start)
            j = self._img[start]
            while j != start:
                seen.add(j)
                cyc.append(j + 1)
                j = self._img[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.cycle_string()

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img


def perm(text: str, degree: int) -> Permutation:
    """Shorthand for :meth:`Permutation.parse`."""
    return Permutation.parse(text, degree)
