"""
Finitely supported multi-indices.

A multi-index ``I = (i_1, i_2, ...)`` labels the monomial
``z^I = z_1**i_1 * z_2**i_2 * ...``.  Values are stored in canonical form,
with trailing zeros removed, so ``MultiIndex((1, 0))`` and ``MultiIndex((1,))``
are the same object for hashing and equality.
"""
from __future__ import annotations

import json
import math
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional


class MultiIndex(tuple):
    """Immutable, canonical (trailing-zero-trimmed) tuple of nonnegative ints.

    >>> MultiIndex((2, 1, 0))
    MultiIndex(2, 1)
    >>> MultiIndex() == MultiIndex((0, 0))
    True
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()):
        vals = [int(e) for e in entries]
        if any(v < 0 for v in vals):
            raise ValueError(f"negative entry in multi-index {vals}")
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    def __repr__(self):
        return "MultiIndex(" + ", ".join(str(v) for v in self) + ")"

    def __add__(self, other):
        return add(self, other)

    def get(self, j: int) -> int:
        """Entry ``i_j`` for a 1-based dimension ``j`` (zero past the support)."""
        return self[j - 1] if j <= len(self) else 0

    @property
    def degree(self) -> int:
        return sum(self)

    def to_json(self) -> str:
        return json.dumps(list(self))

    @classmethod
    def from_json(cls, text: str) -> "MultiIndex":
        return cls(json.loads(text))


def length(I: MultiIndex) -> int:
    """Total degree ``|I| = sum_r i_r``."""
    return sum(I)


def factorial(I: MultiIndex) -> int:
    """Exact multi-factorial ``I! = i_1! i_2! ...``."""
    return math.prod(math.factorial(i) for i in I)


def add(I: MultiIndex, J: MultiIndex) -> MultiIndex:
    n = max(len(I), len(J))
    return MultiIndex(
        (I[r] if r < len(I) else 0) + (J[r] if r < len(J) else 0) for r in range(n)
    )


def unit(j: int) -> MultiIndex:
    """The unit multi-index ``e_j`` (1-based)."""
    if j < 1:
        raise ValueError("dimension index j must be >= 1")
    return MultiIndex([0] * (j - 1) + [1])


def increment(I: MultiIndex, j: int) -> MultiIndex:
    """``I + e_j``."""
    return add(I, unit(j))


def decrement(I: MultiIndex, j: int) -> Optional[MultiIndex]:
    """``I - e_j``, or None when ``i_j == 0``."""
    if j < 1:
        raise ValueError("dimension index j must be >= 1")
    if I.get(j) == 0:
        return None
    vals = list(I)
    vals[j - 1] -= 1
    return MultiIndex(vals)


def _compositions(d: int, n: int):
    # exponent tuples of length d summing to n, lexicographically descending
    for bars in combinations(range(n + d - 1), d - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + d - 2 - prev)
        yield tuple(out)


@lru_cache(maxsize=64)
def enumerate_indices(d: int, N: int) -> tuple:
    """All multi-indices supported on ``{1..d}`` with ``|I| <= N``.

    Order is graded lexicographic: by total degree, then descending
    lexicographic order of the exponent vector, so that ``z_1`` precedes
    ``z_2`` within a degree.  There are ``C(N + d, d)`` of them.
    """
    if d < 1 or N < 0:
        raise ValueError("need d >= 1 and N >= 0")
    out = []
    for n in range(N + 1):
        shell = sorted(_compositions(d, n), reverse=True)
        out.extend(MultiIndex(e) for e in shell)
    return tuple(out)
