"""Sup-norm geometry on Z^k: distances, king-move adjacency, boxes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

GridPoint = tuple[int, ...]


def check_int64(p: Sequence[int]) -> GridPoint:
    """Return ``p`` as a tuple, raising OverflowError outside the signed 64-bit range."""
    out = tuple(int(c) for c in p)
    for c in out:
        if not INT64_MIN <= c <= INT64_MAX:
            raise OverflowError(f"coordinate {c} outside the int64 range")
    return out


def _same_dim(p: Sequence[int], q: Sequence[int]) -> None:
    if len(p) != len(q):
        raise ValueError(f"dimension mismatch: {len(p)} vs {len(q)}")


def linf_distance(p: Sequence[int], q: Sequence[int]) -> int:
    _same_dim(p, q)
    return max((abs(a - b) for a, b in zip(p, q)), default=0)


def is_grid_edge(p: Sequence[int], q: Sequence[int]) -> bool:
    """True when ``p`` and ``q`` are adjacent in the grid with diagonals."""
    return linf_distance(p, q) == 1


@dataclass(frozen=True)
class Box:
    """Product of closed integer intervals ``[lo_i, hi_i]``."""

    lo: GridPoint
    hi: GridPoint

    def __post_init__(self) -> None:
        _same_dim(self.lo, self.hi)
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError(f"empty box {self.lo}..{self.hi}")

    @classmethod
    def cube(cls, side: int, dim: int) -> "Box":
        """The box {0..side}^dim."""
        return cls((0,) * dim, (side,) * dim)

    @classmethod
    def parse(cls, text: str) -> "Box":
        """Parse ``"0..5x-2..2"`` (one ``lo..hi`` interval per axis, joined by ``x``)."""
        lo, hi = [], []
        for part in text.strip().split("x"):
            try:
                a, b = part.split("..")
                lo.append(int(a))
                hi.append(int(b))
            except ValueError:
                raise ValueError(f"bad interval {part!r} in box {text!r}") from None
        return cls(tuple(lo), tuple(hi))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(b - a + 1 for a, b in zip(self.lo, self.hi))

    @property
    def diameter(self) -> int:
        return max((b - a for a, b in zip(self.lo, self.hi)), default=0)

    def __len__(self) -> int:
        n = 1
        for s in self.shape:
            n *= s
        return n

    def points(self) -> Iterator[GridPoint]:
        """Lattice points in lexicographic order."""
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __contains__(self, p: object) -> bool:
        return box_contains(self, p)  # type: ignore[arg-type]

    def __str__(self) -> str:
        return "x".join(f"{a}..{b}" for a, b in zip(self.lo, self.hi))


def box_contains(b: Box, p: Sequence[int]) -> bool:
    _same_dim(b.lo, p)
    return all(a <= c <= h for a, c, h in zip(b.lo, p, b.hi))


def unit_offsets(dim: int) -> list[GridPoint]:
    """All t in {-1,0,1}^dim with t != 0, lexicographic."""
    return [t for t in itertools.product((-1, 0, 1), repeat=dim) if any(t)]
