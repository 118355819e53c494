"""Integer-vector maps on graph vertices: fold, Lipschitz extension, property checks.

Every verifier scans pairs ``(u, v)`` with ``u < v`` in increasing lexicographic
order and reports the first violation, so witnesses are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from gridembed.grid import Box, GridPoint, check_int64
from gridembed.graph import FiniteGraph


class LipschitzViolation(ValueError):
    """A map failed its Lipschitz precondition; ``witness`` is the offending pair."""

    def __init__(self, message: str, witness: tuple[int, int]):
        self.witness = witness
        super().__init__(f"{message}: witness {witness}")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "witness": list(self.witness) if self.witness else None, "reason": self.reason}


PASS = Verdict(True)


@dataclass(eq=False)
class LatticeMap:
    """Vertex -> Z^k assignment on ``domain`` (all of V(G) unless stated otherwise).

    ``values[i]`` is the image of ``domain[i]``. ``tags`` optionally carry a component
    label per domain vertex (strong embeddings).
    """

    graph: FiniteGraph
    domain: tuple[int, ...]
    values: np.ndarray
    lip: int = 1
    box: Box | None = None
    tags: tuple[int, ...] | None = None
    _index: dict[int, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.domain = tuple(int(v) for v in self.domain)
        if list(self.domain) != sorted(set(self.domain)):
            raise ValueError("domain must be strictly increasing")
        if self.domain and not (0 <= self.domain[0] and self.domain[-1] < self.graph.n):
            raise ValueError("domain references unknown vertices")
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.ndim != 2 or vals.shape[0] != len(self.domain):
            raise ValueError(f"values shape {vals.shape} does not match domain of size {len(self.domain)}")
        vals.setflags(write=False)
        self.values = vals
        if self.lip < 1:
            raise ValueError("lip must be a positive integer")
        if self.tags is not None:
            self.tags = tuple(int(t) for t in self.tags)
            if len(self.tags) != len(self.domain):
                raise ValueError("one tag per domain vertex required")
        if self.box is not None:
            if self.box.dim != self.k:
                raise ValueError("codomain box dimension differs from k")
            lo, hi = np.array(self.box.lo), np.array(self.box.hi)
            if vals.size and (np.any(vals < lo) or np.any(vals > hi)):
                raise ValueError(f"values leave the declared box {self.box}")
        self._index = {v: i for i, v in enumerate(self.domain)}

    @classmethod
    def from_dict(
        cls,
        graph: FiniteGraph,
        mapping: Mapping[int, Sequence[int]],
        k: int | None = None,
        **kw,
    ) -> "LatticeMap":
        dom = sorted(mapping)
        rows = [check_int64(mapping[v]) for v in dom]
        if k is None:
            if not rows:
                raise ValueError("cannot infer k from an empty map")
            k = len(rows[0])
        if any(len(r) != k for r in rows):
            raise ValueError("all values must have the same dimension")
        vals = np.array(rows, dtype=np.int64).reshape(len(dom), k)
        tags = kw.pop("tags", None)
        if isinstance(tags, Mapping):
            tags = [tags[v] for v in dom]
        return cls(graph, tuple(dom), vals, tags=tags, **kw)

    @classmethod
    def total(cls, graph: FiniteGraph, values: np.ndarray | Sequence[Sequence[int]], **kw) -> "LatticeMap":
        vals = np.asarray(values, dtype=np.int64)
        if vals.ndim == 1:
            vals = vals.reshape(graph.n, -1)
        return cls(graph, tuple(range(graph.n)), vals, **kw)

    @property
    def k(self) -> int:
        return int(self.values.shape[1])

    @property
    def is_total(self) -> bool:
        return len(self.domain) == self.graph.n

    def __getitem__(self, v: int) -> GridPoint:
        return tuple(int(c) for c in self.values[self._index[v]])

    def __contains__(self, v: int) -> bool:
        return v in self._index

    def row(self, v: int) -> int:
        return self._index[v]

    def tag(self, v: int) -> int | None:
        return None if self.tags is None else self.tags[self._index[v]]

    def as_dict(self) -> dict[int, GridPoint]:
        return {v: self[v] for v in self.domain}

    def restrict(self, S: Iterable[int]) -> "LatticeMap":
        keep = sorted(set(S))
        idx = [self._index[v] for v in keep]
        tags = None if self.tags is None else [self.tags[i] for i in idx]
        return LatticeMap(self.graph, tuple(keep), self.values[idx], lip=self.lip, box=self.box, tags=tags)

    def with_lip(self, lip: int) -> "LatticeMap":
        return LatticeMap(self.graph, self.domain, self.values, lip=lip, box=self.box, tags=self.tags)

    def same_values(self, other: "LatticeMap") -> bool:
        return self.domain == other.domain and np.array_equal(self.values, other.values)


# -- fold ----------------------------------------------------------------------


def fold_array(points: np.ndarray, R: int) -> np.ndarray:
    """Vectorised fold: ``(N, d)`` integer array -> ``(N, 2d)`` values in {0..R}^{2d}.

    Each coordinate k is sent to vertex ``k mod 4R`` of the boundary walk of the
    square [0,R]^2 that starts at (0,0) and moves along +x first.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    P = np.asarray(points, dtype=np.int64)
    j = np.mod(P, 4 * R)
    side, t = np.divmod(j, R)
    x = np.choose(side, [t, np.full_like(t, R), R - t, np.zeros_like(t)])
    y = np.choose(side, [np.zeros_like(t), t, np.full_like(t, R), R - t])
    out = np.empty(P.shape[:-1] + (2 * P.shape[-1],), dtype=np.int64)
    out[..., 0::2] = x
    out[..., 1::2] = y
    return out


def fold_map(d: int, R: int, p: Sequence[int]) -> GridPoint:
    """Image of ``p`` in Z^d under the fold into {0..R}^{2d}."""
    if len(p) != d:
        raise ValueError(f"expected a point of dimension {d}, got {len(p)}")
    if d == 0:
        return ()
    return tuple(int(c) for c in fold_array(np.array([p]), R)[0])


# -- verifiers -----------------------------------------------------------------


def _linf_rows(values: np.ndarray, i: int) -> np.ndarray:
    if values.shape[1] == 0:
        return np.zeros(values.shape[0], dtype=np.int64)
    return np.abs(values - values[i]).max(axis=1)


def _scan_pairs(m: LatticeMap, bad) -> tuple[int, int] | None:
    """First ``(u, v)``, u < v in the domain, with ``bad(i, dist_row, disp_row)[j]`` true."""
    dom = np.array(m.domain, dtype=np.int64)
    for i, u in enumerate(m.domain[:-1]):
        row = m.graph.distance_row(u)[dom[i + 1 :]]
        disp = _linf_rows(m.values[i:], 0)[1:]
        hit = np.flatnonzero(bad(i, row, disp))
        if hit.size:
            return (u, int(dom[i + 1 + hit[0]]))
    return None


def is_k_lipschitz(m: LatticeMap, k: int) -> Verdict:
    """``|m(u) - m(v)|_inf <= k dist(u, v)`` for all u, v in one component."""
    if m.is_total and m.graph.n:
        # On a total map the edge condition is equivalent (paths telescope).
        e = np.array(m.graph.edges(), dtype=np.int64).reshape(-1, 2)
        if m.k == 0 or not e.size or np.abs(m.values[e[:, 0]] - m.values[e[:, 1]]).max() <= k:
            return PASS
    w = _scan_pairs(m, lambda i, row, disp: (row >= 0) & (disp > k * row.astype(np.int64)))
    if w is None:
        return PASS
    return Verdict(False, w, f"displacement exceeds {k} x distance")


def is_r_locally_injective(m: LatticeMap, R: int) -> Verdict:
    if R < 1:
        raise ValueError("R must be >= 1")
    w = _scan_pairs(m, lambda i, row, disp: (row > 0) & (row <= R) & (disp == 0))
    if w is None:
        return PASS
    return Verdict(False, w, f"equal values at distance <= {R}")


def is_valid_embedding(G: FiniteGraph, m: LatticeMap) -> Verdict:
    """Injective on V(G) and every edge lands at sup-distance exactly 1."""
    if m.graph is not G and not m.graph.same_structure(G):
        return Verdict(False, None, "map belongs to a different graph")
    if not m.is_total:
        missing = next(v for v in G.vertices if v not in m)
        return Verdict(False, (missing,), "map is not total")
    first: dict[tuple, int] = {}
    collision = None
    for v in G.vertices:
        key = m[v]
        if key in first:
            pair = (first[key], v)
            collision = pair if collision is None else min(collision, pair)
        else:
            first[key] = v
    if collision is not None:
        return Verdict(False, collision, "not injective")
    for u, v in G.edges():
        if max((abs(a - b) for a, b in zip(m[u], m[v])), default=0) != 1:
            return Verdict(False, (u, v), "edge not mapped to a grid edge")
    return PASS


def check_distance_lower_bound(
    G: FiniteGraph, m: LatticeMap, eps: float, R0: int, guard: float = 1e-9
) -> Verdict:
    """Far pairs stay far: dist >= R0 implies ``|m(u)-m(v)|_inf >= dist^(1-eps)``.

    Pairs in different components must carry different tags. The power is evaluated
    in floating point; a shortfall within a relative ``guard`` is accepted.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if m.tags is None and not G.is_connected():
        raise ValueError("disconnected graph requires component tags on the map")
    tags = np.array(m.tags if m.tags is not None else [0] * len(m.domain), dtype=np.int64)
    expo = 1.0 - eps

    def bad(i, row, disp):
        cross = (row < 0) & (tags[i + 1 :] == tags[i])
        far = row >= R0
        need = np.power(np.maximum(row, 0).astype(np.float64), expo) * (1.0 - guard)
        return cross | (far & (disp < need))

    w = _scan_pairs(m, bad)
    if w is None:
        return PASS
    return Verdict(False, w, "pair violates the distance lower bound")


# -- extension -----------------------------------------------------------------


def _check_partial_lipschitz(f: LatticeMap) -> None:
    v = is_k_lipschitz(f.with_lip(1) if f.lip != 1 else f, 1)
    if not v:
        raise LipschitzViolation("partial map is not 1-Lipschitz on its domain", v.witness)


def _extension_block(G: FiniteGraph, f: LatticeMap, want_argmin: bool):
    n, k = G.n, f.k
    best = np.full((n, k), np.iinfo(np.int64).max, dtype=np.int64)
    arg = np.full((n, k), -1, dtype=np.int64) if want_argmin else None
    dom = np.array(f.domain, dtype=np.int64)
    step = max(1, 2_000_000 // max(n, 1))
    for s in range(0, len(dom), step):
        D = G.distance_rows(dom[s : s + step]).astype(np.int64)
        reach = D >= 0
        for c in range(k):
            cand = np.where(reach, f.values[s : s + step, c][:, None] + D, np.iinfo(np.int64).max)
            j = cand.argmin(axis=0)
            low = cand[j, np.arange(n)]
            better = low < best[:, c]
            best[better, c] = low[better]
            if arg is not None:
                arg[better, c] = dom[s + j[better]]
    best[best == np.iinfo(np.int64).max] = 0
    return best, arg


def extend_lipschitz(G: FiniteGraph, A: Iterable[int], f: LatticeMap) -> LatticeMap:
    """Extend a 1-Lipschitz partial map on A to all of V(G), coordinate by coordinate.

    ``f*(u)_i = min_{a in A} (f(a)_i + dist(u, a))`` on components meeting A, and the
    zero vector elsewhere.
    """
    A = sorted(set(A))
    if f.graph is not G:
        raise ValueError("map belongs to a different graph")
    if not set(A) <= set(f.domain):
        raise ValueError("f is not defined on all of A")
    f = f.restrict(A) if tuple(A) != f.domain else f
    _check_partial_lipschitz(f)
    if not A:
        return LatticeMap.total(G, np.zeros((G.n, f.k), dtype=np.int64))
    vals, _ = _extension_block(G, f, want_argmin=False)
    out = LatticeMap.total(G, vals)
    if not np.array_equal(out.values[list(A)], f.values):
        raise AssertionError("extension does not restrict to the input")
    check = is_k_lipschitz(out, 1)
    if not check:
        raise AssertionError(f"extension is not 1-Lipschitz: {check.witness}")
    return out


def extension_argmins(G: FiniteGraph, f: LatticeMap) -> np.ndarray:
    """Per vertex and coordinate, the smallest-id minimiser ``a`` used by the extension (-1 if none)."""
    _, arg = _extension_block(G, f, want_argmin=True)
    return arg
