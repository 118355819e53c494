"""Finite-scale separating covers and their validation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gridembed.graph import FiniteGraph


@dataclass(eq=False)
class Cover:
    """Ordered vertex sets ``U_0..U_{m-1}`` (possibly overlapping, possibly empty)."""

    graph: FiniteGraph
    sets: tuple[tuple[int, ...], ...]
    scale: int
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.sets = tuple(tuple(sorted(set(int(v) for v in U))) for U in self.sets)
        if not self.sets:
            raise ValueError("a cover needs at least one set")

    @property
    def m(self) -> int:
        return len(self.sets)

    def covers(self) -> bool:
        return set().union(*map(set, self.sets)) == set(range(self.graph.n))

    def to_json(self) -> dict:
        return {"m": self.m, "scale": self.scale, "kind": self.kind, "sets": [list(U) for U in self.sets]}


@dataclass
class SetStats:
    count: int
    max_size: int
    max_diameter: int
    components: list[list[int]]


@dataclass
class CoverReport:
    scale: int
    sets: list[SetStats]
    finite: bool = True
    bounded_by: int = 0
    flagged: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "scale": self.scale,
            "finite": self.finite,
            "bounded_by": self.bounded_by,
            "flagged": self.flagged,
            "sets": [
                {"count": s.count, "max_size": s.max_size, "max_diameter": s.max_diameter}
                for s in self.sets
            ],
        }


def _brick_cover(G: FiniteGraph, L: int) -> tuple[tuple[int, ...], ...]:
    a = G.ambient_dim or 0
    sets: list[list[int]] = [[] for _ in range(2**a)]
    for v, p in enumerate(G.coords):
        color = sum(((c // L) % 2) << i for i, c in enumerate(p))
        sets[color].append(v)
    return tuple(map(tuple, sets))


def _masked_rows(G: FiniteGraph, sources) -> np.ndarray:
    D = G.distance_rows(sources).astype(np.int64)
    D[D < 0] = np.iinfo(np.int64).max
    return D


def _net_cover(G: FiniteGraph, L: int, R: int):
    near = np.full(G.n, np.iinfo(np.int64).max, dtype=np.int64)
    net: list[int] = []
    for v in range(G.n):
        if near[v] >= L:
            net.append(v)
            np.minimum(near, _masked_rows(G, [v])[0], out=near)
    # np.argmin picks the first minimum, i.e. the net point added earliest.
    cluster = _masked_rows(G, net).argmin(axis=0) if net else np.zeros(0, dtype=np.int64)
    reach = 3 * R
    adjacent: list[set[int]] = [set() for _ in net]
    for u in range(G.n):
        row = G.distance_row(u)
        close = cluster[(row >= 0) & (row <= reach)]
        adjacent[cluster[u]].update(int(c) for c in close)
    color: list[int] = []
    for c in range(len(net)):
        taken = {color[o] for o in adjacent[c] if o < c}
        color.append(next(x for x in range(len(net) + 1) if x not in taken))
    m = max(color, default=0) + 1
    sets: list[list[int]] = [[] for _ in range(m)]
    for v in range(G.n):
        sets[color[cluster[v]]].append(v)
    meta = {"net": net, "cluster": cluster.tolist(), "cluster_color": color}
    return tuple(map(tuple, sets)), meta


def make_cover(G: FiniteGraph, kind: str, L: int | None = None, R: int | None = None) -> Cover:
    """Cover generators.

    ``trivial``: the single set V(G).

    ``brick``: boxes ``prod [L b_i, L b_i + L - 1]`` anchored at absolute coordinates,
    coloured by the parity vector of the brick index (``sum (b_i mod 2) 2^i``);
    2^a sets. Needs coordinates.

    ``net``: greedy L-net in id order (new point iff at distance >= L from all earlier
    ones), nearest-net-point clusters (ties to the earlier net point), clusters joined
    when some pair is within 3R, greedy colouring of clusters in id order.
    """
    if R is not None and R < 1:
        raise ValueError("R must be >= 1")
    scale = 3 * R if R is not None else 0
    if kind == "trivial":
        return Cover(G, (tuple(range(G.n)),), scale, kind)
    if L is None:
        raise ValueError(f"{kind} cover needs L")
    if R is not None and L < 3 * R + 1:
        raise ValueError(f"L = {L} is too small for R = {R} (need L >= 3R + 1)")
    if L < 1:
        raise ValueError("L must be >= 1")
    if kind == "brick":
        if G.coords is None:
            raise ValueError("brick cover needs vertex coordinates")
        return Cover(G, _brick_cover(G, L), scale if R is not None else L, kind, {"L": L, "R": R})
    if kind == "net":
        if R is None:
            raise ValueError("net cover needs R")
        sets, meta = _net_cover(G, L, R)
        return Cover(G, sets, scale, kind, {"L": L, "R": R}, meta)
    raise ValueError(f"unknown cover kind {kind!r}")


def power_components(G: FiniteGraph, U, s: int) -> list[list[int]]:
    """Components of ``(G^s)[U]``, each sorted, listed by smallest member."""
    U = sorted(set(U))
    if not U:
        return []
    idx = np.array(U, dtype=np.int64)
    parent = list(range(len(U)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, u in enumerate(U):
        row = G.distance_row(u)[idx]
        for j in np.flatnonzero((row > 0) & (row <= s)).tolist():
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i, u in enumerate(U):
        groups.setdefault(find(i), []).append(u)
    return sorted(groups.values())


def validate_cover(G: FiniteGraph, c: Cover, s: int | None = None, bound: int | None = None) -> CoverReport:
    """Exact component statistics of ``(G^s)[U_i]`` for every set of the cover."""
    if not c.covers():
        missing = sorted(set(range(G.n)) - set().union(*map(set, c.sets)))
        raise ValueError(f"cover misses vertices {missing[:10]}")
    s = s if s is not None else max(c.scale, 1)
    if s < 1:
        raise ValueError("scale must be >= 1")
    stats = []
    for U in c.sets:
        comps = power_components(G, U, s)
        diam = 0
        for comp in comps:
            if len(comp) > 1:
                diam = max(diam, int(G.distance_rows(comp)[:, comp].max()))
        stats.append(SetStats(len(comps), max((len(x) for x in comps), default=0), diam, comps))
    bounded_by = max((x.max_diameter for x in stats), default=0)
    flagged = [] if bound is None else [i for i, x in enumerate(stats) if x.max_diameter > bound]
    return CoverReport(s, stats, True, bounded_by, flagged)
