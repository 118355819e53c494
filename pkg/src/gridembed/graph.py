"""Finite simple graphs with a memoized BFS metric, generators and growth statistics."""

from __future__ import annotations

import math
import re
import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from gridembed.grid import Box, GridPoint, check_int64, linf_distance, unit_offsets

INF = math.inf


class GraphFormatError(ValueError):
    """Malformed graph text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class FiniteGraph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Optional ``coords`` place every vertex in Z^a; each edge must then join points at
    sup-distance exactly 1. Distance rows are computed on demand and memoized
    (``-1`` marks an unreachable vertex).
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        coords: Sequence[Sequence[int]] | None = None,
        labels: Sequence[str] | None = None,
    ):
        if n < 0:
            raise ValueError("negative vertex count")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if v in nbrs[u]:
                raise ValueError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self.coords: tuple[GridPoint, ...] | None = None
        self._coord_index: dict[GridPoint, int] | None = None
        if coords is not None:
            if len(coords) != n:
                raise ValueError("coords length differs from vertex count")
            pts = tuple(check_int64(c) for c in coords)
            if len({len(p) for p in pts}) > 1:
                raise ValueError("coordinate dimension mismatch")
            index: dict[GridPoint, int] = {}
            for v, p in enumerate(pts):
                if p in index:
                    raise ValueError(f"vertices {index[p]} and {v} share coordinates {p}")
                index[p] = v
            for u in range(n):
                for v in self.adj[u]:
                    if u < v and linf_distance(pts[u], pts[v]) != 1:
                        raise ValueError(f"edge ({u}, {v}) is not a grid edge under coords")
            self.coords = pts
            self._coord_index = index
        self.labels = tuple(labels) if labels is not None else None
        self._rows: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        self._csr: csr_matrix | None = None
        self._components: tuple[int, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kw) -> "FiniteGraph":
        return cls(n, edges, **kw)

    # -- structure -------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def ambient_dim(self) -> int | None:
        if self.coords is None:
            return None
        return len(self.coords[0]) if self.n else 0

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[self._check(v)])

    def vertex_at(self, p: Sequence[int]) -> int | None:
        if self._coord_index is None:
            raise ValueError("graph has no coordinates")
        return self._coord_index.get(tuple(p))

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise KeyError(f"unknown vertex {v}")
        return v

    def __repr__(self) -> str:
        tail = f", ambient_dim={self.ambient_dim}" if self.coords is not None else ""
        return f"FiniteGraph(n={self.n}, m={self.num_edges}{tail})"

    def same_structure(self, other: "FiniteGraph") -> bool:
        return self.n == other.n and self.adj == other.adj and self.coords == other.coords

    # -- metric ----------------------------------------------------------

    def _matrix(self) -> csr_matrix:
        if self._csr is None:
            rows = [u for u in range(self.n) for _ in self.adj[u]]
            cols = [v for u in range(self.n) for v in self.adj[u]]
            self._csr = csr_matrix(
                (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(self.n, self.n)
            )
        return self._csr

    def distance_rows(self, sources: Sequence[int]) -> np.ndarray:
        """Stacked BFS distance rows (int32, -1 = unreachable), one per source."""
        sources = [self._check(int(s)) for s in sources]
        with self._lock:
            missing = sorted({s for s in sources if s not in self._rows})
            if missing:
                d = shortest_path(self._matrix(), unweighted=True, indices=missing)
                d = np.atleast_2d(d)
                block = np.where(np.isinf(d), -1, d).astype(np.int32)
                for s, row in zip(missing, block):
                    row.setflags(write=False)
                    self._rows[s] = row
            if not sources:
                return np.empty((0, self.n), dtype=np.int32)
            return np.stack([self._rows[s] for s in sources])

    def distance_row(self, u: int) -> np.ndarray:
        return self.distance_rows([u])[0]

    def dist(self, u: int, v: int) -> float | int:
        self._check(v)
        d = int(self.distance_row(u)[v])
        return INF if d < 0 else d

    def ball(self, u: int, r: int) -> set[int]:
        if r < 0:
            raise ValueError("negative radius")
        row = self.distance_row(u)
        return set(np.flatnonzero((row >= 0) & (row <= r)).tolist())

    def diameter(self) -> int:
        """Largest finite distance (0 for an edgeless graph)."""
        if self.n == 0:
            return 0
        return int(self.distance_rows(range(self.n)).max())

    # -- components ------------------------------------------------------

    def components(self) -> tuple[int, ...]:
        """Component id per vertex; ids dense from 0 in order of smallest member."""
        if self._components is None:
            label = [-1] * self.n
            nxt = 0
            for s in range(self.n):
                if label[s] >= 0:
                    continue
                label[s] = nxt
                queue = deque([s])
                while queue:
                    u = queue.popleft()
                    for w in self.adj[u]:
                        if label[w] < 0:
                            label[w] = nxt
                            queue.append(w)
                nxt += 1
            self._components = tuple(label)
        return self._components

    def component_members(self) -> list[list[int]]:
        comp = self.components()
        out: list[list[int]] = [[] for _ in range(max(comp, default=-1) + 1)]
        for v, c in enumerate(comp):
            out[c].append(v)
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or max(self.components()) == 0


def components(G: FiniteGraph) -> tuple[int, ...]:
    return G.components()


def dist(G: FiniteGraph, u: int, v: int) -> float | int:
    return G.dist(u, v)


def ball(G: FiniteGraph, u: int, r: int) -> set[int]:
    return G.ball(u, r)


def power_graph(G: FiniteGraph, R: int) -> FiniteGraph:
    """G^R: same vertices, u ~ v iff 0 < dist(u, v) <= R. Coordinates are dropped."""
    if R < 1:
        raise ValueError("R must be >= 1")
    if R == 1:
        return FiniteGraph(G.n, G.edges(), labels=G.labels)
    edges = []
    for u in range(G.n):
        row = G.distance_row(u)
        for v in np.flatnonzero((row > 0) & (row <= R)).tolist():
            if v > u:
                edges.append((u, v))
    return FiniteGraph(G.n, edges, labels=G.labels)


def induced_subgraph(G: FiniteGraph, U: Iterable[int]) -> tuple[FiniteGraph, list[int]]:
    """``G[U]`` relabelled to ``0..|U|-1`` in increasing original id, plus new->old table."""
    old = sorted({G._check(u) for u in U})
    new = {v: i for i, v in enumerate(old)}
    edges = [(new[u], new[v]) for u in old for v in G.adj[u] if v in new and u < v]
    coords = [G.coords[v] for v in old] if G.coords is not None else None
    labels = [G.labels[v] for v in old] if G.labels is not None else None
    return FiniteGraph(len(old), edges, coords=coords, labels=labels), old


def neighborhood(G: FiniteGraph, S: Iterable[int], r: int) -> set[int]:
    """Vertices at distance <= r from some vertex of S (multi-source BFS)."""
    seen = {G._check(s): 0 for s in S}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        if seen[u] == r:
            continue
        for w in G.adj[u]:
            if w not in seen:
                seen[w] = seen[u] + 1
                queue.append(w)
    return set(seen)


# -- growth ------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthStats:
    table: tuple[tuple[int, int], ...]  # (r, max_u |B(u, r)|) for r = 1..diameter
    rho_stat: float

    def to_json(self) -> dict:
        return {"table": [list(t) for t in self.table], "rho_stat": self.rho_stat}


def growth_stats(G: FiniteGraph) -> GrowthStats:
    """Exact ball-growth table and the least rho with |B(u,r)| <= (r+1)^rho for r >= 1."""
    if G.n == 0:
        raise ValueError("growth_stats needs a nonempty graph")
    diam = G.diameter()
    best = np.zeros(diam + 1, dtype=np.int64)
    for u in range(G.n):
        row = G.distance_row(u)
        counts = np.cumsum(np.bincount(row[row >= 0], minlength=diam + 1))
        np.maximum(best, counts, out=best)
    table = tuple((r, int(best[r])) for r in range(1, diam + 1))
    rho = max((math.log(b) / math.log(r + 1) for r, b in table), default=0.0)
    return GrowthStats(table, rho)


# -- generators --------------------------------------------------------------


class XorShift64:
    """Marsaglia xorshift64 (shifts 13, 7, 17) seeded through one splitmix64 step.

    ``random()`` returns ``(next() >> 11) * 2**-53``, a float in [0, 1).
    """

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & self.MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        z ^= z >> 31
        self.state = z or 0x2545F4914F6CDD1D

    def next(self) -> int:
        x = self.state
        x ^= (x << 13) & self.MASK
        x ^= x >> 7
        x ^= (x << 17) & self.MASK
        self.state = x
        return x

    def random(self) -> float:
        return (self.next() >> 11) * 2.0**-53


def chunk_graph(points: Iterable[Sequence[int]]) -> FiniteGraph:
    """Grid-with-diagonals graph induced on ``points``; ids follow lexicographic order."""
    pts = sorted({tuple(p) for p in points})
    if not pts:
        return FiniteGraph(0)
    index = {p: i for i, p in enumerate(pts)}
    offsets = [t for t in unit_offsets(len(pts[0])) if t > (0,) * len(t)]
    edges = []
    for i, p in enumerate(pts):
        for t in offsets:
            j = index.get(tuple(a + b for a, b in zip(p, t)))
            if j is not None:
                edges.append((i, j))
    return FiniteGraph(len(pts), edges, coords=pts)


def generate_graph(family: str, *args, seed: int = 0) -> FiniteGraph:
    """Deterministic generators.

    ``path n``, ``cycle n``, ``clique n``, ``star n`` (centre 0 plus n-1 leaves),
    ``chunk box`` (the grid with diagonals on a box, with coordinates) and
    ``random_induced box p`` (each box point kept independently with probability p,
    drawn from :class:`XorShift64` in lexicographic point order).
    """
    if family in ("path", "cycle", "clique", "star"):
        (n,) = args
        n = int(n)
        if n < 1:
            raise ValueError(f"{family} needs n >= 1")
        if family == "path":
            edges = [(i, i + 1) for i in range(n - 1)]
        elif family == "cycle":
            edges = [(i, i + 1) for i in range(n - 1)]
            if n >= 3:
                edges.append((0, n - 1))
        elif family == "clique":
            edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
        else:
            edges = [(0, i) for i in range(1, n)]
        return FiniteGraph(n, edges)
    if family == "chunk":
        (box,) = args
        box = box if isinstance(box, Box) else Box.parse(box)
        return chunk_graph(box.points())
    if family == "random_induced":
        box, p = args
        box = box if isinstance(box, Box) else Box.parse(box)
        p = float(p)
        if not 0 < p <= 1:
            raise ValueError("p must lie in (0, 1]")
        rng = XorShift64(seed)
        return chunk_graph([q for q in box.points() if rng.random() < p])
    raise ValueError(f"unknown graph family {family!r}")


def parse_family(spec: str, seed: int = 0) -> FiniteGraph:
    """Parse ``path:5``, ``chunk:0..5x0..5`` or ``random_induced:0..20x0..20:0.7``."""
    family, *args = spec.split(":")
    return generate_graph(family, *args, seed=seed)


# -- text formats --------------------------------------------------------------

_COMMENT = re.compile(r"#.*")


def load_graph(text: str, auto_edges: bool = False) -> FiniteGraph:
    """Parse the edge-list or coordinate format.

    Edge list: ``u v`` per line (a lone ``u`` declares an isolated vertex).
    Coordinates: ``v <id> <c1> ... <ca>`` and ``e <id> <id>``; with ``auto_edges``
    every pair of listed points at sup-distance 1 is joined. External ids are
    mapped to dense ids in increasing numeric order.
    """
    lines = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = _COMMENT.sub("", raw).strip()
        if body:
            lines.append((no, body.split()))
    coord_format = any(tok[0] in ("v", "e") for _, tok in lines)

    def as_id(tok: str, no: int) -> int:
        try:
            return int(tok)
        except ValueError:
            raise GraphFormatError(f"bad vertex id {tok!r}", no) from None

    ids: set[int] = set()
    raw_edges: list[tuple[int, int, int]] = []
    raw_coords: dict[int, tuple[int, ...]] = {}
    for no, tok in lines:
        if coord_format:
            kind, rest = tok[0], tok[1:]
            if kind == "v":
                if not rest:
                    raise GraphFormatError("vertex line without id", no)
                vid = as_id(rest[0], no)
                if vid in raw_coords:
                    raise GraphFormatError(f"vertex {vid} declared twice", no)
                try:
                    c = tuple(int(x) for x in rest[1:])
                except ValueError:
                    raise GraphFormatError("non-integer coordinate", no) from None
                if raw_coords and len(c) != len(next(iter(raw_coords.values()))):
                    raise GraphFormatError("coordinate dimension mismatch", no)
                raw_coords[vid] = c
                ids.add(vid)
                continue
            if kind != "e" or len(rest) != 2:
                raise GraphFormatError(f"unrecognised line {' '.join(tok)!r}", no)
            tok = rest
        if len(tok) == 1:
            ids.add(as_id(tok[0], no))
            continue
        if len(tok) != 2:
            raise GraphFormatError(f"expected 'u v', got {' '.join(tok)!r}", no)
        u, v = as_id(tok[0], no), as_id(tok[1], no)
        if u == v:
            raise GraphFormatError(f"self-loop at {u}", no)
        raw_edges.append((u, v, no))
        ids.update((u, v))

    if coord_format:
        unknown = ids - raw_coords.keys()
        if unknown:
            raise GraphFormatError(f"edges reference vertices without coordinates: {sorted(unknown)}")
    order = sorted(ids)
    dense = {x: i for i, x in enumerate(order)}
    seen: dict[tuple[int, int], int] = {}
    edges = []
    for u, v, no in raw_edges:
        key = (min(dense[u], dense[v]), max(dense[u], dense[v]))
        if key in seen:
            if coord_format and auto_edges:
                continue
            raise GraphFormatError(f"duplicate edge {u} {v} (first on line {seen[key]})", no)
        if coord_format and linf_distance(raw_coords[u], raw_coords[v]) != 1:
            raise GraphFormatError(f"edge {u} {v} is not at sup-distance 1", no)
        seen[key] = no
        edges.append(key)
    coords = None
    if coord_format:
        coords = [raw_coords[x] for x in order]
        if len(set(coords)) != len(coords):
            raise GraphFormatError("two vertices share coordinates")
        if auto_edges:
            index = {c: i for i, c in enumerate(coords)}
            offs = [t for t in unit_offsets(len(coords[0]) if coords else 0) if t > (0,) * len(t)]
            for i, c in enumerate(coords):
                for t in offs:
                    j = index.get(tuple(a + b for a, b in zip(c, t)))
                    if j is not None:
                        key = (min(i, j), max(i, j))
                        if key not in seen:
                            seen[key] = 0
                            edges.append(key)
    return FiniteGraph(len(order), edges, coords=coords, labels=[str(x) for x in order])


def dump_graph(G: FiniteGraph) -> str:
    """Inverse of :func:`load_graph` (coordinate format when coords are present)."""
    out = []
    if G.coords is not None:
        out += ["v " + " ".join(map(str, (v, *G.coords[v]))) for v in range(G.n)]
        out += [f"e {u} {v}" for u, v in G.edges()]
    else:
        out += [f"{u} {v}" for u, v in G.edges()]
        out += [str(v) for v in range(G.n) if not G.adj[v]]
    return "\n".join(out) + "\n"
