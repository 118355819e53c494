"""Exact embedding dimension of finite graphs into the grid with diagonals."""

from __future__ import annotations

import itertools
import math
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from gridembed.grid import Box, unit_offsets
from gridembed.graph import FiniteGraph, induced_subgraph, neighborhood
from gridembed.maps import (
    LatticeMap,
    fold_array,
    is_k_lipschitz,
    is_r_locally_injective,
    is_valid_embedding,
)

Status = Literal["yes", "no", "budget_exceeded"]


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, stats: dict | None = None):
        self.stats = stats or {}
        super().__init__(message)


@dataclass(frozen=True)
class SearchLimits:
    max_nodes: int = 10_000_000
    time_limit_s: float = 30.0


@dataclass
class EmbedResult:
    status: Status
    witness: LatticeMap | None = None
    nodes: int = 0
    elapsed: float = 0.0


@dataclass
class EmbeddingCertificate:
    d: int
    witness: LatticeMap
    minimal: bool
    search_stats: dict = field(default_factory=dict)
    elapsed: float = 0.0


class _Budget:
    def __init__(self, limits: SearchLimits):
        self.limits = limits
        self.nodes = 0
        self.start = time.monotonic()

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            return False
        if self.nodes & 1023 == 0 and time.monotonic() - self.start > self.limits.time_limit_s:
            return False
        return True


def _search_connected(H: FiniteGraph, d: int, budget: _Budget) -> list[tuple[int, ...]] | None | str:
    """Place a connected graph in Z^d. Returns positions, None (refuted) or "budget"."""
    n = H.n
    if n == 1:
        return [(0,) * d]
    if d == 0:
        return None
    root = min(range(n), key=lambda v: (-len(H.adj[v]), v))
    order, seen = [root], {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in H.adj[u]:
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    rank = {v: i for i, v in enumerate(order)}
    D = H.distance_rows(order)[:, order].astype(int)  # D[i, j] = dist(order[i], order[j])
    ecc = int(D[0].max())
    earlier_nbrs = [[rank[w] for w in H.adj[v] if rank[w] < i] for i, v in enumerate(order)]
    offsets = unit_offsets(d)
    second = [t for t in offsets if all(c >= 0 for c in t) and list(t) == sorted(t, reverse=True)]

    pos: list[tuple[int, ...]] = [(0,) * d]
    used = {pos[0]}

    def candidates(i: int):
        anchor = pos[earlier_nbrs[i][0]]
        for t in second if i == 1 else offsets:
            p = tuple(a + b for a, b in zip(anchor, t))
            if p in used or max(abs(c) for c in p) > ecc:
                continue
            ok = True
            for j in earlier_nbrs[i][1:]:
                if max(abs(a - b) for a, b in zip(p, pos[j])) != 1:
                    ok = False
                    break
            if ok:
                row = D[i]
                for j in range(i):
                    if max(abs(a - b) for a, b in zip(p, pos[j])) > row[j]:
                        ok = False
                        break
            if ok:
                yield p

    # stack[j] yields positions for order index j + 1; len(pos) == len(stack) on entry.
    stack = [candidates(1)]
    while stack:
        p = next(stack[-1], None)
        if p is None:
            stack.pop()
            if stack:
                used.discard(pos.pop())
            continue
        if not budget.tick():
            return "budget"
        pos.append(p)
        used.add(p)
        if len(pos) == n:
            return [pos[rank[v]] for v in range(n)]
        stack.append(candidates(len(pos)))
    return None


def embeds_in_dim(F: FiniteGraph, d: int, limits: SearchLimits | None = None) -> EmbedResult:
    """Backtracking decision procedure for "F embeds into the d-dimensional grid with diagonals".

    Vertices are placed in BFS order from a maximum-degree root pinned at the origin;
    the root's first neighbour is restricted to nonnegative nonincreasing offsets
    (axis permutations and reflections preserve the sup metric). Each component is
    solved separately and the pieces are translated apart along axis 0.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    budget = _Budget(limits or SearchLimits())
    if F.n == 0:
        return EmbedResult("yes", LatticeMap.total(F, np.zeros((0, d), dtype=np.int64)))
    comps = F.component_members()
    if d == 0 and F.n > 1:
        return EmbedResult("no", nodes=0, elapsed=time.monotonic() - budget.start)
    placed: list[tuple[list[int], list[tuple[int, ...]]]] = []
    exhausted = False
    for members in comps:
        H, old = induced_subgraph(F, members)
        res = _search_connected(H, d, budget)
        if res is None:
            return EmbedResult("no", nodes=budget.nodes, elapsed=time.monotonic() - budget.start)
        if res == "budget":
            exhausted = True
            break
        placed.append((old, res))
    elapsed = time.monotonic() - budget.start
    if exhausted:
        return EmbedResult("budget_exceeded", nodes=budget.nodes, elapsed=elapsed)
    vals = np.zeros((F.n, d), dtype=np.int64)
    frontier = None
    for old, pts in placed:
        arr = np.array(pts, dtype=np.int64).reshape(len(pts), d)
        if d == 0:
            vals[old] = arr
            continue
        if frontier is not None:
            arr[:, 0] += frontier + 2 - arr[:, 0].min()
        frontier = int(arr[:, 0].max())
        vals[old] = arr
    witness = LatticeMap.total(F, vals)
    check = is_valid_embedding(F, witness)
    if not check:
        raise AssertionError(f"solver produced an invalid witness: {check}")
    return EmbedResult("yes", witness, nodes=budget.nodes, elapsed=elapsed)


def binary_embedding(F: FiniteGraph) -> LatticeMap:
    """Vertex v -> binary digits of v: every graph on n >= 2 vertices embeds in ceil(log2 n) dims."""
    d = max(1, math.ceil(math.log2(F.n))) if F.n > 1 else 0
    vals = [[(v >> (d - 1 - b)) & 1 for b in range(d)] for v in range(F.n)]
    return LatticeMap.total(F, np.array(vals, dtype=np.int64).reshape(F.n, d))


def embedding_dimension(F: FiniteGraph, limits: SearchLimits | None = None) -> EmbeddingCertificate:
    """Least d with an embedding, searched upward from 0.

    ``minimal`` is true only when the search at d - 1 finished with a refutation.
    The binary-digit embedding bounds the search at ceil(log2 n).
    """
    limits = limits or SearchLimits()
    start = time.monotonic()
    upper = math.ceil(math.log2(F.n)) if F.n > 1 else 0
    statuses: list[str] = []
    nodes: list[int] = []
    for d in range(upper + 1):
        res = embeds_in_dim(F, d, limits)
        statuses.append(res.status)
        nodes.append(res.nodes)
        if res.status == "yes":
            minimal = d == 0 or statuses[d - 1] == "no"
            stats = {"nodes": nodes, "statuses": statuses}
            return EmbeddingCertificate(d, res.witness, minimal, stats, time.monotonic() - start)
    witness = binary_embedding(F)
    minimal = upper == 0 or statuses[upper - 1] == "no"
    stats = {"nodes": nodes, "statuses": statuses, "fallback": "binary"}
    return EmbeddingCertificate(upper, witness, minimal, stats, time.monotonic() - start)


def embedding_dimension_oracle(F: FiniteGraph) -> int:
    """Brute force: least d such that some injective placement in a box works.

    Plain DFS in vertex-id order over every point of ``[0, B]^d`` (B = diameter for a
    connected graph, 2n otherwise), keeping only placements whose per-axis minimum
    is 0. No symmetry breaking, no ordering heuristics. At most 7 vertices.
    """
    n = F.n
    if n > 7:
        raise ValueError("oracle is capped at 7 vertices")
    if n == 0:
        return 0
    B = F.diameter() if F.is_connected() else 2 * n
    earlier = [[w for w in F.adj[v] if w < v] for v in range(n)]
    for d in range(n + 1):
        points = list(itertools.product(range(B + 1), repeat=d))
        pos: list[tuple[int, ...]] = []

        def dfs(v: int) -> bool:
            if v == n:
                return all(min(p[a] for p in pos) == 0 for a in range(d))
            for p in points:
                if p in pos:
                    continue
                if all(max(abs(x - y) for x, y in zip(p, pos[w])) == 1 for w in earlier[v]):
                    pos.append(p)
                    if dfs(v + 1):
                        return True
                    pos.pop()
            return False

        if dfs(0):
            return d
    raise AssertionError("unreachable: every graph embeds in n dimensions")


def local_box_map(
    G: FiniteGraph,
    S: Iterable[int],
    d: int | None,
    R: int,
    provider: str = "solver",
    supplied: LatticeMap | None = None,
    limits: SearchLimits | None = None,
) -> LatticeMap:
    """R-locally injective, 1-Lipschitz (for dist_G on S) map from S into {0..R}^{2d'}.

    A grid embedding is obtained from ``provider`` and folded:

    * ``"ambient"``: the vertex coordinates themselves (d' = ambient dimension);
    * ``"supplied"``: a verified embedding of G passed as ``supplied``;
    * ``"solver"``: an exact embedding in dimension ``d`` of the subgraph induced on
      all vertices within D of S, where D is the largest finite distance inside S.
    """
    S = sorted(set(S))
    if provider == "ambient":
        if G.coords is None:
            raise ValueError("ambient provider needs vertex coordinates")
        dim = G.ambient_dim or 0
        emb = np.array([G.coords[v] for v in S], dtype=np.int64).reshape(len(S), dim)
    elif provider == "supplied":
        if supplied is None:
            raise ValueError("supplied provider needs a map")
        check = is_valid_embedding(G, supplied)
        if not check:
            raise ValueError(f"supplied map is not an embedding: {check.reason} {check.witness}")
        dim = supplied.k
        emb = supplied.values[[supplied.row(v) for v in S]].reshape(len(S), dim)
    elif provider == "solver":
        if d is None:
            raise ValueError("solver provider needs a dimension")
        dim = d
        if S:
            rows = G.distance_rows(S)[:, S]
            radius = int(rows.max())
            F, old = induced_subgraph(G, neighborhood(G, S, radius))
            res = embeds_in_dim(F, d, limits)
            if res.status == "budget_exceeded":
                raise BudgetExceeded(f"embedding search exceeded its budget on {F}", {"nodes": res.nodes})
            if res.status == "no":
                raise ValueError(f"neighbourhood subgraph {F} does not embed in dimension {d}")
            new = {v: i for i, v in enumerate(old)}
            emb = res.witness.values[[new[v] for v in S]]
        else:
            emb = np.zeros((0, d), dtype=np.int64)
    else:
        raise ValueError(f"unknown provider {provider!r}")
    vals = fold_array(emb, R) if dim else np.zeros((len(S), 0), dtype=np.int64)
    out = LatticeMap(G, tuple(S), vals, box=Box.cube(R, 2 * dim))
    for check in (is_k_lipschitz(out, 1), is_r_locally_injective(out, R)):
        if not check:
            raise AssertionError(f"local map failed verification: {check}")
    return out
