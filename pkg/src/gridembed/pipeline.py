"""Composite constructions: locally injective Lipschitz maps from covers, product
merging, displacement cocycles, strong embeddings and shift charts."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from gridembed.covers import Cover, power_components
from gridembed.grid import Box, GridPoint
from gridembed.graph import FiniteGraph, neighborhood
from gridembed.maps import (
    LatticeMap,
    PASS,
    Verdict,
    extend_lipschitz,
    is_k_lipschitz,
    is_r_locally_injective,
    is_valid_embedding,
)
from gridembed.solver import SearchLimits, embedding_dimension, local_box_map


@dataclass
class Stage:
    U: tuple[int, ...]
    V: tuple[int, ...]
    components: list[list[int]]
    local: LatticeMap  # f_i on V_i, values in {0..R}^{2d'}
    extended: LatticeMap  # f*_i on V(G)


@dataclass
class PipelineReport:
    params: dict
    m: int
    cover: Cover
    output: LatticeMap
    verification: dict[str, Verdict]
    stages: list[Stage] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.output.k

    @property
    def ok(self) -> bool:
        return all(self.verification.values())

    def to_json(self) -> dict:
        from gridembed.serialize import map_to_json

        return {
            "params": self.params,
            "m": self.m,
            "dim": self.dim,
            "cover": self.cover.to_json(),
            "output": map_to_json(self.output),
            "verification": {k: v.to_json() for k, v in self.verification.items()},
            "stages": [{"V": list(s.V), "components": s.components} for s in self.stages],
        }


def _concat(G: FiniteGraph, parts: list[LatticeMap], k_each: int) -> np.ndarray:
    if not parts:
        return np.zeros((G.n, 0), dtype=np.int64)
    return np.hstack([p.values for p in parts]).reshape(G.n, k_each * len(parts))


def key_lemma_map(
    G: FiniteGraph,
    R: int,
    cover: Cover,
    provider: str = "ambient",
    d: int | None = None,
    supplied: LatticeMap | None = None,
    limits: SearchLimits | None = None,
) -> PipelineReport:
    """R-locally injective 1-Lipschitz map V(G) -> Z^{2 d' m} from an m-set cover.

    For each cover set U_i: take its R-neighbourhood V_i, build a folded local map on
    every component of (G^R)[V_i], extend the assembled map to V(G), and concatenate
    the m extensions. Both properties are re-verified on the result.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    if cover.graph is not G:
        raise ValueError("cover belongs to a different graph")
    if not cover.covers():
        raise ValueError("cover does not cover V(G)")
    if cover.scale != 3 * R:
        warnings.warn(f"cover scale {cover.scale} differs from 3R = {3 * R}", stacklevel=2)
    if provider == "ambient":
        if G.coords is None:
            raise ValueError("ambient provider needs vertex coordinates")
        dim = G.ambient_dim or 0
    elif provider == "supplied":
        if supplied is None:
            raise ValueError("supplied provider needs a map")
        dim = supplied.k
    elif provider == "solver":
        if d is None:
            d = embedding_dimension(G, limits).d
        dim = d
    else:
        raise ValueError(f"unknown provider {provider!r}")
    k_each = 2 * dim
    box = Box.cube(R, k_each)

    stages = []
    for U in cover.sets:
        V = sorted(neighborhood(G, U, R)) if U else []
        comps = power_components(G, V, R)
        vals = np.zeros((len(V), k_each), dtype=np.int64)
        row = {v: i for i, v in enumerate(V)}
        for comp in comps:
            local = local_box_map(G, comp, d, R, provider, supplied, limits)
            vals[[row[v] for v in comp]] = local.values
        f_i = LatticeMap(G, tuple(V), vals, box=box)
        stages.append(Stage(tuple(U), tuple(V), comps, f_i, extend_lipschitz(G, V, f_i)))

    out = LatticeMap.total(G, _concat(G, [s.extended for s in stages], k_each))
    verification = {
        "lipschitz": is_k_lipschitz(out, 1),
        "locally_injective": is_r_locally_injective(out, R),
    }
    params = {"R": R, "dim": dim, "provider": provider, "cover": cover.kind, "scale": cover.scale}
    return PipelineReport(params, cover.m, cover, out, verification, stages)


# -- merging -------------------------------------------------------------------


def merge_maps(f: LatticeMap, h: LatticeMap) -> LatticeMap:
    """Product map ``u -> (f(u), h(u))``; tags are inherited from ``f``."""
    if f.graph is not h.graph and not f.graph.same_structure(h.graph):
        raise ValueError("maps live on different graphs")
    if f.domain != h.domain:
        raise ValueError("maps have different domains")
    for name, g in (("f", f), ("h", h)):
        check = is_k_lipschitz(g, g.lip)
        if not check:
            raise ValueError(f"{name} is not {g.lip}-Lipschitz: witness {check.witness}")
    vals = np.hstack([f.values, h.values])
    return LatticeMap(f.graph, f.domain, vals, lip=max(f.lip, h.lip), tags=f.tags)


def merge_identity(f: LatticeMap, h: LatticeMap, merged: LatticeMap) -> Verdict:
    """Check ``|F(u)-F(v)|_inf = max(|f(u)-f(v)|_inf, |h(u)-h(v)|_inf)`` on every pair."""
    n = len(merged.domain)

    def sup_rows(vals: np.ndarray, i: int) -> np.ndarray:
        if vals.shape[1] == 0:
            return np.zeros(n - i - 1, dtype=np.int64)
        return np.abs(vals[i + 1 :] - vals[i]).max(axis=1)

    for i in range(n - 1):
        lhs = sup_rows(merged.values, i)
        rhs = np.maximum(sup_rows(f.values, i), sup_rows(h.values, i))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            return Verdict(False, (merged.domain[i], merged.domain[i + 1 + bad[0]]), "max identity fails")
    return PASS


# -- cocycles ------------------------------------------------------------------


@dataclass(eq=False)
class Cocycle:
    """Displacements ``delta(u, v) = off(v) - off(u)`` for u, v in one component.

    ``offsets`` are taken relative to each component's smallest vertex. ``overrides``
    replace individual table entries (used to build deliberately corrupted tables).
    """

    graph: FiniteGraph
    k: int
    offsets: np.ndarray
    trivial: bool
    witness: tuple[int, int] | None = None
    overrides: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def delta(self, u: int, v: int) -> tuple[int, ...]:
        comp = self.graph.components()
        if comp[u] != comp[v]:
            raise ValueError(f"{u} and {v} lie in different components")
        if (u, v) in self.overrides:
            return self.overrides[(u, v)]
        return tuple(int(c) for c in self.offsets[v] - self.offsets[u])

    def with_entry(self, u: int, v: int, value) -> "Cocycle":
        over = dict(self.overrides)
        over[(u, v)] = tuple(int(c) for c in value)
        return Cocycle(self.graph, self.k, self.offsets, self.trivial, self.witness, over)

    def _table(self, members: list[int]) -> np.ndarray:
        off = self.offsets[members]
        T = off[None, :, :] - off[:, None, :]
        pos = {v: i for i, v in enumerate(members)}
        for (u, v), val in self.overrides.items():
            if u in pos and v in pos:
                T[pos[u], pos[v]] = val
        return T


def extract_cocycle(G: FiniteGraph, f: LatticeMap) -> Cocycle:
    if not f.is_total:
        raise ValueError("cocycle extraction needs a total map")
    comp = G.components()
    roots = [members[0] for members in G.component_members()]
    off = f.values - f.values[[roots[c] for c in comp]]
    seen: dict[tuple, int] = {}
    witness = None
    for v in range(G.n):
        key = (comp[v], *f[v])
        if key in seen:
            pair = (seen[key], v)
            witness = pair if witness is None else min(witness, pair)
        else:
            seen[key] = v
    return Cocycle(G, f.k, off, witness is None, witness)


def verify_cocycle(c: Cocycle, samples: int = 10_000, seed: int = 0) -> Verdict:
    """Identity and additivity laws: exhaustive up to 200 vertices, seeded samples beyond."""
    G = c.graph
    groups = G.component_members()
    if G.n <= 200:
        for members in groups:
            T = c._table(members)
            diag = np.flatnonzero(np.any(T[np.arange(len(members)), np.arange(len(members))] != 0, axis=-1))
            if diag.size:
                u = members[diag[0]]
                return Verdict(False, (u, u), "delta(u, u) != 0")
            for a in range(len(members)):
                bad = np.any(T[a][:, None, :] + T != T[a][None, :, :], axis=-1)
                hit = np.argwhere(bad)
                if hit.size:
                    b, w = hit[0]
                    return Verdict(False, (members[a], members[b], members[w]), "additivity fails")
        return PASS
    rng = np.random.default_rng(seed)
    comp = G.components()
    checks = [(u, v, int(rng.integers(G.n))) for (u, v) in c.overrides]
    for _ in range(samples):
        checks.append((int(rng.integers(G.n)), int(rng.integers(G.n)), int(rng.integers(G.n))))
    for u, v, w in checks:
        members = groups[comp[u]]
        v = v if comp[v] == comp[u] else members[v % len(members)]
        w = w if comp[w] == comp[u] else members[w % len(members)]
        if any(c.delta(u, u)):
            return Verdict(False, (u, u), "delta(u, u) != 0")
        lhs = tuple(a + b for a, b in zip(c.delta(u, v), c.delta(v, w)))
        if lhs != c.delta(u, w):
            return Verdict(False, (u, v, w), "additivity fails")
    return PASS


# -- strong embeddings and charts ------------------------------------------------


def strong_embedding(G: FiniteGraph, f: LatticeMap) -> LatticeMap:
    """Attach component tags so distinct components land in distinct copies of the grid."""
    check = is_valid_embedding(G, f)
    if not check:
        raise ValueError(f"not an embedding: {check.reason} {check.witness}")
    return LatticeMap(f.graph, f.domain, f.values, lip=f.lip, box=f.box, tags=G.components())


def shift_chart(G: FiniteGraph, v: int, W: Box) -> dict[GridPoint, int | None]:
    """Window of the translation orbit of ``v``: offset k -> vertex at coords(v) + k, if any."""
    if G.coords is None:
        raise ValueError("shift charts need vertex coordinates")
    base = G.coords[G._check(v)]
    if W.dim != len(base):
        raise ValueError("window dimension differs from the ambient dimension")
    return {k: G.vertex_at(tuple(a + b for a, b in zip(base, k))) for k in W.points()}
