"""Command-line front end. Every subcommand prints one deterministic JSON report.

Exit codes: 0 success, 1 property violated, 2 invalid input, 3 search budget exceeded.
Graph arguments are a file path (edge-list or coordinate format) or a generator spec
``gen:<family>:<args>`` such as ``gen:chunk:0..5x0..5``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from gridembed.covers import make_cover, validate_cover
from gridembed.graph import FiniteGraph, GraphFormatError, growth_stats, load_graph, parse_family
from gridembed.grid import Box
from gridembed.maps import (
    LatticeMap,
    check_distance_lower_bound,
    extend_lipschitz,
    fold_array,
    is_k_lipschitz,
    is_r_locally_injective,
    is_valid_embedding,
)
from gridembed.pipeline import extract_cocycle, key_lemma_map, merge_identity, merge_maps, shift_chart
from gridembed.serialize import certificate_to_json, dumps, map_from_json, map_to_json
from gridembed.solver import (
    BudgetExceeded,
    SearchLimits,
    embedding_dimension,
    embedding_dimension_oracle,
    embeds_in_dim,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

COMMANDS = ("analyze", "embdim", "embed", "fold", "extend", "cover", "pipeline", "merge", "verify", "chart")


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    maps: list[str] = field(default_factory=list)
    radius: int | None = None
    dim: int | None = None
    scale: int | None = None
    cell_size: int | None = None
    bound: int | None = None
    cover: str = "trivial"
    provider: str = "ambient"
    epsilon: float | None = None
    r0: int | None = None
    lipschitz: int | None = None
    embedding: bool = False
    oracle: bool = False
    vertex: int | None = None
    window: str | None = None
    seed: int = 0
    max_nodes: int = 10_000_000
    time_limit_ms: int = 30_000
    output: str = "json"
    out: str | None = None
    auto_edges: bool = False

    @property
    def limits(self) -> SearchLimits:
        return SearchLimits(self.max_nodes, self.time_limit_ms / 1000)


class Violation(Exception):
    """Raised inside a command to report a failed property with exit code 1."""

    def __init__(self, report: dict):
        self.report = report


def _graph(cfg: RunConfig) -> FiniteGraph:
    if cfg.graph is None:
        raise ValueError(f"{cfg.command} needs a graph argument")
    if cfg.graph.startswith("gen:"):
        return parse_family(cfg.graph[4:], seed=cfg.seed)
    return load_graph(Path(cfg.graph).read_text(encoding="utf-8"), auto_edges=cfg.auto_edges)


def _map(G: FiniteGraph, path: str) -> LatticeMap:
    return map_from_json(G, json.loads(Path(path).read_text(encoding="utf-8")))


def _need(value, flag: str):
    if value is None:
        raise ValueError(f"missing required option {flag}")
    return value


def _cmd_analyze(cfg, G):
    stats = growth_stats(G)
    return {
        "n": G.n,
        "edges": G.num_edges,
        "components": max(G.components(), default=-1) + 1,
        "diameter": G.diameter(),
        "growth": stats.to_json(),
    }


def _cmd_embdim(cfg, G):
    cert = embedding_dimension(G, cfg.limits)
    report = certificate_to_json(cert)
    if cfg.oracle:
        report["oracle_d"] = embedding_dimension_oracle(G)
        report["oracle_agrees"] = report["oracle_d"] == cert.d
        if not report["oracle_agrees"]:
            raise Violation(report)
    report["timing"] = {"seconds": cert.elapsed}
    return report


def _cmd_embed(cfg, G):
    res = embeds_in_dim(G, _need(cfg.dim, "--dim"), cfg.limits)
    if res.status == "budget_exceeded":
        raise BudgetExceeded("embedding search exceeded its budget", {"nodes": res.nodes})
    report = {"d": cfg.dim, "status": res.status, "nodes": res.nodes}
    if res.witness is not None:
        report["witness"] = map_to_json(res.witness)
        report["cocycle_trivial"] = extract_cocycle(G, res.witness).trivial
    if res.status == "no":
        raise Violation(report)
    report["timing"] = {"seconds": res.elapsed}
    return report


def _cmd_fold(cfg, G):
    R = _need(cfg.radius, "--radius")
    W = Box.parse(_need(cfg.window, "--window"))
    pts = np.array(list(W.points()), dtype=np.int64).reshape(len(W), W.dim)
    vals = fold_array(pts, R)
    return {"radius": R, "dim": W.dim, "table": [[p.tolist(), v.tolist()] for p, v in zip(pts, vals)]}


def _cmd_extend(cfg, G):
    f = _map(G, _need(cfg.maps[0] if cfg.maps else None, "--map"))
    out = extend_lipschitz(G, f.domain, f)
    return {"map": map_to_json(out)}


def _cmd_cover(cfg, G):
    R = cfg.radius
    L = cfg.cell_size if cfg.cell_size is not None else (3 * R + 1 if R else None)
    c = make_cover(G, cfg.cover, L=L, R=R)
    report = validate_cover(G, c, cfg.scale, cfg.bound)
    out = {"cover": c.to_json(), "report": report.to_json()}
    if report.flagged:
        raise Violation(out)
    return out


def _cmd_pipeline(cfg, G):
    R = _need(cfg.radius, "--radius")
    L = cfg.cell_size if cfg.cell_size is not None else 3 * R + 1
    cover = make_cover(G, cfg.cover, L=L, R=R)
    supplied = _map(G, cfg.maps[0]) if cfg.provider == "supplied" and cfg.maps else None
    t = time.monotonic()
    rep = key_lemma_map(G, R, cover, cfg.provider, cfg.dim, supplied, cfg.limits)
    out = rep.to_json()
    if not rep.ok:
        raise Violation(out)
    out["timing"] = {"seconds": time.monotonic() - t}
    return out


def _cmd_merge(cfg, G):
    if len(cfg.maps) != 2:
        raise ValueError("merge needs exactly two --map arguments")
    f, h = (_map(G, p) for p in cfg.maps)
    merged = merge_maps(f, h)
    check = merge_identity(f, h, merged)
    out = {"map": map_to_json(merged), "max_identity": check.to_json()}
    if not check:
        raise Violation(out)
    return out


def _cmd_verify(cfg, G):
    m = _map(G, _need(cfg.maps[0] if cfg.maps else None, "--map"))
    checks = {}
    if cfg.lipschitz is not None:
        checks["lipschitz"] = is_k_lipschitz(m, cfg.lipschitz)
    if cfg.radius is not None:
        checks["locally_injective"] = is_r_locally_injective(m, cfg.radius)
    if cfg.embedding:
        checks["embedding"] = is_valid_embedding(G, m)
    if cfg.epsilon is not None:
        checks["lower_bound"] = check_distance_lower_bound(G, m, cfg.epsilon, _need(cfg.r0, "--r0"))
    if not checks:
        checks["lipschitz"] = is_k_lipschitz(m, m.lip)
    out = {"checks": {k: v.to_json() for k, v in checks.items()}}
    if not all(checks.values()):
        raise Violation(out)
    return out


def _cmd_chart(cfg, G):
    v = _need(cfg.vertex, "--vertex")
    W = Box.parse(_need(cfg.window, "--window"))
    chart = shift_chart(G, v, W)
    return {"vertex": v, "window": str(W), "chart": [[list(k), w] for k, w in chart.items()]}


HANDLERS = {
    "analyze": _cmd_analyze,
    "embdim": _cmd_embdim,
    "embed": _cmd_embed,
    "fold": _cmd_fold,
    "extend": _cmd_extend,
    "cover": _cmd_cover,
    "pipeline": _cmd_pipeline,
    "merge": _cmd_merge,
    "verify": _cmd_verify,
    "chart": _cmd_chart,
}


def run_command(cfg: RunConfig) -> tuple[int, dict]:
    """Dispatch one subcommand; returns the exit code and the report body."""
    try:
        G = None if cfg.command == "fold" else _graph(cfg)
        report = HANDLERS[cfg.command](cfg, G)
        code = EXIT_OK
    except Violation as exc:
        report, code = exc.report, EXIT_VIOLATION
    except BudgetExceeded as exc:
        report, code = {"error": str(exc), "stats": exc.stats}, EXIT_BUDGET
    except (GraphFormatError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        report, code = {"error": str(exc)}, EXIT_INPUT
    return code, {"command": cfg.command, "exit": code, **report}


def to_tsv(report: dict) -> str:
    """Flat rendering: scalars as ``key<TAB>value``; vertex maps as one row per vertex."""
    rows: list[str] = []

    def walk(prefix: str, obj) -> None:
        if isinstance(obj, dict) and "values" in obj and isinstance(obj["values"], dict):
            for v, vec in obj["values"].items():
                rows.append("\t".join([prefix, v, *map(str, vec)]))
        elif isinstance(obj, dict):
            for k, val in obj.items():
                walk(f"{prefix}.{k}" if prefix else k, val)
        else:
            rows.append(f"{prefix}\t{json.dumps(obj)}")

    walk("", report)
    return "\n".join(rows) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridembed", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("graph", nargs="?", help="graph file or gen:<family>:<args>")
    p.add_argument("--map", dest="maps", action="append", default=[], help="LatticeMap JSON file")
    p.add_argument("--radius", type=int, help="R (locality radius)")
    p.add_argument("--dim", type=int, help="grid dimension d")
    p.add_argument("--scale", type=int, help="cover validation scale s (default 3R)")
    p.add_argument("--cell-size", type=int, help="brick side / net spacing L (default 3R + 1)")
    p.add_argument("--bound", type=int, help="flag cover sets with component diameter above this")
    p.add_argument("--cover", choices=("trivial", "net", "brick"), default="trivial")
    p.add_argument("--provider", choices=("solver", "ambient", "supplied"), default="ambient")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--r0", type=int)
    p.add_argument("--lipschitz", type=int, help="verify: Lipschitz constant to check")
    p.add_argument("--embedding", action="store_true", help="verify: check the map is a grid embedding")
    p.add_argument("--oracle", action="store_true", help="embdim: cross-check with brute force")
    p.add_argument("--vertex", type=int)
    p.add_argument("--window", help="box such as -2..2x0..3 (use --window=-2..2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nodes", type=int, default=10_000_000)
    p.add_argument("--time-limit-ms", type=int, default=30_000)
    p.add_argument("--output", choices=("json", "tsv"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--auto-edges", action="store_true", help="derive all sup-distance-1 edges from coordinates")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    code, report = run_command(cfg)
    if "error" in report:
        print(f"gridembed {cfg.command}: {report['error']}", file=sys.stderr)
    text = dumps(report) if cfg.output == "json" else to_tsv(report)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
