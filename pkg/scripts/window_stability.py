"""Compare key-lemma outputs on nested path windows and report where they first differ."""

import argparse

import numpy as np

from gridembed.covers import make_cover
from gridembed.graph import generate_graph
from gridembed.pipeline import key_lemma_map


def output(length: int, R: int, L: int) -> np.ndarray:
    G = generate_graph("chunk", f"0..{length}")
    return key_lemma_map(G, R, make_cover(G, "brick", L=L, R=R)).output.values


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--small", type=int, default=400)
    ap.add_argument("--big", type=int, default=800)
    ap.add_argument("--radius", type=int, default=5)
    ap.add_argument("--cell-size", type=int, default=16)
    args = ap.parse_args()
    a = output(args.small, args.radius, args.cell_size)
    b = output(args.big, args.radius, args.cell_size)[: len(a)]
    same = np.all(a == b, axis=1)
    differ = np.flatnonzero(~same)
    print(f"vertices compared: {len(a)}")
    print(f"agreeing vertices: {int(same.sum())}")
    if len(differ):
        print(f"first disagreement near the right edge: {int(differ.min())} (edge at {args.small})")
        print(f"margin to edge: {args.small - int(differ.min())}")
    else:
        print("outputs agree everywhere")


if __name__ == "__main__":
    main()
