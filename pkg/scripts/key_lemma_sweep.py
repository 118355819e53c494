"""Sweep the key-lemma map over graph size, radius and cover kind; report dimension and checks."""

import argparse
import time

from gridembed.covers import make_cover
from gridembed.graph import generate_graph
from gridembed.maps import is_k_lipschitz, is_r_locally_injective
from gridembed.pipeline import key_lemma_map


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sides", type=int, nargs="+", default=[10, 20, 40])
    ap.add_argument("--radii", type=int, nargs="+", default=[1, 2, 5])
    ap.add_argument("--density", type=float, default=0.7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("side\tn\tR\tcover\tm\tdim\tlipschitz\tinjective\tseconds")
    for side in args.sides:
        G = generate_graph("random_induced", f"0..{side}x0..{side}", args.density, seed=args.seed)
        for R in args.radii:
            for kind in ("trivial", "brick", "net"):
                t0 = time.perf_counter()
                cover = make_cover(G, kind, L=3 * R + 1, R=R)
                out = key_lemma_map(G, R, cover).output
                lip, inj = bool(is_k_lipschitz(out, 1)), bool(is_r_locally_injective(out, R))
                dt = time.perf_counter() - t0
                print(f"{side}\t{G.n}\t{R}\t{kind}\t{cover.m}\t{out.k}\t{lip}\t{inj}\t{dt:.2f}")


if __name__ == "__main__":
    main()
