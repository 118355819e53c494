"""Embedding dimension of small cliques, cycles and stars, solver against brute force."""

import argparse
import math

from gridembed.graph import generate_graph
from gridembed.solver import embedding_dimension, embedding_dimension_oracle


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    print("family\tn\temb\tminimal\toracle\tlog2\tnodes\tseconds")
    for family in ("clique", "cycle", "star", "path"):
        for n in range(2 if family != "cycle" else 3, args.max_n + 1):
            G = generate_graph(family, n)
            cert = embedding_dimension(G)
            oracle = embedding_dimension_oracle(G) if n <= 7 else "-"
            print(
                f"{family}\t{n}\t{cert.d}\t{cert.minimal}\t{oracle}\t{math.ceil(math.log2(n))}"
                f"\t{sum(cert.search_stats.get('nodes', []))}\t{cert.elapsed:.3f}"
            )


if __name__ == "__main__":
    main()
