#!/usr/bin/env python3
"""Rankedness/surjectivity evidence scan over small connected multigraphs.

Writes one JSON report per graph (JSONL) and a final summary line to
stderr.  Equivalent to `vstab qdeg-scan` with a progress summary.
"""

import argparse
import json
import sys
import time

from vstab.graphenum import connected_multigraphs
from vstab.posets import qdeg_scan


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-vertices", type=int, default=5)
    parser.add_argument("--max-edges", type=int, default=7)
    args = parser.parse_args()

    t0 = time.time()
    graphs = connected_multigraphs(args.max_vertices, args.max_edges)
    ranked = surjective = expected_rank = 0
    for g in graphs:
        report = qdeg_scan(g)
        sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
        ranked += bool(report["ranked"])
        surjective += bool(report["degeneracy_map_surjective"])
        expected_rank += bool(
            report["ranked"] and report["rank"] == report["expected_rank"]
        )
    sys.stderr.write(
        f"{len(graphs)} graphs in {time.time() - t0:.1f}s: "
        f"ranked {ranked}, rank==components-1 {expected_rank}, "
        f"degeneracy map surjective {surjective}\n"
    )


if __name__ == "__main__":
    main()
