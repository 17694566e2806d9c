#!/usr/bin/env python3
"""Emit the degeneracy poset of the four-component curve with all subcurves
connected, mod graph symmetry, as DOT on stdout."""

import sys

from vstab import DualGraph
from vstab.cli import _deg_label
from vstab.posets import (
    deg_leq,
    deg_symmetry_classes,
    enumerate_degeneracy_subsets,
    hasse,
)
from vstab.serialize import hasse_to_dot


def main():
    g = DualGraph((0, 0, 0, 0), tuple(
        (i, j) for i in range(4) for j in range(i + 1, 4)
    ))
    degs = enumerate_degeneracy_subsets(g)
    reps, assignment = deg_symmetry_classes(g, degs)
    members = [[] for _ in reps]
    for d, k in zip(degs, assignment):
        members[k].append(d)
    keyed = {id(r): k for k, r in enumerate(reps)}

    def class_leq(a, b):
        ka, kb = keyed[id(a)], keyed[id(b)]
        if ka == kb:
            return True
        return any(deg_leq(m, a) for m in members[kb])

    diagram = hasse(reps, class_leq, label=_deg_label)
    sys.stdout.write(hasse_to_dot(diagram, name="deg_poset"))


if __name__ == "__main__":
    main()
