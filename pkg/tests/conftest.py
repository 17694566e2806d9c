"""Shared graph fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's bitmask machinery:
connectivity works on adjacency sets, component counts use union-find,
so the formulas under test are checked against independent computations.
"""

import pytest

from vstab import DualGraph
from vstab.graphs import vertices_of


# -- named graphs --------------------------------------------------------------

def single_vertex():
    return DualGraph((0,), ())


def single_edge():
    return DualGraph((0, 0), ((0, 1),))


def banana():
    """Two rational components joined at two nodes."""
    return DualGraph((0, 0), ((0, 1), (0, 1)))


def triple_banana():
    return DualGraph((0, 0), ((0, 1), (0, 1), (0, 1)))


def path3():
    return DualGraph((0, 0, 0), ((0, 1), (1, 2)))


def triangle():
    return DualGraph((0, 0, 0), ((0, 1), (0, 2), (1, 2)))


def theta_plus_spur():
    return DualGraph((0, 0, 0), ((0, 1), (0, 1), (1, 2)))


def star4():
    return DualGraph((0, 0, 0, 0), ((0, 1), (0, 2), (0, 3)))


def path4():
    return DualGraph((0, 0, 0, 0), ((0, 1), (1, 2), (2, 3)))


def cycle4():
    return DualGraph((0, 0, 0, 0), ((0, 1), (1, 2), (2, 3), (0, 3)))


def k4():
    return DualGraph((0, 0, 0, 0), tuple(
        (i, j) for i in range(4) for j in range(i + 1, 4)
    ))


def cycle5():
    return DualGraph((0,) * 5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)))


def genus_decorated():
    """Banana with genera and a loop, for chi bookkeeping."""
    return DualGraph((1, 2), ((0, 1), (0, 1), (1, 1)))


POOL_SMALL = [single_vertex, single_edge, banana, triple_banana, path3,
              triangle, theta_plus_spur]
POOL_N4 = POOL_SMALL + [star4, path4, cycle4, k4]
POOL_N5 = POOL_N4 + [cycle5]


@pytest.fixture
def graphs_n4():
    return [f() for f in POOL_N4]


@pytest.fixture
def graphs_n5():
    return [f() for f in POOL_N5]


# -- independent oracles -----------------------------------------------------------


def oracle_connected(g: DualGraph, vertices: set) -> bool:
    """Set-based BFS, independent of the bitmask implementation."""
    if not vertices:
        raise ValueError("empty")
    adj = {v: set() for v in vertices}
    for u, v in g.edges:
        if u != v and u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    start = next(iter(vertices))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == set(vertices)


def oracle_component_count(g: DualGraph, vertices: set) -> int:
    """Union-find component count on the induced multigraph."""
    root = {v: v for v in vertices}

    def find(a):
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for u, v in g.edges:
        if u in root and v in root and u != v:
            ru, rv = find(u), find(v)
            if ru != rv:
                root[ru] = rv
    return len({find(v) for v in vertices})


def oracle_genus(g: DualGraph, vertices: set) -> int:
    """First-Betti bookkeeping: internal edges minus vertices plus
    components, plus the geometric genera."""
    if not vertices:
        return 0
    internal = sum(1 for u, v in g.edges if u in vertices and v in vertices)
    return (
        internal - len(vertices) + oracle_component_count(g, vertices)
        + sum(g.genera[v] for v in vertices)
    )


def oracle_biconnected(g: DualGraph) -> list[int]:
    full = set(range(g.n))
    out = []
    for mask in range(1, (1 << g.n) - 1):
        sub = set(vertices_of(mask))
        if oracle_connected(g, sub) and oracle_connected(g, full - sub):
            out.append(mask)
    return out


def all_subcurves(g: DualGraph):
    return range(1 << g.n)


def proper_nonempty(g: DualGraph):
    return range(1, g.full_mask)
