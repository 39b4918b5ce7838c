"""Shared strategies and independent reference implementations."""

from __future__ import annotations

from hypothesis import strategies as st

from brauerkit.diagram import BrauerDiagram


@st.composite
def diagrams(draw, m=None, n=None, max_points=8, max_closed=2):
    if m is None:
        m = draw(st.integers(0, max_points))
    if n is None:
        n = draw(st.sampled_from([k for k in range(max(max_points - m, 0) + 2) if (m + k) % 2 == 0]))
    pts = draw(st.permutations(list(range(m + n))))
    closed = draw(st.integers(0, max_closed))
    return BrauerDiagram(m, n, tuple(zip(pts[::2], pts[1::2])), closed)


@st.composite
def composable(draw, count=2, max_points=8):
    sizes = [draw(st.integers(0, max_points))]
    for _ in range(count):
        prev = sizes[-1]
        sizes.append(draw(st.sampled_from([k for k in range(max(max_points - prev, 0) + 2) if (prev + k) % 2 == 0])))
    return [draw(diagrams(a, b, max_points)) for a, b in zip(sizes, sizes[1:])]


def naive_compose(f: BrauerDiagram, g: BrauerDiagram) -> BrauerDiagram:
    """Glue ``f`` on top of ``g`` as a graph and read off its components.

    Nodes are ``('f', i)`` and ``('g', j)``; an edge joins each pair of
    each diagram and each target of ``f`` to the matching source of ``g``.
    """
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for a, b in f.pairs:
        union(("f", a), ("f", b))
    for a, b in g.pairs:
        union(("g", a), ("g", b))
    for k in range(f.n):
        union(("f", f.m + k), ("g", k))
    outer = [("f", i) for i in range(f.m)] + [("g", g.m + j) for j in range(g.n)]
    groups = {}
    for idx, node in enumerate(outer):
        groups.setdefault(find(node), []).append(idx)
    pairs = tuple(tuple(v) for v in groups.values())
    roots = {find(("f", f.m + k)) for k in range(f.n)}
    loops = len(roots - set(groups))
    return BrauerDiagram(f.m, g.n, pairs, f.closed + g.closed + loops)
