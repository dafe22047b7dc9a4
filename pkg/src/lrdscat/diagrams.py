"""Complete diagrams and Gaussian moments of Hermite products.

Level ``i`` holds ``order[i]`` vertices.  A complete diagram pairs every
vertex with one vertex of a different level.  For jointly Gaussian
``Z_1..Z_p`` with unit variances and correlations ``cov``,

    E[prod_i H_{order[i]}(Z_i)] = sum over complete diagrams of
                                  prod over edges (i, k) of cov[i][k].
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotRegular, SizeLimit

MAX_VERTICES = 20


@dataclass(frozen=True)
class Diagram:
    order: tuple
    edges: tuple  # ((level, index), (level, index)) with the first endpoint lower
    edge_counts: tuple  # p x p upper-triangular counts, as nested tuples

    def count(self, i, k):
        i, k = min(i, k), max(i, k)
        return self.edge_counts[i][k]

    @property
    def components(self):
        """Connected components of the level graph, as sorted tuples of levels."""
        p = len(self.order)
        parent = list(range(p))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(p):
            for k in range(i + 1, p):
                if self.edge_counts[i][k]:
                    parent[find(i)] = find(k)
        groups = {}
        for i in range(p):
            groups.setdefault(find(i), []).append(i)
        return sorted(tuple(g) for g in groups.values())

    @property
    def regular(self):
        """True when the levels split into pairs joined only to each other."""
        return all(len(c) == 2 for c in self.components)

    def value(self, cov):
        out = 1.0
        for (i, _), (k, _) in self.edges:
            out = out * cov[i][k]
        return out


@dataclass(frozen=True)
class SubDiagram:
    levels: tuple
    edges: int


def _check_order(order, cap):
    order = tuple(int(x) for x in order)
    if len(order) < 2:
        raise ValueError("a diagram needs at least two levels")
    if any(x < 0 for x in order):
        raise ValueError("level sizes must be nonnegative")
    if sum(order) > cap:
        raise SizeLimit(f"{sum(order)} vertices exceed the cap of {cap}")
    return order


def enumerate_diagrams(order, *, max_vertices=MAX_VERTICES):
    """All complete diagrams, in canonical order (lowest free vertex matched first)."""
    order = _check_order(order, max_vertices)
    if sum(order) % 2:
        return []
    verts = [(i, a) for i, n in enumerate(order) for a in range(n)]
    p = len(order)
    out = []

    def rec(free, edges):
        if not free:
            counts = [[0] * p for _ in range(p)]
            for (i, _), (k, _) in edges:
                counts[i][k] += 1
            out.append(Diagram(order, tuple(edges), tuple(tuple(r) for r in counts)))
            return
        v, rest = free[0], free[1:]
        for idx, u in enumerate(rest):
            if u[0] != v[0]:
                rec(rest[:idx] + rest[idx + 1 :], edges + [(v, u)])

    rec(verts, [])
    return out


def regular_split(d):
    """Level pairs and their edge counts for a regular diagram; ``NotRegular`` otherwise."""
    comps = d.components
    if not all(len(c) == 2 for c in comps):
        raise NotRegular(f"diagram of order {d.order} has level components {comps}")
    return [SubDiagram(c, d.count(*c)) for c in comps]


def hermite_moment(order, cov, *, max_vertices=MAX_VERTICES, check=True):
    """``E[prod H_{order[i]}(Z_i)]`` as a sum over complete diagrams.

    Evaluated by recursion on the remaining vertex counts per level rather
    than by listing diagrams: the first free vertex of the lowest nonempty
    level is paired with each free vertex of every other level.  Exact for
    ``Fraction`` or integer entries of ``cov``.
    """
    order = _check_order(order, max_vertices)
    p = len(order)
    if check:
        c = np.asarray(cov, dtype=float)
        if c.shape != (p, p):
            raise ValueError(f"cov must be {p}x{p}")
        if not np.allclose(c, c.T, atol=1e-12) or not np.allclose(np.diag(c), 1.0, atol=1e-12):
            raise ValueError("cov must be symmetric with unit diagonal")
        if np.linalg.eigvalsh(c).min() < -1e-10:
            raise ValueError("cov must be positive semidefinite")
    if sum(order) % 2:
        return 0
    rows = [list(r) for r in cov]

    @lru_cache(maxsize=None)
    def f(counts):
        i = next((a for a, n in enumerate(counts) if n), None)
        if i is None:
            return 1
        total = 0
        for k in range(p):
            if k != i and counts[k]:
                nxt = list(counts)
                nxt[i] -= 1
                nxt[k] -= 1
                total = total + counts[k] * rows[i][k] * f(tuple(nxt))
        return total

    return f(order)


def count_diagrams(order, *, max_vertices=MAX_VERTICES):
    order = _check_order(order, max_vertices)
    p = len(order)
    ones = [[1] * p for _ in range(p)]
    return int(hermite_moment(order, ones, max_vertices=max_vertices, check=False))


def tally(order, *, max_vertices=MAX_VERTICES):
    """Counts of all, regular and non-regular diagrams."""
    ds = enumerate_diagrams(order, max_vertices=max_vertices)
    reg = sum(d.regular for d in ds)
    return {"order": list(order), "total": len(ds), "regular": reg, "non_regular": len(ds) - reg}
