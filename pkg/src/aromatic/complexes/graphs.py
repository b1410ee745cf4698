"""Complexes of loopless simple graphs with odd edges.

A graph on 1..n is a sorted tuple of edges (i, j), i < j; the edge order is
an orientation, so reordering edges multiplies by the permutation sign.
The differential adds one edge in all possible ways (e ∧ Γ, e placed first);
the homotopy h removes the i-th edge with sign (-1)^(i-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

from ..errors import DomainError
from ..linalg import BasisIndex, ChainComplex, LinComb, matrix_of_map
from ..species import permutation_sign

VARIANTS = ("all", "connected-reduced")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple

    @cached_property
    def sort_key(self):
        return (len(self.edges), self.edges)

    def is_connected(self) -> bool:
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in self.edges:
            parent[find(i)] = find(j)
        return len({find(v) for v in range(1, self.n + 1)}) == 1

    def permuted(self, mapping):
        new = [tuple(sorted((mapping.get(i, i), mapping.get(j, j)))) for i, j in self.edges]
        order = sorted(range(len(new)), key=lambda k: new[k])
        return Graph(self.n, tuple(new[k] for k in order)), permutation_sign(order)

    def __str__(self):
        return f"graph{self.n}[" + ",".join(f"{i}-{j}" for i, j in self.edges) + "]"


def all_edges(n: int) -> list:
    return list(itertools.combinations(range(1, n + 1), 2))


def graph_basis(n: int, connected: bool) -> dict:
    """Graphs on 1..n keyed by homological degree -(number of edges)."""
    if n < 1:
        raise DomainError("arity must be at least 1")
    edges = all_edges(n)
    out = {-k: [] for k in range(len(edges) + 1)}
    for k in range(len(edges) + 1):
        for es in itertools.combinations(edges, k):
            g = Graph(n, es)
            if connected and not g.is_connected():
                continue
            out[-k].append(g)
    return out


def add_edge(g: Graph) -> LinComb:
    out = LinComb()
    present = set(g.edges)
    for e in all_edges(g.n):
        if e in present:
            continue
        below = sum(1 for f in g.edges if f < e)
        out.add_term(Graph(g.n, tuple(sorted(g.edges + (e,)))), -1 if below % 2 else 1)
    return out


def remove_edge(g: Graph) -> LinComb:
    out = LinComb()
    for i, e in enumerate(g.edges):
        out.add_term(Graph(g.n, g.edges[:i] + g.edges[i + 1:]), -1 if i % 2 else 1)
    return out


def build_graph_complex(variant: str, n: int, check: bool = True) -> ChainComplex:
    if variant not in VARIANTS:
        raise DomainError(f"unknown graph complex variant {variant!r}")
    basis = graph_basis(n, variant == "connected-reduced")
    bases = {k: BasisIndex(gs, f"Graphs({n})_{k}") for k, gs in basis.items()}
    diffs = {k: matrix_of_map(bases[k], bases[k - 1], add_edge) for k in bases if k - 1 in bases}
    c = ChainComplex(bases, diffs, name=f"Graphs[{variant}]({n})")
    if check:
        c.check()
    return c


def graph_homotopy_check(n: int) -> bool:
    """Exact check of d h + h d = C(n,2) id on every degree of the full complex."""
    c = build_graph_complex("all", n)
    hs = {}
    for k in c.bases:
        if k + 1 in c.bases:
            hs[k] = matrix_of_map(c.bases[k], c.bases[k + 1], remove_edge)
    scale = comb(n, 2)
    for k, b in c.bases.items():
        total = {}
        if k in c.differentials and k - 1 in hs:
            for key, v in (hs[k - 1] @ c.differentials[k]).entries.items():
                total[key] = total.get(key, 0) + v
        if k in hs and k + 1 in c.differentials:
            for key, v in (c.differentials[k + 1] @ hs[k]).entries.items():
                total[key] = total.get(key, 0) + v
        total = {key: v for key, v in total.items() if v}
        expected = {(i, i): scale for i in range(len(b))} if scale else {}
        if total != expected:
            return False
    return True
