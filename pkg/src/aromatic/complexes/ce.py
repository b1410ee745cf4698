"""Chevalley-Eilenberg complexes of the dg Lie algebras RT -> Cyc(RT) (variant L)
and RT -> Cyc⁺(RT) (variant Ltilde), built from Div and Div₀ respectively.

A basis element in arity n is an aromatic forest on 1..n: its tree
components are the (odd, suspended) tree factors, its aromas the (even)
module factors.  Homological degree = number of trees.
"""

from __future__ import annotations

from functools import partial

from ..errors import DomainError
from ..linalg import BasisIndex, ChainComplex, LinComb, matrix_of_map
from ..operad import div, div0, lie_bracket, module_action
from ..species import AromaticForest, enumerate_partial_maps

VARIANTS = {"L": False, "Ltilde": True, "L̃": True, "L~": True}


def is_reduced(variant: str) -> bool:
    try:
        return VARIANTS[variant]
    except KeyError:
        raise DomainError(f"unknown CE variant {variant!r}; use L or Ltilde") from None


def ce_basis(n: int, reduced: bool) -> dict:
    """Forests on 1..n grouped by number of trees; loops excluded when reduced."""
    if n < 1:
        raise DomainError("arity must be at least 1")
    by_degree = {p: [] for p in range(n + 1)}
    for succ in enumerate_partial_maps(range(1, n + 1)):
        if reduced and any(v == s for v, s in succ.items()):
            continue
        f = AromaticForest.from_partial_map(succ)
        by_degree[f.degree].append(f)
    return {p: sorted(fs, key=lambda f: f.sort_key) for p, fs in by_degree.items()}


def ce_differential(forest: AromaticForest, reduced: bool) -> LinComb:
    """d = d1 + d2 on a forest whose trees are in canonical order.

    d1 replaces tree i by its (reduced) divergence with sign (-1)^(i-1).
    d2 brackets trees i<j with sign (-1)^(i+j-1), placing the bracket in
    front, and lets tree i act on an aroma: the tree acts on the left by
    g(m) = -m◂g, so that term carries -(-1)^(i-1).
    """
    trees = forest.trees
    aromas = list(forest.aromas)
    closing = div0 if reduced else div
    out = LinComb()
    for a, t in enumerate(trees):
        rest = trees[:a] + trees[a + 1:]
        sign = -1 if a % 2 else 1
        for m, c in closing(t).items():
            out.add_term(AromaticForest._trusted(rest, aromas + [m]), sign * c)
        for k, m0 in enumerate(aromas):
            for m, c in module_action(m0, t).items():
                out.add_term(AromaticForest._trusted(rest, aromas[:k] + [m] + aromas[k + 1:]), -sign * c)
    for a in range(len(trees)):
        for b in range(a + 1, len(trees)):
            sign = 1 if (a + b) % 2 else -1
            rest = tuple(t for i, t in enumerate(trees) if i not in (a, b))
            for t, c in lie_bracket(trees[a], trees[b]).items():
                f, s = AromaticForest._trusted((t,) + rest, aromas).canonical()
                out.add_term(f, sign * s * c)
    return out


def build_ce_complex(variant: str, n: int, mapper=map, check: bool = True) -> ChainComplex:
    reduced = is_reduced(variant)
    basis = ce_basis(n, reduced)
    name = "Ltilde" if reduced else "L"
    bases = {p: BasisIndex(fs, f"CE({name})({n})_{p}") for p, fs in basis.items()}
    image = partial(ce_differential, reduced=reduced)
    diffs = {p: matrix_of_map(bases[p], bases[p - 1], image, mapper) for p in range(1, n + 1)}
    c = ChainComplex(bases, diffs, name=f"CE({name})({n})")
    if check:
        c.check()
    return c
