"""Exhaustive algebraic identity checks on small components.

Each function returns a list of (description, passed) pairs so that both the
test-suite and the ``verify properties`` report can use them.
"""

from __future__ import annotations

import itertools
import random

from .linalg import LinComb
from .operad import (
    compose_at,
    cycle_symmetrization,
    cyclic_brace,
    div,
    lie_bracket,
    module_action,
    prelie,
)
from .species import Aroma, MarkedTree, RootedTree, enumerate_aromas, enumerate_rooted_trees


def compose_lin(x, star, y) -> LinComb:
    """compose_at extended bilinearly to linear combinations."""
    xs = x.items() if isinstance(x, LinComb) else [(x, 1)]
    ys = y.items() if isinstance(y, LinComb) else [(y, 1)]
    out = LinComb()
    for kx, cx in xs:
        for ky, cy in ys:
            out += compose_at(kx, star, ky) * (cx * cy)
    return out


def small_components(labels) -> list:
    """All trees, marked trees and aromas on the given labels."""
    labels = list(labels)
    trees = enumerate_rooted_trees(labels)
    marked = [MarkedTree._trusted(t.succ) for t in trees]
    return trees + marked + enumerate_aromas(labels)


def _components_up_to(start: int, size: int) -> list:
    out = []
    for k in range(1, size + 1):
        out += small_components(range(start, start + k))
    return out


def _output(x) -> str:
    return "m" if isinstance(x, (MarkedTree, Aroma)) else "o"


def _slot(x, v) -> str:
    return "m" if isinstance(x, MarkedTree) and v == x.root else "o"


def check_associativity(max_size: int = 2) -> list:
    """Sequential and parallel associativity of compose_at."""
    xs = _components_up_to(1, max_size)
    ys = _components_up_to(11, max_size)
    zs = _components_up_to(21, max_size)
    seq_ok = par_ok = True
    seq_count = par_count = 0
    for x in xs:
        for a in x.vertices:
            for y in ys:
                if _slot(x, a) != _output(y):
                    continue
                xy = compose_at(x, a, y)
                for b in y.vertices:
                    for z in zs:
                        if _slot(y, b) != _output(z):
                            continue
                        seq_count += 1
                        if compose_lin(xy, b, z) != compose_lin(x, a, compose_at(y, b, z)):
                            seq_ok = False
                for b in x.vertices:
                    if b == a:
                        continue
                    for z in zs:
                        if _slot(x, b) != _output(z):
                            continue
                        par_count += 1
                        if compose_lin(xy, b, z) != compose_lin(compose_at(x, b, z), a, y):
                            par_ok = False
    return [
        (f"sequential associativity on {seq_count} triples", seq_ok and seq_count > 0),
        (f"parallel associativity on {par_count} triples", par_ok and par_count > 0),
    ]


def check_equivariance(max_size: int = 2, seed: int = 0) -> list:
    """compose_at commutes with relabelling bijections."""
    rng = random.Random(seed)
    xs = _components_up_to(1, max_size)
    ys = _components_up_to(11, max_size)
    ok, count = True, 0
    for x in xs:
        for a in x.vertices:
            for y in ys:
                if _slot(x, a) != _output(y):
                    continue
                labels = [v for v in x.vertices if v != a] + list(y.vertices) + [a]
                targets = list(range(100, 100 + len(labels)))
                rng.shuffle(targets)
                g = dict(zip(labels, targets))
                lhs = compose_at(x.relabel(g), g[a], y.relabel(g))
                rhs = compose_at(x, a, y).map_keys(lambda k: (k.relabel(g), 1))
                count += 1
                if lhs != rhs:
                    ok = False
    return [(f"equivariance of composition on {count} pairs", ok)]


def _trees_up_to(start: int, size: int) -> list:
    out = []
    for k in range(1, size + 1):
        out += enumerate_rooted_trees(range(start, start + k))
    return out


def check_prelie_identity(max_size: int = 2) -> list:
    ok, count = True, 0
    for a in _trees_up_to(1, max_size):
        for b in _trees_up_to(11, max_size):
            for c in _trees_up_to(21, max_size):
                lhs = prelie(prelie(a, b), c) - prelie(a, prelie(b, c))
                rhs = prelie(prelie(a, c), b) - prelie(a, prelie(c, b))
                count += 1
                ok &= lhs == rhs
    return [(f"pre-Lie identity on {count} triples", ok)]


def check_module_identity(max_size: int = 2) -> list:
    ok, count = True, 0
    ms = [m for m in _components_up_to(1, max_size) if isinstance(m, (Aroma, MarkedTree))]
    for m in ms:
        for a1 in _trees_up_to(11, max_size):
            for a2 in _trees_up_to(21, max_size):
                lhs = module_action(module_action(m, a1), a2) - module_action(m, prelie(a1, a2))
                rhs = module_action(module_action(m, a2), a1) - module_action(m, prelie(a2, a1))
                count += 1
                ok &= lhs == rhs
    return [(f"right-module identity on {count} triples", ok)]


def check_cocycle_identity(max_total: int = 3) -> list:
    """φ([a,b]) = φ(a)◂b − φ(b)◂a, φ = composition into the tadpole."""
    ok, count = True, 0
    for ka in range(1, max_total):
        for kb in range(1, max_total - ka + 1):
            for a in enumerate_rooted_trees(range(1, ka + 1)):
                for b in enumerate_rooted_trees(range(11, 11 + kb)):
                    tadpole = Aroma._trusted({0: 0})
                    lhs = compose_lin(tadpole, 0, lie_bracket(a, b))
                    rhs = module_action(div(a), b) - module_action(div(b), a)
                    count += 1
                    ok &= lhs == rhs
    return [(f"tadpole 1-cocycle identity on {count} pairs", ok)]


def check_jacobi() -> list:
    x, y, z = (RootedTree.single(i) for i in (1, 2, 3))
    total = (
        lie_bracket(lie_bracket(x, y), LinComb.basis(z))
        + lie_bracket(lie_bracket(y, z), LinComb.basis(x))
        + lie_bracket(lie_bracket(z, x), LinComb.basis(y))
    )
    return [("Jacobi identity on three single vertices", total == 0)]


def check_brace_symmetrization(max_n: int = 5) -> list:
    out = []
    for n in range(1, max_n + 1):
        args = [RootedTree.single(i) for i in range(1, n + 1)]
        out.append((f"cyclic brace of {n} single vertices is the full cycle symmetrization",
                    cyclic_brace(args) == cycle_symmetrization(range(1, n + 1))))
    return out


def brace_cycle_split(trees) -> tuple:
    """Split ⟨T1..Ts⟩ into (length-s part, expected cyclic-order sum, longer part, shorter part)."""
    s = len(trees)
    brace = cyclic_brace(trees)
    base = {}
    for t in trees:
        base.update(t.succ)
    expected = LinComb()
    first, rest = trees[0], trees[1:]
    for perm in itertools.permutations(rest):
        order = (first,) + perm
        succ = dict(base)
        for x, y in zip(order, order[1:] + order[:1]):
            succ[x.root] = y.root
        expected.add_term(Aroma._trusted(succ), 1)
    exact = LinComb({a: c for a, c in brace.items() if a.cycle_length == s})
    longer = LinComb({a: c for a, c in brace.items() if a.cycle_length > s})
    shorter = LinComb({a: c for a, c in brace.items() if a.cycle_length < s})
    return exact, expected, longer, shorter


def check_brace_cyclic_orders(max_vertices: int = 5) -> list:
    """⟨T1..Ts⟩ = (sum over cyclic orders) + (cycles longer than s), for small forests."""
    ok, count = True, 0
    for sizes in [(1, 2), (2, 1), (2, 2), (1, 1, 2), (2, 1, 1), (3, 1), (1, 3), (1, 2, 2)]:
        if sum(sizes) > max_vertices:
            continue
        start = 1
        pools = []
        for k in sizes:
            pools.append(enumerate_rooted_trees(range(start, start + k)))
            start += k
        for trees in itertools.product(*pools):
            exact, expected, _, shorter = brace_cycle_split(list(trees))
            count += 1
            ok &= exact == expected and not shorter
    return [(f"cyclic brace = cyclic orders + longer cycles on {count} forests", ok)]


def all_property_checks() -> list:
    return (
        check_associativity()
        + check_equivariance()
        + check_prelie_identity()
        + check_module_identity()
        + check_cocycle_identity()
        + check_jacobi()
        + check_brace_symmetrization()
        + check_brace_cyclic_orders()
    )
