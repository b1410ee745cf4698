"""Operadic compositions of trees and aromas, pre-Lie and module operations,
divergence maps, cyclic braces and Lie-element tests.

Colours: every vertex of a rooted tree or aroma is an o-coloured input; the
root of a :class:`MarkedTree` is the single m-coloured input.  Rooted trees
have output colour o; marked trees and aromas have output colour m.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial, lcm

from .errors import ColourError, DomainError, UnsupportedInputError
from .linalg import BasisIndex, Echelon, LinComb, SparseRationalMatrix, matrix_of_map
from .species import (
    Aroma,
    MarkedTree,
    RootedTree,
    code_size,
    enumerate_aromas,
    enumerate_rooted_trees,
    enumerate_unlabelled,
    from_code,
    label_key,
    symmetry_order,
)


def _output_colour(x) -> str:
    if isinstance(x, (MarkedTree, Aroma)):
        return "m"
    if isinstance(x, RootedTree):
        return "o"
    raise DomainError(f"cannot compose {x!r}")


def _slot_colour(outer, star) -> str:
    if isinstance(outer, MarkedTree) and star == outer.root:
        return "m"
    return "o"


def _check_disjoint(*objs):
    seen = set()
    for o in objs:
        vs = set(o.vertices)
        if seen & vs:
            raise DomainError(f"label clash: {sorted(seen & vs, key=label_key)}")
        seen |= vs


def _as_lincomb(x) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.basis(x)


def _bilinear(fn):
    def wrapped(a, b):
        if not isinstance(a, LinComb) and not isinstance(b, LinComb):
            return fn(a, b)
        out = LinComb()
        for ka, ca in _as_lincomb(a).items():
            for kb, cb in _as_lincomb(b).items():
                out += fn(ka, kb) * (ca * cb)
        return out

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


def _linear(fn):
    def wrapped(x):
        if not isinstance(x, LinComb):
            return fn(x)
        out = LinComb()
        for k, c in x.items():
            out += fn(k) * c
        return out

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


def compose_at(outer, star, inner) -> LinComb:
    """Substitute ``inner`` into vertex ``star`` of ``outer``.

    The edges entering ``star`` are reattached to the vertices of ``inner`` in
    all possible ways; the root of ``inner`` takes over the outgoing edge of
    ``star``.  A loop at ``star`` counts as both an incoming and the outgoing
    edge, so it becomes an edge from the inner root to any inner vertex.
    """
    if not isinstance(outer, (RootedTree, Aroma)):
        raise DomainError(f"cannot compose into {outer!r}")
    if star not in outer.succ:
        raise DomainError(f"{star!r} is not a vertex of {outer}")
    slot, out = _slot_colour(outer, star), _output_colour(inner)
    if slot != out:
        raise ColourError(f"cannot insert an {out}-output into an {slot}-coloured slot at {star!r}")
    rest = {v: s for v, s in outer.succ.items() if v != star}
    clash = set(rest) & set(inner.vertices)
    if clash:
        raise DomainError(f"label clash: {sorted(clash, key=label_key)}")

    target = outer.succ[star]
    incoming = [u for u in outer.preds[star] if u != star]
    inner_succ = dict(inner.succ)
    inner_root = None if isinstance(inner, Aroma) else inner.root
    if inner_root is not None:
        if target == star:
            incoming.append(inner_root)
        else:
            inner_succ[inner_root] = target

    if isinstance(outer, Aroma) or isinstance(inner, Aroma):
        cls = Aroma
    elif isinstance(outer, MarkedTree):
        cls = MarkedTree
    else:
        cls = RootedTree

    result = LinComb()
    vertices = inner.vertices
    for choice in itertools.product(vertices, repeat=len(incoming)):
        succ = {**rest, **inner_succ}
        for u, v in zip(incoming, choice):
            succ[u] = v
        result.add_term(cls._trusted(succ), 1)
    return result


@_bilinear
def prelie(a: RootedTree, b: RootedTree) -> LinComb:
    """a ◁ b: graft the root of b as a new child of each vertex of a."""
    if type(a) is not RootedTree or type(b) is not RootedTree:
        raise DomainError("pre-Lie product is defined on rooted trees")
    _check_disjoint(a, b)
    out = LinComb()
    base = {**a.succ, **b.succ}
    for v in a.vertices:
        succ = dict(base)
        succ[b.root] = v
        out.add_term(RootedTree._trusted(succ), 1)
    return out


def lie_bracket(a, b) -> LinComb:
    """[a, b] = a ◁ b − b ◁ a."""
    return prelie(a, b) - prelie(b, a)


@_bilinear
def module_action(m, a: RootedTree) -> LinComb:
    """m ◂ a: graft the root of a at each vertex of an aroma or marked tree m."""
    if not isinstance(m, (Aroma, MarkedTree)):
        raise DomainError("module action needs an aroma or a marked tree on the left")
    if type(a) is not RootedTree:
        raise DomainError("module action needs a rooted tree on the right")
    _check_disjoint(m, a)
    out = LinComb()
    base = {**m.succ, **a.succ}
    cls = type(m)
    for v in m.vertices:
        succ = dict(base)
        succ[a.root] = v
        out.add_term(cls._trusted(succ), 1)
    return out


def _closings(t: RootedTree, include_root: bool) -> LinComb:
    if type(t) is not RootedTree:
        raise DomainError("divergence is defined on rooted trees")
    out = LinComb()
    for v in t.vertices:
        if v == t.root and not include_root:
            continue
        succ = dict(t.succ)
        succ[t.root] = v
        out.add_term(Aroma._trusted(succ), 1)
    return out


@_linear
def div(t: RootedTree) -> LinComb:
    """Sum over all vertices v of the aroma obtained by adding the arc root → v."""
    return _closings(t, True)


def tau(t: RootedTree) -> Aroma:
    """Close the root into a loop."""
    if type(t) is not RootedTree:
        raise DomainError("tau is defined on rooted trees")
    succ = dict(t.succ)
    succ[t.root] = t.root
    return Aroma._trusted(succ)


@_linear
def div0(t: RootedTree) -> LinComb:
    """Reduced divergence: closings root → v with v different from the root."""
    return _closings(t, False)


def phi(t) -> LinComb:
    """The tadpole operation, i.e. composition into the one-vertex loop."""
    return div(t)


def cyclic_brace(args) -> LinComb:
    """⟨a1,…,an⟩ via ⟨a1⟩ = Div(a1) and
    ⟨a1..a(n+1)⟩ = Σ_k ⟨..., a_k ◁ a(n+1), ...⟩ − ⟨a1..an⟩ ◂ a(n+1).

    Arguments are trees or linear combinations of trees (multilinear).
    """
    args = [_as_lincomb(a) for a in args]
    if not args:
        raise DomainError("cyclic brace needs at least one argument")
    out = LinComb()
    for combo in itertools.product(*(a.items() for a in args)):
        trees = tuple(t for t, _ in combo)
        _check_disjoint(*trees)
        coeff = 1
        for _, c in combo:
            coeff *= c
        out += _brace(trees) * coeff
    return out


@lru_cache(maxsize=4096)
def _brace_cached(trees: tuple) -> tuple:
    if len(trees) == 1:
        return tuple(div(trees[0]).items())
    *head, last = trees
    out = LinComb()
    for k in range(len(head)):
        for t, c in prelie(head[k], last).items():
            out += LinComb(_brace_cached(tuple(head[:k]) + (t,) + tuple(head[k + 1:]))) * c
    out -= module_action(LinComb(_brace_cached(tuple(head))), last)
    return tuple(out.items())


def _brace(trees: tuple) -> LinComb:
    return LinComb(_brace_cached(trees))


def cycle_symmetrization(labels) -> LinComb:
    """Sum of all directed cycles through the given labels (each cyclic order once)."""
    labels = sorted(labels, key=label_key)
    out = LinComb()
    first, rest = labels[0], labels[1:]
    for perm in itertools.permutations(rest):
        order = (first,) + perm
        out.add_term(Aroma._trusted({a: b for a, b in zip(order, order[1:] + order[:1])}), 1)
    return out


# ---------------------------------------------------------------------------
# the suboperad generated by ◁, ◂ and the tadpole

@lru_cache(maxsize=None)
def _span_basis(n: int) -> tuple:
    """A basis (as tuples of items) of the m-coloured, input-free component on 1..n.

    V(I) is spanned by Div(T) for T a tree on I and by V(J) ◂ T' for proper
    non-empty J ⊂ I and T' a tree on I \\ J.  Iterated right actions are
    covered because V(J) already contains them.
    """
    labels = tuple(range(1, n + 1))
    aromas = enumerate_aromas(labels)
    index = {a: i for i, a in enumerate(aromas)}
    ech = Echelon(track=False)
    basis = []

    def offer(lc: LinComb):
        vec = {}
        for k, c in lc.items():
            vec[index[k]] = int(c)
        if ech.add(vec) is None:
            basis.append(tuple(lc.items()))

    for t in enumerate_rooted_trees(labels):
        offer(div(t))
    for size in range(1, n):
        sub_basis = _span_basis(size)
        for J in itertools.combinations(labels, size):
            rename = dict(zip(range(1, size + 1), J))
            rest = [v for v in labels if v not in J]
            trees = enumerate_rooted_trees(rest)
            for items in sub_basis:
                m = LinComb({k.relabel(rename): c for k, c in items})
                for t in trees:
                    offer(module_action(m, t))
    return tuple(basis)


def suboperad_span(n: int) -> list:
    """Basis of the span inside Aroma(1..n) generated by ◁, ◂ and the tadpole."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return [LinComb(items) for items in _span_basis(n)]


def suboperad_span_dimension(n: int) -> int:
    return len(suboperad_span(n))


def in_span(basis: list, x: LinComb) -> bool:
    """Exact membership test of x in the span of ``basis``."""
    return span_membership(basis, [x])[0]


def span_membership(basis: list, xs: list) -> list:
    """Membership flags of every element of ``xs`` in the span of ``basis``."""
    keys = {}
    ech = Echelon(track=False)
    for b in basis:
        ech.add(_int_vec(b, keys))
    return [not ech.reduce(_int_vec(x, keys))[0] for x in xs]


def _int_vec(x: LinComb, keys: dict) -> dict:
    den = 1
    for c in x.terms.values():
        den = lcm(den, c.denominator)
    out = {}
    for k, c in x.items():
        i = keys.setdefault(k, len(keys))
        out[i] = int(c * den)
    return out


# ---------------------------------------------------------------------------
# Lie elements

def lie_basis(n: int) -> list:
    """Left-normed brackets [..[[•1, •σ2], •σ3].., •σn] for σ permuting 2..n.

    Brackets sharing a prefix are computed once (depth-first over prefixes);
    the output follows the lexicographic order of σ.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    dots = {i: LinComb.basis(RootedTree.single(i)) for i in range(1, n + 1)}
    out = []

    def extend(x, rest):
        if not rest:
            out.append(x)
            return
        for i in rest:
            extend(lie_bracket(x, dots[i]), tuple(j for j in rest if j != i))

    extend(dots[1], tuple(range(2, n + 1)))
    return out


def sym(a: Aroma):
    """Forget the cyclic order of an aroma: the multiset of its hanging trees."""
    return tuple(sorted((a.hanging_tree(c) for c in a.cycle), key=lambda t: label_key(t.min_label)))


def _check_multilinear(x: LinComb):
    labels = None
    for k in x:
        if type(k) is not RootedTree:
            raise UnsupportedInputError(f"{k!r} is not a rooted tree")
        vs = frozenset(k.vertices)
        if labels is None:
            labels = vs
        elif vs != labels:
            raise UnsupportedInputError("terms use different label sets; only multilinear input is supported")


def is_lie_element(x, criterion: str = "div0") -> bool:
    """Membership of a multilinear tree combination in the Lie suboperad.

    ``div0`` tests Div₀(x) = 0; ``sym∘div0`` tests that the image vanishes
    after forgetting cyclic orders.
    """
    x = _as_lincomb(x)
    _check_multilinear(x)
    image = div0(x)
    if criterion == "div0":
        return not image
    if criterion in ("sym∘div0", "sym-div0", "sym"):
        return not image.map_keys(lambda a: (sym(a), 1))
    raise DomainError(f"unknown criterion {criterion!r}")


# ---------------------------------------------------------------------------
# matrices

def div_matrix(n: int, reduced: bool = False) -> SparseRationalMatrix:
    labels = range(1, n + 1)
    dom = BasisIndex(enumerate_rooted_trees(labels), f"RT({n})")
    cod = BasisIndex(enumerate_aromas(labels, 2 if reduced else 1), f"Cyc({n})")
    return matrix_of_map(dom, cod, div0 if reduced else div)


def unlabelled_div0_matrix(n: int) -> SparseRationalMatrix:
    """Reduced divergence on unlabelled trees of size n into unlabelled aromas⁺.

    The column of a tree class is the sum over closings root → v (v ≠ root)
    of one labelled representative, read off as unlabelled codes; this is the
    image of the orbit sum divided by the orbit size.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    dom = BasisIndex(enumerate_unlabelled("tree", n), f"RT(•)_{n}")
    cod = BasisIndex(enumerate_unlabelled("aroma+", n) if n >= 2 else [], f"Cyc+(•)_{n}")

    def image(code):
        return div0(from_code(code)).map_keys(lambda a: (a.code, 1))

    return matrix_of_map(dom, cod, image)


def orbit_size(code: str) -> int:
    return factorial(code_size(code)) // symmetry_order(code)
