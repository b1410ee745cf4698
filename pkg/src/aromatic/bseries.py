"""Elementary differentials of polynomial vector fields, exactly over QQ.

Trees use the recursive rule F(•) = f, F(τ) = f^(k)(F(τ1), ..., F(τk)).
Aromas and aromatic trees use the graph rule: every vertex v carries a
component f^{a_v}, every arc u -> v differentiates the factor of v by
∂_{a_u}, and all indices are summed except the root index of a tree.  The
graph rule applied to trees gives an independent cross-check of the
recursion.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from sympy import QQ, sympify
from sympy.polys.rings import ring

from .errors import DomainError, IncompleteCoefficientsError
from .linalg import LinComb
from .operad import div, unlabelled_div0_matrix
from .species import (
    Aroma,
    AromaticForest,
    RootedTree,
    enumerate_unlabelled,
    from_code,
    parse_code,
    symmetry_order,
)


def poly_ring(d: int, with_h: bool = False):
    """Polynomial ring QQ[y1..yd] (and h); returns (ring, y generators, h or None)."""
    if d < 1:
        raise DomainError("dimension must be at least 1")
    names = [f"y{i}" for i in range(1, d + 1)] + (["h"] if with_h else [])
    R, *gens = ring(",".join(names), QQ)
    if with_h:
        return R, tuple(gens[:-1]), gens[-1]
    return R, tuple(gens), None


@dataclass(frozen=True)
class PolyVectorField:
    ring: object
    ys: tuple
    components: tuple

    @property
    def dim(self) -> int:
        return len(self.components)

    def __add__(self, other):
        return PolyVectorField(self.ring, self.ys, tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c):
        return PolyVectorField(self.ring, self.ys, tuple(c * a for a in self.components))

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def divergence(self):
        return sum((comp.diff(y) for comp, y in zip(self.components, self.ys)), self.ring.zero)

    def evaluate(self, point) -> tuple:
        return tuple(_evaluate(c, self.ys, point) for c in self.components)

    def in_ring(self, ring_, ys):
        return PolyVectorField(ring_, ys, tuple(c.set_ring(ring_) for c in self.components))

    def __str__(self):
        return "(" + ", ".join(str(c.as_expr()) for c in self.components) + ")"


def _evaluate(poly, ys, point):
    value = poly.evaluate([(y, QQ(Fraction(v).numerator, Fraction(v).denominator)) for y, v in zip(ys, point)])
    if hasattr(value, "ring"):
        return value
    return Fraction(int(value.numerator), int(value.denominator))


def vector_field(components, d: int | None = None) -> PolyVectorField:
    """Build a field from sympy expressions or strings in y1..yd."""
    d = d or len(components)
    R, ys, _ = poly_ring(d)
    return PolyVectorField(R, ys, tuple(R(sympify(c)) for c in components))


def linear_field(matrix) -> PolyVectorField:
    d = len(matrix)
    R, ys, _ = poly_ring(d)
    comps = tuple(sum((QQ(Fraction(a).numerator, Fraction(a).denominator) * y for a, y in zip(row, ys)), R.zero) for row in matrix)
    return PolyVectorField(R, ys, comps)


def random_field(d: int, degree: int, seed: int = 0) -> PolyVectorField:
    """Dense polynomial field: every monomial of degree ≤ degree gets a nonzero
    coefficient drawn from {-3..3} by a seeded generator."""
    rng = random.Random(seed)
    R, ys, _ = poly_ring(d)
    monomials = [m for m in itertools.product(range(degree + 1), repeat=d) if sum(m) <= degree]
    comps = []
    for _ in range(d):
        p = R.zero
        for m in monomials:
            c = rng.choice((-3, -2, -1, 1, 2, 3))
            term = R.one
            for y, e in zip(ys, m):
                term *= y**e
            p += c * term
        comps.append(p)
    return PolyVectorField(R, ys, tuple(comps))


# ---------------------------------------------------------------------------
# trees: recursive rule

def _apply_derivative(g, f: PolyVectorField, children: list):
    """Σ over indices of (Π children[i]^{a_i}) ∂_{a_1}..∂_{a_k} g."""
    if not children:
        return g
    head, rest = children[0], children[1:]
    total = f.ring.zero
    for a, y in enumerate(f.ys):
        if head[a]:
            total += head[a] * _apply_derivative(g.diff(y), f, rest)
    return total


def _tree_differential(node, f: PolyVectorField) -> tuple:
    kids = [_tree_differential(k, f) for k in node]
    return tuple(_apply_derivative(comp, f, kids) for comp in f.components)


def elementary_differential_tree(code: str, f: PolyVectorField) -> PolyVectorField:
    kind, node = parse_code(code)
    if kind != "tree":
        raise DomainError(f"{code!r} is not a tree code")
    return PolyVectorField(f.ring, f.ys, _tree_differential(node, f))


# ---------------------------------------------------------------------------
# general graph rule

def _graph_terms(succ: dict, f: PolyVectorField, free=None):
    """Sum over index assignments of Π_v ∂_{a_u : u -> v} f^{a_v}.

    With ``free`` a vertex, returns a tuple indexed by its index value.
    """
    vertices = list(succ)
    preds = {v: [u for u in vertices if succ[u] == v] for v in vertices}
    d = f.dim
    derivs = {}

    def factor(a_v, idxs):
        key = (a_v, idxs)
        if key not in derivs:
            p = f.components[a_v]
            for i in idxs:
                p = p.diff(f.ys[i])
            derivs[key] = p
        return derivs[key]

    out = [f.ring.zero] * d
    for assignment in itertools.product(range(d), repeat=len(vertices)):
        a = dict(zip(vertices, assignment))
        term = f.ring.one
        for v in vertices:
            term *= factor(a[v], tuple(sorted(a[u] for u in preds[v])))
            if not term:
                break
        if term:
            out[a[free] if free is not None else 0] += term
    return tuple(out) if free is not None else out[0]


def graph_differential(obj, f: PolyVectorField):
    """Graph rule on a labelled tree (vector), aroma (scalar) or aromatic forest."""
    if isinstance(obj, AromaticForest):
        if len(obj.trees) > 1:
            raise DomainError("aromatic trees have at most one tree component")
        scalar = f.ring.one
        for m in obj.aromas:
            scalar *= graph_differential(m, f)
        if not obj.trees:
            return scalar
        vec = graph_differential(obj.trees[0], f)
        return vec.scale(scalar)
    if isinstance(obj, Aroma):
        return _graph_terms(obj.succ, f)
    if isinstance(obj, RootedTree):
        return PolyVectorField(f.ring, f.ys, _graph_terms(obj.succ, f, free=obj.root))
    raise DomainError(f"no elementary differential for {obj!r}")


def elementary_differential_aroma(code: str, f: PolyVectorField):
    kind, _ = parse_code(code)
    if kind != "aroma":
        raise DomainError(f"{code!r} is not an aroma code")
    return graph_differential(from_code(code), f)


def elementary_differential_aromatic_tree(forest, f: PolyVectorField) -> PolyVectorField:
    """Product of the aroma scalars times the tree vector field."""
    if isinstance(forest, str):
        forest = from_code(forest)
    if not isinstance(forest, AromaticForest) or len(forest.trees) != 1:
        raise DomainError("an aromatic tree has exactly one tree component")
    return graph_differential(forest, f)


def divergence_closings(code: str, f: PolyVectorField):
    """Σ over closings root -> v (all v) of the aroma differentials."""
    t = from_code(code)
    total = f.ring.zero
    for aroma, c in div(t).items():
        total += int(c) * graph_differential(aroma, f)
    return total


def check_divergence_identity(code: str, f: PolyVectorField) -> bool:
    """Div(F(τ)) equals the sum of F(α) over the closings α of τ."""
    lhs = elementary_differential_tree(code, f).divergence()
    return lhs == divergence_closings(code, f)


# ---------------------------------------------------------------------------
# B-series

def modified_field(b: dict, f: PolyVectorField, order: int) -> PolyVectorField:
    """Σ_{|τ| ≤ order} h^(|τ|-1) b(τ)/σ(τ) F(τ), in QQ[y, h]."""
    R, ys, h = poly_ring(f.dim, with_h=True)
    g = f.in_ring(R, ys)
    comps = [R.zero] * f.dim
    for n in range(1, order + 1):
        for code in enumerate_unlabelled("tree", n):
            if code not in b:
                raise IncompleteCoefficientsError(f"missing coefficient for tree {code}")
            coeff = Fraction(b[code]) / symmetry_order(code)
            if not coeff:
                continue
            F = elementary_differential_tree(code, g)
            scale = QQ(coeff.numerator, coeff.denominator) * h ** (n - 1)
            comps = [c + scale * x for c, x in zip(comps, F.components)]
    return PolyVectorField(R, ys, tuple(comps))


def volume_obstruction(b: dict, max_order: int) -> dict:
    """Order-by-order reduced divergence Σ b(τ)/σ(τ) Div₀(τ) on unlabelled aromas⁺.

    Missing coefficients count as zero.  Orders with zero obstruction are
    omitted from the result.
    """
    out = {}
    for n in range(1, max_order + 1):
        m = unlabelled_div0_matrix(n)
        total = LinComb()
        for j, code in enumerate(m.cols):
            coeff = Fraction(b.get(code, 0)) / symmetry_order(code)
            if coeff:
                total += m.column(j) * coeff
        if total:
            out[n] = total
    return out


def exact_flow_coefficients(order: int) -> dict:
    return {code: Fraction(1 if n == 1 else 0) for n in range(1, order + 1) for code in enumerate_unlabelled("tree", n)}
