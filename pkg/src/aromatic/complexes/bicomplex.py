"""The aromatic bicomplex and its divergence-free quotient.

Vertices 1..q are white, q+1..n are black.  A basis element of Ω_{p,q} is an
orbit of aromatic forests with p trees under S_q × S_(n-q), where a
permutation g acts with the forest sign and the character sgn(g restricted
to the whites); orbits on which the character is inconsistent vanish.

d^H adds an arc from the root of the last tree to any vertex (anti-symmetrized
over the tree order); d^V turns a black vertex into the new white q+1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..errors import DomainError, StructureError
from ..linalg import BasisIndex, ChainComplex, LinComb, homology_dimensions, matrix_of_map
from ..species import Aroma, AromaticForest, RootedTree, enumerate_partial_maps, permutation_sign

VARIANTS = {"full": False, "divergence-free": True, "df": True}


def horizontal_differential(forest: AromaticForest, reduced: bool) -> LinComb:
    """Σ_a (-1)^(p-a) Σ_v (arc from the root of tree a to v), on labelled forests.

    Joining tree a to another tree b keeps b at its position; closing tree a
    on itself produces an aroma; loops are dropped in the reduced variant.
    """
    trees = forest.trees
    aromas = list(forest.aromas)
    p = len(trees)
    out = LinComb()
    for a, t in enumerate(trees):
        sign = 1 if (p - 1 - a) % 2 == 0 else -1
        r = t.root
        rest = trees[:a] + trees[a + 1:]
        for v in t.vertices:
            if v == r and reduced:
                continue
            succ = dict(t.succ)
            succ[r] = v
            out.add_term(AromaticForest._trusted(rest, aromas + [Aroma._trusted(succ)]), sign)
        for b, u in enumerate(trees):
            if b == a:
                continue
            for v in u.vertices:
                succ = {**u.succ, **t.succ}
                succ[r] = v
                merged = list(trees)
                merged[b] = RootedTree._trusted(succ)
                del merged[a]
                f, s = AromaticForest._trusted(merged, aromas).canonical()
                out.add_term(f, sign * s)
        for k, m in enumerate(aromas):
            for v in m.vertices:
                succ = {**m.succ, **t.succ}
                succ[r] = v
                new = aromas[:k] + [Aroma._trusted(succ)] + aromas[k + 1:]
                out.add_term(AromaticForest._trusted(rest, new), sign)
    return out


class OrbitProjector:
    """Maps labelled forests with q whites to (orbit representative, sign) or zero."""

    def __init__(self, n: int, q: int, reduced: bool):
        self.n, self.q, self.reduced = n, q, reduced
        whites = list(range(1, q + 1))
        blacks = list(range(q + 1, n + 1))
        self.group = []
        for pw in itertools.permutations(whites):
            chi = permutation_sign([w - 1 for w in pw])
            for pb in itertools.permutations(blacks):
                g = dict(zip(whites, pw))
                g.update(zip(blacks, pb))
                self.group.append((g, chi))
        self.rep_of: dict = {}
        self.reps: list = []
        for succ in enumerate_partial_maps(range(1, n + 1)):
            if reduced and any(v == s for v, s in succ.items()):
                continue
            x = AromaticForest.from_partial_map(succ)
            if x in self.rep_of:
                continue
            self._add_orbit(x)

    def _add_orbit(self, x):
        weight = {}
        zero = False
        for g, chi in self.group:
            y, s = x.permuted(g)
            w = chi * s
            old = weight.get(y)
            if old is None:
                weight[y] = w
            elif old != w:
                zero = True
        if zero:
            for y in weight:
                self.rep_of[y] = (None, 0)
            return
        rep = min(weight, key=lambda f: f.sort_key)
        w0 = weight[rep]
        for y, w in weight.items():
            self.rep_of[y] = (rep, w * w0)
        self.reps.append(rep)

    def project(self, lc: LinComb) -> LinComb:
        out = LinComb()
        for f, c in lc.items():
            try:
                rep, s = self.rep_of[f]
            except KeyError:
                raise StructureError(f"{f} is not a basis forest for q={self.q}") from None
            if s:
                out.add_term(rep, s * c)
        return out


def _blacken_to_white(forest: AromaticForest, q: int, n: int) -> LinComb:
    """Σ over black v of the forest with v renamed q+1 and blacks between shifted up."""
    out = LinComb()
    for v in range(q + 1, n + 1):
        mapping = {v: q + 1}
        for u in range(q + 1, v):
            mapping[u] = u + 1
        f, s = forest.permuted(mapping)
        out.add_term(f, s)
    return out


@dataclass
class AromaticBicomplex:
    n: int
    reduced: bool
    bases: dict = field(default_factory=dict)  # (p, q) -> BasisIndex
    dH: dict = field(default_factory=dict)  # (p, q) -> matrix to (p-1, q)
    dV: dict = field(default_factory=dict)  # (p, q) -> matrix to (p, q+1)

    @property
    def variant(self) -> str:
        return "divergence-free" if self.reduced else "full"

    def horizontal_complex(self, q: int) -> ChainComplex:
        bases = {p: self.bases[(p, q)] for p in range(self.n + 1)}
        diffs = {p: self.dH[(p, q)] for p in range(1, self.n + 1)}
        return ChainComplex(bases, diffs, name=f"Omega(dH, q={q})")

    def vertical_complex(self, p: int) -> ChainComplex:
        # d^V raises q; grade by -q so that it lowers the degree.
        bases = {-q: self.bases[(p, q)] for q in range(self.n + 1)}
        diffs = {-q: self.dV[(p, q)] for q in range(self.n)}
        return ChainComplex(bases, diffs, name=f"Omega(dV, p={p})")

    def horizontal_homology(self) -> dict:
        out = {}
        for q in range(self.n + 1):
            for p, d in homology_dimensions(self.horizontal_complex(q)).items():
                out[(p, q)] = d
        return out

    def vertical_homology(self) -> dict:
        out = {}
        for p in range(self.n + 1):
            for negq, d in homology_dimensions(self.vertical_complex(p)).items():
                out[(p, -negq)] = d
        return out

    def commutator_is_zero(self) -> bool:
        """d^V d^H = d^H d^V on every bidegree."""
        for (p, q), dh in self.dH.items():
            if q + 1 > self.n:
                continue
            left = self.dV[(p - 1, q)] @ dh
            right = self.dH[(p, q + 1)] @ self.dV[(p, q)]
            if left.entries != right.entries:
                return False
        return True

    def check(self) -> None:
        for q in range(self.n + 1):
            self.horizontal_complex(q).check()
        for p in range(self.n + 1):
            self.vertical_complex(p).check()
        if not self.commutator_is_zero():
            raise StructureError("d^H and d^V do not commute")

    def dims(self) -> dict:
        return {k: len(b) for k, b in sorted(self.bases.items())}


def build_aromatic_bicomplex(variant: str, n: int, check: bool = True) -> AromaticBicomplex:
    try:
        reduced = VARIANTS[variant]
    except KeyError:
        raise DomainError(f"unknown bicomplex variant {variant!r}; use full or divergence-free") from None
    if n < 1:
        raise DomainError("n must be at least 1")
    projectors = [OrbitProjector(n, q, reduced) for q in range(n + 1)]
    bc = AromaticBicomplex(n=n, reduced=reduced)
    for q, proj in enumerate(projectors):
        by_p = {p: [] for p in range(n + 1)}
        for rep in proj.reps:
            by_p[rep.degree].append(rep)
        for p, reps in by_p.items():
            bc.bases[(p, q)] = BasisIndex(sorted(reps, key=lambda f: f.sort_key), f"Omega({p},{q})")
    for q, proj in enumerate(projectors):
        for p in range(1, n + 1):
            bc.dH[(p, q)] = matrix_of_map(
                bc.bases[(p, q)], bc.bases[(p - 1, q)], lambda f, pr=proj: pr.project(horizontal_differential(f, reduced))
            )
        if q < n:
            nxt = projectors[q + 1]
            for p in range(n + 1):
                bc.dV[(p, q)] = matrix_of_map(
                    bc.bases[(p, q)], bc.bases[(p, q + 1)], lambda f, q=q, pr=nxt: pr.project(_blacken_to_white(f, q, n))
                )
    if check:
        bc.check()
    return bc


def expected_bicomplex_dimension(trace, n: int, p: int, q: int) -> Fraction:
    """dim of the (S_q × S_(n-q), sgn ⊗ triv)-isotypic part of H_p(CE)(n).

    ``trace(perm, p)`` must return the trace of the relabelling ``perm`` on
    H_p of the labelled CE complex in arity n.
    """
    total = Fraction(0)
    whites = list(range(1, q + 1))
    blacks = list(range(q + 1, n + 1))
    for pw in itertools.permutations(whites):
        chi = permutation_sign([w - 1 for w in pw])
        for pb in itertools.permutations(blacks):
            g = dict(zip(whites, pw))
            g.update(zip(blacks, pb))
            total += chi * trace(g, p)
    return total / (factorial(q) * factorial(n - q))
