"""Exact linear algebra over the rationals on indexed bases of combinatorial keys.

Elimination is fraction-free: columns are scaled to integer vectors and every
update ``v <- a*v - b*w`` is followed by division by the content, so entries
stay small integers on the sparse 0/+-1 matrices produced by the operad and
complex builders.  Results are deterministic for identical input.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping

from .errors import BasisMismatchError, ComplexInvalidError, DomainError


def _key_order(key):
    sk = getattr(key, "sort_key", None)
    if sk is not None:
        return (0, sk)
    return (1, str(key))


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class LinComb:
    """Finite formal sum of hashable basis keys with nonzero rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable | None = None):
        self.terms: dict = {}
        if terms is None:
            return
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            self.add_term(k, c)

    @classmethod
    def basis(cls, key, coeff=1) -> LinComb:
        out = cls()
        out.add_term(key, coeff)
        return out

    def add_term(self, key, coeff) -> None:
        if not coeff:
            return
        if type(coeff) is not Fraction:
            coeff = Fraction(coeff)
        new = self.terms.get(key, 0) + coeff
        if new:
            self.terms[key] = new
        else:
            del self.terms[key]

    def copy(self) -> LinComb:
        out = LinComb()
        out.terms = dict(self.terms)
        return out

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __iadd__(self, other):
        for k, c in _terms(other):
            self.add_term(k, c)
        return self

    def __add__(self, other):
        out = self.copy()
        out += other
        return out

    __radd__ = __add__

    def __isub__(self, other):
        for k, c in _terms(other):
            self.add_term(k, -c)
        return self

    def __sub__(self, other):
        out = self.copy()
        out -= other
        return out

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = LinComb()
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        out = LinComb()
        if scalar:
            out.terms = {k: c * scalar for k, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if isinstance(other, LinComb):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def map_keys(self, fn: Callable) -> LinComb:
        """Apply ``fn(key) -> (key', sign)`` termwise (sign 0 drops the term)."""
        out = LinComb()
        for k, c in self.terms.items():
            k2, s = fn(k)
            if s:
                out.add_term(k2, s * c)
        return out

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kc: _key_order(kc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (k, c) in enumerate(self.sorted_items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag}*"
            if i == 0:
                parts.append(("-" if c < 0 else "") + f"{coef}{k}")
            else:
                parts.append(f" {sign} {coef}{k}")
        return "".join(parts)

    def __repr__(self):
        return f"LinComb({self})"

    def to_json(self) -> list:
        return [{"key": str(k), "coeff": format_fraction(c)} for k, c in self.sorted_items()]


def _terms(x):
    if isinstance(x, LinComb):
        return list(x.terms.items())
    if isinstance(x, Mapping):
        return list(x.items())
    if x == 0:
        return []
    raise TypeError(f"cannot add {type(x).__name__} to LinComb")


class BasisIndex:
    """Ordered duplicate-free list of keys with reverse lookup."""

    def __init__(self, keys: Iterable, name: str = ""):
        self.keys = tuple(keys)
        self.name = name
        self._pos = {k: i for i, k in enumerate(self.keys)}
        if len(self._pos) != len(self.keys):
            raise DomainError(f"duplicate keys in basis {name!r}")

    def __len__(self):
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def __getitem__(self, i):
        return self.keys[i]

    def __contains__(self, key):
        return key in self._pos

    def index(self, key) -> int:
        try:
            return self._pos[key]
        except KeyError:
            raise BasisMismatchError(f"{key} is not in basis {self.name!r}") from None

    def __repr__(self):
        return f"BasisIndex({self.name!r}, size={len(self)})"


class SparseRationalMatrix:
    """Column-sparse rational matrix between two indexed bases."""

    def __init__(self, rows: BasisIndex, cols: BasisIndex, columns: list | None = None):
        self.rows = rows
        self.cols = cols
        if columns is None:
            columns = [{} for _ in range(len(cols))]
        if len(columns) != len(cols):
            raise DomainError("column count does not match column basis")
        self.columns = [{i: Fraction(c) for i, c in col.items() if c} for col in columns]
        for col in self.columns:
            for i in col:
                if not 0 <= i < len(rows):
                    raise DomainError(f"row index {i} out of range")
        self._rank = None

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    @property
    def entries(self) -> dict:
        return {(i, j): c for j, col in enumerate(self.columns) for i, c in col.items()}

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def column(self, j) -> LinComb:
        return LinComb({self.rows[i]: c for i, c in self.columns[j].items()})

    def to_dense(self) -> list:
        out = [[Fraction(0)] * len(self.cols) for _ in range(len(self.rows))]
        for j, col in enumerate(self.columns):
            for i, c in col.items():
                out[i][j] = c
        return out

    def __matmul__(self, other: SparseRationalMatrix) -> SparseRationalMatrix:
        if len(self.cols) != len(other.rows):
            raise DomainError("shape mismatch in product")
        cols = []
        for col in other.columns:
            acc = {}
            for k, c in col.items():
                for i, a in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + a * c
            cols.append({i: v for i, v in acc.items() if v})
        return SparseRationalMatrix(self.rows, other.cols, cols)

    def apply(self, vec: LinComb) -> LinComb:
        acc = {}
        for k, c in vec.items():
            for i, a in self.columns[self.cols.index(k)].items():
                acc[i] = acc.get(i, 0) + a * c
        out = LinComb()
        out.terms = {self.rows[i]: v for i, v in acc.items() if v}
        return out

    def rank(self) -> int:
        if self._rank is None:
            ech = Echelon(track=False)
            for col in self.columns:
                ech.add(_integer_column(col)[0])
            self._rank = len(ech)
        return self._rank

    def kernel_basis(self) -> list:
        """Integer kernel vectors with content 1 and first nonzero entry positive."""
        ech = Echelon(track=True)
        kernel = []
        for j, col in enumerate(self.columns):
            vec, scale = _integer_column(col)
            rel = ech.add(vec, {j: scale})
            if rel is not None:
                kernel.append(_normalize_relation(rel))
        self._rank = len(ech)
        return [LinComb({self.cols[j]: c for j, c in rel}) for rel in kernel]

    def image_basis(self) -> list:
        """The independent columns, chosen greedily in column order."""
        ech = Echelon(track=False)
        out = []
        for j, col in enumerate(self.columns):
            if ech.add(_integer_column(col)[0]) is None and col:
                out.append(self.column(j))
        return out

    def dump(self) -> str:
        lines = [f"matrix {len(self.rows)} {len(self.cols)}"]
        lines += [f"row {i} {k}" for i, k in enumerate(self.rows)]
        lines += [f"col {j} {k}" for j, k in enumerate(self.cols)]
        for (i, j), c in sorted(self.entries.items()):
            lines.append(f"{i} {j} {format_fraction(c)}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"SparseRationalMatrix({len(self.rows)}x{len(self.cols)}, nnz={self.nnz()})"


def rank(m: SparseRationalMatrix) -> int:
    return m.rank()


def kernel_basis(m: SparseRationalMatrix) -> list:
    return m.kernel_basis()


def image_basis(m: SparseRationalMatrix) -> list:
    return m.image_basis()


def _integer_column(col: Mapping):
    den = 1
    for c in col.values():
        den = lcm(den, Fraction(c).denominator)
    vec = {}
    for i, c in col.items():
        c = Fraction(c) * den
        if c:
            vec[i] = c.numerator
    return vec, den


def _normalize_relation(rel: dict) -> list:
    items = sorted((j, c) for j, c in rel.items() if c)
    g = 0
    for _, c in items:
        g = gcd(g, c)
    sign = -1 if items[0][1] < 0 else 1
    return [(j, sign * c // g) for j, c in items]


class Echelon:
    """Incremental sparse row-echelon form of integer vectors.

    Each stored vector carries an optional tag: a dict recording it as an
    integer combination of the original inputs.  Pivot ``i`` is zero at the
    pivot rows of all earlier pivots, so reduction processes pivots in
    insertion order with a heap.
    """

    def __init__(self, track: bool = True):
        self.track = track
        self.pivot_of_row: dict = {}
        self.vecs: list = []

    def __len__(self):
        return len(self.vecs)

    def reduce(self, vec: dict, tag: dict | None = None):
        """Reduce in place against the stored pivots; returns (vec, tag)."""
        vec = dict(vec)
        tag = dict(tag) if tag is not None else None
        por = self.pivot_of_row
        heap = [por[r] for r in vec if r in por]
        heapq.heapify(heap)
        queued = set(heap)
        while heap:
            i = heapq.heappop(heap)
            r, w, wt = self.vecs[i]
            x = vec.get(r)
            if not x:
                continue
            y = w[r]
            g = gcd(x, y)
            a, b = y // g, x // g
            if a < 0:
                a, b = -a, -b
            if a != 1:
                for k in vec:
                    vec[k] *= a
            for k, c in w.items():
                nv = vec.get(k, 0) - b * c
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
                p = por.get(k)
                if p is not None and p > i and p not in queued:
                    queued.add(p)
                    heapq.heappush(heap, p)
            if tag is not None and wt is not None:
                if a != 1:
                    for k in tag:
                        tag[k] *= a
                for k, c in wt.items():
                    nv = tag.get(k, 0) - b * c
                    if nv:
                        tag[k] = nv
                    else:
                        tag.pop(k, None)
            g = 0
            for c in vec.values():
                g = gcd(g, c)
                if g == 1:
                    break
            if tag is not None and g != 1:
                for c in tag.values():
                    g = gcd(g, c)
                    if g == 1:
                        break
            if g > 1:
                vec = {k: c // g for k, c in vec.items()}
                if tag is not None:
                    tag = {k: c // g for k, c in tag.items()}
        return vec, tag

    def add(self, vec: dict, tag: dict | None = None):
        """Insert a vector.  Returns None if it became a pivot, else the relation tag."""
        vec, tag = self.reduce(vec, tag if self.track else None)
        if not vec:
            return tag if tag is not None else {}
        row = min(vec, key=lambda r: (abs(vec[r]), r))
        self.pivot_of_row[row] = len(self.vecs)
        self.vecs.append((row, vec, tag))
        return None


def matrix_of_map(domain: BasisIndex, codomain: BasisIndex, image: Callable, mapper=map) -> SparseRationalMatrix:
    """Matrix whose column j holds the coefficients of image(domain[j]).

    ``mapper`` may be any order-preserving map (e.g. an executor's map) used
    to evaluate the images of the domain keys.
    """
    cols = []
    for lc in mapper(image, domain.keys):
        col = {}
        for k, c in _terms(lc):
            i = codomain.index(k)
            col[i] = col.get(i, 0) + c
        cols.append(col)
    return SparseRationalMatrix(codomain, domain, cols)


class ChainComplex:
    """Homologically graded complex: differentials[k] maps degree k to degree k-1."""

    def __init__(self, bases: Mapping, differentials: Mapping, name: str = "", action: Callable | None = None):
        self.bases = dict(bases)
        self.differentials = dict(differentials)
        self.name = name
        self.action = action
        for k, d in self.differentials.items():
            if k not in self.bases or (k - 1) not in self.bases:
                raise DomainError(f"differential {k} has no source or target basis")
            if d.cols is not self.bases[k] and d.cols.keys != self.bases[k].keys:
                raise BasisMismatchError(f"differential {k} has the wrong source basis")
            if d.rows is not self.bases[k - 1] and d.rows.keys != self.bases[k - 1].keys:
                raise BasisMismatchError(f"differential {k} has the wrong target basis")
        self._checked = False

    def degrees(self) -> list:
        return sorted(self.bases)

    def dims(self) -> dict:
        return {k: len(b) for k, b in sorted(self.bases.items())}

    def check(self) -> None:
        for k in sorted(self.differentials):
            if k - 1 not in self.differentials:
                continue
            prod = self.differentials[k - 1] @ self.differentials[k]
            for j, col in enumerate(prod.columns):
                if col:
                    raise ComplexInvalidError(
                        f"d{k - 1} o d{k} is nonzero on {prod.cols[j]}", witness=prod.cols[j], degree=k
                    )
        self._checked = True

    def rank(self, k) -> int:
        d = self.differentials.get(k)
        return d.rank() if d is not None else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(b) for k, b in self.bases.items())


def homology_dimensions(c: ChainComplex) -> dict:
    if not c._checked:
        c.check()
    return {k: len(c.bases[k]) - c.rank(k) - c.rank(k + 1) for k in c.degrees()}


def _act(c: ChainComplex, key, perm):
    if c.action is not None:
        return c.action(key, perm)
    return key.permuted(perm)


def induced_action_trace(c: ChainComplex, degree: int, perm: Mapping) -> Fraction:
    """Trace of a relabelling on H_degree, via a complement of boundaries in cycles."""
    if not c._checked:
        c.check()
    basis = c.bases[degree]
    d_out = c.differentials.get(degree)
    d_in = c.differentials.get(degree + 1)
    if d_out is not None:
        cycles = [{basis.index(k): int(v) for k, v in z.items()} for z in d_out.kernel_basis()]
    else:
        cycles = [{i: 1} for i in range(len(basis))]
    ech = Echelon(track=True)
    if d_in is not None:
        for j, col in enumerate(d_in.columns):
            vec, scale = _integer_column(col)
            ech.add(vec, {("b", j): scale})
    complement = []
    for i, z in enumerate(cycles):
        if ech.add(z, {("z", i): 1}) is None:
            complement.append(i)
    total = Fraction(0)
    for i in complement:
        image = {}
        for idx, coeff in cycles[i].items():
            key, sign = _act(c, basis[idx], perm)
            if not sign:
                continue
            if key not in basis:
                raise DomainError(f"permutation does not preserve the basis: {key}")
            j = basis.index(key)
            image[j] = image.get(j, 0) + sign * coeff
        image = {j: v for j, v in image.items() if v}
        residual, tag = ech.reduce(image, {"q": 1})
        if residual:
            raise DomainError("image of a cycle is not a cycle; action does not commute with d")
        s = tag.get("q", 0)
        total += Fraction(-tag.get(("z", i), 0), s)
    return total
