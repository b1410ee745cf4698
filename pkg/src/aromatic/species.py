"""Rooted trees, aromas and aromatic forests on finite label sets.

Every structure is stored as a functional graph: a map sending each vertex to
its successor (its parent in a tree, the next vertex along a cycle in an
aroma), with ``None`` marking the root of a tree.  Objects are immutable and
hash/compare by their labelled structure, so they serve directly as basis keys
in :class:`aromatic.linalg.LinComb`.

Wire format (also used by ``str``)::

    1(2,3(4))                 labelled rooted tree, children sorted by label
    marked[1(2)]              tree whose root is the marked m-coloured input
    cycle[1(3);2]             aroma; hanging trees listed along the cycle,
                              starting from the smallest cycle label
    forest{1(2),3 | cycle[4]} aromatic forest; tree order carries a sign

Unlabelled codes use the same shapes with ``()`` for a vertex, e.g. ``(()())``
for the cherry, ``cycle[();(())]`` or ``forest{(),() | cycle[()]}``.
"""

from __future__ import annotations

import heapq
import itertools
import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Iterator, Mapping, Union

from .errors import DomainError, StructureError

Label = Union[int, str]

_DELIMITERS = set("()[]{},;|")


def label_key(label: Label) -> tuple:
    """Total order on labels: integers first (numerically), then names."""
    if isinstance(label, bool):
        raise StructureError(f"invalid label {label!r}")
    if isinstance(label, int):
        if label < 0:
            raise StructureError(f"negative label {label!r}")
        return (0, label, "")
    if isinstance(label, str) and label and not (_DELIMITERS & set(label)) and not label.isspace():
        return (1, 0, label)
    raise StructureError(f"invalid label {label!r}")


def sorted_labels(labels: Iterable[Label]) -> tuple:
    labels = list(labels)
    out = tuple(sorted(set(labels), key=label_key))
    if len(out) != len(labels):
        raise DomainError(f"repeated labels in {labels!r}")
    return out


def permutation_sign(perm) -> int:
    """Sign of a permutation given as a sequence of the images of 0..n-1."""
    perm = list(perm)
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sort_with_sign(items, key):
    """Sort ``items`` by ``key``; return the sorted tuple and the permutation sign."""
    order = sorted(range(len(items)), key=lambda i: key(items[i]))
    return tuple(items[i] for i in order), permutation_sign(order)


def _arcs_from(succ: Mapping) -> tuple:
    return tuple(sorted(succ.items(), key=lambda kv: label_key(kv[0])))


def _arcs_key(arcs) -> tuple:
    return tuple((label_key(v), label_key(s) if s is not None else (-1,)) for v, s in arcs)


@dataclass(frozen=True)
class _FunctionalGraph:
    arcs: tuple

    def __post_init__(self):
        verts = [v for v, _ in self.arcs]
        if not verts:
            raise StructureError(f"empty {type(self).__name__}")
        for v in verts:
            label_key(v)
        vset = set(verts)
        if len(vset) != len(verts):
            raise StructureError("repeated vertex in successor map")
        if list(self.arcs) != sorted(self.arcs, key=lambda kv: label_key(kv[0])):
            object.__setattr__(self, "arcs", _arcs_from(dict(self.arcs)))
        for _, s in self.arcs:
            if s is not None and s not in vset:
                raise StructureError(f"successor {s!r} is not a vertex")
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def from_successors(cls, succ: Mapping):
        return cls(_arcs_from(succ))

    @classmethod
    def _trusted(cls, succ: Mapping):
        # Skips validation; callers guarantee the invariants.
        obj = object.__new__(cls)
        object.__setattr__(obj, "arcs", _arcs_from(succ))
        return obj

    @cached_property
    def succ(self) -> dict:
        return dict(self.arcs)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(v for v, _ in self.arcs)

    @cached_property
    def preds(self) -> dict:
        out = {v: [] for v in self.vertices}
        for v, s in self.arcs:
            if s is not None:
                out[s].append(v)
        return {v: tuple(ps) for v, ps in out.items()}

    def __len__(self):
        return len(self.arcs)

    @property
    def min_label(self):
        return self.arcs[0][0]

    def relabel(self, mapping: Mapping):
        succ = {mapping.get(v, v): (mapping.get(s, s) if s is not None else None) for v, s in self.arcs}
        if len(succ) != len(self.arcs):
            raise DomainError("relabelling is not injective")
        return type(self)._trusted(succ)

    def permuted(self, mapping: Mapping):
        return self.relabel(mapping), 1

    @cached_property
    def sort_key(self) -> tuple:
        return (self.code, _arcs_key(self.arcs))

    def to_json(self):
        raise NotImplementedError


class RootedTree(_FunctionalGraph):
    """Labelled rooted tree; every non-root vertex points to its parent."""

    def _validate(self):
        roots = [v for v, s in self.arcs if s is None]
        if len(roots) != 1:
            raise StructureError(f"a rooted tree needs exactly one root, got {len(roots)}")
        succ = dict(self.arcs)
        n = len(succ)
        for v in succ:
            x, steps = v, 0
            while succ[x] is not None:
                x = succ[x]
                steps += 1
                if steps > n:
                    raise StructureError("parent map contains a cycle")

    @classmethod
    def single(cls, label: Label) -> RootedTree:
        return cls(((label, None),))

    @cached_property
    def root(self):
        for v, s in self.arcs:
            if s is None:
                return v
        raise StructureError("no root")

    def children(self, v) -> tuple:
        return self.preds[v]

    def subtree_code(self, v) -> str:
        return "(" + "".join(sorted(self.subtree_code(c) for c in self.preds[v])) + ")"

    @cached_property
    def code(self) -> str:
        return self.subtree_code(self.root)

    def _serialize(self, v) -> str:
        kids = sorted(self.preds[v], key=label_key)
        if not kids:
            return str(v)
        return f"{v}(" + ",".join(self._serialize(c) for c in kids) + ")"

    def __str__(self):
        return self._serialize(self.root)

    def __repr__(self):
        return f"{type(self).__name__}({self})"

    def to_json(self):
        def node(v):
            return {"label": v, "children": [node(c) for c in sorted(self.preds[v], key=label_key)]}

        return node(self.root)


class MarkedTree(RootedTree):
    """Tree whose root is the distinguished m-coloured input."""

    def __str__(self):
        return f"marked[{self._serialize(self.root)}]"

    def to_json(self):
        return {"marked": super().to_json()}


class Aroma(_FunctionalGraph):
    """Connected functional graph: a directed cycle of rooted trees."""

    def _validate(self):
        succ = dict(self.arcs)
        if any(s is None for s in succ.values()):
            raise StructureError("an aroma has no root")
        cycle = _cycle_from(succ, next(iter(succ)))
        cyc = set(cycle)
        n = len(succ)
        for v in succ:
            x, steps = v, 0
            while x not in cyc:
                x = succ[x]
                steps += 1
                if steps > n:
                    raise StructureError("aroma is not connected")

    @cached_property
    def cycle(self) -> tuple:
        """Cycle vertices in successor order, starting at the smallest label."""
        cyc = _cycle_from(self.succ, self.vertices[0])
        start = min(cyc, key=label_key)
        i = cyc.index(start)
        return cyc[i:] + cyc[:i]

    @property
    def cycle_length(self) -> int:
        return len(self.cycle)

    def hanging_children(self, v) -> tuple:
        cyc = self._cycle_set
        return tuple(c for c in self.preds[v] if c not in cyc)

    @cached_property
    def _cycle_set(self):
        return frozenset(self.cycle)

    def hanging_code(self, v) -> str:
        return "(" + "".join(sorted(self.hanging_code(c) for c in self.hanging_children(v))) + ")"

    def hanging_tree(self, v) -> RootedTree:
        succ = {}
        stack = [v]
        while stack:
            x = stack.pop()
            succ[x] = None if x == v else self.succ[x]
            stack.extend(self.hanging_children(x))
        return RootedTree._trusted(succ)

    @cached_property
    def code(self) -> str:
        return "cycle[" + ";".join(min_rotation(tuple(self.hanging_code(c) for c in self.cycle))) + "]"

    def _serialize(self, v) -> str:
        kids = sorted(self.hanging_children(v), key=label_key)
        if not kids:
            return str(v)
        return f"{v}(" + ",".join(self._serialize(c) for c in kids) + ")"

    def __str__(self):
        return "cycle[" + ";".join(self._serialize(c) for c in self.cycle) + "]"

    def __repr__(self):
        return f"Aroma({self})"

    def to_json(self):
        return {"cycle": [self.hanging_tree(c).to_json() for c in self.cycle]}


def _cycle_from(succ, start) -> tuple:
    seen = {}
    x = start
    while x not in seen:
        seen[x] = len(seen)
        x = succ[x]
    order = list(seen)
    return tuple(order[seen[x]:])


def min_rotation(seq: tuple) -> tuple:
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


@dataclass(frozen=True)
class AromaticForest:
    """Ordered tree components plus a multiset of aromas on disjoint labels.

    The order of ``trees`` is significant: swapping two tree components
    changes the sign of the element in every (bi)complex built from forests.
    The empty forest is allowed; it is the unit of the degree-zero part.
    """

    trees: tuple = ()
    aromas: tuple = ()

    def __post_init__(self):
        trees = tuple(self.trees)
        aromas = tuple(sorted(self.aromas, key=lambda a: a.sort_key))
        for t in trees:
            if not isinstance(t, RootedTree) or isinstance(t, MarkedTree):
                raise StructureError(f"tree component expected, got {t!r}")
        for a in aromas:
            if not isinstance(a, Aroma):
                raise StructureError(f"aroma component expected, got {a!r}")
        labels = [v for c in trees + aromas for v in c.vertices]
        if len(labels) != len(set(labels)):
            raise StructureError("forest components share labels")
        object.__setattr__(self, "trees", trees)
        object.__setattr__(self, "aromas", aromas)

    @classmethod
    def _trusted(cls, trees, aromas):
        obj = object.__new__(cls)
        object.__setattr__(obj, "trees", tuple(trees))
        object.__setattr__(obj, "aromas", tuple(sorted(aromas, key=lambda a: a.sort_key)))
        return obj

    @classmethod
    def from_partial_map(cls, succ: Mapping) -> AromaticForest:
        """Split a partial endofunction into components; trees in canonical order."""
        trees, aromas = [], []
        for comp in _components(succ):
            sub = {v: succ[v] for v in comp}
            if any(s is None for s in sub.values()):
                trees.append(RootedTree._trusted(sub))
            else:
                aromas.append(Aroma._trusted(sub))
        trees.sort(key=_tree_order)
        return cls._trusted(trees, aromas)

    @cached_property
    def vertices(self) -> tuple:
        return tuple(sorted((v for c in self.trees + self.aromas for v in c.vertices), key=label_key))

    @cached_property
    def succ(self) -> dict:
        out = {}
        for c in self.trees + self.aromas:
            out.update(c.succ)
        return out

    def __len__(self):
        return len(self.vertices)

    @property
    def degree(self) -> int:
        return len(self.trees)

    @cached_property
    def has_loop(self) -> bool:
        return any(a.cycle_length == 1 for a in self.aromas)

    def canonical(self):
        """Return (forest with trees sorted canonically, sign of that sort)."""
        trees, sign = sort_with_sign(self.trees, _tree_order)
        if trees == self.trees:
            return self, sign
        return AromaticForest._trusted(trees, self.aromas), sign

    @cached_property
    def code(self) -> str:
        return canonical_code(self)[0]

    def relabel(self, mapping: Mapping) -> AromaticForest:
        return AromaticForest._trusted(
            [t.relabel(mapping) for t in self.trees], [a.relabel(mapping) for a in self.aromas]
        )

    def permuted(self, mapping: Mapping):
        return self.relabel(mapping).canonical()

    @cached_property
    def sort_key(self) -> tuple:
        return (
            len(self.trees),
            tuple(t.sort_key for t in self.trees),
            tuple(a.sort_key for a in self.aromas),
        )

    def __str__(self):
        return "forest{" + ",".join(map(str, self.trees)) + " | " + ",".join(map(str, self.aromas)) + "}"

    def __repr__(self):
        return f"AromaticForest({self})"

    def to_json(self):
        return {"trees": [t.to_json() for t in self.trees], "aromas": [a.to_json() for a in self.aromas]}


def _tree_order(t: RootedTree):
    return (t.code, label_key(t.min_label))


def _components(succ: Mapping) -> list:
    """Connected components of a partial functional graph, by smallest label."""
    sink = {}
    for v in succ:
        path = []
        x = v
        while x not in sink:
            if x in path:
                cyc = path[path.index(x):]
                key = ("c", min(cyc, key=label_key))
                break
            path.append(x)
            nxt = succ[x]
            if nxt is None:
                key = ("t", x)
                break
            x = nxt
        else:
            key = sink[x]
        for y in path:
            sink[y] = key
    groups = {}
    for v in sorted(succ, key=label_key):
        groups.setdefault(sink[v], []).append(v)
    return list(groups.values())


# ---------------------------------------------------------------------------
# canonical codes

def canonical_code(obj):
    """Isomorphism-invariant code of a tree, aroma or forest, with a sign.

    For forests the sign is that of the permutation sorting the tree
    components into canonical order (code, then smallest label).
    """
    if isinstance(obj, AromaticForest):
        ordered, sign = sort_with_sign(obj.trees, _tree_order)
        code = (
            "forest{"
            + ",".join(t.code for t in ordered)
            + " | "
            + ",".join(sorted(a.code for a in obj.aromas))
            + "}"
        )
        return code, sign
    if isinstance(obj, (RootedTree, Aroma)):
        return obj.code, 1
    raise StructureError(f"cannot encode {obj!r}")


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str):
        self.s = "".join(text.split())
        self.i = 0

    def peek(self, prefix: str) -> bool:
        return self.s.startswith(prefix, self.i)

    def expect(self, token: str):
        if not self.peek(token):
            raise StructureError(f"expected {token!r} at position {self.i} in {self.s!r}")
        self.i += len(token)

    def done(self):
        if self.i != len(self.s):
            raise StructureError(f"trailing text at position {self.i} in {self.s!r}")

    def label(self):
        j = self.i
        while j < len(self.s) and self.s[j] not in _DELIMITERS:
            j += 1
        tok = self.s[self.i:j]
        if not tok:
            raise StructureError(f"expected a label at position {self.i} in {self.s!r}")
        self.i = j
        return int(tok) if tok.isdigit() else tok

    def tree(self, succ: dict, parent):
        v = self.label()
        if v in succ:
            raise StructureError(f"repeated label {v!r}")
        succ[v] = parent
        if self.peek("("):
            self.expect("(")
            self.tree(succ, v)
            while self.peek(","):
                self.expect(",")
                self.tree(succ, v)
            self.expect(")")
        return v

    def aroma(self, succ: dict):
        self.expect("cycle[")
        roots = [self.tree(succ, None)]
        while self.peek(";"):
            self.expect(";")
            roots.append(self.tree(succ, None))
        self.expect("]")
        for a, b in zip(roots, roots[1:] + roots[:1]):
            succ[a] = b
        return roots

    def obj(self):
        if self.peek("forest{"):
            self.expect("forest{")
            trees, aromas = [], []
            if not self.peek("|"):
                trees.append(self._one_tree())
                while self.peek(","):
                    self.expect(",")
                    trees.append(self._one_tree())
            self.expect("|")
            if not self.peek("}"):
                aromas.append(self._one_aroma())
                while self.peek(","):
                    self.expect(",")
                    aromas.append(self._one_aroma())
            self.expect("}")
            return AromaticForest(tuple(trees), tuple(aromas))
        if self.peek("marked["):
            self.expect("marked[")
            succ = {}
            self.tree(succ, None)
            self.expect("]")
            return MarkedTree.from_successors(succ)
        if self.peek("cycle["):
            return self._one_aroma()
        return self._one_tree()

    def _one_tree(self):
        succ = {}
        self.tree(succ, None)
        return RootedTree.from_successors(succ)

    def _one_aroma(self):
        succ = {}
        self.aroma(succ)
        return Aroma.from_successors(succ)


def parse(text: str):
    """Parse the labelled wire format into a tree, marked tree, aroma or forest."""
    p = _Parser(text)
    out = p.obj()
    p.done()
    return out


def from_json(data):
    if isinstance(data, dict) and "marked" in data:
        succ = {}
        _tree_from_json(data["marked"], None, succ)
        return MarkedTree.from_successors(succ)
    if isinstance(data, dict) and "cycle" in data:
        succ = {}
        roots = [_tree_from_json(t, None, succ) for t in data["cycle"]]
        for a, b in zip(roots, roots[1:] + roots[:1]):
            succ[a] = b
        return Aroma.from_successors(succ)
    if isinstance(data, dict) and "trees" in data:
        return AromaticForest(
            tuple(from_json(t) for t in data["trees"]), tuple(from_json(a) for a in data.get("aromas", ()))
        )
    succ = {}
    _tree_from_json(data, None, succ)
    return RootedTree.from_successors(succ)


def _tree_from_json(node, parent, succ):
    try:
        v = node["label"]
        kids = node.get("children", [])
    except (TypeError, KeyError) as exc:
        raise StructureError(f"malformed tree JSON {node!r}") from exc
    if v in succ:
        raise StructureError(f"repeated label {v!r}")
    succ[v] = parent
    for k in kids:
        _tree_from_json(k, v, succ)
    return v


def to_json(obj) -> str:
    return json.dumps(obj.to_json(), separators=(",", ":"))


# unlabelled codes --------------------------------------------------------

def _parse_tree_code(code: str, i: int = 0):
    if i >= len(code) or code[i] != "(":
        raise StructureError(f"malformed tree code {code!r}")
    i += 1
    kids = []
    while i < len(code) and code[i] == "(":
        kid, i = _parse_tree_code(code, i)
        kids.append(kid)
    if i >= len(code) or code[i] != ")":
        raise StructureError(f"malformed tree code {code!r}")
    return tuple(kids), i + 1


def parse_code(code: str):
    """Decode an unlabelled code into ('tree', children) or ('aroma', hanging trees)."""
    if code.startswith("cycle[") and code.endswith("]"):
        parts = code[len("cycle["):-1].split(";")
        trees = []
        for part in parts:
            t, j = _parse_tree_code(part)
            if j != len(part):
                raise StructureError(f"malformed aroma code {code!r}")
            trees.append(t)
        return ("aroma", tuple(trees))
    t, j = _parse_tree_code(code)
    if j != len(code):
        raise StructureError(f"malformed tree code {code!r}")
    return ("tree", t)


def _nested_code(node) -> str:
    return "(" + "".join(sorted(_nested_code(k) for k in node)) + ")"


def _nested_size(node) -> int:
    return 1 + sum(_nested_size(k) for k in node)


def from_code(code: str, labels=None):
    """A labelled representative of an unlabelled code (preorder labelling 1..n)."""
    if code.startswith("forest{"):
        body = code[len("forest{"):-1]
        tpart, _, apart = body.partition(" | ")
        tcodes = _split_top(tpart, ",")
        acodes = _split_top(apart, ",")
        counter = itertools.count(1)
        trees = [_labelled_tree(_parse_tree_code(c)[0], counter, None, {}) for c in tcodes]
        aromas = [_labelled_aroma(parse_code(c)[1], counter) for c in acodes]
        forest = AromaticForest(tuple(RootedTree.from_successors(s) for s in trees),
                                tuple(Aroma.from_successors(s) for s in aromas))
        return _maybe_relabel(forest, labels)
    kind, data = parse_code(code)
    counter = itertools.count(1)
    if kind == "tree":
        obj = RootedTree.from_successors(_labelled_tree(data, counter, None, {}))
    else:
        obj = Aroma.from_successors(_labelled_aroma(data, counter))
    return _maybe_relabel(obj, labels)


def _maybe_relabel(obj, labels):
    if labels is None:
        return obj
    labels = list(labels)
    if len(labels) != len(obj.vertices):
        raise DomainError("wrong number of labels for representative")
    return obj.relabel(dict(zip(range(1, len(labels) + 1), labels)))


def _split_top(text: str, sep: str) -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return [s for s in out if s]


def _labelled_tree(node, counter, parent, succ):
    v = next(counter)
    succ[v] = parent
    for k in sorted(node, key=_nested_code):
        _labelled_tree(k, counter, v, succ)
    return succ


def _labelled_aroma(trees, counter):
    succ = {}
    roots = []
    for t in trees:
        before = set(succ)
        _labelled_tree(t, counter, None, succ)
        roots.append(min(set(succ) - before))
    for a, b in zip(roots, roots[1:] + roots[:1]):
        succ[a] = b
    return succ


# ---------------------------------------------------------------------------
# enumeration

def _decode_rooted_pruefer(seq, n) -> tuple:
    """Parent array and canonical code of the rooted tree encoded by ``seq``.

    The smallest non-root leaf is removed repeatedly and seq records its
    parent; a vertex leaves only after all its children, so codes are
    assembled in removal order.
    """
    count = [0] * n
    for x in seq:
        count[x] += 1
    heap = [v for v in range(n) if count[v] == 0]
    heapq.heapify(heap)
    parent = [None] * n
    parts = [[] for _ in range(n)]
    for x in seq:
        leaf = heapq.heappop(heap)
        parent[leaf] = x
        kids = parts[leaf]
        kids.sort()
        parts[x].append("(" + "".join(kids) + ")")
        count[x] -= 1
        if count[x] == 0:
            heapq.heappush(heap, x)
    root = heap[0]
    kids = parts[root]
    kids.sort()
    return parent, "(" + "".join(kids) + ")"


def rooted_tree_arrays(n: int) -> list:
    """(code, parent array on 0..n-1) for all rooted trees, in basis order."""
    keyed = []
    for seq in itertools.product(range(n), repeat=n - 1):
        parent, code = _decode_rooted_pruefer(seq, n)
        keyed.append(((code, tuple(-1 if p is None else p for p in parent)), parent))
    keyed.sort(key=lambda kp: kp[0])
    return [(code, parent) for (code, _), parent in keyed]


def enumerate_rooted_trees(labels) -> list:
    """All rooted trees on ``labels``, sorted by canonical code then labels.

    Uses the rooted Pruefer bijection with sequences of length n-1, so the
    output has exactly n^(n-1) elements.  Codes and sort keys are computed
    on the parent arrays, which orders exactly as ``RootedTree.sort_key``.
    """
    labels = sorted_labels(labels)
    n = len(labels)
    if n == 0:
        raise DomainError("rooted trees need a non-empty label set")
    out = []
    for code, parent in rooted_tree_arrays(n):
        t = object.__new__(RootedTree)
        object.__setattr__(t, "arcs", tuple((labels[i], None if p is None else labels[p]) for i, p in enumerate(parent)))
        t.__dict__["code"] = code
        out.append(t)
    return out


def _layered_forests(frontier: tuple, remaining: tuple) -> Iterator[dict]:
    """Attach ``remaining`` vertices level by level below ``frontier``.

    Each vertex at depth k+1 picks a parent at depth k; enumerating the depth
    levels explicitly produces every forest exactly once.
    """
    if not remaining:
        yield {}
        return
    for size in range(1, len(remaining) + 1):
        for layer in itertools.combinations(remaining, size):
            rest = tuple(v for v in remaining if v not in layer)
            for parents in itertools.product(frontier, repeat=size):
                head = dict(zip(layer, parents))
                for tail in _layered_forests(layer, rest):
                    yield {**head, **tail}


def enumerate_aromas(labels, min_cycle_len: int = 1) -> list:
    """All aromas (connected functional graphs) on ``labels`` with cycle >= min_cycle_len."""
    if min_cycle_len not in (1, 2):
        raise DomainError("min_cycle_len must be 1 or 2")
    labels = sorted_labels(labels)
    n = len(labels)
    if n == 0:
        raise DomainError("aromas need a non-empty label set")
    out = []
    for k in range(min_cycle_len, n + 1):
        for cyc in itertools.combinations(labels, k):
            rest = tuple(v for v in labels if v not in cyc)
            for tail in itertools.permutations(cyc[1:]):
                order = (cyc[0],) + tail
                cycle_succ = {a: b for a, b in zip(order, order[1:] + order[:1])}
                for forest in _layered_forests(cyc, rest):
                    a = Aroma._trusted({**cycle_succ, **forest})
                    a.__dict__["cycle"] = order  # cyc[0] is the smallest label
                    out.append(a)
    out.sort(key=lambda a: a.sort_key)
    return out


def enumerate_partial_maps(labels) -> Iterator[dict]:
    """All partial endofunctions of ``labels`` (None = undefined), i.e. aromatic forests."""
    labels = sorted_labels(labels)
    for images in itertools.product((None,) + labels, repeat=len(labels)):
        yield dict(zip(labels, images))


@lru_cache(maxsize=None)
def _unlabelled_trees(n: int) -> tuple:
    if n == 1:
        return ("()",)
    items = [(s, c) for s in range(1, n) for c in _unlabelled_trees(s)]
    codes = set()

    def pick(start, remaining, chosen):
        if remaining == 0:
            codes.add("(" + "".join(sorted(chosen)) + ")")
            return
        for i in range(start, len(items)):
            s, c = items[i]
            if s <= remaining:
                chosen.append(c)
                pick(i, remaining - s, chosen)
                chosen.pop()

    pick(0, n - 1, [])
    return tuple(sorted(codes))


@lru_cache(maxsize=None)
def _unlabelled_aromas(n: int, min_cycle_len: int) -> tuple:
    codes = set()
    for k in range(min_cycle_len, n + 1):
        for sizes in _compositions(n, k):
            for trees in itertools.product(*(_unlabelled_trees(s) for s in sizes)):
                codes.add("cycle[" + ";".join(min_rotation(trees)) + "]")
    return tuple(sorted(codes))


def _compositions(n: int, k: int):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def enumerate_unlabelled(kind: str, n: int) -> list:
    """One canonical code per isomorphism class: kind in {'tree', 'aroma', 'aroma+'}."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if kind == "tree":
        return list(_unlabelled_trees(n))
    if kind == "aroma":
        return list(_unlabelled_aromas(n, 1))
    if kind in ("aroma+", "aroma⁺"):
        return list(_unlabelled_aromas(n, 2))
    raise DomainError(f"unknown kind {kind!r}")


def _nested_symmetry(node) -> int:
    total = 1
    groups = Counter(_nested_code(k) for k in node)
    reps = {_nested_code(k): k for k in node}
    for c, mult in groups.items():
        total *= factorial(mult) * _nested_symmetry(reps[c]) ** mult
    return total


def symmetry_order(code: str) -> int:
    """Order of the automorphism group of an unlabelled tree or aroma."""
    kind, data = parse_code(code)
    if kind == "tree":
        return _nested_symmetry(data)
    codes = tuple(_nested_code(t) for t in data)
    k = len(codes)
    period = next(r for r in range(1, k + 1) if k % r == 0 and codes[r:] + codes[:r] == codes)
    total = k // period
    for t in data:
        total *= _nested_symmetry(t)
    return total


def code_size(code: str) -> int:
    kind, data = parse_code(code)
    if kind == "tree":
        return _nested_size(data)
    return sum(_nested_size(t) for t in data)
