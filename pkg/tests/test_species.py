import itertools
import json
from math import factorial

import pytest
from hypothesis import given, strategies as st

from aromatic.errors import DomainError, StructureError
from aromatic.species import (
    Aroma,
    AromaticForest,
    MarkedTree,
    RootedTree,
    canonical_code,
    enumerate_aromas,
    enumerate_partial_maps,
    enumerate_rooted_trees,
    enumerate_unlabelled,
    from_code,
    from_json,
    parse,
    symmetry_order,
    to_json,
)


@st.composite
def trees(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    labels = draw(st.permutations(range(1, n + 1)))
    succ = {labels[0]: None}
    for i in range(1, n):
        succ[labels[i]] = labels[draw(st.integers(0, i - 1))]
    return RootedTree.from_successors(succ)


@st.composite
def aromas(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    labels = draw(st.permutations(range(1, n + 1)))
    k = draw(st.integers(1, n))
    succ = {labels[i]: labels[(i + 1) % k] for i in range(k)}
    for i in range(k, n):
        succ[labels[i]] = labels[draw(st.integers(0, i - 1))]
    return Aroma.from_successors(succ)


def test_text_format():
    t = parse("1(2,3(4))")
    assert t.root == 1 and t.succ == {1: None, 2: 1, 3: 1, 4: 3}
    assert str(t) == "1(2,3(4))"
    assert str(parse("3(4,1(2))")) == "3(1(2),4)"
    a = parse("cycle[6(7);8]")
    assert a.cycle == (6, 8) and str(a) == "cycle[6(7);8]"
    assert str(parse("cycle[8;6(7)]")) == "cycle[6(7);8]"
    f = parse("forest{2,1(3) | cycle[4]}")
    assert [str(x) for x in f.trees] == ["2", "1(3)"]
    assert isinstance(parse("marked[1(2)]"), MarkedTree)


def test_codes():
    assert parse("5(1,2(3))").code == "((())())"
    assert parse("cycle[1;2(3)]").code == "cycle[(());()]"
    assert parse("cycle[2(3);1]").code == parse("cycle[1;2(3)]").code


@pytest.mark.parametrize("bad", ["1(2", "1(1)", "cycle[]", "1,2", "forest{1 | 2}", "", "1()"])
def test_malformed_text(bad):
    with pytest.raises(StructureError):
        parse(bad)


def test_invalid_structures():
    with pytest.raises(StructureError):
        RootedTree.from_successors({1: 2, 2: 1})
    with pytest.raises(StructureError):
        RootedTree.from_successors({1: None, 2: None})
    with pytest.raises(StructureError):
        Aroma.from_successors({1: 2, 2: None})
    with pytest.raises(StructureError):
        Aroma.from_successors({1: 1, 2: 2})
    with pytest.raises(StructureError):
        RootedTree.from_successors({1: 5})
    with pytest.raises(DomainError):
        enumerate_rooted_trees([])
    with pytest.raises(StructureError):
        AromaticForest((parse("1"),), (parse("cycle[1]"),))


@given(trees())
def test_tree_roundtrip(t):
    assert parse(str(t)) == t
    assert from_json(json.loads(to_json(t))) == t


@given(aromas())
def test_aroma_roundtrip(a):
    assert parse(str(a)) == a
    assert from_json(json.loads(to_json(a))) == a


@given(trees(), st.randoms(use_true_random=False))
def test_code_is_relabelling_invariant(t, rnd):
    targets = list(range(100, 100 + len(t)))
    rnd.shuffle(targets)
    g = dict(zip(t.vertices, targets))
    assert t.relabel(g).code == t.code
    assert from_code(t.code).code == t.code


@given(aromas(), st.randoms(use_true_random=False))
def test_aroma_code_is_relabelling_invariant(a, rnd):
    targets = list(range(100, 100 + len(a)))
    rnd.shuffle(targets)
    assert a.relabel(dict(zip(a.vertices, targets))).code == a.code


@pytest.mark.parametrize("n", range(1, 7))
def test_rooted_tree_counts(n):
    ts = enumerate_rooted_trees(range(1, n + 1))
    assert len(ts) == len(set(ts)) == n ** (n - 1)
    assert ts == sorted(ts, key=lambda t: t.sort_key)


@pytest.mark.parametrize("n", range(1, 6))
def test_aromas_are_connected_endofunctions(n):
    brute = 0
    for f in itertools.product(range(1, n + 1), repeat=n):
        succ = dict(zip(range(1, n + 1), f))
        try:
            Aroma.from_successors(succ)
            brute += 1
        except StructureError:
            pass
    assert len(enumerate_aromas(range(1, n + 1))) == brute


@pytest.mark.parametrize("n", range(1, 6))
def test_unlabelled_is_the_quotient(n):
    labelled = enumerate_rooted_trees(range(1, n + 1))
    assert set(enumerate_unlabelled("tree", n)) == {t.code for t in labelled}
    assert sum(factorial(n) // symmetry_order(c) for c in enumerate_unlabelled("tree", n)) == n ** (n - 1)
    aros = enumerate_aromas(range(1, n + 1))
    assert set(enumerate_unlabelled("aroma", n)) == {a.code for a in aros}
    assert set(enumerate_unlabelled("aroma+", n)) == {a.code for a in aros if a.cycle_length > 1}


def test_known_unlabelled_counts():
    assert [len(enumerate_unlabelled("tree", n)) for n in range(1, 9)] == [1, 1, 2, 4, 9, 20, 48, 115]
    assert [len(enumerate_unlabelled("aroma", n)) for n in range(1, 7)] == [1, 2, 4, 9, 20, 51]


def test_symmetry_orders():
    assert symmetry_order("()") == 1
    assert symmetry_order("(()())") == 2
    assert symmetry_order("(()()())") == 6
    assert symmetry_order("cycle[();()]") == 2
    assert symmetry_order("cycle[();();()]") == 3


def test_partial_maps_and_forest_signs():
    maps = list(enumerate_partial_maps([1, 2, 3]))
    assert len(maps) == 4 ** 3
    f = AromaticForest((parse("2"), parse("1")), ())
    g, s = f.canonical()
    assert [str(t) for t in g.trees] == ["1", "2"] and s == -1
    assert canonical_code(f) == (g.code, -1)
