from fractions import Fraction
from math import factorial

import pytest

from aromatic.complexes import (
    abel_identity,
    build_aromatic_bicomplex,
    build_ce_complex,
    build_graph_complex,
    character_check,
    character_formula,
    euler_characteristic_series,
    expected_bicomplex_dimension,
    fixed_point_free_count,
    graph_homotopy_check,
)
from aromatic.complexes.ce import ce_basis, ce_differential
from aromatic.complexes.graphs import Graph, add_edge
from aromatic.errors import DomainError
from aromatic.linalg import homology_dimensions, induced_action_trace
from aromatic.species import parse


def nonzero(h):
    return {k: d for k, d in h.items() if d}


@pytest.mark.parametrize("n", range(1, 5))
def test_ce_full_homology(n):
    assert nonzero(homology_dimensions(build_ce_complex("L", n))) == ({0: (n - 1) ** n} if n > 1 else {})


@pytest.mark.parametrize("n,expected", [(1, {1: 1}), (2, {}), (3, {0: 1}), (4, {0: 16})])
def test_ce_reduced_homology(n, expected):
    assert nonzero(homology_dimensions(build_ce_complex("Ltilde", n))) == expected


def test_ce_chain_dimensions():
    # degree p: forests with p trees; reduced variant drops loops.
    assert {p: len(b) for p, b in ce_basis(2, False).items()} == {0: 4, 1: 4, 2: 1}
    assert {p: len(b) for p, b in ce_basis(2, True).items()} == {0: 1, 1: 2, 2: 1}


def test_ce_differential_examples():
    d = ce_differential(parse("forest{1 | }"), False)
    assert str(d) == "forest{ | cycle[1]}"
    assert not ce_differential(parse("forest{1 | }"), True)


def test_unknown_variants():
    with pytest.raises(DomainError):
        build_ce_complex("X", 2)
    with pytest.raises(DomainError):
        build_aromatic_bicomplex("X", 2)
    with pytest.raises(DomainError):
        build_graph_complex("X", 2)


@pytest.mark.parametrize("variant", ["full", "divergence-free"])
@pytest.mark.parametrize("n", range(1, 4))
def test_bicomplex(variant, n):
    bc = build_aromatic_bicomplex(variant, n)
    assert bc.commutator_is_zero()
    assert not any(bc.vertical_homology().values())
    hor = nonzero(bc.horizontal_homology())
    allowed = {0} if variant == "full" else {0, 1}
    assert {p for p, _ in hor} <= allowed
    col1 = sum(d for (p, _), d in hor.items() if p == 1)
    assert col1 == (2 if variant == "divergence-free" and n == 1 else 0)


@pytest.mark.parametrize("variant,ce", [("full", "L"), ("divergence-free", "Ltilde")])
@pytest.mark.parametrize("n", range(1, 4))
def test_bicomplex_matches_isotypic_parts_of_ce_homology(variant, ce, n):
    bc = build_aromatic_bicomplex(variant, n)
    c = build_ce_complex(ce, n)
    hom = homology_dimensions(c)

    def trace(g, p):
        return induced_action_trace(c, p, g) if hom.get(p) else 0

    for (p, q), d in bc.horizontal_homology().items():
        assert expected_bicomplex_dimension(trace, n, p, q) == d


def test_graph_signs():
    g = Graph(3, ((1, 3),))
    assert str(add_edge(g)) in ("graph3[1-2,1-3] - graph3[1-3,2-3]", "-graph3[1-3,2-3] + graph3[1-2,1-3]")


@pytest.mark.parametrize("n", range(1, 5))
def test_graph_complexes(n):
    assert graph_homotopy_check(n)
    full = homology_dimensions(build_graph_complex("all", n))
    assert sum(full.values()) == (1 if n == 1 else 0)
    cr = homology_dimensions(build_graph_complex("connected-reduced", n))
    assert sum(cr.values()) == factorial(n - 1)


def test_abel_identity():
    for n in range(0, 21):
        lhs, rhs = abel_identity(n)
        assert lhs == rhs


def test_euler_characteristics():
    assert euler_characteristic_series("Ltilde", 4) == [Fraction((n - 2) ** n) for n in range(1, 5)]
    assert euler_characteristic_series("L", 4) == [Fraction((n - 1) ** n) for n in range(1, 5)]


def test_fixed_point_free_maps():
    assert [fixed_point_free_count(n) for n in range(1, 5)] == [(n - 1) ** n for n in range(1, 5)]


def test_character_formula_values():
    assert character_formula((1, 1, 1)) == 1
    assert character_formula((2, 1)) == -1
    assert character_formula((3,)) == 1
    assert character_formula((2,)) == 0
    assert character_formula((1,) * 4) == 16


@pytest.mark.parametrize("n", range(2, 5))
def test_character_matches_h0_trace(n):
    for row in character_check(n):
        assert row["trace_h0"] == row["formula"], row


def test_character_at_arity_one_is_the_euler_character():
    (row,) = character_check(1)
    assert row["formula"] == -1
    assert row["trace_h0"] == 0
    assert row["euler_trace"] == -1
