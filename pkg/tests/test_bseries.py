from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from aromatic.bseries import (
    _evaluate,
    check_divergence_identity,
    elementary_differential_aroma,
    elementary_differential_aromatic_tree,
    elementary_differential_tree,
    exact_flow_coefficients,
    graph_differential,
    linear_field,
    modified_field,
    poly_ring,
    random_field,
    vector_field,
    volume_obstruction,
)
from aromatic.errors import DomainError, IncompleteCoefficientsError
from aromatic.linalg import LinComb
from aromatic.species import enumerate_unlabelled, from_code

A = [[1, 2], [Fraction(1, 3), -1]]


def mat_power_apply(k):
    M = sympy.Matrix(A) ** k
    y = sympy.Matrix(sympy.symbols("y1 y2"))
    return [sympy.expand(e) for e in M * y]


def as_exprs(field):
    return [sympy.expand(c.as_expr()) for c in field.components]


def test_linear_field_chains():
    f = linear_field(A)
    for k, code in enumerate(["()", "(())", "((()))", "(((())))"], 1):
        assert as_exprs(elementary_differential_tree(code, f)) == mat_power_apply(k)
    # bushy trees need second derivatives, which vanish for a linear field
    assert not any(elementary_differential_tree("(()())", f).components)


def test_aroma_traces():
    f = linear_field(A)
    tr = sympy.Matrix(A).trace()
    tr2 = (sympy.Matrix(A) ** 2).trace()
    assert elementary_differential_aroma("cycle[()]", f).as_expr() == tr
    assert elementary_differential_aroma("cycle[();()]", f).as_expr() == tr2


def test_scalar_field_example():
    f = vector_field(["y1**2"], 1)
    assert as_exprs(elementary_differential_tree("(())", f)) == [sympy.sympify("2*y1**3")]
    assert elementary_differential_aroma("cycle[()]", f).as_expr() == sympy.sympify("2*y1")


@pytest.mark.parametrize("n", range(1, 5))
def test_graph_rule_agrees_with_recursion(n):
    f = random_field(2, 3, seed=7)
    for code in enumerate_unlabelled("tree", n):
        assert graph_differential(from_code(code), f) == elementary_differential_tree(code, f)


@pytest.mark.parametrize("n", range(1, 4))
def test_divergence_identity_small(n):
    f = random_field(2, 2, seed=3)
    for code in enumerate_unlabelled("tree", n):
        assert check_divergence_identity(code, f)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=10, deadline=None)
def test_divergence_identity_random_seeds(seed):
    f = random_field(2, 2, seed=seed)
    for code in ["(())", "(()())", "((()))"]:
        assert check_divergence_identity(code, f)


def test_aromatic_tree_is_multiplicative():
    f = random_field(2, 2, seed=11)
    value = elementary_differential_aromatic_tree("forest{(()) | cycle[()],cycle[();()]}", f)
    point = (Fraction(1, 2), Fraction(-2, 3))
    tree = elementary_differential_tree("(())", f).evaluate(point)
    scalar = 1
    for code in ["cycle[()]", "cycle[();()]"]:
        scalar *= _evaluate(elementary_differential_aroma(code, f), f.ys, point)
    assert value.evaluate(point) == tuple(scalar * t for t in tree)
    with pytest.raises(DomainError):
        elementary_differential_aromatic_tree("forest{ | cycle[()]}", f)


def test_explicit_euler_modified_field_for_linear_fields():
    # log(I + hA)/h = Σ (-1)^(k-1) h^(k-1) A^k / k; only chains contribute for linear f.
    order = 4
    b = {}
    for n in range(1, order + 1):
        for code in enumerate_unlabelled("tree", n):
            b[code] = Fraction(0)
    for k, code in enumerate(["()", "(())", "((()))", "(((())))"], 1):
        b[code] = Fraction((-1) ** (k - 1), k)
    g = modified_field(b, linear_field(A), order)
    h = sympy.Symbol("h")
    expected = [0, 0]
    for k in range(1, order + 1):
        terms = mat_power_apply(k)
        expected = [e + sympy.Rational((-1) ** (k - 1), k) * h ** (k - 1) * t for e, t in zip(expected, terms)]
    assert [sympy.expand(c.as_expr()) for c in g.components] == [sympy.expand(e) for e in expected]


def test_missing_coefficients():
    with pytest.raises(IncompleteCoefficientsError):
        modified_field({"()": 1}, linear_field(A), 2)


def test_obstruction_examples():
    assert volume_obstruction(exact_flow_coefficients(6), 6) == {}
    got = volume_obstruction({"()": 1, "(())": Fraction(1, 2)}, 6)
    assert list(got) == [2]
    assert got[2] == LinComb({"cycle[();()]": Fraction(1, 2)})


@pytest.mark.parametrize("n", range(2, 6))
def test_any_higher_support_is_obstructed(n):
    for code in enumerate_unlabelled("tree", n):
        assert n in volume_obstruction({"()": 1, code: 1}, n)


def test_poly_ring_domain():
    with pytest.raises(DomainError):
        poly_ring(0)
    with pytest.raises(DomainError):
        elementary_differential_tree("cycle[()]", linear_field(A))
