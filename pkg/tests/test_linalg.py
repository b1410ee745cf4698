from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from aromatic.errors import BasisMismatchError, ComplexInvalidError
from aromatic.linalg import (
    BasisIndex,
    ChainComplex,
    LinComb,
    SparseRationalMatrix,
    homology_dimensions,
    induced_action_trace,
    matrix_of_map,
)


def from_dense(rows):
    r, c = len(rows), len(rows[0]) if rows else 0
    R, C = BasisIndex(range(r)), BasisIndex(range(c))
    cols = [{i: rows[i][j] for i in range(r) if rows[i][j]} for j in range(c)]
    return SparseRationalMatrix(R, C, cols)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(
            st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4) | st.just(Fraction(0)), min_size=c, max_size=c),
            min_size=r, max_size=r,
        )
    )
)


@given(matrices)
@settings(max_examples=150)
def test_rank_and_kernel_match_sympy(rows):
    m = from_dense(rows)
    ref = sympy.Matrix(rows)
    assert m.rank() == ref.rank()
    ker = m.kernel_basis()
    assert len(ker) == len(ref.nullspace())
    for v in ker:
        assert not m.apply(v)
        assert all(c.denominator == 1 for _, c in v.items())


def test_lincomb_arithmetic():
    a = LinComb({"x": 1, "y": Fraction(1, 2)})
    b = LinComb({"y": Fraction(-1, 2), "z": 3})
    assert a + b == LinComb({"x": 1, "z": 3})
    assert a - a == 0
    assert (a * 2).coeff("y") == 1
    assert str(LinComb({"a": 1, "b": -2})) == "a - 2*b"
    with pytest.raises(TypeError):
        hash(a)


def test_basis_mismatch():
    b = BasisIndex(["a", "b"])
    with pytest.raises(BasisMismatchError):
        b.index("c")
    with pytest.raises(BasisMismatchError):
        matrix_of_map(b, b, lambda k: LinComb.basis("c"))


def test_acyclic_two_term_complex():
    b0, b1 = BasisIndex(["x"]), BasisIndex(["y"])
    c = ChainComplex({0: b0, 1: b1}, {1: SparseRationalMatrix(b0, b1, [{0: 1}])})
    assert homology_dimensions(c) == {0: 0, 1: 0}


def test_invalid_complex_reports_witness():
    b = [BasisIndex([f"e{k}"]) for k in range(3)]
    d = {1: SparseRationalMatrix(b[0], b[1], [{0: 1}]), 2: SparseRationalMatrix(b[1], b[2], [{0: 1}])}
    with pytest.raises(ComplexInvalidError) as info:
        ChainComplex({k: b[k] for k in range(3)}, d).check()
    assert info.value.witness == "e2"


def test_trace_on_homology():
    # swap acting on span(x, y) with zero differential: trace 0; on H of x - y it is -1.
    b = BasisIndex(["x", "y"])
    swap = {"x": "y", "y": "x"}
    c = ChainComplex({0: b}, {}, action=lambda k, perm: (swap[k], 1))
    assert induced_action_trace(c, 0, {}) == 0
    b1 = BasisIndex(["e"])
    d = SparseRationalMatrix(b, b1, [{0: 1}])  # e -> x + y
    d.columns = [{0: Fraction(1), 1: Fraction(1)}]
    c = ChainComplex({0: b, 1: b1}, {1: d}, action=lambda k, perm: ({"x": "y", "y": "x", "e": "e"}[k], 1))
    assert homology_dimensions(c) == {0: 1, 1: 0}
    assert induced_action_trace(c, 0, {}) == -1


def test_dump_format():
    m = from_dense([[1, 0], [Fraction(1, 2), -3]])
    lines = m.dump().splitlines()
    assert lines[0] == "matrix 2 2"
    assert lines[-3:] == ["0 0 1/1", "1 0 1/2", "1 1 -3/1"]
