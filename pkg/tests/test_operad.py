import pytest
from hypothesis import given, settings, strategies as st

from aromatic import properties
from aromatic.errors import ColourError, DomainError, UnsupportedInputError
from aromatic.linalg import LinComb
from aromatic.operad import (
    compose_at,
    cycle_symmetrization,
    cyclic_brace,
    div,
    div0,
    div_matrix,
    in_span,
    is_lie_element,
    lie_basis,
    lie_bracket,
    module_action,
    prelie,
    suboperad_span,
    suboperad_span_dimension,
    tau,
    unlabelled_div0_matrix,
)
from aromatic.species import Aroma, RootedTree, parse


def lc(*texts):
    return LinComb({parse(t): 1 for t in texts})


# worked compositions -------------------------------------------------------

def test_grafting_two_leaves_into_an_edge():
    got = compose_at(parse("s(1,3)"), "s", parse("c(a)"))
    assert got == lc("c(1,3,a)", "c(a(1,3))", "c(1,a(3))", "c(3,a(1))")


def test_marked_composition():
    got = compose_at(parse("marked[s(1)]"), "s", parse("marked[c(a)]"))
    assert got == lc("marked[c(1,a)]", "marked[c(a(1))]")


def test_grafting_into_an_aroma():
    got = compose_at(parse("marked[s(1)]"), "s", parse("cycle[a;c]"))
    assert got == lc("cycle[a(1);c]", "cycle[a;c(1)]")


def test_tadpole_composition_is_divergence():
    got = compose_at(parse("cycle[s]"), "s", parse("c(a)"))
    assert got == lc("cycle[c(a)]", "cycle[a;c]")
    assert got == div(parse("c(a)"))


def test_colour_and_domain_errors():
    with pytest.raises(ColourError):
        compose_at(parse("s(1)"), "s", parse("cycle[2]"))
    with pytest.raises(ColourError):
        compose_at(parse("marked[s(1)]"), "s", parse("2(3)"))
    with pytest.raises(DomainError):
        compose_at(parse("s(1)"), "x", parse("2"))
    with pytest.raises(DomainError):
        compose_at(parse("s(1)"), "s", parse("1"))


# operations --------------------------------------------------------------------

def test_prelie_on_generators():
    assert prelie(parse("1"), parse("2")) == lc("1(2)")
    assert prelie(parse("1(2)"), parse("3")) == lc("1(2,3)", "1(2(3))")
    assert lie_bracket(parse("1"), parse("2")) == lc("1(2)") - lc("2(1)")


def test_module_action_and_divergence():
    assert module_action(parse("cycle[1]"), parse("2")) == lc("cycle[1(2)]")
    assert div(parse("1(2)")) == lc("cycle[1(2)]", "cycle[1;2]")
    assert div0(parse("1(2)")) == lc("cycle[1;2]")
    assert div0(parse("1")) == 0
    assert tau(parse("1(2)")) == parse("cycle[1(2)]")


def test_brace_base_cases():
    assert cyclic_brace([parse("1(2)")]) == div(parse("1(2)"))
    assert cyclic_brace([parse("1"), parse("2")]) == lc("cycle[1;2]")
    assert cyclic_brace([parse("1"), parse("2"), parse("3")]) == lc("cycle[1;2;3]", "cycle[1;3;2]")


@pytest.mark.parametrize("n", range(1, 6))
def test_brace_of_vertices_is_cycle_symmetrization(n):
    assert cyclic_brace([RootedTree.single(i) for i in range(1, n + 1)]) == cycle_symmetrization(range(1, n + 1))


@pytest.mark.parametrize("args", [["1(2)", "3"], ["1(2)", "3(4)"], ["1", "2(3)", "4"], ["1(2,3)", "4", "5(6)"]])
def test_brace_splits_into_cyclic_orders_and_longer_cycles(args):
    exact, expected, longer, shorter = properties.brace_cycle_split([parse(a) for a in args])
    assert exact == expected
    assert not shorter
    assert all(a.cycle_length > len(args) for a in longer.keys())


# structural identities -----------------------------------------------------

@pytest.mark.parametrize(
    "check",
    [
        properties.check_associativity,
        properties.check_equivariance,
        properties.check_prelie_identity,
        properties.check_module_identity,
        properties.check_cocycle_identity,
        properties.check_jacobi,
        properties.check_brace_cyclic_orders,
    ],
    ids=lambda f: f.__name__,
)
def test_structural_identity(check):
    results = check()
    assert results and all(ok for _, ok in results), results


@st.composite
def labelled_tree(draw, labels):
    labels = draw(st.permutations(labels))
    succ = {labels[0]: None}
    for i in range(1, len(labels)):
        succ[labels[i]] = labels[draw(st.integers(0, i - 1))]
    return RootedTree.from_successors(succ)


@given(labelled_tree([1, 2, 3]), labelled_tree([4, 5]), labelled_tree([6, 7]))
@settings(max_examples=40, deadline=None)
def test_prelie_identity_random(a, b, c):
    assert prelie(prelie(a, b), c) - prelie(a, prelie(b, c)) == prelie(prelie(a, c), b) - prelie(a, prelie(c, b))


@given(labelled_tree([1, 2]), labelled_tree([3, 4, 5]))
@settings(max_examples=30, deadline=None)
def test_cocycle_random(a, b):
    tadpole = Aroma.from_successors({0: 0})
    lhs = properties.compose_lin(tadpole, 0, lie_bracket(a, b))
    assert lhs == module_action(div(a), b) - module_action(div(b), a)


# span and kernels ------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 5))
def test_suboperad_span_dimension(n):
    assert suboperad_span_dimension(n) == (n + 1) ** (n - 1)


def test_oriented_three_cycles_not_generated():
    basis = suboperad_span(3)
    a, b = parse("cycle[1;2;3]"), parse("cycle[1;3;2]")
    assert not in_span(basis, LinComb({a: 1, b: -1}))
    assert in_span(basis, LinComb({a: 1, b: 1}))


@pytest.mark.parametrize("n", range(1, 6))
def test_divergence_rank_and_lie_kernel(n):
    assert div_matrix(n).rank() == n ** (n - 1)
    kernel = div_matrix(n, reduced=True).kernel_basis()
    lie = lie_basis(n)
    assert len(kernel) == len(lie)
    assert all(is_lie_element(x) for x in lie)
    assert all(in_span(lie, x) for x in kernel)


def test_lie_criteria_agree():
    x = prelie(parse("1"), parse("2"))
    assert not is_lie_element(x)
    assert not is_lie_element(x, "sym∘div0")
    for y in lie_basis(4):
        assert is_lie_element(y, "sym∘div0")
    with pytest.raises(UnsupportedInputError):
        is_lie_element(lc("1(2)", "3"))
    with pytest.raises(DomainError):
        is_lie_element(x, "bogus")


def test_unlabelled_reduced_divergence_is_injective():
    for n in range(2, 6):
        m = unlabelled_div0_matrix(n)
        assert m.rank() == len(m.cols)
    assert unlabelled_div0_matrix(1).shape == (0, 1)
