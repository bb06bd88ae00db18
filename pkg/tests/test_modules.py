import oracles
import pytest

from rwmb.base import compute_base
from rwmb.core import DUALS, dualize
from rwmb.linalg import ExactMatrix, NotSurjective, kron, matmul, rank
from rwmb.modules import (
    NotAssociative,
    NotModuleMorphism,
    base_module,
    check_coactions_on_A,
    check_tensor_morphism,
    coactions_on_A,
    make_module,
    module_morphism_check,
    module_tensor,
    regular_module,
    tensor_module_morphism,
    unit_constraints,
    verify_monoidality,
)

NAMES = ["z2", "arrow", "exterior"]


@pytest.fixture(scope="module")
def bases(certified):
    return {k: compute_base(s) for k, s in certified.items()}


def right_mult(s, k):
    """``a -> a * x_k`` on the regular module."""
    n = s.A.dim
    x = ExactMatrix.from_entries(n, 1, {(k, 0): 1}, s.field)
    return matmul(s.m, kron(ExactMatrix.identity(n, s.field), x))


def left_mult(s, k):
    n = s.A.dim
    x = ExactMatrix.from_entries(n, 1, {(k, 0): 1}, s.field)
    return matmul(s.m, kron(x, ExactMatrix.identity(n, s.field)))


@pytest.mark.parametrize("name", NAMES)
def test_coactions_on_A(bases, name):
    assert check_coactions_on_A(bases[name]).passed


def test_one_dimensional_base_gives_trivial_coactions(bases):
    for name in ("z2", "exterior"):
        b = bases[name]
        tau, taubar = coactions_on_A(b)
        assert tau == taubar == ExactMatrix.identity(b.s.A.dim, b.s.field)


@pytest.mark.parametrize("name", NAMES)
def test_regular_and_base_modules(bases, name):
    b = bases[name]
    A = regular_module(b)
    assert A.report.passed
    assert (A.tau, A.taubar) == coactions_on_A(b)
    assert base_module(b).report.passed


@pytest.mark.parametrize("name", NAMES)
def test_tensor_of_regular_modules(bases, name):
    b = bases[name]
    M = regular_module(b)
    T = module_tensor(b, M, M)
    assert T.report.passed, T.report.summary()
    n = b.s.A.dim
    expected = oracles.splitting_rank(M.taubar, M.tau, b.mu, b.eps, n, n, b.dim, b.s.field.p)
    assert T.VoW.dim == rank(T.s) == expected
    if b.dim == 1:
        assert T.s == ExactMatrix.identity(n * n, b.s.field)


def test_arrow_tensor_square_is_smaller(bases):
    T = module_tensor(bases["arrow"], *[regular_module(bases["arrow"])] * 2)
    assert T.VoW.dim < 9


@pytest.mark.parametrize("name", NAMES)
def test_unit_constraints(bases, name):
    b = bases[name]
    rep = unit_constraints(b, regular_module(b))
    assert rep.passed, rep.summary()
    assert rep["canonical_unit_action"].passed


@pytest.mark.parametrize("name", NAMES)
def test_monoidality(bases, name):
    b = bases[name]
    M = regular_module(b)
    rep = verify_monoidality(b, M, base_module(b), M)
    assert rep.passed, rep.summary()


@pytest.mark.parametrize("which", sorted(DUALS))
def test_monoidality_in_every_variant(arrow, which):
    b = compute_base(dualize(arrow, which))
    assert verify_monoidality(b, regular_module(b)).passed


def test_invalid_actions(bases):
    b = bases["arrow"]
    A = b.s.A
    with pytest.raises(NotSurjective):
        make_module(b, A, ExactMatrix.zeros(3, 9, b.s.field))
    swapped = matmul(b.s.m, b.s.braid())   # a (x) x -> x a: not associative for the arrow algebra
    with pytest.raises(NotAssociative):
        make_module(b, A, swapped)


def test_module_morphisms(bases):
    b = bases["arrow"]
    s = b.s
    M = regular_module(b)
    T = module_tensor(b, M, M)
    f = right_mult(s, 0)
    assert module_morphism_check(b, M, M, f).passed
    one = ExactMatrix.identity(3, s.field)
    assert tensor_module_morphism(b, T, T, one, one) == ExactMatrix.identity(T.VoW.dim, s.field)
    h = tensor_module_morphism(b, T, T, f, right_mult(s, 1))
    assert check_tensor_morphism(b, T, T, h).passed
    bad = left_mult(s, 2)
    assert not module_morphism_check(b, M, M, bad)["A_linear"].passed
    with pytest.raises(NotModuleMorphism):
        tensor_module_morphism(b, T, T, bad, one)
