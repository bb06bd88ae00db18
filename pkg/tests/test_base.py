import pytest

from rwmb.base import (
    NotCoaction,
    NotFirm,
    alternative_delta,
    check_firm,
    coaction_from_firm_action,
    compute_base,
    firm_action_from_coaction,
    firm_round_trip,
    image_isomorphism,
    verify_coseparable,
)
from rwmb.core import DUALS, dualize
from rwmb.generators import gen_group_functions
from rwmb.linalg import ExactMatrix, NotWellDefined, kron, matmul
from rwmb.modules import coactions_on_A

NAMES = ["z2", "arrow", "exterior"]


@pytest.fixture(scope="module")
def bases(certified):
    return {k: compute_base(s) for k, s in certified.items()}


@pytest.mark.parametrize("name,dim", [("z2", 1), ("arrow", 2), ("exterior", 1)])
def test_dimension_and_laws(bases, name, dim):
    b = bases[name]
    assert b.dim == dim
    assert b.report.passed, b.report.summary()
    assert verify_coseparable(b).passed
    assert alternative_delta(b) == b.delta


@pytest.mark.parametrize("name", NAMES)
def test_image_isomorphism(bases, name):
    _, phi, rep = image_isomorphism(bases[name])
    assert rep.passed
    assert phi.shape == (bases[name].dim, bases[name].dim)


def test_arrow_base_is_functions_on_objects(bases):
    b = bases["arrow"]
    f = b.s.field
    # images of the two identity morphisms are orthogonal idempotents and grouplike
    xs = [matmul(b.p, ExactMatrix.from_entries(3, 1, {(k, 0): 1}, f)) for k in (0, 1)]
    for i, x in enumerate(xs):
        for k, y in enumerate(xs):
            prod = matmul(b.mu, kron(x, y))
            assert prod == (x if i == k else ExactMatrix.zeros(2, 1, f))
        assert matmul(b.delta, x) == kron(x, x)
        assert matmul(b.eps, x) == ExactMatrix.from_dense([[1]], f)


def test_unit_bimonoid():
    s = gen_group_functions(())
    b = compute_base(s)
    one = ExactMatrix.identity(1, s.field)
    assert b.dim == 1
    assert b.mu == one and b.delta == one and b.eps == one and b.p == one


@pytest.mark.parametrize("which", sorted(DUALS))
def test_base_in_every_variant(arrow, which):
    d = dualize(arrow, which)
    b = compute_base(d)
    assert b.report.passed
    assert image_isomorphism(b)[2].passed


def test_perturbed_mu_fails(bases):
    b = bases["arrow"]
    e = dict(b.mu.entries())
    e[(0, 0)] = e.get((0, 0), 0) + 1
    b2 = type(b)(**{**b.__dict__, "mu": ExactMatrix.from_entries(b.mu.rows, b.mu.cols, e, b.s.field)})
    rep = verify_coseparable(b2)
    assert not rep["coseparable"].passed
    assert rep["coseparable"].witness is not None


def test_t3_instead_of_t4_breaks_alternative_delta(bases):
    # with t3 the target map does not even factor through p.m
    with pytest.raises(NotWellDefined):
        alternative_delta(bases["arrow"], "t3")


def test_nondegeneracy_flags_agree(bases):
    for b in bases.values():
        assert b.report["n1_n2_nondegeneracy_agree"].passed
        assert b.n1_nondegenerate


def test_firm_modules(bases):
    b = bases["arrow"]
    assert firm_action_from_coaction(b.delta, b.L, b) == b.mu
    assert firm_round_trip(b.delta, b.L, b)
    zero = ExactMatrix.zeros(b.dim, b.dim * b.dim, b.s.field)
    assert not check_firm(zero, b.L, b).passed
    with pytest.raises(NotFirm):
        coaction_from_firm_action(zero, b.L, b)
    with pytest.raises(NotCoaction):
        firm_action_from_coaction(ExactMatrix.zeros(b.dim * b.dim, b.dim, b.s.field), b.L, b)


@pytest.mark.parametrize("name", NAMES)
def test_firm_round_trip_on_A(bases, name):
    b = bases[name]
    tau, _ = coactions_on_A(b)
    assert firm_round_trip(tau, b.s.A, b)
