import oracles
import pytest

from rwmb.base import compute_base
from rwmb.core import SemigroupA
from rwmb.graded import BraidedContext, GradedMorphism, power
from rwmb.linalg import QQ, ExactMatrix, FieldSpec, kron, matmul
from rwmb.multiplier import (
    NotAMultiplier,
    compute_multiplier_monoid,
    i_is_isomorphism,
    n_into_MA,
    pi_into_MA,
)

NAMES = ["z2", "arrow", "exterior", "qline", "weak"]


def semigroup(grades, entries, field=QQ, ctx=None):
    ctx = ctx or BraidedContext.vect(field)
    A = ctx.obj_from_indices(grades)
    n = A.dim
    return SemigroupA(A, GradedMorphism(power(A, 2), A, ExactMatrix.from_entries(n, n * n, entries, field)))


def column_ideal():
    # span{e11, e21} in 2x2 matrices: e11 e11 = e11, e21 e11 = e21
    return semigroup((0, 0), {(0, 0): 1, (1, 2): 1})


@pytest.fixture
def structures(request):
    return {k: request.getfixturevalue(k) for k in NAMES}


@pytest.mark.parametrize("name", NAMES)
def test_unital_examples(structures, name):
    s = structures[name]
    mm = compute_multiplier_monoid(s.semigroup())
    assert mm.report.passed, mm.report.summary()
    assert i_is_isomorphism(mm).passed
    assert mm.dim == oracles.multiplier_dimension(s.m, s.A.dim, s.field.p)


@pytest.mark.parametrize("name", NAMES)
def test_contractions_and_base_land_in_multipliers(structures, name):
    s = structures[name]
    mm = compute_multiplier_monoid(s.semigroup())
    maps = pi_into_MA(s, mm)
    assert set(maps) == {"pibarR", "pibarL", "pil", "pir"}
    b = compute_base(s)
    n, mono, rep = n_into_MA(b, mm)
    assert rep.passed
    assert mono == b.n1_nondegenerate


def test_one_sided_ideal():
    sg = column_ideal()
    assert sg.nondegenerate("left") != sg.nondegenerate("right")
    mm = compute_multiplier_monoid(sg)
    assert mm.dim == oracles.multiplier_dimension(sg.m.matrix, 2) == 3
    # a multiplier (lam, 0) with lam != 0 exists because e21 is killed from the left
    assert mm.report["h1_nondegenerate_right"].passed
    assert not mm.report["h2_nondegenerate_left"].passed
    assert mm.report["product_associative"].passed and mm.report["unit_law"].passed
    iso = i_is_isomorphism(mm)
    assert iso["i_injective"].passed


def test_zero_multiplication():
    sg = semigroup((0, 0), {}, FieldSpec.prime(5))
    mm = compute_multiplier_monoid(sg)
    assert mm.dim == 8 == oracles.multiplier_dimension(sg.m.matrix, 2, 5)
    assert mm.i.is_zero()
    assert mm.report["unit_law"].passed and mm.report["product_associative"].passed


def test_graded_multipliers_split_by_degree():
    ctx = BraidedContext.super_vect(QQ)
    # k[theta] with theta^2 = 0: unital, so M(A) = A with the same grades
    sg = semigroup((0, 1), {(0, 0): 1, (1, 1): 1, (1, 2): 1}, ctx=ctx)
    mm = compute_multiplier_monoid(sg)
    assert sorted(mm.carrier.grades) == [0, 1]


def test_coordinates_reject_non_multipliers(z2):
    mm = compute_multiplier_monoid(z2.semigroup())
    n = z2.A.dim
    lam_only = ExactMatrix.from_entries(2 * n * n, 1, {(0, 0): 1}, z2.field)
    with pytest.raises(NotAMultiplier):
        mm.coordinates(lam_only)


def test_product_of_embedded_elements(arrow):
    mm = compute_multiplier_monoid(arrow.semigroup())
    assert matmul(mm.i, arrow.m) == matmul(mm.product, kron(mm.i, mm.i))
