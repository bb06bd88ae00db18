import random

import laws
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rwmb.graded import (
    Bicharacter,
    BraidedContext,
    GradedMorphism,
    GradedObject,
    GradingError,
    GradingGroup,
    braiding,
    compose,
    curry,
    identity,
    is_nondegenerate,
    tensor_object,
)
from rwmb.linalg import QQ, ExactMatrix, FieldSpec, ShapeMismatch


@given(st.integers(0, 2**32))
def test_backend_laws_random(seed):
    rng = random.Random(seed)
    for ctx in laws.contexts():
        assert all(laws.check_instance(rng, ctx).values())


def test_group_indexing():
    g = GradingGroup((2, 3))
    assert g.order == 6
    for k in range(6):
        assert g.index(g.element(k)) == k
    assert g.normalize((3, 4)) == (1, 1)
    with pytest.raises(GradingError):
        GradingGroup((0,))


def test_bicharacter_validation():
    z2 = GradingGroup((2,))
    with pytest.raises(GradingError):
        Bicharacter(z2, QQ, [[1, 1], [1, 2]])
    with pytest.raises(GradingError):
        Bicharacter(z2, QQ, [[1, 0], [1, 1]])
    assert Bicharacter.from_generators(z2, QQ, [[-1]]).is_symmetric()
    z3 = GradingGroup((3,))
    F7 = FieldSpec.prime(7)
    assert Bicharacter.from_generators(z3, F7, [[2]]).is_symmetric()
    v4 = GradingGroup((2, 2))
    assert not Bicharacter.from_generators(v4, QQ, [[1, -1], [1, 1]]).is_symmetric()


def test_super_braiding_signs():
    ctx = BraidedContext.super_vect(QQ)
    odd = ctx.obj([1])
    even = ctx.obj([0])
    assert braiding(odd, odd).matrix == ExactMatrix.from_dense([[-1]], QQ)
    assert braiding(odd, even).matrix == ExactMatrix.identity(1, QQ)
    with pytest.raises(GradingError):
        BraidedContext.super_vect(FieldSpec.prime(2))


def test_grading_is_enforced():
    ctx = BraidedContext.super_vect(QQ)
    x = ctx.obj([0, 1])
    with pytest.raises(GradingError):
        GradedMorphism(x, x, ExactMatrix.from_dense([[0, 1], [0, 0]], QQ))
    with pytest.raises(ShapeMismatch):
        GradedMorphism(x, x, ExactMatrix.identity(3, QQ))
    assert compose(identity(x), identity(x)) == identity(x)


def test_curry_and_nondegeneracy():
    ctx = BraidedContext.vect(QQ)
    a = GradedObject(ctx, (0, 0))
    # multiplication of k x k, componentwise
    m = ExactMatrix.from_entries(2, 4, {(0, 0): 1, (1, 3): 1}, QQ)
    v = GradedMorphism(tensor_object(a, a), a, m)
    assert is_nondegenerate(v, a, "left") and is_nondegenerate(v, a, "right")
    zero = GradedMorphism(tensor_object(a, a), a, ExactMatrix.from_entries(2, 4, {(0, 0): 1}, QQ))
    assert not is_nondegenerate(zero, a, "left")
    c = curry(m, 2, 2, "left")
    assert c.shape == (4, 2)
