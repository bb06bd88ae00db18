import pytest

from rwmb.core import appendix_suite, check_rwmb
from rwmb.generators import (
    GENERATORS,
    PresentationInvalid,
    VerificationFailed,
    certify,
    gen_category_algebra,
    gen_group_functions,
    gen_quantum_line,
    tensor_structures,
)
from rwmb.generators import FiniteCategoryPresentation as FCP
from rwmb.linalg import QQ, ExactMatrix, FieldSpec, matmul

F7 = FieldSpec.prime(7)


def col(n, k, f=QQ):
    return ExactMatrix.from_entries(n, 1, {(k, 0): 1}, f)


def test_exterior_facts(exterior):
    # basis 1, theta; theta (x) theta is basis vector 3 of A A
    tt = col(4, 3)
    assert matmul(exterior.t1.matrix, tt) == tt
    assert matmul(exterior.m, tt).is_zero()
    assert exterior.context.chi(1, 1) == -1


def test_group_functions_multiplication_is_pointwise(z2):
    m = z2.m
    for a in range(2):
        for b in range(2):
            out = matmul(m, col(4, 2 * a + b))
            assert out == (col(2, a) if a == b else ExactMatrix.zeros(2, 1, QQ))


def test_category_algebra_formulas(arrow):
    # morphisms id0, id1, a; a.id0 = a, id1.a = a
    names = ["id0", "id1", "a"]
    comp = {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("id1", "a"): "a", ("a", "id0"): "a"}
    for i, g in enumerate(names):
        for k, f in enumerate(names):
            h = comp.get((g, f))
            expect = col(3, names.index(h)) if h else ExactMatrix.zeros(3, 1, QQ)
            assert matmul(arrow.m, col(9, 3 * i + k)) == expect
    assert arrow.j.matrix == ExactMatrix.from_dense([[1, 1, 1]], QQ)


@pytest.mark.parametrize("factory", [lambda: FCP.discrete(3), lambda: FCP.cyclic_monoid(3), lambda: FCP.chain(3)])
def test_other_presentations_certify(factory):
    s = gen_category_algebra(factory(), F7)
    assert check_rwmb(s).passed
    assert appendix_suite(s).passed


@pytest.mark.parametrize("bad", [
    FCP(["0"], [("x", "0", "0"), ("x", "0", "0")], {("x", "x"): "x"}),
    FCP(["0"], [("x", "0", "1")], {}),
    FCP(["0"], [("x", "0", "0")], {}),
    FCP(["0"], [("e", "0", "0"), ("x", "0", "0")],
        {("e", "e"): "e", ("e", "x"): "x", ("x", "e"): "x", ("x", "x"): "e"}, {"0": "x"}),
])
def test_invalid_presentations(bad):
    with pytest.raises(PresentationInvalid):
        gen_category_algebra(bad)


def test_groups_over_prime_fields():
    s = gen_group_functions((2, 3), F7)
    assert s.A.dim == 6
    assert check_rwmb(s).passed


def test_quantum_line_is_braided_not_symmetric(qline):
    chi = qline.context.chi
    assert chi(1, 1) != 1 and chi(1, 1) ** 2 % 7 != 1
    assert check_rwmb(qline).passed and appendix_suite(qline).passed
    with pytest.raises(PresentationInvalid):
        gen_quantum_line(5, 3)
    with pytest.raises(PresentationInvalid):
        gen_quantum_line(7, 3, q=3)


def test_weak_braided_example(weak):
    # c.c is not the identity on x (x) x
    assert weak.context.chi(1, 1) ** 2 % 7 != 1
    n = weak.A.dim
    assert weak.maps["e1"].matrix != ExactMatrix.identity(n * n, weak.field)
    assert check_rwmb(weak).passed and appendix_suite(weak).passed


def test_tensor_needs_degree_zero_factor(qline):
    with pytest.raises(PresentationInvalid):
        tensor_structures(qline, qline)


def test_certify_refuses_broken_structures(z2):
    with pytest.raises(VerificationFailed) as exc:
        certify(z2.replace(t2=z2.t3.matrix.scale(0)))
    assert not exc.value.report.passed


def test_registry():
    assert set(GENERATORS) == {"group", "category", "exterior", "quantum_line", "weak_braided"}
