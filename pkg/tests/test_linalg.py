from fractions import Fraction

import oracles
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rwmb.linalg import (
    QQ,
    ExactMatrix,
    FieldSpec,
    NonUnique,
    NoSolution,
    NotIdempotent,
    NotSurjective,
    NotWellDefined,
    ShapeMismatch,
    cokernel_projection,
    inverse,
    is_injective,
    kernel_basis,
    kron,
    matmul,
    rank,
    right_inverse,
    solve,
    solve_along_surjection,
    split_idempotent,
)

F7 = FieldSpec.prime(7)
BIG = FieldSpec.prime(1_000_003)   # above the sparse-integer threshold
FIELDS = [QQ, F7, BIG]


def matrices(field, rows=st.integers(0, 5), cols=st.integers(0, 5)):
    @st.composite
    def build(draw):
        r, c = draw(rows), draw(cols)
        vals = st.fractions(min_value=-3, max_value=3, max_denominator=3) if field.is_rational \
            else st.integers(-3, 3)
        data = [[draw(st.one_of(st.just(0), vals)) for _ in range(c)] for _ in range(r)]
        return ExactMatrix.from_dense(data, field) if r and c else ExactMatrix.zeros(r, c, field)
    return build()


def field_and(n=1, **kw):
    return st.sampled_from(FIELDS).flatmap(lambda f: st.tuples(st.just(f), *[matrices(f, **kw)] * n))


def test_field_parse_and_format():
    assert FieldSpec.parse("Q") == QQ
    assert FieldSpec.parse("Fp:7") == F7
    assert str(F7) == "Fp:7"
    with pytest.raises(ValueError):
        FieldSpec.parse("R")
    with pytest.raises(ValueError):
        FieldSpec.prime(9)
    assert QQ.format(QQ.element("-6/4")) == "-3/2"
    assert QQ.format(QQ.element(5)) == "5"
    assert F7.element(Fraction(1, 2)) == 4
    with pytest.raises(ZeroDivisionError):
        F7.element(Fraction(1, 7))


@st.composite
def composable(draw):
    f = draw(st.sampled_from(FIELDS))
    r, k, c = (draw(st.integers(1, 4)) for _ in range(3))
    a = draw(matrices(f, st.just(r), st.just(k)))
    b = draw(matrices(f, st.just(k), st.just(c)))
    return f, a, b


@given(composable())
def test_matmul_matches_dense(args):
    f, a, b = args
    assert oracles.dense(matmul(a, b)) == oracles.matmul(oracles.dense(a), oracles.dense(b), f.p)


@given(composable())
def test_solve_recovers_consistent_systems(args):
    f, a, x = args
    b = matmul(a, x)
    assert matmul(a, solve(a, b)) == b


@given(field_and(2, rows=st.integers(1, 3), cols=st.integers(1, 3)))
def test_kron_matches_dense(args):
    f, a, b = args
    assert oracles.dense(kron(a, b)) == oracles.kron(oracles.dense(a), oracles.dense(b), f.p)


@given(field_and(1))
def test_rank_and_kernel_match_oracle(args):
    f, a = args
    r = oracles.rank(oracles.dense(a), f.p) if a.rows and a.cols else 0
    assert rank(a) == r
    ker = kernel_basis(a)
    assert len(ker) == a.cols - r
    for v in ker:
        assert matmul(a, v).is_zero()


@given(field_and(1, rows=st.integers(1, 5), cols=st.integers(1, 5)))
def test_cokernel_projection(args):
    f, q = args
    proj, dim = cokernel_projection(q)
    assert dim == q.rows - rank(q)
    assert matmul(proj, q).is_zero()
    assert proj.rank() == dim


def test_solve_errors():
    a = ExactMatrix.from_dense([[1, 1], [2, 2]], QQ)
    with pytest.raises(NoSolution):
        solve(a, ExactMatrix.from_dense([[1], [0]], QQ))
    with pytest.raises(NonUnique):
        solve(a, ExactMatrix.from_dense([[1], [2]], QQ), require_unique=True)
    with pytest.raises(ShapeMismatch):
        solve(a, ExactMatrix.zeros(3, 1, QQ))


@given(field_and(1, rows=st.integers(1, 4), cols=st.integers(1, 4)))
def test_idempotent_splitting(args):
    f, a = args
    # an idempotent from a section of the cokernel projection
    if rank(a) == 0:
        return
    proj, _ = cokernel_projection(a)
    if proj.rows == 0:
        return
    sec = right_inverse(proj)
    e = matmul(sec, proj)
    hat, check = split_idempotent(e)
    assert matmul(check, hat) == e
    assert matmul(hat, check) == ExactMatrix.identity(hat.rows, f)


def test_split_rejects_non_idempotent():
    with pytest.raises(NotIdempotent):
        split_idempotent(ExactMatrix.from_dense([[2]], QQ))


def test_solve_along_surjection():
    p = ExactMatrix.from_dense([[1, 1, 0], [0, 0, 1]], QQ)
    f = ExactMatrix.from_dense([[3, 3, 5]], QQ)
    g = solve_along_surjection(p, f)
    assert matmul(g, p) == f
    with pytest.raises(NotWellDefined):
        solve_along_surjection(p, ExactMatrix.from_dense([[1, 0, 0]], QQ))
    with pytest.raises(NotSurjective):
        right_inverse(ExactMatrix.from_dense([[1, 1]] * 2, QQ))


def test_inverse_and_injectivity():
    m = ExactMatrix.from_dense([[2, 1], [1, 1]], F7)
    assert matmul(inverse(m), m) == ExactMatrix.identity(2, F7)
    assert is_injective(m)
    assert not is_injective(ExactMatrix.from_dense([[1, 1]], F7))


def test_large_prime_agrees_with_rationals():
    data = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    assert rank(ExactMatrix.from_dense(data, BIG)) == rank(ExactMatrix.from_dense(data, QQ)) == 3
    assert rank(ExactMatrix.from_dense(data, FieldSpec.prime(3))) == oracles.rank(
        [[Fraction(x) for x in r] for r in data], 3)
