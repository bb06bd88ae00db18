import pytest

from rwmb.core import (
    DUALS,
    PreconditionMismatch,
    appendix_suite,
    check_pi_pairs,
    check_rwmb,
    check_uniqueness_equivalences,
    complete_from_t1,
    counit_variation,
    dualize,
    g_morphism,
    pi_maps,
)
from rwmb.generators import gen_exterior_super
from rwmb.graded import Bicharacter, BraidedContext, GradingError
from rwmb.linalg import QQ, ExactMatrix, NoSolution, NotWellDefined

NAMES = ["z2", "arrow", "exterior"]


def corrupt(m: ExactMatrix, r: int, c: int, delta=1) -> ExactMatrix:
    e = dict(m.entries())
    e[(r, c)] = e.get((r, c), 0) + delta
    return ExactMatrix.from_entries(m.rows, m.cols, e, m.field)


@pytest.mark.parametrize("name", NAMES)
def test_certified_structures_pass_everything(certified, name):
    s = certified[name]
    rep = check_rwmb(s)
    assert rep.passed, rep.summary()
    assert len(rep) >= 18
    app = appendix_suite(s)
    assert app.passed, app.summary()
    assert len(app) >= 34


@pytest.mark.parametrize("name", NAMES)
def test_completion_reproduces_partners(certified, name):
    s = certified[name]
    out = complete_from_t1(s.semigroup(), s.t1)
    for k in ("t2", "t3", "t4"):
        assert out[k] == s.maps[k].matrix


@pytest.mark.parametrize("name,entry", [("z2", (0, 1)), ("arrow", (0, 1)), ("exterior", (0, 0))])
def test_completion_rejects_corrupted_t1(certified, name, entry):
    s = certified[name]
    with pytest.raises(NoSolution, match="c12"):
        complete_from_t1(s.semigroup(), corrupt(s.t1.matrix, *entry))


def test_zero_t1_is_solved_by_zero(z2):
    # (m*1).(1*0) == (1*m).(X*1) is solved by X = 0
    zero = ExactMatrix.zeros(4, 4, QQ)
    assert all(x.is_zero() for x in complete_from_t1(z2.semigroup(), zero).values())


def test_zeroed_t2_fails_c12_first(arrow):
    bad = arrow.replace(t2=ExactMatrix.zeros(9, 9, QQ))
    rep = check_rwmb(bad)
    assert rep.first_failure().name == "c12"
    assert rep["c12"].witness is not None


def test_corrupted_j_breaks_axiom_vii(arrow):
    j = corrupt(arrow.j.matrix, 0, 1)
    rep = check_rwmb(arrow.replace(j=j))
    assert not rep.passed
    assert any(r.label == "AxiomVII" and not r.passed for r in rep.sorted())


def test_exterior_needs_the_sign():
    s = gen_exterior_super(QQ)
    assert s.t1.matrix.entries()  # built in super vector spaces
    ctx = s.context
    with pytest.raises(GradingError):
        Bicharacter(ctx.group, QQ, [[1, 1], [1, 0]])
    plain = BraidedContext(ctx.group, Bicharacter.trivial(ctx.group, QQ), QQ)
    A = plain.obj_from_indices(s.A.grades)
    from rwmb.core import RwmbStructure
    unsigned = RwmbStructure(A, *(s.maps[k].matrix for k in ("t1", "t2", "t3", "t4", "e1", "e2", "j")))
    rep = check_rwmb(unsigned)
    assert not rep.passed
    assert any(r.label == "AxiomI" and not r.passed for r in rep.sorted())


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("which", sorted(DUALS))
def test_duals_are_structures(certified, name, which):
    s = certified[name]
    d = dualize(s, which)
    assert check_rwmb(d).passed
    assert dualize(d, which) == s


def test_unknown_dual(z2):
    with pytest.raises(ValueError):
        dualize(z2, "sideways")


@pytest.mark.parametrize("name", NAMES)
def test_g_lemma(certified, name):
    g, rep = g_morphism(certified[name])
    assert rep.passed, rep.summary()
    assert len(rep) == 8


@pytest.mark.parametrize("name", NAMES)
def test_contraction_pairs(certified, name):
    s = certified[name]
    assert set(pi_maps(s)) >= {"pil1", "pil2", "pir1", "pir2", "pibarL1", "pibarL2", "pibarR1", "pibarR2"}
    assert check_pi_pairs(s).passed


@pytest.mark.parametrize("name", NAMES)
def test_uniqueness_equivalences(certified, name):
    s = certified[name]
    same = check_uniqueness_equivalences(s, s)
    assert same.passed
    assert all(same.notes[k] for k in ("e1_equal", "e2_equal", "g_equal", "j_equal"))
    sp = counit_variation(s, s.j.matrix.scale(2))
    other = check_uniqueness_equivalences(s, sp, strict=False)
    assert other.passed
    assert not any(other.notes[k] for k in ("e1_equal", "e2_equal", "g_equal", "j_equal"))
    assert not check_rwmb(sp).passed
    with pytest.raises(PreconditionMismatch):
        check_uniqueness_equivalences(s, sp)


def test_single_morphism_counit_perturbation(arrow):
    # j(f) := 2 on one morphism admits no matching e1', e2'; keeping the old ones splits the verdicts
    j = corrupt(arrow.j.matrix, 0, 1)
    with pytest.raises(NotWellDefined):
        counit_variation(arrow, j)
    rep = check_uniqueness_equivalences(arrow, arrow.replace(j=j), strict=False)
    assert rep.notes["e1_equal"] and rep.notes["e2_equal"]
    assert not rep.notes["j_equal"] and not rep.notes["g_equal"]
    assert not rep.passed


def test_uniqueness_requires_equal_t(z2, arrow):
    with pytest.raises(PreconditionMismatch):
        check_uniqueness_equivalences(z2, z2.replace(t1=z2.t2))
