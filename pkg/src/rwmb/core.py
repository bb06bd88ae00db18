"""Regular weak multiplier bimonoids: data, verification and derived maps.

A structure on an object ``A`` consists of four fusion morphisms
``t1..t4: AA -> AA``, two idempotents ``e1, e2: AA -> AA`` and a counit
``j: A -> I``; the multiplication is ``m = (j*1).t1``.  Every condition is a
string-diagram equation from the shipped equation files, evaluated in the
variant of the ambient category the structure lives in (dualization moves a
structure to the reversed and/or inverse-braided category).
"""

from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .dsl import (
    PLAIN,
    Environment,
    Equation,
    Variant,
    check_equation,
    eval_matrix,
    load_equations,
    parse,
)
from .graded import BraidedContext, GradedMorphism, GradedObject, curry, power
from .linalg import (
    ExactMatrix,
    NonUnique,
    NoSolution,
    NotIdempotent,
    NotWellDefined,
    is_surjective,
    kron,
    matmul,
    right_inverse,
    solve,
    solve_along_surjection,
    split_idempotent,
)
from .report import Report

ROLE_NAMES = ("t1", "t2", "t3", "t4", "e1", "e2", "j")

DUALS = {
    "opposite": Variant(True, False),
    "coopposite": Variant(False, True),
    "opposite_coopposite": Variant(True, True),
}

# (fusion morphism, idempotent, variant relative to the structure's own)
FUSION_SUITES = (
    ("fusion1", "t1", "e1", Variant(False, False)),
    ("fusion2", "t2", "e2", Variant(True, False)),
    ("fusion3", "t3", "e2", Variant(False, True)),
    ("fusion4", "t4", "e1", Variant(True, True)),
)

_EQ_CACHE: dict[str, list[Equation]] = {}


def equations(name: str) -> list[Equation]:
    if name not in _EQ_CACHE:
        _EQ_CACHE[name] = load_equations(name)
    return _EQ_CACHE[name]


class PreconditionMismatch(ValueError):
    pass


def _run_checks(eqs: list[Equation], env: Environment, variant: Variant, parallel: int = 1,
                prefix: str = "") -> Report:
    rep = Report()
    if parallel > 1:
        with ThreadPoolExecutor(parallel) as pool:
            results = list(pool.map(lambda e: e.check(env, variant), eqs))
    else:
        results = [e.check(env, variant) for e in eqs]
    for r in results:
        rep.add(r, prefix)
    return rep


@dataclass(frozen=True)
class SemigroupA:
    """Object with a multiplication; properties are recomputed on demand."""

    A: GradedObject
    m: GradedMorphism

    def associative(self) -> bool:
        m = self.m.matrix
        n = self.A.dim
        one = ExactMatrix.identity(n, m.field)
        return matmul(m, kron(m, one)) == matmul(m, kron(one, m))

    def surjective(self) -> bool:
        return is_surjective(self.m.matrix)

    def nondegenerate(self, side: str) -> bool:
        n = self.A.dim
        return curry(self.m.matrix, n, n, side).rank() == n


class RwmbStructure:
    """The tuple ``(t1, t2, t3, t4, e1, e2, j)`` on ``A`` read in a category variant."""

    def __init__(self, A: GradedObject, t1, t2, t3, t4, e1, e2, j, variant: Variant = PLAIN,
                 name: str = ""):
        ctx = A.context
        AA = power(A, 2)
        self.A = A
        self.name = name
        self.variant = variant
        maps = {}
        for key, val in zip(ROLE_NAMES, (t1, t2, t3, t4, e1, e2, j)):
            mat = val.matrix if isinstance(val, GradedMorphism) else val
            if key == "j":
                maps[key] = GradedMorphism(A, ctx.unit, mat)
            else:
                maps[key] = GradedMorphism(AA, AA, mat)
        self.maps: dict[str, GradedMorphism] = maps
        self._env = None
        self._derived: dict[str, object] = {}

    # access -----------------------------------------------------------------

    @property
    def context(self) -> BraidedContext:
        return self.A.context

    @property
    def field(self):
        return self.context.field

    def __getattr__(self, key):
        if key in ROLE_NAMES:
            return self.__dict__["maps"][key]
        raise AttributeError(key)

    def matrices(self) -> dict[str, ExactMatrix]:
        return {k: v.matrix for k, v in self.maps.items()}

    def replace(self, variant: Variant | None = None, name: str | None = None, **maps) -> "RwmbStructure":
        cur = self.matrices()
        cur.update({k: (v.matrix if isinstance(v, GradedMorphism) else v) for k, v in maps.items()})
        return RwmbStructure(self.A, *(cur[k] for k in ROLE_NAMES),
                             variant=self.variant if variant is None else variant,
                             name=self.name if name is None else name)

    def __eq__(self, other):
        return (isinstance(other, RwmbStructure) and self.A == other.A
                and self.variant == other.variant and self.matrices() == other.matrices())

    def __hash__(self):
        return hash((self.A, self.variant))

    def env(self) -> Environment:
        if self._env is None:
            env = Environment(self.context, {"A": self.A})
            for k in ROLE_NAMES:
                env.add(k, self.maps[k].matrix, ("A",) if k == "j" else ("A", "A"),
                        () if k == "j" else ("A", "A"))
            self._env = env
        return self._env

    def ev(self, text: str, extra: Mapping[str, tuple] | None = None, variant: Variant | None = None,
           macros=None) -> ExactMatrix:
        """Evaluate an expression in this structure's variant (optionally composed with another)."""
        env = self.env() if not extra else self.env().extended(extra)
        v = self.variant if variant is None else self.variant * variant
        return eval_matrix(parse(text, macros=macros or _MACROS), env, v)

    @property
    def m(self) -> ExactMatrix:
        if "m" not in self._derived:
            self._derived["m"] = self.ev("(j*1).t1")
        return self._derived["m"]

    def semigroup(self) -> SemigroupA:
        """The multiplication as it acts in the underlying strict category."""
        return SemigroupA(self.A, GradedMorphism(power(self.A, 2), self.A, self.m))

    def braid(self) -> ExactMatrix:
        return self.ev("C")

    def braid_inv(self) -> ExactMatrix:
        return self.ev("Ci")

    # solving linear equations in one tensor slot ------------------------------

    def solve_slot(self, outer: ExactMatrix, rhs: ExactMatrix, written_slot: str, x_in: int, x_out: int,
                   n: int) -> ExactMatrix:
        """Solve ``outer . (X*1) == rhs`` (slot 'left') or ``outer . (1*X) == rhs``.

        The slot is as written in this structure's variant; reversal flips it.
        """
        slot = written_slot
        if self.variant.rev:
            slot = "right" if slot == "left" else "left"
        return solve_in_slot(outer, rhs, slot, x_in, x_out, n)


_MACROS = {
    "C": parse("c(A,A)"),
    "Ci": parse("cinv(A,A)"),
}
_MACROS["m"] = parse("(j*1).t1")
for _k, _v in {
    "pibarR1": "(1*j).e1.C", "pibarR2": "(1*j).t1", "pibarL1": "(j*1).t2", "pibarL2": "(j*1).e2.C",
    "pil1": "(j*1).e1", "pil2": "(j*1).t4.C", "pir1": "(1*j).t3.C", "pir2": "(1*j).e2",
    "d1": "(m*1).(1*C).(t1*1).(1*Ci)", "d2": "(1*m).(C*1).(1*t2).(Ci*1)",
}.items():
    _MACROS[_k] = parse(_v, macros=_MACROS)
MACROS = _MACROS


def solve_in_slot(outer: ExactMatrix, rhs: ExactMatrix, slot: str, x_in: int, x_out: int,
                  n: int) -> ExactMatrix:
    """Unique ``X`` (``x_out x x_in``) with ``outer @ (X (x) 1_n) == rhs`` or ``outer @ (1_n (x) X) == rhs``.

    Raises NoSolution when inconsistent and NonUnique when ``outer`` does not
    determine ``X``.
    """
    f = outer.field
    r = outer.rows
    if outer.cols != x_out * n or rhs.cols != x_in * n or rhs.rows != r:
        raise ValueError("solve_in_slot: incompatible shapes")
    M, R = {}, {}
    for row, rr in outer.rowmap().items():
        for col, v in rr.items():
            if slot == "left":
                k, c = divmod(col, n)
            else:
                c, k = divmod(col, x_out)
            M[(c * r + row, k)] = v
    for row, rr in rhs.rowmap().items():
        for col, v in rr.items():
            if slot == "left":
                i, c = divmod(col, n)
            else:
                c, i = divmod(col, x_in)
            R[(c * r + row, i)] = v
    Mm = ExactMatrix.from_entries(n * r, x_out, M, f)
    Rm = ExactMatrix.from_entries(n * r, x_in, R, f)
    return solve(Mm, Rm, require_unique=True)


# verification ---------------------------------------------------------------

def derived_multiplication(t1: GradedMorphism, j: GradedMorphism) -> GradedMorphism:
    """``(j*1).t1``."""
    A = j.source
    one = ExactMatrix.identity(A.dim, A.context.field)
    return GradedMorphism(t1.source, A, matmul(kron(j.matrix, one), t1.matrix))


def check_wcfm(A: GradedObject, t, e, j, variant: Variant = PLAIN, parallel: int = 1) -> Report:
    """Check the fusion morphism axioms for ``(t, e, j)``, one result per axiom."""
    env = Environment(A.context, {"A": A})
    for name, val in (("t", t), ("e", e)):
        env.add(name, val.matrix if isinstance(val, GradedMorphism) else val, ("A", "A"), ("A", "A"))
    env.add("j", j.matrix if isinstance(j, GradedMorphism) else j, ("A",), ())
    return _run_checks(equations("fusion_axioms"), env, variant, parallel)


def _suite(s: RwmbStructure, file: str, parallel: int = 1, prefix: str = "") -> Report:
    return _run_checks(equations(file), s.env(), s.variant, parallel, prefix)


def check_compatibility(s: RwmbStructure, which: str | None = None) -> Report:
    eqs = [e for e in equations("compatibility") if which is None or e.name == which]
    return _run_checks(eqs, s.env(), s.variant)


def check_interchange(s: RwmbStructure, which: str | None = None) -> Report:
    eqs = [e for e in equations("interchange") if which is None or e.name == which]
    return _run_checks(eqs, s.env(), s.variant)


def check_multiplication(s: RwmbStructure, which: str | None = None) -> Report:
    eqs = [e for e in equations("multiplication") if which is None or e.name == which]
    return _run_checks(eqs, s.env(), s.variant)


def fusion_suite(s: RwmbStructure, index: int, parallel: int = 1) -> Report:
    label, t, e, rel = FUSION_SUITES[index - 1]
    mats = s.matrices()
    return check_wcfm(s.A, mats[t], mats[e], mats["j"], s.variant * rel, parallel)


def check_rwmb(s: RwmbStructure, parallel: int = 1) -> Report:
    """Every defining condition, reported individually."""
    rep = Report()
    sg = s.semigroup()
    rep.flag("m_surjective", sg.surjective())
    rep.flag("m_nondegenerate_left", sg.nondegenerate("left"))
    rep.flag("m_nondegenerate_right", sg.nondegenerate("right"))
    rep.extend(_suite(s, "compatibility", parallel))
    rep.extend(_suite(s, "interchange", parallel))
    rep.extend(_suite(s, "multiplication", parallel))
    for i, (label, *_rest) in enumerate(FUSION_SUITES, 1):
        rep.extend(fusion_suite(s, i, parallel), prefix=label + ":")
    return rep


def appendix_suite(s: RwmbStructure, parallel: int = 1) -> Report:
    """The derived identity battery; all of it holds for a valid structure."""
    return _suite(s, "appendix", parallel)


def dualize(s: RwmbStructure, which: str) -> RwmbStructure:
    """The structure obtained by reversing and/or inverting the braiding.

    Conjugation ``c^-1 . t . c`` uses the braiding of the category the input
    lives in.
    """
    if which not in DUALS:
        raise ValueError(f"unknown dual {which!r}; choose from {sorted(DUALS)}")
    t = s.matrices()
    c, ci = s.braid(), s.braid_inv()

    def conj(x):
        return matmul(ci, matmul(x, c))

    if which == "opposite":
        new = dict(t1=t["t2"], t2=t["t1"], t3=t["t4"], t4=t["t3"], e1=t["e2"], e2=t["e1"])
    elif which == "coopposite":
        new = dict(t1=conj(t["t4"]), t2=conj(t["t3"]), t3=conj(t["t2"]), t4=conj(t["t1"]),
                   e1=conj(t["e1"]), e2=conj(t["e2"]))
    else:
        new = dict(t1=conj(t["t3"]), t2=conj(t["t4"]), t3=conj(t["t1"]), t4=conj(t["t2"]),
                   e1=conj(t["e2"]), e2=conj(t["e1"]))
    suffix = f"{s.name}^{which}" if s.name else which
    return s.replace(variant=s.variant * DUALS[which], name=suffix, **new)


def complete_from_t1(sg: SemigroupA, t1: GradedMorphism | ExactMatrix,
                     variant: Variant = PLAIN) -> dict[str, ExactMatrix]:
    """The unique ``t2, t3, t4`` compatible with ``t1`` through ``m``.

    Raises NoSolution (naming the equation) when ``t1`` admits no partner,
    NonUnique when ``m`` is too degenerate to determine it.
    """
    A = sg.A
    n = A.dim
    t1m = t1.matrix if isinstance(t1, GradedMorphism) else t1
    env = Environment(A.context, {"A": A})
    env.add("m", sg.m.matrix, ("A", "A"), ("A",))
    env.add("t1", t1m, ("A", "A"), ("A", "A"))

    def ev(text):
        return eval_matrix(parse(text, macros=_MACROS_NO_M), env, variant)

    outer = ev("1*m")
    rhs = {
        "t2": ("c12", ev("(m*1).(1*t1)")),
        "t3": ("c13", ev("(1*m).(1*Ci).(t1*1).(1*C)")),
        "t4": ("c14", ev("(m*1).(Ci*1).(1*t1)")),
    }
    slot = "right" if variant.rev else "left"
    out = {}
    for key, (eq, k) in rhs.items():
        try:
            x = solve_in_slot(outer, k, slot, n * n, n * n, n)
        except NoSolution:
            raise NoSolution(f"{eq}: no {key} is compatible with t1") from None
        except NonUnique as exc:
            raise NonUnique(f"{eq}: {key} is not determined ({exc})") from None
        out[key] = x
    return out


_MACROS_NO_M = {"C": _MACROS["C"], "Ci": _MACROS["Ci"]}


def complete_structure(A: GradedObject, t1, e1, e2, j, variant: Variant = PLAIN, name: str = "") -> RwmbStructure:
    """Build a structure from ``t1, e1, e2, j`` with the other fusion morphisms solved for."""
    t1m = t1.matrix if isinstance(t1, GradedMorphism) else t1
    jm = j.matrix if isinstance(j, GradedMorphism) else j
    probe = RwmbStructure(A, t1m, t1m, t1m, t1m, e1, e2, jm, variant=variant)
    rest = complete_from_t1(probe.semigroup(), t1m, variant)
    return RwmbStructure(A, t1m, rest["t2"], rest["t3"], rest["t4"], e1, e2, jm, variant=variant, name=name)


# derived maps ---------------------------------------------------------------

PI_PAIRS = {
    "pibarR": ("pibarR1", "pibarR2"),
    "pibarL": ("pibarL1", "pibarL2"),
    "pil": ("pil1", "pil2"),
    "pir": ("pir1", "pir2"),
}


def pi_maps(s: RwmbStructure) -> dict[str, ExactMatrix]:
    """The eight contractions ``AA -> A`` (keys as in :data:`PI_PAIRS`)."""
    if "pi" not in s._derived:
        s._derived["pi"] = {name: s.ev(name) for pair in PI_PAIRS.values() for name in pair}
    return s._derived["pi"]


def check_pi_pairs(s: RwmbStructure) -> Report:
    """Each pair ``(f1, f2)`` satisfies ``m.(1*f1) == m.(f2*1)``."""
    rep = Report()
    pis = pi_maps(s)
    extra = {k: (v, ("A", "A"), ("A",)) for k, v in pis.items()}
    extra["mm"] = (s.m, ("A", "A"), ("A",))
    env = s.env().extended(extra)
    for pair, (f1, f2) in PI_PAIRS.items():
        rep.add(check_equation(parse(f"mm.(1*{f1})"), parse(f"mm.({f2}*1)"), env, s.variant,
                               name=f"{pair}_components"))
    return rep


def multiplication_section(s: RwmbStructure) -> ExactMatrix:
    """Right inverse of ``m`` (``A -> AA``)."""
    if "msec" not in s._derived:
        s._derived["msec"] = right_inverse(s.m)
    return s._derived["msec"]


G_LAWS = [
    ("g_defining_1", "g.(1*m)", "(pibarR2*1).(1*t1)"),
    ("g_defining_2", "g.(m*1)", "(1*pibarL1).(t2*1)"),
    ("g_e1", "(m*1).(1*C).(g*1)", "(m*1).(1*e1).(1*C)"),
    ("g_e2", "(1*m).(C*1).(1*g)", "(1*m).(e2*1).(C*1)"),
    ("g_right_linear", "(m*1).(1*g)", "g.(m*1)"),
    ("g_left_linear", "(1*m).(g*1)", "g.(1*m)"),
    ("g_counit_1", "(1*j).t1", "(1*j).g"),
    ("g_counit_2", "(j*1).t2", "(j*1).g"),
]


def _g_from(s: RwmbStructure, m: ExactMatrix) -> ExactMatrix:
    env_extra = {"mm": (m, ("A", "A"), ("A",)), "msec": (right_inverse(m), ("A",), ("A", "A"))}
    p = s.ev("1*mm", env_extra)
    sec = s.ev("1*msec", env_extra)
    f = s.ev("(pibarR2*1).(1*t1)", env_extra)
    return solve_along_surjection(p, f, section=sec)


def g_morphism(s: RwmbStructure) -> tuple[ExactMatrix, Report]:
    """The map ``g: AA -> AA`` factoring ``(pibarR2*1).(1*t1)`` through ``1*m``, with its properties."""
    if "g" not in s._derived:
        s._derived["g"] = _g_from(s, s.m)
    g = s._derived["g"]
    rep = Report()
    env = s.env().extended({"g": (g, ("A", "A"), ("A", "A"))})
    for name, lhs, rhs in G_LAWS:
        rep.add(check_equation(parse(lhs, macros=_MACROS), parse(rhs, macros=_MACROS), env, s.variant, name))
    return g, rep


def dhat_surjective(s: RwmbStructure, which: int = 1) -> bool:
    """Whether ``d_i`` maps onto the image of the idempotent ``e_i``."""
    d = s.ev(f"d{which}")
    e = s.maps[f"e{which}"].matrix
    hat, _ = split_idempotent(e)
    return is_surjective(matmul(hat, d))


def counit_variation(s: RwmbStructure, j_new: ExactMatrix) -> RwmbStructure:
    """Structure with the same ``t``'s and counit ``j_new``; ``e1, e2`` solved from the ``g`` relations.

    ``g'`` factors ``(pibarR2'*1).(1*t1)`` through ``1*m`` for the original
    multiplication; ``e1'`` and ``e2'`` are then forced by non-degeneracy.
    Raises NotWellDefined or NoSolution when no such data exist.
    """
    trial = s.replace(j=j_new)
    g = _g_from(trial, s.m)
    n = s.A.dim
    extra = {"mm": (s.m, ("A", "A"), ("A",)), "g": (g, ("A", "A"), ("A", "A"))}
    # (mm*1).(1*e1') == (mm*1).(1*C).(g*1).(1*Ci)
    e1 = s.solve_slot(s.ev("mm*1", extra), s.ev("(mm*1).(1*C).(g*1).(1*Ci)", extra), "right",
                      n * n, n * n, n)
    # (1*mm).(e2'*1) == (1*mm).(C*1).(1*g).(Ci*1)
    e2 = s.solve_slot(s.ev("1*mm", extra), s.ev("(1*mm).(C*1).(1*g).(Ci*1)", extra), "left",
                      n * n, n * n, n)
    return s.replace(e1=e1, e2=e2, j=j_new, name=f"{s.name}~j")


def check_uniqueness_equivalences(s: RwmbStructure, sp: RwmbStructure, strict: bool = True) -> Report:
    """Evaluate ``e1 = e1'``, ``e2 = e2'``, ``g = g'``, ``j = j'`` for two structures with equal ``t``'s.

    Both ``g`` maps are computed through the multiplication of ``s``.  With
    ``strict`` the induced multiplications must agree; otherwise the
    mismatch is only recorded.  The report fails if the four values are not
    all equal, or if both ``d1`` factorizations are surjective and the
    values are not all true.
    """
    if s.A != sp.A or s.variant != sp.variant:
        raise PreconditionMismatch("structures live on different objects or categories")
    for k in ("t1", "t2", "t3", "t4"):
        if s.maps[k] != sp.maps[k]:
            raise PreconditionMismatch(f"{k} differs")
    same_m = s.m == sp.m
    if strict and not same_m:
        raise PreconditionMismatch("induced multiplications differ")
    rep = Report()
    vals = {
        "e1_equal": s.maps["e1"] == sp.maps["e1"],
        "e2_equal": s.maps["e2"] == sp.maps["e2"],
        "j_equal": s.maps["j"] == sp.maps["j"],
    }
    try:
        g1 = _g_from(s, s.m)
        g2 = _g_from(sp, s.m)
        vals["g_equal"] = g1 == g2
    except NotWellDefined:
        vals["g_equal"] = False
        rep.notes["g_prime_defined"] = False
    rep.notes.update(vals)
    rep.notes["multiplications_equal"] = same_m
    consistent = len(set(vals.values())) == 1
    rep.flag("equivalences_consistent", consistent)
    try:
        epi = dhat_surjective(s, 1) and dhat_surjective(sp, 1)
    except NotIdempotent:
        epi = False
        rep.notes["e1_idempotent_both"] = False
    rep.notes["dhat1_surjective_both"] = epi
    if epi and same_m:
        rep.flag("all_hold_when_dhat_epi", all(vals.values()))
    return rep
