"""The base object ``L`` of a structure and its coseparable comonoid structure."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import RwmbStructure, pi_maps
from .graded import GradedMorphism, GradedObject, is_nondegenerate
from .linalg import (
    ExactMatrix,
    LinalgError,
    NotSurjective,
    cokernel_projection,
    is_injective,
    is_surjective,
    rank,
    right_inverse,
    solve,
    solve_along_surjection,
)
from .report import Report
from .workspace import Workspace


class NondegeneracyFailure(RuntimeError):
    """``n1`` is degenerate on the right; ``partial`` holds ``L``, ``p``, ``n1``, ``n2``."""

    def __init__(self, message: str, partial: "BaseComonoid"):
        super().__init__(message)
        self.partial = partial


class NotFirm(ValueError):
    pass


class NotCoaction(ValueError):
    pass


@dataclass
class BaseComonoid:
    s: RwmbStructure
    L: GradedObject
    p: ExactMatrix
    psec: ExactMatrix
    n1: ExactMatrix
    n2: ExactMatrix
    mu: ExactMatrix | None = None
    delta: ExactMatrix | None = None
    eps: ExactMatrix | None = None
    n1_nondegenerate: bool = True
    report: Report = field(default_factory=Report)

    @property
    def dim(self) -> int:
        return self.L.dim

    @property
    def complete(self) -> bool:
        return self.mu is not None

    def workspace(self, objects=None) -> Workspace:
        """Workspace of the structure with ``L`` and all base maps registered."""
        ws = Workspace(self.s, {"L": self.L, **(objects or {})})
        ws.add("p", self.p, ("A",), ("L",))
        ws.add("psec", self.psec, ("L",), ("A",))
        ws.add("n1", self.n1, ("L", "A"), ("A",))
        ws.add("n2", self.n2, ("A", "L"), ("A",))
        if self.complete:
            ws.add("mu", self.mu, ("L", "L"), ("L",))
            ws.add("delta", self.delta, ("L",), ("L", "L"))
            ws.add("eps", self.eps, ("L",), ())
        return ws


def _graded_quotient(s: RwmbStructure, proj: ExactMatrix) -> GradedObject:
    """Grade of each quotient basis vector, read off its (homogeneous) support."""
    grades = []
    A = s.A
    for i in range(proj.rows):
        support = {A.grades[j] for j in proj.rowmap().get(i, {})}
        if len(support) != 1:
            raise LinalgError("cokernel basis vector is not homogeneous")
        grades.append(support.pop())
    return GradedObject(s.context, tuple(grades))


BASE_LAWS = [
    ("coequalizer", "p.pil1", "p.pibarR1.Ci"),
    ("n1_factorization", "n1.(p*1)", "pil1"),
    ("n2_factorization", "n2.(1*p)", "pil2"),
    ("mu_defining", "mu.(p*p)", "p.pil1"),
    ("mu_associative", "mu.(mu*id(L))", "mu.(id(L)*mu)"),
    ("delta_defining", "delta.p.m", "(p*p).t1"),
    ("delta_coassociative", "(delta*id(L)).delta", "(id(L)*delta).delta"),
    ("counit_left", "(eps*id(L)).delta", "id(L)"),
    ("counit_right", "(id(L)*eps).delta", "id(L)"),
    ("counit_defining", "eps.p", "j"),
    ("coseparable", "mu.delta", "id(L)"),
    ("bimodule_left", "(id(L)*mu).(delta*id(L))", "delta.mu"),
    ("bimodule_right", "(mu*id(L)).(id(L)*delta)", "delta.mu"),
]


def compute_base(s: RwmbStructure) -> BaseComonoid:
    """Cokernel ``L`` of ``pil1 - pibarR1.Ci`` with ``n1, n2, mu, delta, eps`` and their laws.

    Raises NotWellDefined when a factorization fails and NondegeneracyFailure
    when ``n1`` is degenerate on the right.
    """
    ws = Workspace(s)
    pis = pi_maps(s)
    q = pis["pil1"] - ws.ev("pibarR1.Ci")
    proj, _ = cokernel_projection(q)
    L = _graded_quotient(s, proj) if proj.rows else GradedObject(s.context, ())
    psec = right_inverse(proj)
    ws.add_object("L", L)
    ws.add("p", proj, ("A",), ("L",))
    ws.add("psec", psec, ("L",), ("A",))
    n1 = ws.factor("p*1", "pil1", "psec*1")
    n2 = ws.factor("1*p", "pil2", "1*psec")
    b = BaseComonoid(s, L, proj, psec, n1, n2)
    ws.add("n1", n1, ("L", "A"), ("A",))
    ws.add("n2", n2, ("A", "L"), ("A",))
    rep = b.report
    nd1 = _nondegenerate(ws, "n1", "right", s)
    nd2 = _nondegenerate(ws, "n2", "left", s)
    rep.flag("p_surjective", is_surjective(proj))
    rep.flag("n1_n2_nondegeneracy_agree", nd1 == nd2)
    b.n1_nondegenerate = nd1
    if not nd1:
        raise NondegeneracyFailure("n1 is degenerate on the right", b)
    ws.add("msec", right_inverse(s.m), ("A",), ("A", "A"))
    b.mu = ws.factor("p*p", "p.pil1", "psec*psec")
    b.delta = ws.factor("p.m", "(p*p).t1", "msec.psec")
    b.eps = ws.factor("p", "j", "psec")
    b.report.extend(verify_coseparable(b))
    return b


def _nondegenerate(ws: Workspace, name: str, side: str, s: RwmbStructure) -> bool:
    mat = ws.env.morphisms[name][0]
    src = ws.env.object_of(ws.env.morphisms[name][1])
    if s.variant.rev:
        side = "left" if side == "right" else "right"
    return is_nondegenerate(GradedMorphism(src, s.A, mat), s.A, side)


def verify_coseparable(b: BaseComonoid) -> Report:
    """Every defining relation and comonoid law of the base, checked exactly."""
    ws = b.workspace()
    ws.add("msec", right_inverse(b.s.m), ("A",), ("A", "A"))
    return ws.check_all(BASE_LAWS)


def alternative_delta(b: BaseComonoid, t: str = "t4") -> ExactMatrix:
    """The comultiplication obtained from ``delta.p.m == (p*p).t4.C``."""
    ws = b.workspace()
    ws.add("msec", right_inverse(b.s.m), ("A",), ("A", "A"))
    return ws.factor("p.m", f"(p*p).{t}.C", "msec.psec")


def pil_image(s: RwmbStructure) -> ExactMatrix:
    """Curried form of ``(pil1, pil2)``: column ``a`` lists ``pil1(a*-)`` and ``pil2(-*a)``.

    Rows are indexed by ``End(A) + End(A)``; the column space is the image of
    the left contraction as a set of multipliers.
    """
    return curried_pair(s, pi_maps(s)["pil1"], pi_maps(s)["pil2"], s.A.dim)


def curried_pair(s: RwmbStructure, f1: ExactMatrix, f2: ExactMatrix, x_dim: int) -> ExactMatrix:
    """Stack the curried forms of ``f1: X A -> A`` and ``f2: A X -> A`` into ``X -> End(A)^2``.

    Row ``w*n + a`` of the first block holds ``f1(x*a)`` at ``w``; the second
    block holds ``f2(a*x)``.  Under a reversed variant the physical roles of
    the two components swap.
    """
    n = s.A.dim
    if s.variant.rev:
        f1, f2 = f2, f1
    c1 = _transpose_curry(f1, x_dim, n, "left")
    c2 = _transpose_curry(f2, x_dim, n, "right")
    entries = dict(c1.entries())
    for (r, c), v in c2.entries().items():
        entries[(r + n * n, c)] = v
    return ExactMatrix.from_entries(2 * n * n, x_dim, entries, s.field)


def _transpose_curry(f: ExactMatrix, x_dim: int, n: int, x_side: str) -> ExactMatrix:
    """``X -> End(A)``, with ``x`` in the given tensor slot of the source of ``f``."""
    entries = {}
    for w, row in f.rowmap().items():
        for col, val in row.items():
            if x_side == "left":
                x, a = divmod(col, n)
            else:
                a, x = divmod(col, x_dim)
            entries[(w * n + a, x)] = val
    return ExactMatrix.from_entries(n * n, x_dim, entries, f.field)


def image_isomorphism(b: BaseComonoid) -> tuple[ExactMatrix, ExactMatrix, Report]:
    """Compare ``L`` with the independently computed image of the left contraction.

    Returns the image basis (as columns of the curried ambient), the map
    ``phi: L -> image`` in those coordinates and a report certifying that
    ``phi`` is invertible and that ``phi.p`` equals the curried contraction.
    """
    s = b.s
    K = pil_image(s)
    pivots = _pivot_columns(K)
    basis = K.select_columns(pivots)
    coords = solve(basis, K, require_unique=True)  # K == basis . coords
    phi = solve_along_surjection(b.p, coords, b.psec)
    rep = Report()
    rep.flag("image_dim_equals_dim_L", len(pivots) == b.dim)
    rep.flag("phi_injective", is_injective(phi))
    rep.flag("phi_surjective", is_surjective(phi))
    rep.flag("phi_intertwines", phi @ b.p == coords)
    return basis, phi, rep


def _pivot_columns(m: ExactMatrix) -> list[int]:
    from .linalg import rref
    pivots, _ = rref(m)
    return list(pivots)


# firm modules ---------------------------------------------------------------

def _firm_ws(b: BaseComonoid, X: GradedObject) -> Workspace:
    return b.workspace({"X": X})


def firm_action_from_coaction(tau: ExactMatrix, X: GradedObject, b: BaseComonoid) -> ExactMatrix:
    """``xi = (eps*1).(mu*1).(1*tau)`` for a counital coassociative ``tau: X -> L X``."""
    ws = _firm_ws(b, X)
    ws.add("tau", tau, ("X",), ("L", "X"))
    rep = ws.check_all([
        ("coassociative", "(delta*id(X)).tau", "(id(L)*tau).tau"),
        ("counital", "(eps*id(X)).tau", "id(X)"),
    ])
    if not rep.passed:
        raise NotCoaction(rep.summary())
    return ws.ev("(eps*id(X)).(mu*id(X)).(id(L)*tau)")


def check_firm(xi: ExactMatrix, X: GradedObject, b: BaseComonoid) -> Report:
    """Associativity of ``xi`` and that it coequalizes ``mu*1`` and ``1*xi`` universally."""
    ws = _firm_ws(b, X)
    ws.add("xi", xi, ("L", "X"), ("X",))
    rep = ws.check_all([("associative", "xi.(mu*id(X))", "xi.(id(L)*xi)")])
    diff = ws.ev("mu*id(X)") - ws.ev("id(L)*xi")
    surj = is_surjective(xi)
    rep.flag("surjective", surj)
    # the kernel of xi must be exactly the image of the difference
    rep.flag("coequalizer", surj and rank(diff) == xi.cols - xi.rows and (xi @ diff).is_zero())
    return rep


def coaction_from_firm_action(xi: ExactMatrix, X: GradedObject, b: BaseComonoid) -> ExactMatrix:
    """The unique ``tau`` with ``tau.xi == (1*xi).(delta*1)``."""
    rep = check_firm(xi, X, b)
    if not rep.passed:
        raise NotFirm(rep.summary())
    ws = _firm_ws(b, X)
    ws.add("xi", xi, ("L", "X"), ("X",))
    try:
        return ws.factor("xi", "(id(L)*xi).(delta*id(X))")
    except (LinalgError, NotSurjective) as exc:
        raise NotFirm(str(exc)) from None


def firm_round_trip(tau: ExactMatrix, X: GradedObject, b: BaseComonoid) -> bool:
    xi = firm_action_from_coaction(tau, X, b)
    return coaction_from_firm_action(xi, X, b) == tau
