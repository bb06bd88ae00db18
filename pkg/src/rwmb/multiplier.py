"""The multiplier monoid ``M(A)`` as a space of compatible pairs of endomorphisms.

A pair ``(lam, rho)`` of linear maps ``A -> A`` is a multiplier when
``a * lam(b) == rho(a) * b`` for all ``a, b``.  Pairs are stored as vectors
in ``End(A) + End(A)``: ``lam[w, a]`` at index ``w*n + a`` and ``rho[w, a]``
at ``n*n + w*n + a``.  The carrier is graded by the degree of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .base import BaseComonoid, curried_pair
from .core import PI_PAIRS, RwmbStructure, SemigroupA, pi_maps
from .graded import GradedMorphism, GradedObject, is_nondegenerate
from .linalg import (
    ExactMatrix,
    NoSolution,
    is_injective,
    is_surjective,
    kernel_basis,
    kron,
    matmul,
    solve,
    solve_along_surjection,
)
from .report import Report


class NotAMultiplier(ValueError):
    pass


@dataclass
class MultiplierMonoid:
    sg: SemigroupA
    carrier: GradedObject
    basis: ExactMatrix          # ambient coordinates (2n^2) x dim
    h1: ExactMatrix             # M A -> A, (x, b) -> lam_x(b)
    h2: ExactMatrix             # A M -> A, (a, x) -> rho_x(a)
    unit: ExactMatrix           # I -> M
    product: ExactMatrix        # M M -> M
    i: ExactMatrix              # A -> M
    report: Report = field(default_factory=Report)

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def coordinates(self, ambient: ExactMatrix) -> ExactMatrix:
        """Coordinates of ambient columns in the carrier basis; NotAMultiplier if outside."""
        try:
            return solve(self.basis, ambient, require_unique=True)
        except NoSolution:
            raise NotAMultiplier("pair does not satisfy the multiplier constraint") from None

    def pair(self, k: int) -> tuple[ExactMatrix, ExactMatrix]:
        """``(lam, rho)`` of the ``k``-th basis multiplier as ``n x n`` matrices."""
        n = self.sg.A.dim
        col = self.basis.select_columns([k])
        lam, rho = {}, {}
        for (r, _), v in col.entries().items():
            blk, rest = divmod(r, n * n)
            w, a = divmod(rest, n)
            (lam if blk == 0 else rho)[(w, a)] = v
        f = self.basis.field
        return ExactMatrix.from_entries(n, n, lam, f), ExactMatrix.from_entries(n, n, rho, f)


def _constraint_columns(sg: SemigroupA, degree_ok) -> tuple[list[int], ExactMatrix]:
    """Matrix of ``(lam, rho) -> [a*lam(b) - rho(a)*b]_{a,b}`` on the allowed unknowns."""
    A = sg.A
    n = A.dim
    m = sg.m.matrix
    f = m.field
    cols = [k for k in range(2 * n * n) if degree_ok(k)]
    pos = {k: i for i, k in enumerate(cols)}
    mrow = m.rowmap()
    entries: dict = {}
    # equation index (a, b, w) -> a*n*n + b*n + w
    for w, row in mrow.items():
        for col, val in row.items():
            x, y = divmod(col, n)
            # lam[y, b] contributes m[w, x*n+y] for a = x
            for b in range(n):
                k = y * n + b
                if k in pos:
                    key = ((x * n + b) * n + w, pos[k])
                    entries[key] = f.norm(entries.get(key, 0) + val)
            # rho[x, a] contributes -m[w, x*n+y] for b = y
            for a in range(n):
                k = n * n + x * n + a
                if k in pos:
                    key = ((a * n + y) * n + w, pos[k])
                    entries[key] = f.norm(entries.get(key, 0) - val)
    entries = {k: v for k, v in entries.items() if v}
    return cols, ExactMatrix.from_entries(n * n * n, len(cols), entries, f)


def _degree(A: GradedObject, k: int) -> int:
    """Degree (group element index) of the ambient unknown ``k``."""
    n = A.dim
    grp = A.context.group
    w, a = divmod(k % (n * n), n)
    gw, ga = grp.element(A.grades[w]), grp.element(A.grades[a])
    return grp.index(grp.normalize(tuple(x - y for x, y in zip(gw, ga))))


def compute_multiplier_monoid(sg: SemigroupA) -> MultiplierMonoid:
    A = sg.A
    n = A.dim
    f = sg.m.matrix.field
    grp = A.context.group
    basis_entries: dict = {}
    grades: list[int] = []
    for g in range(grp.order):
        cols, K = _constraint_columns(sg, lambda k, g=g: _degree(A, k) == g)
        if not cols:
            continue
        for vec in kernel_basis(K):
            c = len(grades)
            for (r, _), v in vec.entries().items():
                basis_entries[(cols[r], c)] = v
            grades.append(g)
    dim = len(grades)
    basis = ExactMatrix.from_entries(2 * n * n, dim, basis_entries, f)
    carrier = GradedObject(A.context, tuple(grades))
    h1, h2 = _components(basis, n, dim, f)
    ident = {}
    for w in range(n):
        ident[(w * n + w, 0)] = 1
        ident[(n * n + w * n + w, 0)] = 1
    mm = MultiplierMonoid(sg, carrier, basis, h1, h2, ExactMatrix.zeros(dim, 1, f),
                          ExactMatrix.zeros(dim, dim * dim, f), ExactMatrix.zeros(dim, n, f))
    mm.unit = mm.coordinates(ExactMatrix.from_entries(2 * n * n, 1, ident, f))
    mm.product = _product(mm)
    m = sg.m.matrix
    mm.i = mm.coordinates(_curry_m(m, n))
    rep = mm.report
    rep.flag("h1_nondegenerate_right", is_nondegenerate(GradedMorphism(carrier @ A, A, h1), A, "right"))
    rep.flag("h2_nondegenerate_left", is_nondegenerate(GradedMorphism(A @ carrier, A, h2), A, "left"))
    rep.flag("product_associative", _associative(mm))
    rep.flag("unit_law", _unit_law(mm))
    rep.flag("i_multiplicative", matmul(mm.i, m) == matmul(mm.product, kron(mm.i, mm.i)))
    rep.flag("i_mono_when_nondegenerate",
             not (sg.nondegenerate("left") or sg.nondegenerate("right")) or is_injective(mm.i))
    GradedMorphism(A, carrier, mm.i)
    GradedMorphism(carrier @ carrier, carrier, mm.product)
    return mm


def _components(basis: ExactMatrix, n: int, dim: int, f):
    h1, h2 = {}, {}
    for (r, x), v in basis.entries().items():
        blk, rest = divmod(r, n * n)
        w, a = divmod(rest, n)
        if blk == 0:
            h1[(w, x * n + a)] = v      # lam_x(a) at w
        else:
            h2[(w, a * dim + x)] = v    # rho_x(a) at w
    return (ExactMatrix.from_entries(n, dim * n, h1, f), ExactMatrix.from_entries(n, n * dim, h2, f))


def _curry_m(m: ExactMatrix, n: int) -> ExactMatrix:
    """Ambient column of ``i(x) = (m(x*-), m(-*x))``."""
    entries = {}
    for w, row in m.rowmap().items():
        for col, v in row.items():
            x, y = divmod(col, n)
            entries[(w * n + y, x)] = v            # lam_x(y)
            entries[(n * n + w * n + x, y)] = v    # rho_y(x)
    return ExactMatrix.from_entries(2 * n * n, n, entries, m.field)


def _product(mm: MultiplierMonoid) -> ExactMatrix:
    """``(lam, rho)(lam', rho') = (lam lam', rho' rho)`` in carrier coordinates."""
    n = mm.sg.A.dim
    d = mm.dim
    f = mm.basis.field
    pairs = [mm.pair(k) for k in range(d)]
    entries = {}
    for x in range(d):
        for y in range(d):
            lam = matmul(pairs[x][0], pairs[y][0])
            rho = matmul(pairs[y][1], pairs[x][1])
            for (w, a), v in lam.entries().items():
                entries[(w * n + a, x * d + y)] = v
            for (w, a), v in rho.entries().items():
                entries[(n * n + w * n + a, x * d + y)] = v
    amb = ExactMatrix.from_entries(2 * n * n, d * d, entries, f)
    return mm.coordinates(amb)


def _associative(mm: MultiplierMonoid) -> bool:
    one = ExactMatrix.identity(mm.dim, mm.basis.field)
    p = mm.product
    return matmul(p, kron(p, one)) == matmul(p, kron(one, p))


def _unit_law(mm: MultiplierMonoid) -> bool:
    one = ExactMatrix.identity(mm.dim, mm.basis.field)
    p = mm.product
    return matmul(p, kron(mm.unit, one)) == one and matmul(p, kron(one, mm.unit)) == one


def i_is_isomorphism(mm: MultiplierMonoid) -> Report:
    rep = Report()
    rep.flag("dimension_equal", mm.dim == mm.sg.A.dim)
    rep.flag("i_injective", is_injective(mm.i))
    rep.flag("i_surjective", is_surjective(mm.i))
    return rep


def pi_into_MA(s: RwmbStructure, mm: MultiplierMonoid) -> dict[str, ExactMatrix]:
    """The four maps ``A -> M(A)`` determined by the component pairs."""
    pis = pi_maps(s)
    out = {}
    for name, (f1, f2) in PI_PAIRS.items():
        amb = curried_pair(s, pis[f1], pis[f2], s.A.dim)
        out[name] = mm.coordinates(amb)
        GradedMorphism(s.A, mm.carrier, out[name])
    return out


def n_into_MA(b: BaseComonoid, mm: MultiplierMonoid) -> tuple[ExactMatrix, bool, Report]:
    """``n: L -> M(A)`` with ``n.p`` the left contraction; returns ``(n, mono, report)``."""
    s = b.s
    pl = pi_into_MA(s, mm)["pil"]
    n = solve_along_surjection(b.p, pl, b.psec)
    direct = mm.coordinates(curried_pair(s, b.n1, b.n2, b.dim))
    mono = is_injective(n) if b.dim else True
    rep = Report()
    rep.flag("n_factors_left_contraction", matmul(n, b.p) == pl)
    rep.flag("n_components_are_n1_n2", n == direct)
    rep.flag("mono_agrees_with_n1_nondegeneracy", mono == b.n1_nondegenerate)
    return n, mono, rep
