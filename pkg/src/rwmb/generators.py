"""Generators of certified example structures.

Every generator assembles ``t1, e1, e2, j``, solves for ``t2, t3, t4`` and
refuses to return anything that fails the full condition check.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from itertools import product

from .core import RwmbStructure, appendix_suite, check_rwmb, complete_structure
from .graded import Bicharacter, BraidedContext, GradedObject, GradingGroup
from .linalg import QQ, ExactMatrix, FieldSpec, NonUnique, NoSolution, kron


class PresentationInvalid(ValueError):
    pass


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


def certify(s: RwmbStructure, appendix: bool = False) -> RwmbStructure:
    rep = check_rwmb(s)
    if not rep.passed:
        raise VerificationFailed(f"{s.name}: {rep.summary()}", rep)
    if appendix:
        rep = appendix_suite(s)
        if not rep.passed:
            raise VerificationFailed(f"{s.name}: {rep.summary()}", rep)
    return s


def _build(A: GradedObject, t1: dict, e1: dict | None, e2: dict | None, j: dict, name: str,
           verify: bool = True) -> RwmbStructure:
    f = A.context.field
    n = A.dim
    t1m = ExactMatrix.from_entries(n * n, n * n, t1, f)
    e1m = ExactMatrix.identity(n * n, f) if e1 is None else ExactMatrix.from_entries(n * n, n * n, e1, f)
    e2m = ExactMatrix.identity(n * n, f) if e2 is None else ExactMatrix.from_entries(n * n, n * n, e2, f)
    jm = ExactMatrix.from_entries(1, n, j, f)
    try:
        s = complete_structure(A, t1m, e1m, e2m, jm, name=name)
    except (NoSolution, NonUnique) as exc:
        raise VerificationFailed(f"{name}: {exc}") from None
    return certify(s) if verify else s


# group function algebras ----------------------------------------------------

def gen_group_functions(invariant_factors: Sequence[int] = (2,), field: FieldSpec = QQ) -> RwmbStructure:
    """Functions on a finite abelian group: pointwise product, ``t1(d_g, d_h) = d_{g-h} (x) d_h``."""
    G = GradingGroup(tuple(invariant_factors))
    ctx = BraidedContext.vect(field)
    els = G.elements()
    idx = {g: i for i, g in enumerate(els)}
    n = len(els)
    A = ctx.obj([()] * n)
    t1 = {}
    for g, h in product(els, els):
        diff = tuple((a - b) % k for a, b, k in zip(g, h, G.invariant_factors))
        t1[(idx[diff] * n + idx[h], idx[g] * n + idx[h])] = 1
    j = {(0, idx[G.zero]): 1}
    label = "x".join(f"Z{k}" for k in invariant_factors) or "Z1"
    return _build(A, t1, None, None, j, f"functions on {label}")


# category algebras ----------------------------------------------------------

@dataclass
class FiniteCategoryPresentation:
    """Objects, morphisms ``(name, source, target)`` and composites ``comp[(g, f)] = g . f``."""

    objects: list[str]
    morphisms: list[tuple[str, str, str]]
    composition: dict[tuple[str, str], str]
    identities: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        names = [m[0] for m in self.morphisms]
        if len(set(names)) != len(names):
            raise PresentationInvalid("duplicate morphism names")
        src = {m[0]: m[1] for m in self.morphisms}
        tgt = {m[0]: m[2] for m in self.morphisms}
        for m, s, t in self.morphisms:
            if s not in self.objects or t not in self.objects:
                raise PresentationInvalid(f"{m} has an unknown endpoint")
        for g, f in product(names, names):
            composable = src[g] == tgt[f]
            if composable != ((g, f) in self.composition):
                state = "missing" if composable else "defined for non-composable pair"
                raise PresentationInvalid(f"composite {g}.{f} {state}")
            if composable:
                h = self.composition[(g, f)]
                if h not in src or src[h] != src[f] or tgt[h] != tgt[g]:
                    raise PresentationInvalid(f"composite {g}.{f} = {h} has wrong endpoints")
        if not self.identities:
            self.identities = self._find_identities(names, src, tgt)
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or src.get(i) != x or tgt.get(i) != x:
                raise PresentationInvalid(f"no identity on {x}")
            for f in names:
                if tgt[f] == x and self.composition[(i, f)] != f:
                    raise PresentationInvalid(f"{i} is not a left unit for {f}")
                if src[f] == x and self.composition[(f, i)] != f:
                    raise PresentationInvalid(f"{i} is not a right unit for {f}")
        for h, g, f in product(names, names, names):
            if src[h] == tgt[g] and src[g] == tgt[f]:
                if self.composition[(h, self.composition[(g, f)])] != self.composition[(self.composition[(h, g)], f)]:
                    raise PresentationInvalid(f"composition not associative at {h},{g},{f}")

    def _find_identities(self, names, src, tgt) -> dict[str, str]:
        out = {}
        for x in self.objects:
            for i in names:
                if src[i] != x or tgt[i] != x:
                    continue
                if all(self.composition[(i, f)] == f for f in names if tgt[f] == x) and all(
                        self.composition[(f, i)] == f for f in names if src[f] == x):
                    out[x] = i
                    break
        return out

    @classmethod
    def arrow(cls) -> "FiniteCategoryPresentation":
        """Two objects and one non-identity arrow between them."""
        return cls(["0", "1"], [("id0", "0", "0"), ("id1", "1", "1"), ("a", "0", "1")],
                   {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("id1", "a"): "a", ("a", "id0"): "a"},
                   {"0": "id0", "1": "id1"})

    @classmethod
    def discrete(cls, n: int) -> "FiniteCategoryPresentation":
        objs = [str(i) for i in range(n)]
        return cls(objs, [(f"id{x}", x, x) for x in objs], {(f"id{x}", f"id{x}"): f"id{x}" for x in objs},
                   {x: f"id{x}" for x in objs})

    @classmethod
    def cyclic_monoid(cls, n: int) -> "FiniteCategoryPresentation":
        """One object whose endomorphisms form the cyclic group of order ``n``."""
        names = [f"g{k}" for k in range(n)]
        comp = {(names[a], names[b]): names[(a + b) % n] for a in range(n) for b in range(n)}
        return cls(["*"], [(x, "*", "*") for x in names], comp, {"*": names[0]})

    @classmethod
    def chain(cls, n: int) -> "FiniteCategoryPresentation":
        """The poset ``0 < 1 < ... < n-1`` as a category."""
        objs = [str(i) for i in range(n)]
        mors = [(f"{i}{j}", str(i), str(j)) for i in range(n) for j in range(i, n)]
        comp = {}
        for i in range(n):
            for j in range(i, n):
                for k in range(j, n):
                    comp[(f"{j}{k}", f"{i}{j}")] = f"{i}{k}"
        return cls(objs, mors, comp, {str(i): f"{i}{i}" for i in range(n)})


def gen_category_algebra(c: FiniteCategoryPresentation | None = None, field: FieldSpec = QQ,
                         name: str = "") -> RwmbStructure:
    """Span of the morphisms of a finite category with ``t1(f, g) = f (x) f.g``.

    ``e1`` keeps pairs with equal targets, ``e2`` pairs with equal sources,
    and ``j`` is one on every morphism.
    """
    c = c or FiniteCategoryPresentation.arrow()
    c.validate()
    names = [m[0] for m in c.morphisms]
    idx = {x: i for i, x in enumerate(names)}
    src = {m[0]: m[1] for m in c.morphisms}
    tgt = {m[0]: m[2] for m in c.morphisms}
    n = len(names)
    ctx = BraidedContext.vect(field)
    A = ctx.obj([()] * n)
    t1, e1, e2 = {}, {}, {}
    for f, g in product(names, names):
        col = idx[f] * n + idx[g]
        if (f, g) in c.composition:
            t1[(idx[f] * n + idx[c.composition[(f, g)]], col)] = 1
        if tgt[f] == tgt[g]:
            e1[(col, col)] = 1
        if src[f] == src[g]:
            e2[(col, col)] = 1
    j = {(0, i): 1 for i in range(n)}
    return _build(A, t1, e1, e2, j, name or f"category algebra ({n} morphisms)")


# super and braided examples -------------------------------------------------

def gen_exterior_super(field: FieldSpec = QQ) -> RwmbStructure:
    """``k<1, theta>`` with odd ``theta``, ``theta^2 = 0`` and ``theta`` primitive."""
    ctx = BraidedContext.super_vect(field)
    return _primitive_truncated(ctx, 2, name="exterior super algebra")


def gen_quantum_line(p: int = 7, order: int = 3, q: int | None = None) -> RwmbStructure:
    """``k[x]/(x^N)`` graded by ``Z/N`` with ``chi(a, b) = q^(ab)`` and ``x`` primitive.

    ``q`` must be a primitive ``N``-th root of unity in ``F_p``; the braiding
    is then not symmetric for ``N > 2``.
    """
    field = FieldSpec.prime(p)
    if q is None:
        q = next((x for x in range(2, p) if _order_mod(x, p) == order), None)
        if q is None:
            raise PresentationInvalid(f"F_{p} has no primitive {order}-th root of unity")
    if _order_mod(q, p) != order:
        raise PresentationInvalid(f"{q} is not a primitive {order}-th root of unity mod {p}")
    G = GradingGroup((order,))
    ctx = BraidedContext(G, Bicharacter.from_generators(G, field, [[q]]), field)
    return _primitive_truncated(ctx, order, name=f"quantum line N={order} over F_{p}")


def _order_mod(x: int, p: int) -> int:
    k, y = 1, x % p
    while y != 1:
        y = y * x % p
        k += 1
        if k > p:
            return 0
    return k


def _primitive_truncated(ctx: BraidedContext, N: int, name: str) -> RwmbStructure:
    """Truncated polynomial algebra in one primitive generator of grade 1."""
    f = ctx.field
    A = ctx.obj([k for k in range(N)]) if ctx.group.order > 1 else ctx.obj([()] * N)
    gi = list(A.grades)

    def mult(a: int, b: int):
        return a + b if a + b < N else None

    # coproduct of x^k computed in the braided tensor square
    def tensor_mult(u: dict, v: dict) -> dict:
        out: dict = {}
        for (a1, a2), x in u.items():
            for (b1, b2), y in v.items():
                c1, c2 = mult(a1, b1), mult(a2, b2)
                if c1 is None or c2 is None:
                    continue
                val = f.norm(x * y * ctx.chi(gi[a2], gi[b1]))
                out[(c1, c2)] = f.norm(out.get((c1, c2), 0) + val)
        return {k: v for k, v in out.items() if v}

    delta = [{(0, 0): f.one}]
    dx = {(1, 0): f.one, (0, 1): f.one} if N > 1 else {}
    for k in range(1, N):
        delta.append(tensor_mult(delta[-1], dx))
    t1 = {}
    for a in range(N):
        for b in range(N):
            for (a1, a2), x in delta[a].items():
                c = mult(a2, b)
                if c is None:
                    continue
                key = (a1 * N + c, a * N + b)
                t1[key] = f.norm(t1.get(key, 0) + x)
    j = {(0, 0): 1}
    return _build(A, t1, None, None, j, name)


def tensor_structures(s1: RwmbStructure, s2: RwmbStructure, name: str = "") -> RwmbStructure:
    """Tensor product of two structures when the second lives in degree zero.

    With the second factor concentrated in the neutral grade, every braiding
    between the factors is the plain flip, so the product data is the
    factorwise data with the middle tensor factors swapped.
    """
    if s1.context != s2.context:
        raise PresentationInvalid("structures live in different contexts")
    if any(s2.A.grades):
        raise PresentationInvalid("second factor must be concentrated in degree zero")
    ctx = s1.context
    n1, n2 = s1.A.dim, s2.A.dim
    A = GradedObject(ctx, tuple(g for g in s1.A.grades for _ in range(n2)))
    n = n1 * n2

    def swap_index(i: int) -> int:
        # (a b a' b') -> (a a' b b')
        a, rest = divmod(i, n2 * n1 * n2)
        b, rest = divmod(rest, n1 * n2)
        a2, b2 = divmod(rest, n2)
        return ((a * n1 + a2) * n2 + b) * n2 + b2

    def combine(x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
        k = kron(x, y)  # on (A1 A1)(A2 A2)
        inv = [0] * (n * n)
        for i in range(n * n):
            inv[swap_index(i)] = i
        # entry ((a a')(b b'), ...) -> ((a b)(a' b'), ...)
        return k.reindex(inv, inv, n * n, n * n)

    m1, m2 = s1.matrices(), s2.matrices()
    t1 = combine(m1["t1"], m2["t1"])
    e1 = combine(m1["e1"], m2["e1"])
    e2 = combine(m1["e2"], m2["e2"])
    j = kron(m1["j"], m2["j"])
    s = complete_structure(A, t1, e1, e2, j, name=name or f"{s1.name} (x) {s2.name}")
    return certify(s)


def gen_weak_braided(p: int = 7) -> RwmbStructure:
    """Weak example with a non-symmetric braiding: quantum line times the arrow category algebra."""
    ql = gen_quantum_line(p, 3)
    cat = gen_category_algebra(FiniteCategoryPresentation.arrow(), ql.field)
    lifted = RwmbStructure(ql.context.obj([0] * cat.A.dim), *(cat.matrices()[k] for k in
                           ("t1", "t2", "t3", "t4", "e1", "e2", "j")), name=cat.name)
    return tensor_structures(ql, lifted, name=f"quantum line (x) arrow over F_{p}")


GENERATORS = {
    "group": gen_group_functions,
    "category": gen_category_algebra,
    "exterior": gen_exterior_super,
    "quantum_line": gen_quantum_line,
    "weak_braided": gen_weak_braided,
}
