"""Modules over a structure, their coactions over the base and the tensor product ``V o W``."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from .base import BaseComonoid
from .core import dhat_surjective
from .graded import GradedMorphism, GradedObject, is_nondegenerate
from .linalg import (
    ExactMatrix,
    NotSurjective,
    is_injective,
    is_surjective,
    right_inverse,
    split_idempotent,
)
from .report import Report
from .workspace import Workspace


class NotAssociative(ValueError):
    pass


class Degenerate(ValueError):
    pass


class DHatNotEpi(ValueError):
    pass


class NotModuleMorphism(ValueError):
    pass


_ids = count()


@dataclass
class AModule:
    """Object ``V`` with action ``v: A V -> V`` and derived coactions over ``L``."""

    V: GradedObject
    v: ExactMatrix
    tau: ExactMatrix
    taubar: ExactMatrix
    name: str = ""
    report: Report = field(default_factory=Report)


@dataclass
class ModuleTensor:
    M: AModule
    N: AModule
    s: ExactMatrix
    shat: ExactMatrix
    scheck: ExactMatrix
    VoW: GradedObject
    b0: ExactMatrix
    b: ExactMatrix
    module: AModule
    report: Report = field(default_factory=Report)


def _a_ws(b: BaseComonoid, objects=None) -> Workspace:
    ws = b.workspace(objects)
    ws.add("msec", right_inverse(b.s.m), ("A",), ("A", "A"))
    tau, taubar = coactions_on_A(b)
    ws.add("tauA", tau, ("A",), ("L", "A"))
    ws.add("taubarA", taubar, ("A",), ("A", "L"))
    return ws


def coactions_on_A(b: BaseComonoid) -> tuple[ExactMatrix, ExactMatrix]:
    """``tau.m == (p*1).t1`` and ``taubar.m == (1*p).t4.C``."""
    cache = b.s._derived.setdefault("coactions", {})
    key = id(b)
    if key not in cache:
        ws = b.workspace()
        ws.add("msec", right_inverse(b.s.m), ("A",), ("A", "A"))
        tau = ws.factor("m", "(p*1).t1", "msec")
        taubar = ws.factor("m", "(1*p).t4.C", "msec")
        cache[key] = (b, tau, taubar)
    return cache[key][1], cache[key][2]


def bicomodule_laws(x: str) -> list[tuple[str, str, str]]:
    i = f"id({x})"
    return [
        ("tau_coassociative", f"(delta*{i}).tau{x}", f"(id(L)*tau{x}).tau{x}"),
        ("tau_counital", f"(eps*{i}).tau{x}", i),
        ("taubar_coassociative", f"({i}*delta).taubar{x}", f"(taubar{x}*id(L)).taubar{x}"),
        ("taubar_counital", f"({i}*eps).taubar{x}", i),
        ("coactions_commute", f"(tau{x}*id(L)).taubar{x}", f"(id(L)*taubar{x}).tau{x}"),
    ]


def check_coactions_on_A(b: BaseComonoid) -> Report:
    ws = _a_ws(b)
    return ws.check_all(bicomodule_laws("A"))


def _side(b: BaseComonoid, side: str) -> str:
    if b.s.variant.rev:
        return "right" if side == "left" else "left"
    return side


def module_checks(b: BaseComonoid, V: GradedObject, v: ExactMatrix) -> Report:
    ws = b.workspace({"V": V})
    ws.add("v", v, ("A", "V"), ("V",))
    rep = ws.check_all([("associative", "v.(m*id(V))", "v.(id(A)*v)")])
    src = ws.env.object_of(ws.env.morphisms["v"][1])
    rep.flag("surjective", is_surjective(v))
    rep.flag("nondegenerate", is_nondegenerate(GradedMorphism(src, V, v), b.s.A, _side(b, "left")))
    return rep


def make_module(b: BaseComonoid, V: GradedObject, v: ExactMatrix, name: str = "") -> AModule:
    """Validate ``v`` and solve the coactions ``tau.v == (1*v).(tauA*1)`` and
    ``taubar.v == (v*1).(1*c(L,V)).(taubarA*1)``."""
    rep = module_checks(b, V, v)
    if not rep["associative"].passed:
        raise NotAssociative(f"action is not associative: {rep['associative'].witness}")
    if not rep["surjective"].passed:
        raise NotSurjective("action is not surjective")
    if not rep["nondegenerate"].passed:
        raise Degenerate("action is degenerate on the left")
    ws = _a_ws(b, {"V": V})
    ws.add("v", v, ("A", "V"), ("V",))
    tau = ws.factor("v", "(id(L)*v).(tauA*id(V))")
    taubar = ws.factor("v", "(v*id(L)).(id(A)*c(L,V)).(taubarA*id(V))")
    ws.add("tauV", tau, ("V",), ("L", "V"))
    ws.add("taubarV", taubar, ("V",), ("V", "L"))
    ws.check_all(bicomodule_laws("V"), rep)
    return AModule(V, v, tau, taubar, name or f"module{next(_ids)}", rep)


def regular_module(b: BaseComonoid) -> AModule:
    return make_module(b, b.s.A, b.s.m, "A")


def base_module(b: BaseComonoid) -> AModule:
    """``L`` with the action ``p.n2``."""
    ws = b.workspace()
    return make_module(b, b.L, ws.ev("p.n2"), "L")


def _pair_ws(b: BaseComonoid, M: AModule, N: AModule) -> Workspace:
    ws = _a_ws(b, {"V": M.V, "W": N.V})
    for x, mod in (("V", M), ("W", N)):
        ws.add(x.lower(), mod.v, ("A", x), (x,))
        ws.add(f"tau{x}", mod.tau, (x,), ("L", x))
        ws.add(f"taubar{x}", mod.taubar, (x,), (x, "L"))
        ws.add(f"{x.lower()}sec", right_inverse(mod.v), (x,), ("A", x))
    ws.let("b2", "(v*w).(id(A)*c(A,V)*id(W))")
    ws.let("b2sec", "(id(A)*cinv(V,A)*id(W)).(vsec*wsec)")
    return ws


TENSOR_LAWS = [
    ("s_idempotent", "s.s", "s"),
    ("E_first", "s.b2", "b2.(e1*id(V)*id(W))"),
    ("E_second", "b2.(id(A)*id(A)*s)", "b2.(e2*id(V)*id(W))"),
    ("b0_defining", "b0.(id(A)*b2)", "b2.(d1*id(V)*id(W))"),
    ("b0_associative", "b0.(m*id(V)*id(W))", "b0.(id(A)*b0)"),
    ("b0_absorbs_s", "b0.(id(A)*s)", "b0"),
    ("s_absorbs_b0", "s.b0", "b0"),
    ("b0_d2", "b2.(d2*id(V)*id(W))", "b2.(id(A)*id(A)*b0)"),
    ("splitting_1", "scheck.shat", "s"),
    ("splitting_2", "shat.scheck", "id(VoW)"),
    ("b_defining", "b.(id(A)*shat)", "shat.b0"),
    ("b_alternative_1", "b.(id(A)*shat).(id(A)*id(V)*w).(id(A)*c(A,V)*id(W))",
     "shat.b2.(t1*id(V)*id(W))"),
    ("b_alternative_2", "b.(id(A)*shat).(id(A)*v*id(W))", "shat.b2.(t4*id(V)*id(W)).(C*id(V)*id(W))"),
]


def require_dhat_epi(b: BaseComonoid) -> None:
    for k in (1, 2):
        if not dhat_surjective(b.s, k):
            raise DHatNotEpi(f"hypothesis on the tensor product violated: dhat{k} is not an epimorphism")


def module_tensor(b: BaseComonoid, M: AModule, N: AModule, splitting: tuple | None = None) -> ModuleTensor:
    """``V o W`` as the image of ``s = (1*eps*1).(1*mu*1).(taubarV*tauW)`` with its action ``b``.

    ``splitting`` may supply ``(shat, scheck, object)``; it is verified.
    """
    require_dhat_epi(b)
    ws = _pair_ws(b, M, N)
    s = ws.ev("(id(V)*eps*id(W)).(id(V)*mu*id(W)).(taubarV*tauW)")
    if splitting is None:
        shat, scheck = split_idempotent(s)
        ws.add("s", s, ("V", "W"), ("V", "W"))
        grades = _image_grades(ws, scheck)
        VoW = GradedObject(b.s.context, grades)
    else:
        shat, scheck, VoW = splitting
    ws.add_object("VoW", VoW)
    if "s" not in ws.env.morphisms:
        ws.add("s", s, ("V", "W"), ("V", "W"))
    ws.add("shat", shat, ("V", "W"), ("VoW",))
    ws.add("scheck", scheck, ("VoW",), ("V", "W"))
    b0 = ws.factor("id(A)*b2", "b2.(d1*id(V)*id(W))", "id(A)*b2sec")
    ws.add("b0", b0, ("A", "V", "W"), ("V", "W"))
    bmat = ws.ev("shat.b0.(id(A)*scheck)")
    ws.add("b", bmat, ("A", "VoW"), ("VoW",))
    rep = ws.check_all(TENSOR_LAWS)
    module = make_module(b, VoW, bmat, f"({M.name} o {N.name})")
    # coactions of V o W are those of the underlying bicomodule tensor
    ws.add("tauVoW", module.tau, ("VoW",), ("L", "VoW"))
    ws.add("taubarVoW", module.taubar, ("VoW",), ("VoW", "L"))
    ws.check_all([
        ("tau_is_tensor_coaction", "tauVoW", "(id(L)*shat).(tauV*id(W)).scheck"),
        ("taubar_is_tensor_coaction", "taubarVoW", "(shat*id(L)).(id(V)*taubarW).scheck"),
    ], rep)
    rep.extend(module.report, "module:")
    return ModuleTensor(M, N, s, shat, scheck, VoW, b0, bmat, module, rep)


def _image_grades(ws: Workspace, scheck: ExactMatrix) -> tuple[int, ...]:
    VW = ws.env.object_of(("V", "W") if not ws.variant.rev else ("W", "V"))
    grades = []
    for j, col in enumerate(scheck.columns()):
        support = {VW.grades[i] for i in col}
        if len(support) != 1:
            raise ValueError("image basis vector is not homogeneous")
        grades.append(support.pop())
    return tuple(grades)


# morphisms ------------------------------------------------------------------

def module_morphism_check(b: BaseComonoid, M: AModule, N: AModule, f: ExactMatrix) -> Report:
    """``f.v == w.(1*f)`` and compatibility with both coactions."""
    ws = _pair_ws(b, M, N)
    ws.add("f", f, ("V",), ("W",))
    return ws.check_all([
        ("A_linear", "f.v", "w.(id(A)*f)"),
        ("tau_colinear", "(id(L)*f).tauV", "tauW.f"),
        ("taubar_colinear", "(f*id(L)).taubarV", "taubarW.f"),
    ])


def tensor_module_morphism(b: BaseComonoid, T1: ModuleTensor, T2: ModuleTensor, f: ExactMatrix,
                           g: ExactMatrix) -> ExactMatrix:
    """``f o g = shat'.(f*g).scheck`` for module maps ``f: V -> V'`` and ``g: W -> W'``."""
    for name, src, tgt, mor in (("f", T1.M, T2.M, f), ("g", T1.N, T2.N, g)):
        rep = module_morphism_check(b, src, tgt, mor)
        if not rep["A_linear"].passed:
            raise NotModuleMorphism(f"{name} is not A-linear")
    ws = b.workspace({"V": T1.M.V, "W": T1.N.V, "V2": T2.M.V, "W2": T2.N.V, "X": T1.VoW, "Y": T2.VoW})
    ws.add("f", f, ("V",), ("V2",))
    ws.add("g", g, ("W",), ("W2",))
    ws.add("scheck", T1.scheck, ("X",), ("V", "W"))
    ws.add("shat2", T2.shat, ("V2", "W2"), ("Y",))
    return ws.ev("shat2.(f*g).scheck")


def check_tensor_morphism(b: BaseComonoid, T1: ModuleTensor, T2: ModuleTensor, h: ExactMatrix) -> Report:
    ws = b.workspace({"X": T1.VoW, "Y": T2.VoW})
    ws.add("bx", T1.b, ("A", "X"), ("X",))
    ws.add("by", T2.b, ("A", "Y"), ("Y",))
    ws.add("h", h, ("X",), ("Y",))
    return ws.check_all([("A_linear", "h.bx", "by.(id(A)*h)")])


# monoidality ----------------------------------------------------------------

def unit_constraints(b: BaseComonoid, V: AModule) -> Report:
    """Left and right unit maps ``L o V -> V`` and ``V o L -> V`` are invertible module maps.

    Also checks that choosing ``scheck = tau`` and ``shat = (eps*1).(mu*1).(1*tau)``
    splits ``s`` on ``L V`` and gives ``V`` its own action back.
    """
    Lm = base_module(b)
    rep = Report()
    left = module_tensor(b, Lm, V)
    right = module_tensor(b, V, Lm)
    ws = b.workspace({"V": V.V, "X": left.VoW, "Y": right.VoW})
    ws.add("v", V.v, ("A", "V"), ("V",))
    ws.add("tauV", V.tau, ("V",), ("L", "V"))
    ws.add("taubarV", V.taubar, ("V",), ("V", "L"))
    ws.add("scheckX", left.scheck, ("X",), ("L", "V"))
    ws.add("scheckY", right.scheck, ("Y",), ("V", "L"))
    ws.add("bx", left.b, ("A", "X"), ("X",))
    ws.add("by", right.b, ("A", "Y"), ("Y",))
    phi = ws.ev("(eps*id(V)).(mu*id(V)).(id(L)*tauV).scheckX")
    psi = ws.ev("(id(V)*eps).(id(V)*mu).(taubarV*id(L)).scheckY")
    ws.add("phi", phi, ("X",), ("V",))
    ws.add("psi", psi, ("Y",), ("V",))
    rep.flag("left_unit_invertible", phi.rows == phi.cols and is_injective(phi))
    rep.flag("right_unit_invertible", psi.rows == psi.cols and is_injective(psi))
    ws.check_all([
        ("left_unit_linear", "phi.bx", "v.(id(A)*phi)"),
        ("right_unit_linear", "psi.by", "v.(id(A)*psi)"),
    ], rep)
    # canonical choice L o V = V
    xi = ws.ev("(eps*id(V)).(mu*id(V)).(id(L)*tauV)")
    canon = module_tensor(b, Lm, V, splitting=(xi, V.tau, V.V))
    rep.flag("canonical_unit_splitting", canon.report["splitting_1"].passed and canon.report["splitting_2"].passed)
    rep.flag("canonical_unit_action", canon.b == V.v)
    rep.extend(left.report, "LoV:")
    rep.extend(right.report, "VoL:")
    return rep


def associator(b: BaseComonoid, M: AModule, N: AModule, P: AModule) -> tuple[ExactMatrix, Report]:
    """The comparison ``(M o N) o P -> M o (N o P)`` and its checks."""
    MN = module_tensor(b, M, N)
    NP = module_tensor(b, N, P)
    MN_P = module_tensor(b, MN.module, P)
    M_NP = module_tensor(b, M, NP.module)
    ws = b.workspace({"M": M.V, "N": N.V, "P": P.V, "MN": MN.VoW, "NP": NP.VoW,
                      "X": MN_P.VoW, "Y": M_NP.VoW})
    ws.add("scheckMN", MN.scheck, ("MN",), ("M", "N"))
    ws.add("shatNP", NP.shat, ("N", "P"), ("NP",))
    ws.add("scheckX", MN_P.scheck, ("X",), ("MN", "P"))
    ws.add("shatY", M_NP.shat, ("M", "NP"), ("Y",))
    ws.add("bx", MN_P.b, ("A", "X"), ("X",))
    ws.add("by", M_NP.b, ("A", "Y"), ("Y",))
    for x, mod in (("M", M), ("N", N), ("P", P)):
        ws.add(f"tau{x}", mod.tau, (x,), ("L", x))
        ws.add(f"taubar{x}", mod.taubar, (x,), (x, "L"))
    alpha = ws.ev("shatY.(id(M)*shatNP).(scheckMN*id(P)).scheckX")
    ws.add("alpha", alpha, ("X",), ("Y",))
    rep = Report()
    rep.flag("associator_invertible", alpha.rows == alpha.cols and is_injective(alpha))
    ws.check_all([("associator_linear", "alpha.bx", "by.(id(A)*alpha)")], rep)
    # both bracketings realize the same subspace of M N P
    ws.add("shatMN", MN.shat, ("M", "N"), ("MN",))
    ws.add("scheckNP", NP.scheck, ("NP",), ("N", "P"))
    ws.add("scheckY", M_NP.scheck, ("Y",), ("M", "NP"))
    ws.check_all([("associator_is_comparison",
                   "(id(M)*scheckNP).scheckY.alpha", "(scheckMN*id(P)).scheckX")], rep)
    for name, T in (("MN", MN), ("NP", NP), ("MN_P", MN_P), ("M_NP", M_NP)):
        rep.extend(T.report, f"{name}:")
    return alpha, rep


def verify_monoidality(b: BaseComonoid, M: AModule, N: AModule | None = None,
                       P: AModule | None = None) -> Report:
    """Unit constraints for each module and the associator on ``(M, N, P)``."""
    N = N or M
    P = P or M
    rep = Report()
    seen, labels = set(), set()
    for pos, X in enumerate((M, N, P), 1):
        if id(X) in seen:
            continue
        seen.add(id(X))
        label = X.name if X.name not in labels else f"{X.name}#{pos}"
        labels.add(label)
        rep.extend(unit_constraints(b, X), f"unit[{label}]:")
    _, ar = associator(b, M, N, P)
    rep.extend(ar, "assoc:")
    return rep
