"""JSON structure and report files.

A structure file is a bundle of graded objects and named morphisms over one
braided context, plus a role map saying which morphism plays ``t1``, ``j``,
``v`` and so on.  Everything read is re-validated; nothing is trusted.
"""

from __future__ import annotations

import json
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .dsl import Variant
from .graded import (
    Bicharacter,
    BraidedContext,
    GradedObject,
    GradingError,
    GradingGroup,
    grade_violation,
)
from .linalg import ExactMatrix, FieldSpec
from .report import Report

FORMAT_VERSION = 1


class InputError(ValueError):
    """Malformed or inconsistent input; ``where`` locates the problem."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


@dataclass
class Bundle:
    context: BraidedContext
    objects: dict[str, GradedObject]
    morphisms: dict[str, tuple[ExactMatrix, tuple[str, ...], tuple[str, ...]]]
    roles: dict[str, str] = field(default_factory=dict)
    name: str = ""
    variant: Variant = Variant(False, False)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.context.field

    def role(self, key: str) -> ExactMatrix:
        name = self.roles.get(key, key)
        if name not in self.morphisms:
            raise InputError(f"no morphism for role {key!r}", "roles")
        return self.morphisms[name][0]

    def has_role(self, key: str) -> bool:
        return self.roles.get(key, key) in self.morphisms

    def typed(self, key: str) -> tuple[ExactMatrix, tuple[str, ...], tuple[str, ...]]:
        return self.morphisms[self.roles.get(key, key)]


# reading --------------------------------------------------------------------

def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc), path) from None


def parse_json(text: str, where: str = "") -> dict:
    if not text.strip():
        raise InputError("empty input", where)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", where) from None
    if not isinstance(data, dict):
        raise InputError("top level must be an object", where)
    return data


def _need(d: Mapping, key: str, where: str, typ=None):
    if key not in d:
        raise InputError(f"missing key {key!r}", where)
    v = d[key]
    if typ is not None and not isinstance(v, typ):
        raise InputError(f"{key!r} must be {typ.__name__ if isinstance(typ, type) else typ}", where)
    return v


def context_from_json(d: Mapping, field_override: FieldSpec | None = None) -> BraidedContext:
    try:
        f = field_override or FieldSpec.parse(str(_need(d, "field", "")))
    except ValueError as exc:
        raise InputError(str(exc), "field") from None
    g = d.get("grading", {}) or {}
    try:
        group = GradingGroup(tuple(int(k) for k in g.get("invariant_factors", [])))
        table = g.get("bicharacter")
        chi = Bicharacter.trivial(group, f) if table is None else Bicharacter(group, f, table)
    except (GradingError, ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise InputError(str(exc), "grading") from None
    return BraidedContext(group, chi, f)


def bundle_from_json(d: Mapping, where: str = "", field_override: FieldSpec | None = None) -> Bundle:
    version = d.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {version}", where)
    ctx = context_from_json(d, field_override)
    f = ctx.field
    objects: dict[str, GradedObject] = {}
    for name, grades in _need(d, "objects", where, dict).items():
        try:
            objects[name] = ctx.obj([tuple(g) if isinstance(g, list) else g for g in grades])
        except (GradingError, TypeError, ValueError) as exc:
            raise InputError(str(exc), f"objects.{name}") from None
    morphisms = {}
    for k, m in enumerate(_need(d, "morphisms", where, list)):
        at = f"morphisms[{k}]"
        if not isinstance(m, dict):
            raise InputError("morphism must be an object", at)
        name = _need(m, "name", at, str)
        src = tuple(_need(m, "source", at, list))
        tgt = tuple(_need(m, "target", at, list))
        for o in src + tgt:
            if o not in objects:
                raise InputError(f"unknown object {o!r}", at)
        so = _tensor(objects, src, ctx)
        to = _tensor(objects, tgt, ctx)
        entries = {}
        for e_idx, e in enumerate(_need(m, "entries", at, list)):
            try:
                r, c, v = e
                r, c = int(r), int(c)
                if not (0 <= r < to.dim and 0 <= c < so.dim):
                    raise IndexError(f"index ({r},{c}) outside {to.dim}x{so.dim}")
                if (r, c) in entries:
                    raise ValueError(f"duplicate entry ({r},{c})")
                entries[(r, c)] = f.element(str(v))
            except (ValueError, TypeError, IndexError, ZeroDivisionError) as exc:
                raise InputError(str(exc), f"{at}.entries[{e_idx}]") from None
        mat = ExactMatrix.from_entries(to.dim, so.dim, entries, f)
        bad = grade_violation(mat, so, to)
        if bad is not None:
            raise InputError(f"entry {bad} is not grade preserving", at)
        if name in morphisms:
            raise InputError(f"duplicate morphism {name!r}", at)
        morphisms[name] = (mat, src, tgt)
    roles = {str(k): str(v) for k, v in (d.get("roles") or {}).items()}
    for k, v in roles.items():
        if v not in morphisms:
            raise InputError(f"role {k!r} names unknown morphism {v!r}", "roles")
    var = d.get("variant") or {}
    variant = Variant(bool(var.get("rev", False)), bool(var.get("bar", False)))
    return Bundle(ctx, objects, morphisms, roles, str(d.get("name", "")), variant,
                  {k: v for k, v in d.items() if k not in _KNOWN})


_KNOWN = {"format_version", "name", "field", "grading", "variant", "objects", "morphisms", "roles"}


def _tensor(objects, names, ctx) -> GradedObject:
    from .graded import tensor_objects
    return tensor_objects([objects[n] for n in names], ctx)


def load_bundle(path: str, field_override: FieldSpec | None = None) -> Bundle:
    return bundle_from_json(parse_json(read_text(path), path), path, field_override)


# writing --------------------------------------------------------------------

def context_to_json(ctx: BraidedContext) -> dict:
    f = ctx.field
    return {
        "field": str(f),
        "grading": {
            "invariant_factors": list(ctx.group.invariant_factors),
            "bicharacter": [[f.format(x) for x in row] for row in ctx.chi.table],
        },
    }


def matrix_entries(m: ExactMatrix) -> list:
    f = m.field
    return [[r, c, f.format(v)] for (r, c), v in sorted(m.entries().items())]


def bundle_to_json(b: Bundle) -> dict:
    ctx = b.context
    out = {"format_version": FORMAT_VERSION, "name": b.name}
    out.update(context_to_json(ctx))
    out["variant"] = {"rev": b.variant.rev, "bar": b.variant.bar}
    out["objects"] = {k: [list(ctx.group.element(g)) for g in o.grades] for k, o in b.objects.items()}
    out["morphisms"] = [{"name": k, "source": list(s), "target": list(t), "entries": matrix_entries(m)}
                        for k, (m, s, t) in b.morphisms.items()]
    out["roles"] = dict(b.roles)
    out.update(b.meta)
    return out


def dumps(d: Mapping) -> str:
    return json.dumps(d, indent=1, sort_keys=False) + "\n"


def write_json(d: Mapping, path: str | None) -> None:
    text = dumps(d)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# structures, bases and modules ----------------------------------------------

_STRUCT_TYPES = {"t1": (("A", "A"), ("A", "A")), "t2": (("A", "A"), ("A", "A")), "t3": (("A", "A"), ("A", "A")),
                 "t4": (("A", "A"), ("A", "A")), "e1": (("A", "A"), ("A", "A")), "e2": (("A", "A"), ("A", "A")),
                 "j": (("A",), ()), "m": (("A", "A"), ("A",))}


def structure_bundle(s) -> Bundle:
    objects = {"A": s.A}
    mors = {k: (v.matrix, *_STRUCT_TYPES[k]) for k, v in s.maps.items()}
    return Bundle(s.context, objects, mors, {k: k for k in mors}, s.name, s.variant)


def structure_to_json(s) -> dict:
    return bundle_to_json(structure_bundle(s))


def _check_type(bd: Bundle, role: str, src, tgt):
    _, s, t = bd.typed(role)
    # object names are conventional only through the role map of A
    a = bd.roles.get("A", "A")
    want = (tuple(a if x == "A" else x for x in src), tuple(a if x == "A" else x for x in tgt))
    if (s, t) != want:
        raise InputError(f"role {role} has type {s} -> {t}, expected {want[0]} -> {want[1]}", "morphisms")


def structure_from_bundle(bd: Bundle):
    from .core import ROLE_NAMES, RwmbStructure
    a = bd.roles.get("A", "A")
    if a not in bd.objects:
        raise InputError(f"missing object {a!r}", "objects")
    for r in ROLE_NAMES:
        if not bd.has_role(r):
            raise InputError(f"missing morphism for role {r!r}", "roles")
        _check_type(bd, r, *_STRUCT_TYPES[r])
    s = RwmbStructure(bd.objects[a], *(bd.role(r) for r in ROLE_NAMES), variant=bd.variant, name=bd.name)
    if bd.has_role("m") and bd.role("m") != s.m:
        raise InputError("declared m differs from (j*1).t1", "roles.m")
    return s


def load_structure(path: str, field_override: FieldSpec | None = None):
    return structure_from_bundle(load_bundle(path, field_override))


def base_to_json(b) -> dict:
    objs = {"A": b.s.A, "L": b.L}
    mors = {
        "p": (b.p, ("A",), ("L",)),
        "n1": (b.n1, ("L", "A"), ("A",)),
        "n2": (b.n2, ("A", "L"), ("A",)),
    }
    if b.complete:
        mors.update({"mu": (b.mu, ("L", "L"), ("L",)), "delta": (b.delta, ("L",), ("L", "L")),
                     "eps": (b.eps, ("L",), ())})
    if b.s.variant.rev:
        mors = {k: (m, s[::-1], t[::-1]) for k, (m, s, t) in mors.items()}
    return bundle_to_json(Bundle(b.s.context, objs, mors, {k: k for k in mors}, f"base of {b.s.name}",
                                 b.s.variant))


def base_from_bundle(bd: Bundle, s):
    """Rebuild a base from a file and re-verify every law against ``s``."""
    from .base import BaseComonoid, verify_coseparable
    from .linalg import NotSurjective, right_inverse
    if bd.context != s.context or "L" not in bd.objects:
        raise InputError("base file does not match the structure", "objects")
    L = bd.objects["L"]
    try:
        p = bd.role("p")
        b = BaseComonoid(s, L, p, right_inverse(p), bd.role("n1"), bd.role("n2"),
                         bd.role("mu"), bd.role("delta"), bd.role("eps"))
    except NotSurjective:
        raise InputError("p is not surjective", "morphisms.p") from None
    rep = verify_coseparable(b)
    b.report = rep
    return b


def module_bundle(M, s) -> Bundle:
    objs = {"A": s.A, "V": M.V}
    src = ("A", "V") if not s.variant.rev else ("V", "A")
    return Bundle(s.context, objs, {"v": (M.v, src, ("V",))}, {"v": "v"}, M.name, s.variant)


def module_from_bundle(bd: Bundle, b):
    from .modules import make_module
    if bd.context != b.s.context:
        raise InputError("module lives in a different context", "grading")
    mat, src, tgt = bd.typed("v")
    if len(tgt) != 1:
        raise InputError("action must land in a single object", "morphisms")
    V = bd.objects[tgt[0]]
    if mat.cols != b.s.A.dim * V.dim:
        raise InputError("action source is not A V", "morphisms")
    return make_module(b, V, mat, bd.name or tgt[0])


# reports --------------------------------------------------------------------

def report_to_json(rep: Report, f: FieldSpec, command: str, subject: str, timing: bool = True) -> dict:
    checks = []
    for r in rep.sorted():
        item = {"name": r.name, "paper_label": r.label or r.name, "pass": r.passed}
        if r.witness is not None:
            item["witness"] = r.witness_text(f) if len(r.witness) == 4 else str(r.witness)
        if timing:
            item["timing"] = None if r.seconds is None else round(r.seconds, 6)
        checks.append(item)
    failed = [c["name"] for c in checks if not c["pass"]]
    return {
        "format_version": FORMAT_VERSION,
        "tool": f"rwmb {__version__}",
        "command": command,
        "subject": subject,
        "field": str(f),
        "aggregate": {"pass": not failed, "total": len(checks), "failed": len(failed),
                      "first_failure": rep.first_failure().name if failed else None},
        "checks": checks,
        "notes": {k: _plain(v) for k, v in sorted(rep.notes.items())},
    }


def _plain(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


def report_to_text(d: Mapping) -> str:
    lines = [f"{d['command']}: {d['subject']} over {d['field']}"]
    for c in d["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        w = f"  [{c['witness']}]" if c.get("witness") else ""
        lines.append(f"  {mark} {c['name']}{w}")
    for k, v in d["notes"].items():
        lines.append(f"  note {k} = {v}")
    a = d["aggregate"]
    lines.append(f"{'PASS' if a['pass'] else 'FAIL'}: {a['total'] - a['failed']}/{a['total']} checks passed")
    return "\n".join(lines) + "\n"
