"""Command line interface: ``rwmb check | base | modules | multiplier | gen | complete``.

Exit codes: 0 when every check passes, 1 when a check or hypothesis fails,
2 for unreadable or inconsistent input.
"""

from __future__ import annotations

import sys
from functools import wraps

import click

from . import io
from .graded import GradingError
from .linalg import FieldSpec, LinalgError
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Failure(Exception):
    """A hypothesis of a construction does not hold; reported as a failed check."""

    def __init__(self, name: str, message: str):
        super().__init__(message)
        self.name = name


def _field(value):
    if value is None:
        return None
    try:
        return FieldSpec.parse(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def common(f):
    f = click.option("--field", "field_", default=None, help="Reinterpret entries over 'Q' or 'Fp:<p>'.")(f)
    f = click.option("--parallel", default=1, show_default=True, type=click.IntRange(1, 64),
                     help="Worker threads for independent checks.")(f)
    f = click.option("--only", multiple=True, help="Keep only checks matching this glob (repeatable).")(f)
    f = click.option("--json/--human", "as_json", default=True, help="Report format.")(f)
    f = click.option("--report", "report_path", default=None, help="Write the report here instead of stdout.")(f)
    f = click.option("--no-timing", is_flag=True, help="Omit per-check timings from the report.")(f)
    return f


def _emit(rep: Report, fs: FieldSpec, command: str, subject: str, opts) -> int:
    rep = rep.only(opts["only"])
    d = io.report_to_json(rep, fs, command, subject, timing=not opts["no_timing"])
    text = io.dumps(d) if opts["as_json"] else io.report_to_text(d)
    if opts["report_path"]:
        with open(opts["report_path"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if d["aggregate"]["pass"] else EXIT_FAIL


def guarded(fn):
    """Map input problems to exit code 2 and failed hypotheses to exit code 1."""

    @wraps(fn)
    def run(*args, **kwargs):
        try:
            code = fn(*args, **kwargs)
        except io.InputError as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except Failure as exc:
            click.echo(f"{exc.name}: {exc}", err=True)
            sys.exit(EXIT_FAIL)
        except (LinalgError, GradingError) as exc:
            click.echo(f"input error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        sys.exit(code)
    return run


def _options(kwargs) -> dict:
    return {k: kwargs[k] for k in ("only", "as_json", "report_path", "no_timing")}


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact checks for regular weak multiplier bimonoids in graded vector spaces."""


# check ----------------------------------------------------------------------

@main.command()
@click.argument("path")
@click.option("--appendix/--no-appendix", default=True, help="Also run the derived identities.")
@common
@guarded
def check(path, appendix, field_, parallel, **kw):
    """Run every defining condition (and derived identities) on a structure file."""
    from .core import appendix_suite, check_rwmb
    s = io.load_structure(path, _field(field_))
    rep = check_rwmb(s, parallel)
    if appendix:
        rep.extend(appendix_suite(s, parallel), "appendix:")
    return _emit(rep, s.field, "check", s.name or path, _options(kw))


# base -----------------------------------------------------------------------

def _base(s):
    from .base import NondegeneracyFailure, compute_base
    from .linalg import NotWellDefined
    try:
        return compute_base(s)
    except NondegeneracyFailure as exc:
        raise Failure("n1_nondegenerate", str(exc)) from None
    except NotWellDefined as exc:
        raise Failure("base_factorization", str(exc)) from None


@main.command()
@click.argument("path")
@click.option("--out", default=None, help="Write the base object file here.")
@common
@guarded
def base(path, out, field_, parallel, **kw):
    """Construct the base object L with its comonoid structure."""
    from .base import alternative_delta, image_isomorphism
    s = io.load_structure(path, _field(field_))
    b = _base(s)
    rep = Report().extend(b.report)
    rep.flag("alternative_delta", alternative_delta(b) == b.delta)
    _, _, img = image_isomorphism(b)
    rep.extend(img, "image:")
    rep.notes["dim_L"] = b.dim
    if out:
        io.write_json(io.base_to_json(b), out)
    return _emit(rep, s.field, "base", s.name or path, _options(kw))


# modules --------------------------------------------------------------------

def _module(spec: str, b, fs):
    from .linalg import NotSurjective
    from .modules import Degenerate, NotAssociative, base_module, regular_module
    try:
        if spec == "regular":
            return regular_module(b)
        if spec == "base":
            return base_module(b)
        return io.module_from_bundle(io.load_bundle(spec, fs), b)
    except (NotAssociative, NotSurjective, Degenerate) as exc:
        raise Failure(f"module {spec}", str(exc)) from None


@main.command()
@click.argument("structure")
@click.argument("module_a")
@click.argument("module_b")
@click.option("--base", "base_path", default=None, help="Base object file (recomputed when omitted).")
@click.option("--out", default=None, help="Write the module V o W here.")
@common
@guarded
def modules(structure, module_a, module_b, base_path, out, field_, parallel, **kw):
    """Tensor two modules and verify monoidality.

    MODULE_A and MODULE_B are module files or the words 'regular' and 'base'.
    """
    from .modules import DHatNotEpi, module_tensor, verify_monoidality
    fs = _field(field_)
    s = io.load_structure(structure, fs)
    if base_path:
        b = io.base_from_bundle(io.load_bundle(base_path, fs), s)
        if not b.report.passed:
            return _emit(b.report, s.field, "modules", s.name or structure, _options(kw))
    else:
        b = _base(s)
    M = _module(module_a, b, fs)
    N = _module(module_b, b, fs)
    try:
        T = module_tensor(b, M, N)
        rep = Report().extend(T.report, "tensor:")
        rep.extend(verify_monoidality(b, M, N, N), "monoidal:")
    except DHatNotEpi as exc:
        raise Failure("dhat_epi", str(exc)) from None
    rep.notes["dim_VoW"] = T.VoW.dim
    if out:
        io.write_json(io.bundle_to_json(io.module_bundle(T.module, s)), out)
    return _emit(rep, s.field, "modules", f"{M.name} o {N.name}", _options(kw))


# multiplier -----------------------------------------------------------------

@main.command()
@click.argument("path")
@click.option("--out", default=None, help="Write the multiplier monoid here.")
@common
@guarded
def multiplier(path, out, field_, parallel, **kw):
    """Compute M(A), the embedding i and the maps from the contractions and L."""
    from .multiplier import (
        NotAMultiplier,
        compute_multiplier_monoid,
        i_is_isomorphism,
        n_into_MA,
        pi_into_MA,
    )
    s = io.load_structure(path, _field(field_))
    mm = compute_multiplier_monoid(s.semigroup())
    rep = Report().extend(mm.report)
    iso = i_is_isomorphism(mm)
    rep.notes.update({"dim_M": mm.dim, "i_isomorphism": iso.passed})
    try:
        pis = pi_into_MA(s, mm)
        rep.flag("contractions_are_multipliers", True)
        b = _base(s)
        _, mono, nrep = n_into_MA(b, mm)
        rep.extend(nrep, "n:")
        rep.notes["n_mono"] = mono
    except NotAMultiplier as exc:
        raise Failure("contractions_are_multipliers", str(exc)) from None
    if out:
        objs = {"A": s.A, "M": mm.carrier}
        mors = {"i": (mm.i, ("A",), ("M",)), "h1": (mm.h1, ("M", "A"), ("A",)),
                "h2": (mm.h2, ("A", "M"), ("A",)), "product": (mm.product, ("M", "M"), ("M",)),
                "unit": (mm.unit, (), ("M",))}
        mors.update({k: (v, ("A",), ("M",)) for k, v in pis.items()})
        io.write_json(io.bundle_to_json(io.Bundle(s.context, objs, mors, {k: k for k in mors},
                                                  f"multipliers of {s.name}")), out)
    return _emit(rep, s.field, "multiplier", s.name or path, _options(kw))


# gen ------------------------------------------------------------------------

GEN_HELP = """KIND is one of:

\b
  group F1 F2 ...          functions on Z/F1 x Z/F2 x ...
  category arrow           arrow category (also discrete:N, cyclic:N, chain:N or a JSON file)
  exterior                 odd exterior algebra in super vector spaces
  quantum_line [P N]       k[x]/(x^N) over F_P with a non-symmetric braiding
  weak_braided [P]         quantum line tensored with the arrow category
"""


def _presentation(spec: str):
    from .generators import FiniteCategoryPresentation as FCP
    if spec == "arrow":
        return FCP.arrow()
    for prefix, ctor in (("discrete:", FCP.discrete), ("cyclic:", FCP.cyclic_monoid), ("chain:", FCP.chain)):
        if spec.startswith(prefix):
            return ctor(int(spec[len(prefix):]))
    d = io.parse_json(io.read_text(spec), spec)
    try:
        comp = {tuple(k.split(".")): v for k, v in d["composition"].items()}
        return FCP(list(d["objects"]), [tuple(m) for m in d["morphisms"]], comp, dict(d.get("identities", {})))
    except (KeyError, TypeError, ValueError) as exc:
        raise io.InputError(f"bad presentation: {exc}", spec) from None


@main.command(help="Generate a certified example structure.\n\n" + GEN_HELP)
@click.argument("kind")
@click.argument("params", nargs=-1)
@click.option("--field", "field_", default="Q", show_default=True, help="'Q' or 'Fp:<p>'.")
@click.option("--out", default=None, help="Write the structure here (default stdout).")
@guarded
def gen(kind, params, field_, out):
    from . import generators as g
    fs = _field(field_)
    try:
        if kind == "group":
            s = g.gen_group_functions(tuple(int(x) for x in params), fs)
        elif kind == "category":
            s = g.gen_category_algebra(_presentation(params[0] if params else "arrow"), fs)
        elif kind == "exterior":
            s = g.gen_exterior_super(fs)
        elif kind == "quantum_line":
            s = g.gen_quantum_line(*(int(x) for x in params))
        elif kind == "weak_braided":
            s = g.gen_weak_braided(*(int(x) for x in params))
        else:
            raise io.InputError(f"unknown kind {kind!r}")
    except (g.PresentationInvalid, ValueError) as exc:
        if isinstance(exc, io.InputError):
            raise
        raise io.InputError(str(exc), kind) from None
    except g.VerificationFailed as exc:
        raise Failure("verification", str(exc)) from None
    io.write_json(io.structure_to_json(s), out)
    return EXIT_OK


# complete -------------------------------------------------------------------

@main.command()
@click.argument("path")
@click.option("--out", default=None, help="Write the completed structure here (default stdout).")
@click.option("--field", "field_", default=None, help="Reinterpret entries over 'Q' or 'Fp:<p>'.")
@guarded
def complete(path, out, field_):
    """Solve for t2, t3, t4 from t1 and the multiplication (given as m or through j)."""
    from .core import SemigroupA, check_rwmb, complete_from_t1, complete_structure
    from .graded import GradedMorphism, power
    from .linalg import ExactMatrix, NonUnique, NoSolution, kron
    bd = io.load_bundle(path, _field(field_))
    a = bd.roles.get("A", "A")
    if a not in bd.objects or not bd.has_role("t1"):
        raise io.InputError("need object A and role t1", "roles")
    A = bd.objects[a]
    try:
        if bd.has_role("j") and bd.has_role("e1") and bd.has_role("e2"):
            s = complete_structure(A, bd.role("t1"), bd.role("e1"), bd.role("e2"), bd.role("j"),
                                   bd.variant, bd.name)
            if bd.has_role("m") and bd.role("m") != s.m:
                raise io.InputError("declared m differs from (j*1).t1", "roles.m")
            rep = check_rwmb(s)
            if not rep.passed:
                raise Failure(rep.first_failure().name, "completed structure fails " + rep.summary())
            io.write_json(io.structure_to_json(s), out)
            return EXIT_OK
        if bd.has_role("m"):
            m = bd.role("m")
        elif bd.has_role("j"):
            m = kron(bd.role("j"), ExactMatrix.identity(A.dim, A.context.field)) @ bd.role("t1")
        else:
            raise io.InputError("need role m or j", "roles")
        sg = SemigroupA(A, GradedMorphism(power(A, 2), A, m))
        ts = complete_from_t1(sg, bd.role("t1"), bd.variant)
    except NoSolution as exc:
        raise Failure("completion", f"no solution: {exc}") from None
    except NonUnique as exc:
        raise Failure("completion", f"not unique: {exc}") from None
    mors = dict(bd.morphisms)
    for k, v in ts.items():
        mat = v.matrix if hasattr(v, "matrix") else v
        mors[k] = (mat, (a, a), (a, a))
    roles = dict(bd.roles)
    roles.update({k: k for k in ts})
    io.write_json(io.bundle_to_json(io.Bundle(bd.context, bd.objects, mors, roles, bd.name, bd.variant)), out)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    main()
