"""A small language for string-diagram expressions.

Grammar (``.`` binds looser than ``*``; ``g . f`` means ``f`` first)::

    expr    := tensor ('.' tensor)*
    tensor  := factor ('*' factor)*
    factor  := '(' expr ')' | 'id(' obj ')' | 'c(' obj ',' obj ')'
             | 'cinv(' obj ',' obj ')' | '1' | IDENT
    obj     := objatom ('*' objatom)*
    objatom := IDENT | 'I' | '(' obj ')'

``1`` abbreviates the identity of the default object (``A`` unless the
parser is told otherwise).  ``cinv(X, Y)`` is the inverse of ``c(Y, X)``, so
both braidings go from ``X Y`` to ``Y X``.

Expressions can be evaluated in four variants of the ambient category:
``rev`` reverses the tensor product (and with it the braiding's arguments),
``bar`` replaces the braiding by its inverse.  Atoms keep their matrices in
every variant; only the way expressions assemble them changes.
"""

from __future__ import annotations

import re
import time
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .graded import (
    BraidedContext,
    GradedMorphism,
    GradedObject,
    grade_violation,
    tensor_objects,
)
from .linalg import ExactMatrix, block_diag_identity_kron, kron, matmul


class DiagramSyntaxError(ValueError):
    def __init__(self, message: str, col: int, text: str = ""):
        super().__init__(f"{message} at col {col}" + (f" in {text!r}" if text else ""))
        self.col = col


class DiagramTypeError(TypeError):
    pass


# object expressions ---------------------------------------------------------

@dataclass(frozen=True)
class Unit:
    def names(self) -> tuple[str, ...]:
        return ()


@dataclass(frozen=True)
class Named:
    name: str

    def names(self) -> tuple[str, ...]:
        return (self.name,)


@dataclass(frozen=True)
class TensorObj:
    items: tuple

    def names(self) -> tuple[str, ...]:
        return tuple(n for it in self.items for n in it.names())


ObjExpr = Union[Unit, Named, TensorObj]


# morphism expressions -------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Id:
    obj: ObjExpr


@dataclass(frozen=True)
class Braid:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True)
class BraidInv:
    x: ObjExpr
    y: ObjExpr


@dataclass(frozen=True)
class Tensor:
    items: tuple


@dataclass(frozen=True)
class Compose:
    """``items[0] . items[1] . ...``: the last item acts first."""

    items: tuple


DiagramExpr = Union[Atom, Id, Braid, BraidInv, Tensor, Compose]


# parsing --------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(\d+)|(\S))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text) and not text[pos:].isspace():
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            break
        if mt.group(1):
            toks.append(("id", mt.group(1), mt.start(1) + 1))
        elif mt.group(2):
            toks.append(("num", mt.group(2), mt.start(2) + 1))
        elif mt.group(3):
            ch = mt.group(3)
            if ch not in "().,*":
                raise DiagramSyntaxError(f"unexpected character {ch!r}", mt.start(3) + 1, text)
            toks.append(("op", ch, mt.start(3) + 1))
        pos = mt.end()
    toks.append(("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, default_object: str, macros: Mapping[str, DiagramExpr]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.default = default_object
        self.macros = macros

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, what: str):
        kind, val, col = self.peek()
        got = "end of input" if kind == "end" else repr(val)
        raise DiagramSyntaxError(f"expected {what}, got {got}", col, self.text)

    def expect(self, val: str):
        kind, v, _ = self.peek()
        if kind != "op" or v != val:
            self.fail(repr(val))
        self.take()

    def at(self, val: str) -> bool:
        kind, v, _ = self.peek()
        return kind == "op" and v == val

    def parse(self) -> DiagramExpr:
        e = self.expr()
        if self.peek()[0] != "end":
            self.fail("end of input")
        return e

    def expr(self) -> DiagramExpr:
        items = [self.tensor()]
        while self.at("."):
            self.take()
            items.append(self.tensor())
        return items[0] if len(items) == 1 else Compose(tuple(items))

    def tensor(self) -> DiagramExpr:
        items = [self.factor()]
        while self.at("*"):
            self.take()
            items.append(self.factor())
        return items[0] if len(items) == 1 else Tensor(tuple(items))

    def factor(self) -> DiagramExpr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if kind == "num":
            if val != "1":
                self.fail("'1' or a morphism")
            self.take()
            return Id(Named(self.default))
        if kind != "id":
            self.fail("a morphism")
        self.take()
        nxt = self.toks[self.i]
        if val in ("id", "c", "cinv") and nxt[0] == "op" and nxt[1] == "(":
            self.take()
            x = self.obj()
            if val == "id":
                self.expect(")")
                return Id(x)
            self.expect(",")
            y = self.obj()
            self.expect(")")
            return Braid(x, y) if val == "c" else BraidInv(x, y)
        if val in self.macros:
            return self.macros[val]
        return Atom(val)

    def obj(self) -> ObjExpr:
        items = [self.objatom()]
        while self.at("*"):
            self.take()
            items.append(self.objatom())
        return items[0] if len(items) == 1 else TensorObj(tuple(items))

    def objatom(self) -> ObjExpr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "(":
            self.take()
            o = self.obj()
            self.expect(")")
            return o
        if kind == "id":
            self.take()
            return Unit() if val == "I" else Named(val)
        self.fail("an object")


def parse(text: str, default_object: str = "A", macros: Mapping[str, DiagramExpr] | None = None) -> DiagramExpr:
    """Parse one expression; macros substitute parsed expressions for identifiers."""
    return _Parser(text, default_object, macros or {}).parse()


def print_obj(o: ObjExpr, nested: bool = False) -> str:
    if isinstance(o, Unit):
        return "I"
    if isinstance(o, Named):
        return o.name
    s = "*".join(print_obj(i, True) for i in o.items)
    return f"({s})" if nested else s


def print_expr(e: DiagramExpr, ctx: str = "top") -> str:
    """Inverse of :func:`parse` on the expressions it produces."""
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Id):
        return f"id({print_obj(e.obj)})"
    if isinstance(e, Braid):
        return f"c({print_obj(e.x)},{print_obj(e.y)})"
    if isinstance(e, BraidInv):
        return f"cinv({print_obj(e.x)},{print_obj(e.y)})"
    if isinstance(e, Tensor):
        s = "*".join(print_expr(i, "tensor") for i in e.items)
        return s if ctx == "top" else f"({s})"
    if isinstance(e, Compose):
        s = ".".join(print_expr(i, "compose") for i in e.items)
        return s if ctx == "top" else f"({s})"
    raise TypeError(f"not an expression: {e!r}")


# evaluation -----------------------------------------------------------------

@dataclass(frozen=True)
class Variant:
    """Which of the four related braided categories expressions are read in."""

    rev: bool = False
    bar: bool = False

    def __mul__(self, other: "Variant") -> "Variant":
        return Variant(self.rev ^ other.rev, self.bar ^ other.bar)


PLAIN = Variant(False, False)


class Environment:
    """Named objects and morphisms with declared source and target words."""

    def __init__(self, context: BraidedContext, objects: Mapping[str, GradedObject],
                 morphisms: Mapping[str, tuple] | None = None):
        self.context = context
        self.objects = dict(objects)
        self.morphisms: dict[str, tuple[ExactMatrix, tuple[str, ...], tuple[str, ...]]] = {}
        self._cache: dict = {}
        for name, spec in (morphisms or {}).items():
            self.add(name, *spec)

    def add(self, name: str, mor, source: Sequence[str], target: Sequence[str]):
        """Register ``mor`` (GradedMorphism or ExactMatrix) as ``source -> target``."""
        source, target = tuple(source), tuple(target)
        src, tgt = self.object_of(source), self.object_of(target)
        matrix = mor.matrix if isinstance(mor, GradedMorphism) else mor
        if matrix.shape != (tgt.dim, src.dim):
            raise DiagramTypeError(f"{name}: matrix {matrix.shape} does not fit {target} <- {source}")
        bad = grade_violation(matrix, src, tgt)
        if bad is not None:
            raise DiagramTypeError(f"{name}: entry {bad} is not grade preserving")
        self.morphisms[name] = (matrix, source, target)
        self._cache.clear()

    def extended(self, extra: Mapping[str, tuple] | None = None,
                 objects: Mapping[str, GradedObject] | None = None) -> "Environment":
        env = Environment(self.context, {**self.objects, **(objects or {})})
        env.morphisms = dict(self.morphisms)
        for name, spec in (extra or {}).items():
            env.add(name, *spec)
        return env

    def object_of(self, names: Sequence[str]) -> GradedObject:
        try:
            return tensor_objects([self.objects[n] for n in names], self.context)
        except KeyError as exc:
            raise DiagramTypeError(f"unknown object {exc.args[0]}") from None

    def dim(self, names: Sequence[str]) -> int:
        d = 1
        for n in names:
            d *= self.objects[n].dim
        return d


def _rv(names: tuple[str, ...], rev: bool) -> tuple[str, ...]:
    return tuple(reversed(names)) if rev else names


def typecheck(e: DiagramExpr, env: Environment, variant: Variant = PLAIN):
    """``(source, target)`` object words of ``e`` read in ``variant``."""
    if isinstance(e, Atom):
        if e.name not in env.morphisms:
            raise DiagramTypeError(f"unknown morphism {e.name!r}")
        _, s, t = env.morphisms[e.name]
        return _rv(s, variant.rev), _rv(t, variant.rev)
    if isinstance(e, Id):
        n = e.obj.names()
        return n, n
    if isinstance(e, (Braid, BraidInv)):
        x, y = e.x.names(), e.y.names()
        return x + y, y + x
    if isinstance(e, Tensor):
        s, t = (), ()
        for it in e.items:
            a, b = typecheck(it, env, variant)
            s, t = s + a, t + b
        return s, t
    if isinstance(e, Compose):
        src, tgt = typecheck(e.items[-1], env, variant)
        for it in reversed(e.items[:-1]):
            a, b = typecheck(it, env, variant)
            if a != tgt:
                raise DiagramTypeError(
                    f"cannot compose {print_expr(it)} ({'*'.join(a) or 'I'} -> ...) "
                    f"after a map landing in {'*'.join(tgt) or 'I'}")
            tgt = b
        return src, tgt
    raise TypeError(f"not an expression: {e!r}")


def _flat(names: tuple[str, ...], rev: bool):
    """Names as laid out in the underlying strict tensor product."""
    return tuple(reversed(names)) if rev else names


def _eval(e: DiagramExpr, env: Environment, v: Variant) -> ExactMatrix:
    key = (e, v)
    hit = env._cache.get(key)
    if hit is not None:
        return hit
    f = env.context.field
    if isinstance(e, Atom):
        out = env.morphisms[e.name][0]
    elif isinstance(e, Id):
        out = ExactMatrix.identity(env.dim(e.obj.names()), f)
    elif isinstance(e, (Braid, BraidInv)):
        x, y = e.x.names(), e.y.names()
        inverse = isinstance(e, BraidInv)
        if v.rev:
            # c^rev_{X,Y} = c_{Y,X}; (cinv)^rev(X,Y) = cinv(Y,X)
            x, y = _flat(y, True), _flat(x, True)
        if v.bar:
            inverse = not inverse
        xo, yo = env.object_of(x), env.object_of(y)
        out = env.context.braid_matrix(xo.grades, yo.grades, inverse)
    elif isinstance(e, Tensor):
        items = list(reversed(e.items)) if v.rev else list(e.items)
        out = _eval_tensor(items, env, v)
    elif isinstance(e, Compose):
        out = _eval(e.items[-1], env, v)
        for it in reversed(e.items[:-1]):
            out = matmul(_eval(it, env, v), out)
    else:
        raise TypeError(f"not an expression: {e!r}")
    env._cache[key] = out
    return out


def _eval_tensor(items, env: Environment, v: Variant) -> ExactMatrix:
    f = env.context.field
    # collapse identity factors into dimensions so id*M*id becomes one block kron
    parts: list = []
    for it in items:
        if isinstance(it, Id):
            d = env.dim(it.obj.names())
            if parts and isinstance(parts[-1], int):
                parts[-1] *= d
            else:
                parts.append(d)
        else:
            parts.append(_eval(it, env, v))
    out = None
    pending_left = 1
    for p in parts:
        if isinstance(p, int):
            if out is None:
                pending_left *= p
            else:
                out = block_diag_identity_kron(1, out, p)
            continue
        if out is None:
            out = block_diag_identity_kron(pending_left, p, 1)
        else:
            out = kron(out, p)
    if out is None:
        out = ExactMatrix.identity(pending_left, f)
    return out


def evaluate(e: DiagramExpr | str, env: Environment, variant: Variant = PLAIN) -> GradedMorphism:
    """Matrix of ``e`` as a graded morphism, after type checking."""
    if isinstance(e, str):
        e = parse(e)
    s, t = typecheck(e, env, variant)
    m = _eval(e, env, variant)
    src, tgt = env.object_of(_flat(s, variant.rev)), env.object_of(_flat(t, variant.rev))
    return GradedMorphism(src, tgt, m, check=False)


def eval_matrix(e: DiagramExpr | str, env: Environment, variant: Variant = PLAIN) -> ExactMatrix:
    if isinstance(e, str):
        e = parse(e)
    typecheck(e, env, variant)
    return _eval(e, env, variant)


# equations ------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    label: str = ""
    seconds: float | None = field(default=None, compare=False)

    def witness_text(self, field) -> str | None:
        if self.witness is None:
            return None
        i, j, a, b = self.witness
        return f"entry ({i},{j}): lhs {field.format(a)} rhs {field.format(b)}"


def check_equation(lhs: DiagramExpr, rhs: DiagramExpr, env: Environment,
                   variant: Variant = PLAIN, name: str = "", label: str = "") -> CheckResult:
    """Compare both sides; a failure carries the first differing entry."""
    ls, lt = typecheck(lhs, env, variant)
    rs, rt = typecheck(rhs, env, variant)
    if (ls, lt) != (rs, rt):
        raise DiagramTypeError(
            f"{name}: boundaries differ: {'*'.join(ls)} -> {'*'.join(lt)} vs {'*'.join(rs)} -> {'*'.join(rt)}")
    start = time.perf_counter()
    a, b = _eval(lhs, env, variant), _eval(rhs, env, variant)
    elapsed = time.perf_counter() - start
    if a == b:
        return CheckResult(name, True, None, label, elapsed)
    return CheckResult(name, False, a.first_difference(b), label, elapsed)


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: DiagramExpr
    rhs: DiagramExpr
    label: str = ""

    def check(self, env: Environment, variant: Variant = PLAIN) -> CheckResult:
        return check_equation(self.lhs, self.rhs, env, variant, self.name, self.label)


def parse_equations(text: str, default_object: str = "A",
                    macros: Mapping[str, DiagramExpr] | None = None) -> list[Equation]:
    """Parse an equation file.

    Lines are ``name : lhs == rhs`` or ``let NAME = expr``; ``#`` starts a
    comment.  A trailing ``# label: X`` comment attaches a reference label.
    """
    macros = dict(macros or {})
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        label = ""
        line = raw
        if "#" in line:
            line, comment = line.split("#", 1)
            comment = comment.strip()
            if comment.startswith("label:"):
                label = comment[len("label:"):].strip()
        line = line.strip()
        if not line:
            continue
        try:
            if line.startswith("let "):
                name, body = line[4:].split("=", 1)
                macros[name.strip()] = parse(body, default_object, macros)
                continue
            if ":" not in line or "==" not in line:
                raise DiagramSyntaxError("expected 'name : lhs == rhs'", 1, line)
            name, body = line.split(":", 1)
            lhs, rhs = body.split("==", 1)
            out.append(Equation(name.strip(), parse(lhs, default_object, macros),
                                parse(rhs, default_object, macros), label or name.strip()))
        except DiagramSyntaxError as exc:
            raise DiagramSyntaxError(f"line {lineno}: {exc}", exc.col) from None
    return out


EQUATION_DIR = Path(__file__).with_name("equations")


def load_equations(name: str, macros: Mapping[str, DiagramExpr] | None = None) -> list[Equation]:
    """Read one of the shipped equation files by stem."""
    return parse_equations((EQUATION_DIR / f"{name}.eq").read_text(encoding="utf-8"), macros=macros)
