"""A mutable diagram environment tied to one structure and its variant."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from .core import MACROS, RwmbStructure
from .dsl import CheckResult, check_equation, eval_matrix, parse
from .graded import GradedObject
from .linalg import ExactMatrix, solve_along_surjection
from .report import Report


class Workspace:
    """Named objects and maps on top of a structure's own atoms.

    Maps are registered with their logical type; under a reversed variant
    the stored physical type is mirrored so that expressions read the same
    in every variant.
    """

    def __init__(self, s: RwmbStructure, objects: Mapping[str, GradedObject] | None = None):
        self.s = s
        self.variant = s.variant
        self.env = s.env().extended(objects=objects)
        self.macros = dict(MACROS)

    def add_object(self, name: str, obj: GradedObject) -> None:
        self.env.objects[name] = obj
        self.env._cache.clear()

    def add(self, name: str, matrix: ExactMatrix, source: Sequence[str], target: Sequence[str]) -> None:
        source, target = tuple(source), tuple(target)
        if self.variant.rev:
            source, target = source[::-1], target[::-1]
        self.env.add(name, matrix, source, target)

    def let(self, name: str, text: str) -> None:
        self.macros[name] = parse(text, macros=self.macros)

    def ev(self, text: str) -> ExactMatrix:
        return eval_matrix(parse(text, macros=self.macros), self.env, self.variant)

    def check(self, name: str, lhs: str, rhs: str, label: str = "") -> CheckResult:
        return check_equation(parse(lhs, macros=self.macros), parse(rhs, macros=self.macros),
                              self.env, self.variant, name, label)

    def check_all(self, eqs: Sequence[tuple[str, str, str]], rep: Report | None = None,
                  prefix: str = "") -> Report:
        rep = rep if rep is not None else Report()
        for name, lhs, rhs in eqs:
            rep.add(self.check(name, lhs, rhs), prefix)
        return rep

    def factor(self, p: str, f: str, section: str | None = None) -> ExactMatrix:
        """The unique ``g`` with ``g . p == f`` for a surjective ``p`` (expressions)."""
        return solve_along_surjection(self.ev(p), self.ev(f), self.ev(section) if section else None)

    def dim(self, name: str) -> int:
        return self.env.objects[name].dim
