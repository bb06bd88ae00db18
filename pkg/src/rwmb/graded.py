"""Finite-dimensional vector spaces graded by a finite abelian group.

The braiding on ``X (x) Y`` sends a pair of homogeneous basis vectors
``x (x) y`` to ``chi(|x|, |y|) y (x) x`` for a bicharacter ``chi``.  Trivial
grading gives ordinary vector spaces with the flip; ``Z/2`` with
``chi(1, 1) = -1`` gives super vector spaces.  The tensor product is strict:
bases of tensor products are flattened row-major.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field as dc_field
from itertools import product

import numpy as np

from .linalg import (
    ExactMatrix,
    FieldSpec,
    ShapeMismatch,
    block_diag_identity_kron,
    kron,
    matmul,
)


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class GradingGroup:
    """Finite abelian group ``Z/n_1 + ... + Z/n_k``; the empty list is trivial."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(n) for n in self.invariant_factors))
        if any(n < 1 for n in self.invariant_factors):
            raise GradingError("invariant factors must be positive")

    @property
    def order(self) -> int:
        out = 1
        for n in self.invariant_factors:
            out *= n
        return out

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(e) for e in product(*(range(n) for n in self.invariant_factors))]

    def index(self, g) -> int:
        """Mixed-radix position of an element (tuples, or plain ints for cyclic groups)."""
        g = self.normalize(g)
        k = 0
        for x, n in zip(g, self.invariant_factors):
            k = k * n + x
        return k

    def element(self, k: int) -> tuple[int, ...]:
        out = []
        for n in reversed(self.invariant_factors):
            out.append(k % n)
            k //= n
        return tuple(reversed(out))

    def normalize(self, g) -> tuple[int, ...]:
        if isinstance(g, int):
            g = (g,) if self.invariant_factors else ()
        g = tuple(g)
        if len(g) != len(self.invariant_factors):
            raise GradingError(f"element {g} has wrong length for {self.invariant_factors}")
        return tuple(x % n for x, n in zip(g, self.invariant_factors))

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.invariant_factors))

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.invariant_factors)


class Bicharacter:
    """Table ``chi[g][h]`` of field elements indexed by group element positions."""

    def __init__(self, group: GradingGroup, field: FieldSpec, table):
        self.group = group
        self.field = field
        n = group.order
        self.table = tuple(tuple(field.element(table[a][b]) for b in range(n)) for a in range(n))
        self._validate()

    @classmethod
    def trivial(cls, group: GradingGroup, field: FieldSpec) -> "Bicharacter":
        n = group.order
        return cls(group, field, [[1] * n for _ in range(n)])

    @classmethod
    def from_generators(cls, group: GradingGroup, field: FieldSpec, q) -> "Bicharacter":
        """``chi(g, h) = prod_{a,b} q[a][b] ** (g_a h_b)`` for cyclic generators ``a, b``."""
        els = group.elements()
        k = len(group.invariant_factors)
        q = [[field.element(q[a][b]) for b in range(k)] for a in range(k)]
        table = []
        for g in els:
            row = []
            for h in els:
                v = field.one
                for a in range(k):
                    for b in range(k):
                        e = g[a] * h[b]
                        if e:
                            v = field.norm(v * _power(q[a][b], e, field))
                row.append(v)
            table.append(row)
        return cls(group, field, table)

    def __call__(self, a: int, b: int):
        return self.table[a][b]

    def _validate(self):
        g = self.group
        f = self.field
        els = g.elements()
        idx = {e: i for i, e in enumerate(els)}
        for a, x in enumerate(els):
            for b, y in enumerate(els):
                v = self.table[a][b]
                if not v:
                    raise GradingError("bicharacter values must be invertible")
                for c, z in enumerate(els):
                    s = idx[g.add(x, z)]
                    if f.norm(self.table[a][b] * self.table[c][b]) != self.table[s][b]:
                        raise GradingError(f"chi is not multiplicative in the first slot at {x},{z};{y}")
                    if f.norm(self.table[b][a] * self.table[b][c]) != self.table[b][s]:
                        raise GradingError(f"chi is not multiplicative in the second slot at {y};{x},{z}")

    def is_symmetric(self) -> bool:
        n = self.group.order
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def __eq__(self, other):
        return isinstance(other, Bicharacter) and (self.group, self.field, self.table) == (
            other.group, other.field, other.table)

    def __hash__(self):
        return hash((self.group, self.field, self.table))


def _power(x, e, field: FieldSpec):
    if field.p:
        return pow(int(x), e, field.p)
    return x ** e


class BraidedContext:
    """Grading group, bicharacter and base field; fixes the braided category."""

    def __init__(self, group: GradingGroup, chi: Bicharacter | None = None, field: FieldSpec | None = None):
        if chi is None:
            chi = Bicharacter.trivial(group, field or FieldSpec(0))
        if field is None:
            field = chi.field
        if chi.field != field or chi.group != group:
            raise GradingError("bicharacter does not match group and field")
        self.group = group
        self.chi = chi
        self.field = field
        self._add = [[group.index(group.add(x, y)) for y in group.elements()] for x in group.elements()]
        self._braid_cache: dict = {}

    @classmethod
    def vect(cls, field: FieldSpec) -> "BraidedContext":
        g = GradingGroup(())
        return cls(g, Bicharacter.trivial(g, field), field)

    @classmethod
    def super_vect(cls, field: FieldSpec) -> "BraidedContext":
        if field.p == 2:
            raise GradingError("super vector spaces need characteristic != 2")
        g = GradingGroup((2,))
        return cls(g, Bicharacter.from_generators(g, field, [[-1]]), field)

    def __eq__(self, other):
        return isinstance(other, BraidedContext) and self.chi == other.chi

    def __hash__(self):
        return hash(self.chi)

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def obj(self, grades: Sequence = ()) -> "GradedObject":
        """Object whose basis vectors carry the given grades (ints or tuples)."""
        return GradedObject(self, tuple(self.group.index(g) for g in grades))

    def obj_from_indices(self, grades: Sequence[int]) -> "GradedObject":
        return GradedObject(self, tuple(grades))

    @property
    def unit(self) -> "GradedObject":
        return GradedObject(self, (0,))

    def braid_matrix(self, xg: tuple[int, ...], yg: tuple[int, ...], inverse: bool) -> ExactMatrix:
        key = (xg, yg, inverse)
        m = self._braid_cache.get(key)
        if m is None:
            m = self._make_braid(xg, yg, inverse)
            self._braid_cache[key] = m
        return m

    def _make_braid(self, xg, yg, inverse) -> ExactMatrix:
        dx, dy = len(xg), len(yg)
        f = self.field
        targets, values = [], []
        inv_cache = {}
        for i in range(dx):
            for j in range(dy):
                targets.append(j * dx + i)
                if inverse:
                    key = (yg[j], xg[i])
                    v = inv_cache.get(key)
                    if v is None:
                        v = inv_cache[key] = f.inv(self.chi(*key))
                else:
                    v = self.chi(xg[i], yg[j])
                values.append(v)
        return ExactMatrix.monomial(targets, dx * dy, values, f, cols=dx * dy)


@dataclass(frozen=True, eq=False)
class GradedObject:
    """Ordered basis with one grade (group element position) per vector."""

    context: BraidedContext
    grades: tuple[int, ...]
    _key: tuple = dc_field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_key", (self.context, self.grades))

    @property
    def dim(self) -> int:
        return len(self.grades)

    def grade_tuples(self) -> list[tuple[int, ...]]:
        return [self.context.group.element(g) for g in self.grades]

    def __eq__(self, other):
        return isinstance(other, GradedObject) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"GradedObject(dim={self.dim}, grades={self.grades})"

    def __matmul__(self, other: "GradedObject") -> "GradedObject":
        return tensor_object(self, other)


def tensor_object(x: GradedObject, y: GradedObject) -> GradedObject:
    if x.context != y.context:
        raise GradingError("objects live in different contexts")
    ctx = x.context
    add = ctx._add
    return GradedObject(ctx, tuple(add[a][b] for a in x.grades for b in y.grades))


def tensor_objects(objs: Sequence[GradedObject], ctx: BraidedContext) -> GradedObject:
    out = ctx.unit
    for o in objs:
        out = tensor_object(out, o)
    return out


def power(x: GradedObject, n: int) -> GradedObject:
    return tensor_objects([x] * n, x.context)


def grade_violation(matrix: ExactMatrix, source: GradedObject, target: GradedObject):
    """First nonzero entry connecting different grades, or None."""
    if matrix.field.uses_csr:
        coo = matrix.csr().tocoo()
        if coo.nnz == 0:
            return None
        tg = np.asarray(target.grades, dtype=np.int64)[coo.row]
        sg = np.asarray(source.grades, dtype=np.int64)[coo.col]
        bad = np.nonzero(tg != sg)[0]
        if len(bad) == 0:
            return None
        k = bad[np.lexsort((coo.col[bad], coo.row[bad]))[0]]
        return int(coo.row[k]), int(coo.col[k])
    tg, sg = target.grades, source.grades
    for i in sorted(matrix.rowmap()):
        for j in sorted(matrix.rowmap()[i]):
            if tg[i] != sg[j]:
                return i, j
    return None


class GradedMorphism:
    """Grade-preserving linear map given by a ``target.dim x source.dim`` matrix."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: GradedObject, target: GradedObject, matrix: ExactMatrix, check: bool = True):
        if matrix.shape != (target.dim, source.dim):
            raise ShapeMismatch(f"matrix {matrix.shape} does not fit {target.dim}x{source.dim}")
        if matrix.field != source.context.field:
            raise ShapeMismatch("matrix field differs from the context field")
        if check:
            bad = grade_violation(matrix, source, target)
            if bad is not None:
                raise GradingError(f"entry {bad} connects different grades")
        self.source = source
        self.target = target
        self.matrix = matrix

    @property
    def context(self) -> BraidedContext:
        return self.source.context

    def __eq__(self, other):
        return (isinstance(other, GradedMorphism) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"GradedMorphism({self.source.dim}->{self.target.dim}, nnz={self.matrix.nnz})"

    def __matmul__(self, other: "GradedMorphism") -> "GradedMorphism":
        return compose(self, other)


def identity(x: GradedObject) -> GradedMorphism:
    return GradedMorphism(x, x, ExactMatrix.identity(x.dim, x.context.field), check=False)


def compose(g: GradedMorphism, f: GradedMorphism) -> GradedMorphism:
    """``g . f``: first ``f`` then ``g``."""
    if f.target != g.source:
        raise ShapeMismatch("composition of non-matching morphisms")
    return GradedMorphism(f.source, g.target, matmul(g.matrix, f.matrix))


def tensor_mor(f: GradedMorphism, g: GradedMorphism) -> GradedMorphism:
    return GradedMorphism(tensor_object(f.source, g.source), tensor_object(f.target, g.target),
                          kron(f.matrix, g.matrix))


def whisker(left: GradedObject, f: GradedMorphism, right: GradedObject) -> GradedMorphism:
    """``id_left (x) f (x) id_right``."""
    ctx = f.context
    return GradedMorphism(tensor_objects([left, f.source, right], ctx),
                          tensor_objects([left, f.target, right], ctx),
                          block_diag_identity_kron(left.dim, f.matrix, right.dim), check=False)


def braiding(x: GradedObject, y: GradedObject, inverse: bool = False) -> GradedMorphism:
    """``c: X Y -> Y X``; with ``inverse`` the inverse of ``c_{Y,X}``, also ``X Y -> Y X``."""
    if x.context != y.context:
        raise GradingError("objects live in different contexts")
    m = x.context.braid_matrix(x.grades, y.grades, inverse)
    return GradedMorphism(tensor_object(x, y), tensor_object(y, x), m, check=False)


def curry(matrix: ExactMatrix, z_dim: int, v_dim: int, side: str) -> ExactMatrix:
    """Reshape ``v: Z V -> W`` (side 'left') or ``v: V Z -> W`` (side 'right') to ``V -> Hom(Z, W)``.

    Row ``w * z_dim + z`` and column ``x`` of the result hold ``v(z (x) x)``
    (respectively ``v(x (x) z)``) at coordinate ``w``.
    """
    if matrix.cols != z_dim * v_dim:
        raise ShapeMismatch(f"source dimension {matrix.cols} is not {z_dim}*{v_dim}")
    w_dim = matrix.rows
    entries = {}
    for w, r in matrix.rowmap().items():
        for col, val in r.items():
            if side == "left":
                z, x = divmod(col, v_dim)
            elif side == "right":
                x, z = divmod(col, z_dim)
            else:
                raise ValueError("side must be 'left' or 'right'")
            entries[(w * z_dim + z, x)] = val
    return ExactMatrix.from_entries(w_dim * z_dim, v_dim, entries, matrix.field)


def is_nondegenerate(v: GradedMorphism, factor: GradedObject, side: str = "left") -> bool:
    """Whether ``v`` has an injective curried form ``V -> Hom(Z, W)``.

    ``factor`` is ``Z``: the left tensor factor of the source for side
    'left', the right one for side 'right'.
    """
    if factor.dim == 0:
        return v.source.dim == 0
    if v.source.dim % factor.dim:
        raise ShapeMismatch("factor does not divide the source")
    v_dim = v.source.dim // factor.dim
    return curry(v.matrix, factor.dim, v_dim, side).rank() == v_dim


def is_surjective(f: GradedMorphism) -> bool:
    return f.matrix.rank() == f.target.dim


def is_injective(f: GradedMorphism) -> bool:
    return f.matrix.rank() == f.source.dim
