"""Randomized instances of the braided-backend laws, shared by unit and acceptance tests."""

from __future__ import annotations

import random

import oracles

from rwmb.graded import (
    Bicharacter,
    BraidedContext,
    GradedMorphism,
    GradedObject,
    GradingGroup,
    braiding,
    compose,
    identity,
    tensor_mor,
    tensor_object,
)
from rwmb.linalg import QQ, ExactMatrix, FieldSpec


def contexts() -> list[BraidedContext]:
    F7 = FieldSpec.prime(7)
    z3 = GradingGroup((3,))
    v4 = GradingGroup((2, 2))
    return [
        BraidedContext(z3, Bicharacter.from_generators(z3, F7, [[2]]), F7),
        BraidedContext(v4, Bicharacter.from_generators(v4, QQ, [[-1, -1], [1, 1]]), QQ),
        BraidedContext(v4, Bicharacter.from_generators(v4, F7, [[6, 1], [6, 6]]), F7),
        BraidedContext.super_vect(QQ),
    ]


def random_object(rng: random.Random, ctx: BraidedContext, max_dim: int) -> GradedObject:
    n = rng.randint(1, max_dim)
    return GradedObject(ctx, tuple(rng.randrange(ctx.group.order) for _ in range(n)))


def random_morphism(rng: random.Random, x: GradedObject, y: GradedObject) -> GradedMorphism:
    entries = {}
    for i, gy in enumerate(y.grades):
        for j, gx in enumerate(x.grades):
            if gx == gy and rng.random() < 0.7:
                entries[(i, j)] = rng.randint(-3, 3)
    m = ExactMatrix.from_entries(y.dim, x.dim, entries, x.context.field)
    return GradedMorphism(x, y, m)


def check_instance(rng: random.Random, ctx: BraidedContext, max_dim: int = 6) -> dict[str, bool]:
    """Draw objects and morphisms (tensor dimensions at most ``max_dim``) and evaluate every law."""
    while True:
        X, Y, Z = (random_object(rng, ctx, 3) for _ in range(3))
        if X.dim * Y.dim * Z.dim <= max_dim:
            break
    X2, Y2 = random_object(rng, ctx, 2), random_object(rng, ctx, 3)
    f, g = random_morphism(rng, X, X2), random_morphism(rng, Y, Y2)
    f2, g2 = random_morphism(rng, X2, X), random_morphism(rng, Y2, Y)
    out = {}
    out["hexagon_left"] = braiding(X, tensor_object(Y, Z)) == compose(
        tensor_mor(identity(Y), braiding(X, Z)), tensor_mor(braiding(X, Y), identity(Z)))
    out["hexagon_right"] = braiding(tensor_object(X, Y), Z) == compose(
        tensor_mor(braiding(X, Z), identity(Y)), tensor_mor(identity(X), braiding(Y, Z)))
    out["naturality"] = compose(braiding(X2, Y2), tensor_mor(f, g)) == compose(tensor_mor(g, f), braiding(X, Y))
    out["inverse"] = (compose(braiding(Y, X, inverse=True), braiding(X, Y)) == identity(tensor_object(X, Y))
                      and compose(braiding(X, Y), braiding(Y, X, inverse=True)) == identity(tensor_object(Y, X)))
    out["kron_interchange"] = compose(tensor_mor(f2, g2), tensor_mor(f, g)) == tensor_mor(compose(f2, f),
                                                                                       compose(g2, g))
    out["braid_matches_oracle"] = oracles.dense(braiding(X, Y).matrix) == oracles.braid(
        ctx.chi, X.grades, Y.grades, ctx.field)
    return out


def run(instances: int, seed: int = 0) -> list[tuple[int, str]]:
    """Failures ``(instance, law)`` over ``instances`` draws cycling through the contexts."""
    rng = random.Random(seed)
    ctxs = contexts()
    bad = []
    for k in range(instances):
        for law, ok in check_instance(rng, ctxs[k % len(ctxs)]).items():
            if not ok:
                bad.append((k, law))
    return bad
