"""Shared fixtures: contexts, seeded RNG, and random expression generators."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

import liesym as ls

SEED = 20260825


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture
def ctx_xu():
    """One independent (x) and one dependent (u) variable."""
    return ls.Context(("x",), ("u",))


@pytest.fixture
def ctx_heat():
    return ls.Context(("x", "t"), ("u",))


@pytest.fixture
def ctx_xy():
    """Two independent variables, one dependent."""
    return ls.Context(("x", "y"), ("u",))


@pytest.fixture
def ctx_wave():
    return ls.Context(("x", "t"), ("u", "v"))


@pytest.fixture
def heat_system(ctx_heat):
    return ls.DiffSystem(
        ctx_heat, ((ls.Jet(1, (2,)), ls.Jet(1, (1, 1))),)
    )


@pytest.fixture
def rotation(ctx_xu):
    """v = -u d/dx + x d/du."""
    return ls.VectorField(
        ctx_xu, (ls.neg(ls.Jet(1, ())),), (ls.Var(1),)
    )


def rand_rational(rng, lo=-4, hi=4):
    num = rng.randint(lo, hi)
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)


def rand_poly(rng, atoms, degree=2, terms=3):
    """Random polynomial in the given atoms with small rational coefficients."""
    parts = []
    for _ in range(terms):
        factors = [ls.Const(rand_rational(rng))]
        for _ in range(rng.randint(0, degree)):
            factors.append(rng.choice(atoms))
        parts.append(ls.mul(*factors))
    return ls.add(*parts)


def rand_expr(rng, atoms, depth=3):
    """Random expression tree including powers and elementary functions."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.25:
            return ls.Const(rand_rational(rng))
        return rng.choice(atoms)
    op = rng.randrange(4)
    if op == 0:
        return ls.add(rand_expr(rng, atoms, depth - 1),
                      rand_expr(rng, atoms, depth - 1))
    if op == 1:
        return ls.mul(rand_expr(rng, atoms, depth - 1),
                      rand_expr(rng, atoms, depth - 1))
    if op == 2:
        exp = rng.choice([Fraction(2), Fraction(3), Fraction(-1),
                          Fraction(-2), Fraction(1, 2), Fraction(3, 2)])
        base = rand_expr(rng, atoms, depth - 1)
        if base == ls.Const(Fraction(0)) and exp < 0:
            base = ls.add(base, 1)
        return ls.pow_(base, exp)
    name = rng.choice(("exp", "log", "sin", "cos"))
    return ls.func(name, rand_expr(rng, atoms, depth - 1))


def rand_point_vf(rng, ctx, degree=2):
    """Random polynomial point vector field on the given context."""
    atoms = [ls.Var(i + 1) for i in range(ctx.p)]
    atoms += [ls.Jet(a + 1, ()) for a in range(ctx.q)]
    xi = tuple(rand_poly(rng, atoms, degree) for _ in range(ctx.p))
    phi = tuple(rand_poly(rng, atoms, degree) for _ in range(ctx.q))
    return ls.VectorField(ctx, xi, phi)
