import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from crosshom.cohomology import Cochain
from crosshom.liealg import (
    CrossedHom,
    Setup,
    abelian,
    adjoint_action,
    heisenberg,
    sl2,
    two_dim_nonabelian,
    zero_action,
)
from crosshom.linalg import Matrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


def frac_matrix(rows) -> Matrix:
    return Matrix.from_rows(rows)


def dim2_setup(h_rows) -> Setup:
    g = two_dim_nonabelian()
    return Setup(g, g, adjoint_action(g), CrossedHom(frac_matrix(h_rows)))


def sl2_setup(h_rows=None) -> Setup:
    g = sl2()
    H = frac_matrix(h_rows) if h_rows is not None else Matrix.zero(3, 3)
    return Setup(g, g, adjoint_action(g), CrossedHom(H))


def heisenberg_setup(h_rows=None) -> Setup:
    g = heisenberg()
    H = frac_matrix(h_rows) if h_rows is not None else Matrix.zero(3, 3)
    return Setup(g, g, adjoint_action(g), CrossedHom(H))


def random_cochain(rng: random.Random, k: int, g_dim: int, h_dim: int) -> Cochain:
    values = {}
    for T in itertools.combinations(range(g_dim), k):
        v = tuple(Fraction(rng.randint(-2, 2)) for _ in range(h_dim))
        if any(v):
            values[T] = v
    return Cochain(k, g_dim, h_dim, values)


def action_library():
    """Valid (g, h, rho) triples used to randomize H in property tests."""
    triples = []
    for build in (two_dim_nonabelian, heisenberg, sl2):
        g = build()
        triples.append((g, g, adjoint_action(g)))
        triples.append((g, g, zero_action(g, g)))
    a2 = abelian(("a1", "a2"))
    g2 = two_dim_nonabelian()
    triples.append((g2, a2, zero_action(g2, a2)))
    # 1-dim g acting on 1-dim h by scaling: rho(d) = identity
    g1 = abelian(("d",))
    h1 = abelian(("a",))
    triples.append((g1, h1, __import__("crosshom").liealg.LieAction(g1, h1, (Matrix.identity(1),))))
    return triples
