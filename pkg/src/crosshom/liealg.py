"""Finite-dimensional Lie algebras via structure constants.

Covers actions by derivations, crossed homomorphisms H: g -> h satisfying

    H[x, y] = rho(x)(Hy) - rho(y)(Hx) + [Hx, Hy],

the induced (twisted) action rho_H(x)u = rho(x)u + [Hx, u], semidirect
products, the twist map (x, u) |-> (x, Hx + u) between the two semidirect
products, and exhaustive grid classification of crossed homomorphisms.

Structure constants are stored for index pairs i < j only, so antisymmetry
holds by construction and every bilinear identity is decided exactly by
finitely many basis checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    NotAction,
    NotCrossedHom,
    SearchSpaceTooLarge,
)
from .linalg import (
    Matrix,
    Vector,
    is_zero_vector,
    rational,
    vadd,
    vector,
    vscale,
    vsub,
    vzero,
)
from .report import Finding


@dataclass(frozen=True)
class FinLieAlgebra:
    basis_names: tuple[str, ...]
    structure: Mapping[tuple[int, int], Vector]

    def __post_init__(self):
        dim = len(self.basis_names)
        for (i, j), v in self.structure.items():
            if not (0 <= i < j < dim):
                raise DimensionMismatch(f"structure key ({i}, {j}) is not an i<j pair")
            if len(v) != dim:
                raise DimensionMismatch(f"bracket value at ({i}, {j}) has length {len(v)}")

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.dim))

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return vzero(self.dim)
        if i < j:
            return self.structure.get((i, j), vzero(self.dim))
        v = self.structure.get((j, i))
        return vzero(self.dim) if v is None else tuple(-c for c in v)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch(
                f"expected vectors of length {self.dim}, got {len(x)} and {len(y)}"
            )
        out = [Fraction(0)] * self.dim
        for (i, j), v in self.structure.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for k, vk in enumerate(v):
                    if vk:
                        out[k] += c * vk
        return tuple(out)

    def ad(self, x: Vector) -> Matrix:
        """Matrix of ad(x) = [x, .] in the defining basis."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols) if self.dim else Matrix.zero(0, 0)

    def __str__(self) -> str:
        return f"FinLieAlgebra(dim={self.dim}, basis={list(self.basis_names)})"


def lie_algebra(names: Sequence[str], brackets: Mapping[tuple[int, int], Iterable]) -> FinLieAlgebra:
    """Build an algebra from i<j bracket coordinates, dropping zero values."""
    structure = {}
    for (i, j), v in sorted(brackets.items()):
        vec = vector(v)
        if not is_zero_vector(vec):
            structure[(i, j)] = vec
    return FinLieAlgebra(tuple(names), structure)


def abelian(names: Sequence[str]) -> FinLieAlgebra:
    return FinLieAlgebra(tuple(names), {})


def two_dim_nonabelian() -> FinLieAlgebra:
    """Basis e1, e2 with [e1, e2] = e1."""
    return lie_algebra(("e1", "e2"), {(0, 1): (1, 0)})


def heisenberg() -> FinLieAlgebra:
    """Basis p, q, z with [p, q] = z, z central."""
    return lie_algebra(("p", "q", "z"), {(0, 1): (0, 0, 1)})


def sl2() -> FinLieAlgebra:
    """Basis e, f, h with [e, f] = h, [h, e] = 2e, [h, f] = -2f."""
    return lie_algebra(
        ("e", "f", "h"),
        {(0, 1): (0, 0, 1), (0, 2): (-2, 0, 0), (1, 2): (0, 2, 0)},
    )


def check_lie_algebra(L: FinLieAlgebra) -> list[Finding]:
    """List every basis triple violating the Jacobi identity."""
    findings = []
    for i, j, k in itertools.combinations(range(L.dim), 3):
        ei, ej, ek = (L.basis_vector(t) for t in (i, j, k))
        jac = vadd(
            vadd(L.bracket(ei, L.bracket(ej, ek)), L.bracket(ej, L.bracket(ek, ei))),
            L.bracket(ek, L.bracket(ei, ej)),
        )
        if not is_zero_vector(jac):
            names = (L.basis_names[i], L.basis_names[j], L.basis_names[k])
            findings.append(Finding("jacobi", names, jac))
    return findings


@dataclass(frozen=True)
class LieAction:
    """rho: g -> Der(h) given by one matrix on h per g-basis vector."""

    source: FinLieAlgebra
    target: FinLieAlgebra
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.matrices) != self.source.dim:
            raise DimensionMismatch(
                f"need {self.source.dim} action matrices, got {len(self.matrices)}"
            )
        for m in self.matrices:
            if (m.rows, m.cols) != (self.target.dim, self.target.dim):
                raise DimensionMismatch(
                    f"action matrix is {m.rows}x{m.cols}, expected "
                    f"{self.target.dim}x{self.target.dim}"
                )

    def of(self, x: Vector) -> Matrix:
        """rho(x) for a general x, by linearity."""
        if len(x) != self.source.dim:
            raise DimensionMismatch("element has wrong length for the source algebra")
        out = Matrix.zero(self.target.dim, self.target.dim)
        for i, c in enumerate(x):
            if c:
                out = out + self.matrices[i].scale(c)
        return out


def adjoint_action(L: FinLieAlgebra) -> LieAction:
    return LieAction(L, L, tuple(L.ad(L.basis_vector(i)) for i in range(L.dim)))


def zero_action(g: FinLieAlgebra, h: FinLieAlgebra) -> LieAction:
    return LieAction(g, h, tuple(Matrix.zero(h.dim, h.dim) for _ in range(g.dim)))


def check_action(rho: LieAction) -> list[Finding]:
    """Derivation property of each rho(e_i) and the homomorphism law."""
    g, h = rho.source, rho.target
    findings = []
    for i in range(g.dim):
        m = rho.matrices[i]
        for u, v in itertools.combinations(range(h.dim), 2):
            eu, ev = h.basis_vector(u), h.basis_vector(v)
            lhs = m.apply(h.bracket(eu, ev))
            rhs = vadd(h.bracket(m.col(u), ev), h.bracket(eu, m.col(v)))
            diff = vsub(lhs, rhs)
            if not is_zero_vector(diff):
                findings.append(
                    Finding(
                        "derivation",
                        (g.basis_names[i], h.basis_names[u], h.basis_names[v]),
                        diff,
                    )
                )
    for i, j in itertools.combinations(range(g.dim), 2):
        lhs = rho.of(g.bracket_basis(i, j))
        rhs = rho.matrices[i] * rho.matrices[j] - rho.matrices[j] * rho.matrices[i]
        diff = lhs - rhs
        if not diff.is_zero():
            findings.append(
                Finding("homomorphism", (g.basis_names[i], g.basis_names[j]), diff)
            )
    return findings


@dataclass(frozen=True)
class CrossedHom:
    """Linear map H: g -> h; column i holds H(e_i) in h-coordinates."""

    matrix: Matrix

    def apply(self, x: Vector) -> Vector:
        return self.matrix.apply(x)

    def column(self, i: int) -> Vector:
        return self.matrix.col(i)


@dataclass(frozen=True)
class Setup:
    """The ambient quadruple (g, h, rho, H) for all later operations."""

    g: FinLieAlgebra
    h: FinLieAlgebra
    rho: LieAction
    H: CrossedHom

    def __post_init__(self):
        if self.rho.source is not self.g and self.rho.source != self.g:
            raise DimensionMismatch("action source differs from g")
        if self.rho.target is not self.h and self.rho.target != self.h:
            raise DimensionMismatch("action target differs from h")
        m = self.H.matrix
        if (m.rows, m.cols) != (self.h.dim, self.g.dim):
            raise DimensionMismatch(
                f"H is {m.rows}x{m.cols}, expected {self.h.dim}x{self.g.dim}"
            )


def crossed_hom_residual(s: Setup, i: int, j: int) -> Vector:
    """H[e_i,e_j] - rho(e_i)(He_j) + rho(e_j)(He_i) - [He_i, He_j]."""
    Hi, Hj = s.H.column(i), s.H.column(j)
    res = s.H.apply(s.g.bracket_basis(i, j))
    res = vsub(res, s.rho.matrices[i].apply(Hj))
    res = vadd(res, s.rho.matrices[j].apply(Hi))
    res = vsub(res, s.h.bracket(Hi, Hj))
    return res


def check_crossed_hom(s: Setup) -> list[Finding]:
    findings = []
    for i, j in itertools.combinations(range(s.g.dim), 2):
        res = crossed_hom_residual(s, i, j)
        if not is_zero_vector(res):
            findings.append(
                Finding("crossed-hom", (s.g.basis_names[i], s.g.basis_names[j]), res)
            )
    return findings


def induced_action(s: Setup) -> LieAction:
    """rho_H(x)u = rho(x)u + [Hx, u]; requires H to be a crossed homomorphism."""
    bad = check_crossed_hom(s)
    if bad:
        raise NotCrossedHom("; ".join(str(f) for f in bad))
    return _induced_action_unchecked(s)


def _induced_action_unchecked(s: Setup) -> LieAction:
    mats = tuple(
        s.rho.matrices[i] + s.h.ad(s.H.column(i)) for i in range(s.g.dim)
    )
    return LieAction(s.g, s.h, mats)


def _merged_names(g: FinLieAlgebra, h: FinLieAlgebra) -> tuple[str, ...]:
    if set(g.basis_names) & set(h.basis_names):
        return tuple(f"g.{n}" for n in g.basis_names) + tuple(f"h.{n}" for n in h.basis_names)
    return g.basis_names + h.basis_names


def semidirect(g: FinLieAlgebra, h: FinLieAlgebra, rho: LieAction) -> FinLieAlgebra:
    """g x h with [(x,u),(y,v)] = ([x,y], rho(x)v - rho(y)u + [u,v])."""
    bad = check_action(rho)
    if bad:
        raise NotAction("; ".join(str(f) for f in bad))
    dg, dh = g.dim, h.dim
    names = _merged_names(g, h)
    structure: dict[tuple[int, int], Vector] = {}

    def put(i: int, j: int, gpart: Vector, hpart: Vector):
        full = tuple(gpart) + tuple(hpart)
        if not is_zero_vector(full):
            structure[(i, j)] = full

    for i, j in itertools.combinations(range(dg), 2):
        put(i, j, g.bracket_basis(i, j), vzero(dh))
    for i in range(dg):
        for u in range(dh):
            put(i, dg + u, vzero(dg), rho.matrices[i].col(u))
    for u, v in itertools.combinations(range(dh), 2):
        put(dg + u, dg + v, vzero(dg), h.bracket_basis(u, v))
    return FinLieAlgebra(names, structure)


def _formal_semidirect_bracket(
    g: FinLieAlgebra,
    h: FinLieAlgebra,
    matrices: Sequence[Matrix],
    a: tuple[Vector, Vector],
    b: tuple[Vector, Vector],
) -> tuple[Vector, Vector]:
    """Semidirect-product bracket formula; the matrices need not be an action."""
    xg, xh = a
    yg, yh = b

    def act(gvec: Vector, hvec: Vector) -> Vector:
        out = vzero(h.dim)
        for i, c in enumerate(gvec):
            if c:
                out = vadd(out, vscale(c, matrices[i].apply(hvec)))
        return out

    zg = g.bracket(xg, yg)
    zh = vadd(vsub(act(xg, yh), act(yg, xh)), h.bracket(xh, yh))
    return zg, zh


def twist_iso_check(s: Setup) -> bool:
    """Whether (x,u) |-> (x, Hx+u) is a homomorphism between semidirect brackets.

    The source carries the bracket built from rho_H (formed unconditionally
    from its defining formula), the target the one built from rho.  The
    result must coincide with emptiness of check_crossed_hom; both are
    computed and compared, and disagreement raises RuntimeError since it
    would mean an internal formula error.
    """
    g, h = s.g, s.h
    rho_h_mats = _induced_action_unchecked(s).matrices

    def hat(p: tuple[Vector, Vector]) -> tuple[Vector, Vector]:
        return p[0], vadd(s.H.apply(p[0]), p[1])

    basis: list[tuple[Vector, Vector]] = [
        (g.basis_vector(i), vzero(h.dim)) for i in range(g.dim)
    ] + [(vzero(g.dim), h.basis_vector(u)) for u in range(h.dim)]

    holds = True
    for a, b in itertools.combinations(basis, 2):
        lhs = hat(_formal_semidirect_bracket(g, h, rho_h_mats, a, b))
        rhs = _formal_semidirect_bracket(g, h, s.rho.matrices, hat(a), hat(b))
        if lhs != rhs:
            holds = False
            break
    expected = not check_crossed_hom(s)
    if holds != expected:
        raise RuntimeError(
            "twist map check disagrees with the crossed-homomorphism check; "
            "this indicates an internal error"
        )
    return holds


def iota_graph_is_homomorphism(s: Setup) -> bool:
    """Whether x |-> (x, Hx) lands homomorphically in the rho-semidirect product."""
    g, h = s.g, s.h
    for i, j in itertools.combinations(range(g.dim), 2):
        xi = (g.basis_vector(i), s.H.column(i))
        xj = (g.basis_vector(j), s.H.column(j))
        zg, zh = _formal_semidirect_bracket(g, h, s.rho.matrices, xi, xj)
        if (zg, zh) != (g.bracket_basis(i, j), s.H.apply(g.bracket_basis(i, j))):
            return False
    return True


def solve_crossed_homs_grid(
    g: FinLieAlgebra,
    h: FinLieAlgebra,
    rho: LieAction,
    grid: Sequence,
    max_candidates: int = 10**7,
) -> list[CrossedHom]:
    """Exhaustively enumerate H with entries in grid; keep the crossed homs.

    Candidates are produced in row-major digit order over the grid as given,
    so the output order is deterministic.
    """
    entries = [rational(x) for x in grid]
    cells = h.dim * g.dim
    total = len(entries) ** cells if cells else 1
    if total > max_candidates:
        raise SearchSpaceTooLarge(f"{total} candidates exceed the {max_candidates} guard")
    solutions = []
    for combo in itertools.product(entries, repeat=cells):
        H = CrossedHom(Matrix(h.dim, g.dim, combo))
        s = Setup(g, h, rho, H)
        if not check_crossed_hom(s):
            solutions.append(H)
    return solutions


def is_lie_homomorphism(src: FinLieAlgebra, dst: FinLieAlgebra, phi: Matrix) -> list[Finding]:
    """phi[x,y] = [phi x, phi y] on basis pairs."""
    findings = []
    if (phi.rows, phi.cols) != (dst.dim, src.dim):
        raise DimensionMismatch(f"map is {phi.rows}x{phi.cols}, expected {dst.dim}x{src.dim}")
    for i, j in itertools.combinations(range(src.dim), 2):
        lhs = phi.apply(src.bracket_basis(i, j))
        rhs = dst.bracket(phi.col(i), phi.col(j))
        diff = vsub(lhs, rhs)
        if not is_zero_vector(diff):
            findings.append(
                Finding("lie-hom", (src.basis_names[i], src.basis_names[j]), diff)
            )
    return findings


def check_hom_pair(
    rho: LieAction,
    H: CrossedHom,
    H_prime: CrossedHom,
    phi_g: Matrix,
    phi_h: Matrix,
) -> list[Finding]:
    """Morphism-of-crossed-homomorphisms conditions for (phi_g, phi_h): H' -> H.

    Requires phi_g, phi_h to be Lie algebra endomorphisms together with
       H o phi_g = phi_h o H'      and
       phi_h(rho(x)u) = rho(phi_g x)(phi_h u).
    """
    g, h = rho.source, rho.target
    findings = []
    findings.extend(is_lie_homomorphism(g, g, phi_g))
    findings.extend(is_lie_homomorphism(h, h, phi_h))
    lhs = H.matrix * phi_g
    rhs = phi_h * H_prime.matrix
    diff = lhs - rhs
    if not diff.is_zero():
        findings.append(Finding("intertwine-H", ("H∘phi_g", "phi_h∘H'"), diff))
    for i in range(g.dim):
        lhs_m = phi_h * rho.matrices[i]
        rhs_m = rho.of(phi_g.col(i)) * phi_h
        diff_m = lhs_m - rhs_m
        if not diff_m.is_zero():
            findings.append(Finding("intertwine-action", (g.basis_names[i],), diff_m))
    return findings
