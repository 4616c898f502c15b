"""Graded Lie algebra on alternating cochains, crossed-homomorphism cohomology,
and linear deformation checks.

Cochains of degree k are alternating maps from k-fold products of g to h,
stored on strictly increasing basis index tuples; evaluation at a permuted
tuple picks up the permutation sign and repeated indices give zero.

Two differentials are implemented independently and tied together by the sign
relation d_rho_H f = (-1)^(k-1) (d f + [[H, f]]):

  * the degree-raising map d built from the action alone, with signs
    (-1)^(m+i) on the action terms and (-1)^(m+i+j-1) on bracket insertion;
  * the coboundary d_rho_H of the twisted action rho_H, with the classical
    (-1)^(i+1) / (-1)^(i+j) signs and the extra [Hx_i, .] middle terms.

The skew bracket [[f1, f2]] carries the global sign (-1)^(mn+1) over all
(m, n)-shuffles.  A linear map H is a crossed homomorphism exactly when
d H + (1/2)[[H, H]] vanishes, and the residual of that expression at (x, y)
is the negative of the pairwise crossed-homomorphism residual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, NotCrossedHom, NotNijenhuis, SearchSpaceTooLarge
from .liealg import (
    FinLieAlgebra,
    LieAction,
    Setup,
    check_crossed_hom,
)
from .linalg import (
    Matrix,
    Vector,
    is_zero_vector,
    rational,
    vadd,
    vscale,
    vsub,
    vzero,
)
from .report import Finding

ZERO = Fraction(0)


@dataclass(frozen=True)
class Cochain:
    degree: int
    g_dim: int
    h_dim: int
    values: Mapping[tuple[int, ...], Vector]

    def __post_init__(self):
        for key, v in self.values.items():
            if len(key) != self.degree or any(
                not 0 <= t < self.g_dim for t in key
            ):
                raise DimensionMismatch(f"bad index tuple {key} for degree {self.degree}")
            if list(key) != sorted(set(key)):
                raise DimensionMismatch(f"index tuple {key} is not strictly increasing")
            if len(v) != self.h_dim:
                raise DimensionMismatch("cochain value has the wrong length")

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.values.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        if (self.degree, self.g_dim, self.h_dim) != (other.degree, other.g_dim, other.h_dim):
            return False
        keys = set(self.values) | set(other.values)
        z = vzero(self.h_dim)
        return all(
            self.values.get(k, z) == other.values.get(k, z) for k in keys
        )


def zero_cochain(degree: int, g_dim: int, h_dim: int) -> Cochain:
    return Cochain(degree, g_dim, h_dim, {})


def cochain_from_matrix(H: Matrix) -> Cochain:
    """Reinterpret a linear map h-dim x g-dim as a degree-1 cochain."""
    values = {}
    for i in range(H.cols):
        col = H.col(i)
        if not is_zero_vector(col):
            values[(i,)] = col
    return Cochain(1, H.cols, H.rows, values)


def cochain_to_matrix(f: Cochain) -> Matrix:
    if f.degree != 1:
        raise DimensionMismatch("only degree-1 cochains correspond to matrices")
    cols = [f.values.get((i,), vzero(f.h_dim)) for i in range(f.g_dim)]
    return Matrix.from_columns(cols)


def cochain_add(a: Cochain, b: Cochain) -> Cochain:
    if (a.degree, a.g_dim, a.h_dim) != (b.degree, b.g_dim, b.h_dim):
        raise DimensionMismatch("cochain shapes differ")
    values = dict(a.values)
    for k, v in b.values.items():
        w = vadd(values.get(k, vzero(a.h_dim)), v)
        if is_zero_vector(w):
            values.pop(k, None)
        else:
            values[k] = w
    return Cochain(a.degree, a.g_dim, a.h_dim, values)


def cochain_scale(c, a: Cochain) -> Cochain:
    c = rational(c)
    if not c:
        return zero_cochain(a.degree, a.g_dim, a.h_dim)
    return Cochain(a.degree, a.g_dim, a.h_dim, {k: vscale(c, v) for k, v in a.values.items()})


def _sort_with_sign(idx: Sequence[int]) -> tuple[tuple[int, ...], int] | None:
    """Sorted tuple and permutation sign; None when an index repeats."""
    arr = list(idx)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(arr, arr[1:]):
        if a == b:
            return None
    return tuple(arr), sign


def eval_basis(f: Cochain, idx: Sequence[int]) -> Vector:
    """Value at basis vectors e_{idx[0]}, ..., with alternation built in."""
    if f.degree == 0:
        return f.values.get((), vzero(f.h_dim))
    res = _sort_with_sign(idx)
    if res is None:
        return vzero(f.h_dim)
    key, sign = res
    v = f.values.get(key)
    if v is None:
        return vzero(f.h_dim)
    return v if sign == 1 else vscale(Fraction(-1), v)


def _det(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = ZERO
    for c in range(n):
        a = rows[0][c]
        if not a:
            continue
        minor = [r[:c] + r[c + 1 :] for r in rows[1:]]
        term = a * _det(minor)
        total += term if c % 2 == 0 else -term
    return total


def eval_vectors(f: Cochain, vecs: Sequence[Vector]) -> Vector:
    """Full multilinear alternating evaluation at arbitrary vectors."""
    if len(vecs) != f.degree:
        raise DimensionMismatch("argument count differs from the cochain degree")
    if f.degree == 0:
        return f.values.get((), vzero(f.h_dim))
    out = vzero(f.h_dim)
    for key, value in f.values.items():
        coeff = _det([[v[t] for t in key] for v in vecs])
        if coeff:
            out = vadd(out, vscale(coeff, value))
    return out


def plain_differential(rho: LieAction, f: Cochain) -> Cochain:
    """Degree-raising differential built from the action alone."""
    g, h = rho.source, rho.target
    if (f.g_dim, f.h_dim) != (g.dim, h.dim):
        raise DimensionMismatch("cochain does not match the action's algebras")
    m = f.degree
    values = {}
    for S in itertools.combinations(range(g.dim), m + 1):
        total = vzero(h.dim)
        for pos in range(m + 1):
            rest = S[:pos] + S[pos + 1 :]
            v = eval_basis(f, rest)
            if not is_zero_vector(v):
                term = rho.matrices[S[pos]].apply(v)
                total = vadd(total, term) if (m + pos + 1) % 2 == 0 else vsub(total, term)
        for pi, pj in itertools.combinations(range(m + 1), 2):
            w = g.bracket_basis(S[pi], S[pj])
            if is_zero_vector(w):
                continue
            rest = tuple(S[t] for t in range(m + 1) if t not in (pi, pj))
            term = vzero(h.dim)
            for t, c in enumerate(w):
                if c:
                    term = vadd(term, vscale(c, eval_basis(f, (t,) + rest)))
            # sign (-1)^(m + i + j - 1) with 1-based i = pi+1, j = pj+1
            total = (
                vadd(total, term) if (m + pi + pj + 1) % 2 == 0 else vsub(total, term)
            )
        if not is_zero_vector(total):
            values[S] = total
    return Cochain(m + 1, g.dim, h.dim, values)


def _shuffle_sign(positions: Sequence[int], complement: Sequence[int]) -> int:
    inv = 0
    for a in positions:
        for b in complement:
            if b < a:
                inv += 1
    return -1 if inv % 2 else 1


def derived_bracket(h: FinLieAlgebra, f1: Cochain, f2: Cochain) -> Cochain:
    """Skew bracket with sign (-1)^(mn+1) over all (m, n)-shuffles."""
    if f1.g_dim != f2.g_dim or f1.h_dim != f2.h_dim:
        raise DimensionMismatch("cochains live over different ambients")
    if f1.h_dim != h.dim:
        raise DimensionMismatch("cochain values do not live in the given algebra")
    m, n = f1.degree, f2.degree
    g_dim = f1.g_dim
    global_sign = -1 if (m * n + 1) % 2 else 1
    values = {}
    for S in itertools.combinations(range(g_dim), m + n):
        total = vzero(h.dim)
        for positions in itertools.combinations(range(m + n), m):
            complement = tuple(t for t in range(m + n) if t not in positions)
            sgn = _shuffle_sign(positions, complement)
            v1 = eval_basis(f1, tuple(S[t] for t in positions))
            if is_zero_vector(v1):
                continue
            v2 = eval_basis(f2, tuple(S[t] for t in complement))
            if is_zero_vector(v2):
                continue
            term = h.bracket(v1, v2)
            total = vadd(total, term) if sgn == 1 else vsub(total, term)
        if global_sign == -1:
            total = vscale(Fraction(-1), total)
        if not is_zero_vector(total):
            values[S] = total
    return Cochain(m + n, g_dim, h.dim, values)


def mc_residual(s: Setup) -> Cochain:
    """d H + (1/2)[[H, H]]; vanishes exactly when H is a crossed homomorphism."""
    Hc = cochain_from_matrix(s.H.matrix)
    dH = plain_differential(s.rho, Hc)
    br = derived_bracket(s.h, Hc, Hc)
    return cochain_add(dH, cochain_scale(Fraction(1, 2), br))


def _require_crossed_hom(s: Setup):
    bad = check_crossed_hom(s)
    if bad:
        raise NotCrossedHom("; ".join(str(f) for f in bad))


def _ce_differential_unchecked(s: Setup, f: Cochain) -> Cochain:
    g, h = s.g, s.h
    k = f.degree
    values = {}
    for S in itertools.combinations(range(g.dim), k + 1):
        total = vzero(h.dim)
        for pos in range(k + 1):
            rest = S[:pos] + S[pos + 1 :]
            v = eval_basis(f, rest)
            if not is_zero_vector(v):
                term = vadd(
                    s.rho.matrices[S[pos]].apply(v),
                    h.bracket(s.H.column(S[pos]), v),
                )
                total = vadd(total, term) if pos % 2 == 0 else vsub(total, term)
        for pi, pj in itertools.combinations(range(k + 1), 2):
            w = g.bracket_basis(S[pi], S[pj])
            if is_zero_vector(w):
                continue
            rest = tuple(S[t] for t in range(k + 1) if t not in (pi, pj))
            term = vzero(h.dim)
            for t, c in enumerate(w):
                if c:
                    term = vadd(term, vscale(c, eval_basis(f, (t,) + rest)))
            # sign (-1)^(i+j) with 1-based positions
            total = vadd(total, term) if (pi + pj) % 2 == 0 else vsub(total, term)
        if not is_zero_vector(total):
            values[S] = total
    return Cochain(k + 1, g.dim, h.dim, values)


def ce_differential(s: Setup, f: Cochain) -> Cochain:
    """Coboundary of the twisted action rho_H; requires a certified H."""
    if (f.g_dim, f.h_dim) != (s.g.dim, s.h.dim):
        raise DimensionMismatch("cochain does not match the setup")
    _require_crossed_hom(s)
    return _ce_differential_unchecked(s, f)


def sign_relation_check(s: Setup, f: Cochain) -> bool:
    """d_rho_H f == (-1)^(k-1) (d f + [[H, f]]), evaluated exactly."""
    _require_crossed_hom(s)
    lhs = _ce_differential_unchecked(s, f)
    Hc = cochain_from_matrix(s.H.matrix)
    rhs = cochain_add(plain_differential(s.rho, f), derived_bracket(s.h, Hc, f))
    if (f.degree - 1) % 2:
        rhs = cochain_scale(Fraction(-1), rhs)
    return lhs == rhs


@dataclass(frozen=True)
class DegreeDims:
    k: int
    dim_C: int
    dim_Z: int
    dim_B: int
    dim_H: int


@dataclass(frozen=True)
class CohomologyReport:
    degrees: tuple[DegreeDims, ...]

    def dims_H(self) -> list[int]:
        return [d.dim_H for d in self.degrees]

    def to_json(self) -> dict:
        return {
            "degrees": [
                {
                    "k": d.k,
                    "dim_C": d.dim_C,
                    "dim_Z": d.dim_Z,
                    "dim_B": d.dim_B,
                    "dim_H": d.dim_H,
                }
                for d in self.degrees
            ]
        }


def differential_matrix(s: Setup, k: int) -> Matrix:
    """Matrix of the degree-k coboundary on the lexicographic tuple basis.

    Columns are indexed by (tuple, h-basis) pairs with the tuple position
    major; rows likewise one degree up.
    """
    g_dim, h_dim = s.g.dim, s.h.dim
    dom = list(itertools.combinations(range(g_dim), k))
    cod = list(itertools.combinations(range(g_dim), k + 1))
    cod_index = {T: p for p, T in enumerate(cod)}
    rows = len(cod) * h_dim
    cols = len(dom) * h_dim
    data = [ZERO] * (rows * cols)
    for tpos, T in enumerate(dom):
        for u in range(h_dim):
            f = Cochain(k, g_dim, h_dim, {T: tuple(Fraction(1 if w == u else 0) for w in range(h_dim))})
            df = _ce_differential_unchecked(s, f)
            col = tpos * h_dim + u
            for S, v in df.values.items():
                base = cod_index[S] * h_dim
                for w, c in enumerate(v):
                    if c:
                        data[(base + w) * cols + col] = c
    return Matrix(rows, cols, tuple(data))


def cohomology_dims(s: Setup, k_max: int) -> CohomologyReport:
    """Exact cocycle/coboundary/cohomology dimensions for degrees 0..k_max.

    Coboundaries in degree 0 are taken to be zero, so dim H^0 counts the
    invariants of the twisted action.
    """
    from .linalg import rank as _rank

    _require_crossed_hom(s)
    g_dim, h_dim = s.g.dim, s.h.dim

    def dim_C(k: int) -> int:
        from math import comb

        return comb(g_dim, k) * h_dim

    ranks = {}
    for k in range(k_max + 1):
        ranks[k] = _rank(differential_matrix(s, k))
    degrees = []
    for k in range(k_max + 1):
        c = dim_C(k)
        z = c - ranks[k]
        b = ranks[k - 1] if k > 0 else 0
        degrees.append(DegreeDims(k, c, z, b, z - b))
    return CohomologyReport(tuple(degrees))


def cochain_map_phi(phi_g: Matrix, phi_h: Matrix, f: Cochain) -> Cochain:
    """Transport f along (phi_g, phi_h): f |-> phi_h o f o (phi_g^{-1})^(x k)."""
    from .linalg import invert

    if (phi_g.rows, phi_g.cols) != (f.g_dim, f.g_dim):
        raise DimensionMismatch("phi_g must be a square matrix on g")
    if (phi_h.rows, phi_h.cols) != (f.h_dim, f.h_dim):
        raise DimensionMismatch("phi_h must be a square matrix on h")
    inv = invert(phi_g)
    k = f.degree
    if k == 0:
        v = f.values.get((), vzero(f.h_dim))
        w = phi_h.apply(v)
        return Cochain(0, f.g_dim, f.h_dim, {(): w} if not is_zero_vector(w) else {})
    values = {}
    for T in itertools.combinations(range(f.g_dim), k):
        args = [inv.col(t) for t in T]
        v = eval_vectors(f, args)
        w = phi_h.apply(v)
        if not is_zero_vector(w):
            values[T] = w
    return Cochain(k, f.g_dim, f.h_dim, values)


# ---------------------------------------------------------------------------
# linear deformations and Nijenhuis elements


def check_linear_deformation(s: Setup, frkH: Matrix) -> list[Finding]:
    """Whether H + t*frkH stays a crossed homomorphism for every t.

    Requires frkH to be a 1-cocycle of the twisted coboundary and the images
    frkH(x), frkH(y) to commute in h, checked on basis pairs.
    """
    _require_crossed_hom(s)
    if (frkH.rows, frkH.cols) != (s.h.dim, s.g.dim):
        raise DimensionMismatch("deformation direction has the wrong shape")
    findings = []
    d = _ce_differential_unchecked(s, cochain_from_matrix(frkH))
    for S, v in sorted(d.values.items()):
        findings.append(
            Finding(
                "deformation-cocycle",
                tuple(s.g.basis_names[t] for t in S),
                v,
            )
        )
    for i, j in itertools.combinations(range(s.g.dim), 2):
        w = s.h.bracket(frkH.col(i), frkH.col(j))
        if not is_zero_vector(w):
            findings.append(
                Finding(
                    "deformation-commute",
                    (s.g.basis_names[i], s.g.basis_names[j]),
                    w,
                )
            )
    return findings


def _nij1(s: Setup, x: Vector) -> list[Finding]:
    g = s.g
    out = []
    for j, k in itertools.combinations(range(g.dim), 2):
        res = g.bracket(g.bracket(x, g.basis_vector(j)), g.bracket(x, g.basis_vector(k)))
        if not is_zero_vector(res):
            out.append(Finding("Nij1", (g.basis_names[j], g.basis_names[k]), res))
    return out


def _nij2(s: Setup, rx: Matrix) -> list[Finding]:
    h = s.h
    out = []
    for u, v in itertools.combinations(range(h.dim), 2):
        res = h.bracket(rx.col(u), rx.col(v))
        if not is_zero_vector(res):
            out.append(Finding("Nij2", (h.basis_names[u], h.basis_names[v]), res))
    return out


def _nij3(s: Setup, x: Vector, rx: Matrix) -> list[Finding]:
    g = s.g
    out = []
    for j in range(g.dim):
        m = s.rho.of(g.bracket(x, g.basis_vector(j))) * rx
        if not m.is_zero():
            out.append(Finding("Nij3", (g.basis_names[j],), m))
    return out


def _nij4(s: Setup, x: Vector, rx: Matrix) -> list[Finding]:
    g, h = s.g, s.h
    Hx = s.H.apply(x)
    out = []
    for j in range(g.dim):
        inner = vadd(
            s.rho.matrices[j].apply(Hx),
            h.bracket(s.H.column(j), Hx),
        )
        res = rx.apply(inner)
        if not is_zero_vector(res):
            out.append(Finding("Nij4", (g.basis_names[j],), res))
    return out


def check_nijenhuis(s: Setup, x: Vector) -> list[Finding]:
    """The four Nijenhuis conditions at x, reported per failing basis site."""
    _require_crossed_hom(s)
    if len(x) != s.g.dim:
        raise DimensionMismatch("element has the wrong length for g")
    rx = s.rho.of(x)
    return _nij1(s, x) + _nij2(s, rx) + _nij3(s, x, rx) + _nij4(s, x, rx)


def nijenhuis_grid(s: Setup, grid: Sequence, max_candidates: int = 10**7) -> list[Vector]:
    """All coordinate tuples over the grid passing check_nijenhuis."""
    _require_crossed_hom(s)
    entries = [rational(v) for v in grid]
    total = len(entries) ** s.g.dim
    if total > max_candidates:
        raise SearchSpaceTooLarge(f"{total} candidates exceed the {max_candidates} guard")
    out = []
    for combo in itertools.product(entries, repeat=s.g.dim):
        if not check_nijenhuis(s, combo):
            out.append(combo)
    return out


def trivial_deformation_generator(s: Setup, x: Vector) -> Matrix:
    """Coboundary direction of -Hx: column i is -rho(e_i)(Hx) - [He_i, Hx].

    For a Nijenhuis x this generates a deformation that is trivial; the
    result always passes check_linear_deformation.
    """
    bad = check_nijenhuis(s, x)
    if bad:
        raise NotNijenhuis("; ".join(str(f) for f in bad))
    Hx = s.H.apply(x)
    cols = []
    for i in range(s.g.dim):
        v = vadd(
            s.rho.matrices[i].apply(Hx),
            s.h.bracket(s.H.column(i), Hx),
        )
        cols.append(vscale(Fraction(-1), v))
    return Matrix.from_columns(cols) if cols else Matrix.zero(s.h.dim, 0)


def check_deformation_equivalence(
    s: Setup, frkH1: Matrix, frkH2: Matrix, x: Vector
) -> list[Finding]:
    """Equivalence of H + t*frkH1 and H + t*frkH2 witnessed by x.

    Verifies the two derived identities (the difference is the coboundary of
    -Hx, and frkH1[x, y] = rho(x) frkH2(y)) together with the first three
    Nijenhuis constraints on the witness.
    """
    _require_crossed_hom(s)
    findings = []
    Hx = s.H.apply(x)
    cols = []
    for i in range(s.g.dim):
        v = vadd(s.rho.matrices[i].apply(Hx), s.h.bracket(s.H.column(i), Hx))
        cols.append(vscale(Fraction(-1), v))
    coboundary = Matrix.from_columns(cols)
    diff = (frkH2 - frkH1) - coboundary
    if not diff.is_zero():
        findings.append(Finding("deforiso-1", ("frkH2 - frkH1",), diff))
    rx = s.rho.of(x)
    for j in range(s.g.dim):
        lhs = frkH1.apply(s.g.bracket(x, s.g.basis_vector(j)))
        rhs = rx.apply(frkH2.col(j))
        d = vsub(lhs, rhs)
        if not is_zero_vector(d):
            findings.append(Finding("deforiso-2", (s.g.basis_names[j],), d))
    findings.extend(_nij1(s, x))
    findings.extend(_nij2(s, rx))
    findings.extend(_nij3(s, x, rx))
    return findings
