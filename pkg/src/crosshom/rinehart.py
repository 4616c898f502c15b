"""Lie-Rinehart algebras, Leibniz pairs, and the tensor module constructions.

A Lie-Rinehart algebra bundles a commutative algebra A, a Lie algebra L that
is also an A-module, and an anchor L -> Der(A) that is simultaneously a Lie
homomorphism and an A-module map, compatible through

    [x, a y] = a [x, y] + anchor(x)(a) y.

A Leibniz pair keeps only the Lie algebra and the homomorphism into Der(A).
Weak representations act by first-order operators whose symbol is the anchor;
admissible representations are the Leibniz-pair counterpart.

Given a crossed homomorphism H from L into gl_n (x) A, pulling the boxed-sum
action back along x |-> (x, Hx) turns a gl_n-representation V and a module M
into a new module on V (x) M.  The same recipe on the sparse side gives the
Shen-Larsson action of the vector-field algebra on V (x) A_n:

    (x^r d_i) . (v (x) x^s) = s_i v (x) x^{r+s} + sum_k r_k theta(E_ki) v (x) x^{r+s}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DimensionMismatch, InvalidPair, NotCrossedHom
from .liealg import CrossedHom, FinLieAlgebra, LieAction, Setup, check_crossed_hom, check_lie_algebra
from .linalg import Matrix, Vector, is_zero_vector, kron, rational
from .report import Finding
from .witt import (
    FinCommAlgebra,
    LaurentPoly,
    WittElem,
    Window,
    _add_term,
    _coeff_prefix,
    _exp_str,
    _merged,
    _render_terms,
    _scaled,
    check_comm_algebra,
    crossed_hom_pq,
    derivation_violations,
    gl_tensor_algebra,
    window_exponents,
    witt_bracket,
    witt_window_basis,
)

ZERO = Fraction(0)

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class AModuleStructure:
    """A-module on a dim_m space: one matrix per A-basis vector."""

    algebra: FinCommAlgebra
    dim_m: int
    action: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.action) != self.algebra.dim:
            raise DimensionMismatch(
                f"need {self.algebra.dim} action matrices, got {len(self.action)}"
            )
        for m in self.action:
            if (m.rows, m.cols) != (self.dim_m, self.dim_m):
                raise DimensionMismatch(
                    f"module action matrix is {m.rows}x{m.cols}, expected "
                    f"{self.dim_m}x{self.dim_m}"
                )

    def of(self, a: Vector) -> Matrix:
        out = Matrix.zero(self.dim_m, self.dim_m)
        for s, c in enumerate(a):
            if c:
                out = out + self.action[s].scale(c)
        return out


def regular_module(A: FinCommAlgebra) -> AModuleStructure:
    """A acting on itself by multiplication."""
    return AModuleStructure(
        A, A.dim, tuple(A.mult_matrix(A.basis_vector(s)) for s in range(A.dim))
    )


def check_a_module(mod: AModuleStructure) -> list[Finding]:
    """a(b m) = (ab) m on all ordered basis pairs; the unit acts as identity."""
    A = mod.algebra
    findings = []
    for s in range(A.dim):
        for t in range(A.dim):
            lhs = mod.action[s] * mod.action[t]
            rhs = mod.of(A.product_basis(s, t))
            diff = lhs - rhs
            if not diff.is_zero():
                findings.append(
                    Finding("module-assoc", (A.basis_names[s], A.basis_names[t]), diff)
                )
    if A.unit is not None:
        diff = mod.of(A.unit) - Matrix.identity(mod.dim_m)
        if not diff.is_zero():
            findings.append(Finding("module-unit", ("1",), diff))
    return findings


@dataclass(frozen=True)
class FirstOrderOp:
    """Pair (D, sigma): D on the module, sigma a derivation of A, compatible via
    D(a m) = a D(m) + sigma(a) m."""

    D: Matrix
    sigma: Matrix


def check_first_order_op(mod: AModuleStructure, op: FirstOrderOp) -> list[Finding]:
    A = mod.algebra
    findings = list(derivation_violations(A, op.sigma))
    for s in range(A.dim):
        lhs = op.D * mod.action[s]
        rhs = mod.action[s] * op.D + mod.of(op.sigma.col(s))
        diff = lhs - rhs
        if not diff.is_zero():
            findings.append(Finding("first-order", (A.basis_names[s],), diff))
    return findings


@dataclass(frozen=True)
class LieRinehart:
    """(A, L, bracket, anchor) with an A-module structure on L."""

    algebra: FinCommAlgebra
    lie: FinLieAlgebra
    a_action: tuple[Matrix, ...]
    anchor: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.a_action) != self.algebra.dim:
            raise DimensionMismatch("one A-action matrix per A-basis vector is required")
        for m in self.a_action:
            if (m.rows, m.cols) != (self.lie.dim, self.lie.dim):
                raise DimensionMismatch("A-action matrices must act on L")
        if len(self.anchor) != self.lie.dim:
            raise DimensionMismatch("one anchor matrix per L-basis vector is required")
        for m in self.anchor:
            if (m.rows, m.cols) != (self.algebra.dim, self.algebra.dim):
                raise DimensionMismatch("anchor matrices must act on A")

    def l_module(self) -> AModuleStructure:
        return AModuleStructure(self.algebra, self.lie.dim, self.a_action)

    def anchor_of(self, x: Vector) -> Matrix:
        out = Matrix.zero(self.algebra.dim, self.algebra.dim)
        for i, c in enumerate(x):
            if c:
                out = out + self.anchor[i].scale(c)
        return out


@dataclass(frozen=True)
class LeibnizPair:
    """(A, S, bracket, beta) with beta: S -> Der(A) a Lie homomorphism only."""

    algebra: FinCommAlgebra
    lie: FinLieAlgebra
    beta: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.beta) != self.lie.dim:
            raise DimensionMismatch("one beta matrix per S-basis vector is required")
        for m in self.beta:
            if (m.rows, m.cols) != (self.algebra.dim, self.algebra.dim):
                raise DimensionMismatch("beta matrices must act on A")

    def beta_of(self, x: Vector) -> Matrix:
        out = Matrix.zero(self.algebra.dim, self.algebra.dim)
        for i, c in enumerate(x):
            if c:
                out = out + self.beta[i].scale(c)
        return out


def underlying_pair(lr: LieRinehart) -> LeibnizPair:
    """Forget the A-module structure on L."""
    return LeibnizPair(lr.algebra, lr.lie, lr.anchor)


def _der_lie_hom_violations(
    lie: FinLieAlgebra, A: FinCommAlgebra, mats: Sequence[Matrix], rule: str
) -> list[Finding]:
    findings = []
    for i, j in itertools.combinations(range(lie.dim), 2):
        w = lie.bracket_basis(i, j)
        lhs = Matrix.zero(A.dim, A.dim)
        for t, c in enumerate(w):
            if c:
                lhs = lhs + mats[t].scale(c)
        rhs = mats[i] * mats[j] - mats[j] * mats[i]
        diff = lhs - rhs
        if not diff.is_zero():
            findings.append(Finding(rule, (lie.basis_names[i], lie.basis_names[j]), diff))
    return findings


def check_lie_rinehart(lr: LieRinehart) -> list[Finding]:
    """All defining axioms on basis tuples; empty report = valid."""
    A, L = lr.algebra, lr.lie
    findings = list(check_comm_algebra(A))
    findings.extend(check_lie_algebra(L))
    findings.extend(check_a_module(lr.l_module()))
    for i in range(L.dim):
        for f in derivation_violations(A, lr.anchor[i]):
            findings.append(Finding("anchor-derivation", (L.basis_names[i],) + f.site, f.residual))
    findings.extend(_der_lie_hom_violations(L, A, lr.anchor, "anchor-lie-hom"))
    # anchor(a x) = a anchor(x): A-module homomorphism into Der(A)
    for s in range(A.dim):
        for i in range(L.dim):
            w = lr.a_action[s].col(i)
            lhs = lr.anchor_of(w)
            rhs = A.mult_matrix(A.basis_vector(s)) * lr.anchor[i]
            diff = lhs - rhs
            if not diff.is_zero():
                findings.append(
                    Finding("anchor-a-linear", (A.basis_names[s], L.basis_names[i]), diff)
                )
    # Leibniz compatibility [x, a y] = a [x, y] + anchor(x)(a) y
    for i in range(L.dim):
        ei = L.basis_vector(i)
        for s in range(A.dim):
            for j in range(L.dim):
                ay = lr.a_action[s].col(j)
                lhs = L.bracket(ei, ay)
                rhs = lr.a_action[s].apply(L.bracket_basis(i, j))
                w = lr.anchor[i].col(s)
                for t, c in enumerate(w):
                    if c:
                        rhs = tuple(
                            p + c * q for p, q in zip(rhs, lr.a_action[t].col(j))
                        )
                diff = tuple(p - q for p, q in zip(lhs, rhs))
                if not is_zero_vector(diff):
                    findings.append(
                        Finding(
                            "leibniz",
                            (L.basis_names[i], A.basis_names[s], L.basis_names[j]),
                            diff,
                        )
                    )
    return findings


def check_leibniz_pair(p: LeibnizPair) -> list[Finding]:
    A, S = p.algebra, p.lie
    findings = list(check_comm_algebra(A))
    findings.extend(check_lie_algebra(S))
    for i in range(S.dim):
        for f in derivation_violations(A, p.beta[i]):
            findings.append(Finding("beta-derivation", (S.basis_names[i],) + f.site, f.residual))
    findings.extend(_der_lie_hom_violations(S, A, p.beta, "beta-lie-hom"))
    return findings


def _rep_violations(
    lie: FinLieAlgebra,
    mod: AModuleStructure,
    rho: Sequence[Matrix],
    ders: Sequence[Matrix],
    anchor_rule: str,
) -> list[Finding]:
    findings = []
    dim_m = mod.dim_m
    for m in rho:
        if (m.rows, m.cols) != (dim_m, dim_m):
            raise DimensionMismatch("representation matrices must act on the module")
    if len(rho) != lie.dim:
        raise DimensionMismatch("one representation matrix per Lie basis vector is required")
    for i, j in itertools.combinations(range(lie.dim), 2):
        w = lie.bracket_basis(i, j)
        lhs = Matrix.zero(dim_m, dim_m)
        for t, c in enumerate(w):
            if c:
                lhs = lhs + rho[t].scale(c)
        rhs = rho[i] * rho[j] - rho[j] * rho[i]
        diff = lhs - rhs
        if not diff.is_zero():
            findings.append(Finding("lie-hom", (lie.basis_names[i], lie.basis_names[j]), diff))
    A = mod.algebra
    for i in range(lie.dim):
        for s in range(A.dim):
            lhs = rho[i] * mod.action[s]
            rhs = mod.action[s] * rho[i] + mod.of(ders[i].col(s))
            diff = lhs - rhs
            if not diff.is_zero():
                findings.append(
                    Finding(anchor_rule, (lie.basis_names[i], A.basis_names[s]), diff)
                )
    return findings


def check_weak_rep(
    lr: LieRinehart,
    mod: AModuleStructure,
    rho: Sequence[Matrix],
    strict: bool = False,
) -> list[Finding]:
    """Weak representation axioms; with strict=True also A-linearity of rho."""
    findings = _rep_violations(lr.lie, mod, rho, lr.anchor, "first-order")
    if strict:
        A = lr.algebra
        for s in range(A.dim):
            for i in range(lr.lie.dim):
                w = lr.a_action[s].col(i)
                lhs = Matrix.zero(mod.dim_m, mod.dim_m)
                for t, c in enumerate(w):
                    if c:
                        lhs = lhs + rho[t].scale(c)
                rhs = mod.action[s] * rho[i]
                diff = lhs - rhs
                if not diff.is_zero():
                    findings.append(
                        Finding(
                            "a-linear",
                            (A.basis_names[s], lr.lie.basis_names[i]),
                            diff,
                        )
                    )
    return findings


def adjoint_weak_rep(lr: LieRinehart) -> tuple[AModuleStructure, tuple[Matrix, ...]]:
    """ad_x y = [x, y] on L itself, with symbol anchor(x)."""
    mats = tuple(lr.lie.ad(lr.lie.basis_vector(i)) for i in range(lr.lie.dim))
    return lr.l_module(), mats


def natural_rep(lr: LieRinehart) -> tuple[AModuleStructure, tuple[Matrix, ...]]:
    """(A; anchor): the module is A itself; this one is strict."""
    return regular_module(lr.algebra), lr.anchor


def check_admissible_rep(
    p: LeibnizPair, mod: AModuleStructure, rho: Sequence[Matrix]
) -> list[Finding]:
    """rho(x)(a m) = a rho(x) m + beta(x)(a) m plus the Lie homomorphism law."""
    return _rep_violations(p.lie, mod, rho, p.beta, "admissible-anchor")


def action_lie_rinehart(p: LeibnizPair) -> LieRinehart:
    """S (x) A with bracket [x(a), y(b)] = [x,y](ab) + y(a beta(x) b) - x(b beta(y) a)
    and anchor x(a) |-> a beta(x)."""
    bad = check_leibniz_pair(p)
    if bad:
        raise InvalidPair("; ".join(str(f) for f in bad))
    A, S = p.algebra, p.lie
    dimA, dimS = A.dim, S.dim
    dim = dimS * dimA

    def idx(i: int, s: int) -> int:
        return i * dimA + s

    names = tuple(
        f"{S.basis_names[i]}({A.basis_names[s]})"
        for i in range(dimS)
        for s in range(dimA)
    )

    def bracket_pair(i: int, s: int, j: int, t: int) -> tuple[Fraction, ...]:
        out = [ZERO] * dim
        w = S.bracket_basis(i, j)
        prod = A.product_basis(s, t)
        for k, ck in enumerate(w):
            if ck:
                for u, cu in enumerate(prod):
                    if cu:
                        out[idx(k, u)] += ck * cu
        w1 = A.multiply(A.basis_vector(s), p.beta[i].col(t))
        for u, cu in enumerate(w1):
            if cu:
                out[idx(j, u)] += cu
        w2 = A.multiply(A.basis_vector(t), p.beta[j].col(s))
        for u, cu in enumerate(w2):
            if cu:
                out[idx(i, u)] -= cu
        return tuple(out)

    structure = {}
    for pi in range(dim):
        i, s = divmod(pi, dimA)
        for qi in range(pi + 1, dim):
            j, t = divmod(qi, dimA)
            vec = bracket_pair(i, s, j, t)
            if not is_zero_vector(vec):
                structure[(pi, qi)] = vec
    lie = FinLieAlgebra(names, structure)

    a_action = []
    for r in range(dimA):
        data = [ZERO] * (dim * dim)
        for i in range(dimS):
            for s in range(dimA):
                prod = A.product_basis(r, s)
                for u, cu in enumerate(prod):
                    if cu:
                        data[idx(i, u) * dim + idx(i, s)] = cu
        a_action.append(Matrix(dim, dim, tuple(data)))

    anchor = []
    for pi in range(dim):
        i, s = divmod(pi, dimA)
        anchor.append(A.mult_matrix(A.basis_vector(s)) * p.beta[i])
    return LieRinehart(A, lie, tuple(a_action), tuple(anchor))


def extend_to_action_rep(
    p: LeibnizPair, mod: AModuleStructure, rho: Sequence[Matrix]
) -> tuple[Matrix, ...]:
    """Extension x (x) a |-> (a .) rho(x) of an admissible representation to S (x) A."""
    A = p.algebra
    out = []
    for pi in range(p.lie.dim * A.dim):
        i, s = divmod(pi, A.dim)
        out.append(mod.action[s] * rho[i])
    return tuple(out)


# ---------------------------------------------------------------------------
# gl_n representations and the finite tensor-module construction


@dataclass(frozen=True)
class GlnRep:
    """Representation of gl_n: one matrix theta(E_ij) per matrix unit."""

    n: int
    dim_v: int
    theta: Mapping[tuple[int, int], Matrix]

    def __post_init__(self):
        for i in range(self.n):
            for j in range(self.n):
                m = self.theta.get((i, j))
                if m is None:
                    raise DimensionMismatch(f"missing theta(E_{i + 1}{j + 1})")
                if (m.rows, m.cols) != (self.dim_v, self.dim_v):
                    raise DimensionMismatch("theta matrices must act on V")


def trivial_rep(n: int) -> GlnRep:
    return GlnRep(n, 1, {(i, j): Matrix.zero(1, 1) for i in range(n) for j in range(n)})


def natural_rep_gl(n: int) -> GlnRep:
    theta = {}
    for i in range(n):
        for j in range(n):
            data = [ZERO] * (n * n)
            data[i * n + j] = Fraction(1)
            theta[(i, j)] = Matrix(n, n, tuple(data))
    return GlnRep(n, n, theta)


def adjoint_rep_gl(n: int) -> GlnRep:
    """gl_n acting on itself; basis E_kl flattened as k*n + l."""
    dim = n * n
    theta = {}
    for i in range(n):
        for j in range(n):
            data = [ZERO] * (dim * dim)
            for k in range(n):
                for l in range(n):
                    col = k * n + l
                    if j == k:
                        data[(i * n + l) * dim + col] += Fraction(1)
                    if l == i:
                        data[(k * n + j) * dim + col] -= Fraction(1)
            theta[(i, j)] = Matrix(dim, dim, tuple(data))
    return GlnRep(n, dim, theta)


def tensor_rep(r1: GlnRep, r2: GlnRep) -> GlnRep:
    if r1.n != r2.n:
        raise DimensionMismatch("tensor factors must represent the same gl_n")
    i1, i2 = Matrix.identity(r1.dim_v), Matrix.identity(r2.dim_v)
    theta = {
        key: kron(r1.theta[key], i2) + kron(i1, r2.theta[key])
        for key in r1.theta
    }
    return GlnRep(r1.n, r1.dim_v * r2.dim_v, theta)


def check_gln_rep(rep: GlnRep) -> list[Finding]:
    """Commutator relations of the matrix units."""
    findings = []
    n = rep.n
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    lhs = rep.theta[(i, j)] * rep.theta[(k, l)] - rep.theta[(k, l)] * rep.theta[(i, j)]
                    rhs = Matrix.zero(rep.dim_v, rep.dim_v)
                    if j == k:
                        rhs = rhs + rep.theta[(i, l)]
                    if l == i:
                        rhs = rhs - rep.theta[(k, j)]
                    diff = lhs - rhs
                    if not diff.is_zero():
                        findings.append(
                            Finding(
                                "gl-relation",
                                (f"E{i + 1}{j + 1}", f"E{k + 1}{l + 1}"),
                                diff,
                            )
                        )
    return findings


def _carrier_parts(carrier) -> tuple[FinLieAlgebra, tuple[Matrix, ...], FinCommAlgebra]:
    if isinstance(carrier, LieRinehart):
        return carrier.lie, carrier.anchor, carrier.algebra
    if isinstance(carrier, LeibnizPair):
        return carrier.lie, carrier.beta, carrier.algebra
    raise TypeError("carrier must be a LieRinehart algebra or a LeibnizPair")


def certify_gl_tensor_crossed_hom(carrier, n: int, H: Matrix) -> Setup:
    """Certify H: L -> gl_n (x) A against the coefficientwise anchor action.

    Returns the finite Setup so the cohomology machinery can reuse it;
    raises NotCrossedHom when the identity fails.
    """
    lie, ders, A = _carrier_parts(carrier)
    h_alg = gl_tensor_algebra(n, A)
    if (H.rows, H.cols) != (h_alg.dim, lie.dim):
        raise DimensionMismatch(
            f"H is {H.rows}x{H.cols}, expected {h_alg.dim}x{lie.dim}"
        )
    blocks = tuple(kron(Matrix.identity(n * n), ders[i]) for i in range(lie.dim))
    setup = Setup(lie, h_alg, LieAction(lie, h_alg, blocks), CrossedHom(H))
    bad = check_crossed_hom(setup)
    if bad:
        raise NotCrossedHom("; ".join(str(f) for f in bad))
    return setup


def boxplus_pullback(
    carrier,
    theta: GlnRep,
    mod: AModuleStructure,
    rho: Sequence[Matrix],
    H: Matrix,
) -> tuple[tuple[Matrix, ...], AModuleStructure]:
    """Action on V (x) M pulled back along x |-> (x, Hx).

    Returns the matrices of each L-basis vector together with the A-module
    structure a(v (x) m) = v (x) am on the tensor space.
    """
    lie, _, A = _carrier_parts(carrier)
    certify_gl_tensor_crossed_hom(carrier, theta.n, H)
    dimA = A.dim
    n = theta.n
    iv = Matrix.identity(theta.dim_v)
    mats = []
    for x in range(lie.dim):
        m = kron(iv, rho[x])
        col = H.col(x)
        for flat, c in enumerate(col):
            if c:
                ij, s = divmod(flat, dimA)
                i, j = divmod(ij, n)
                m = m + kron(theta.theta[(i, j)], mod.action[s]).scale(c)
        mats.append(m)
    tensor_mod = AModuleStructure(
        A, theta.dim_v * mod.dim_m, tuple(kron(iv, mod.action[s]) for s in range(dimA))
    )
    return tuple(mats), tensor_mod


# ---------------------------------------------------------------------------
# sparse tensor modules V (x) A_n and the Shen-Larsson action


@dataclass(frozen=True)
class VTensorA:
    """Element of V (x) A_n: keys are (component index, exponent tuple)."""

    n: int
    dim_v: int
    terms: Mapping[tuple[int, MultiIndex], Fraction]

    @staticmethod
    def zero(n: int, dim_v: int) -> "VTensorA":
        return VTensorA(n, dim_v, {})

    @staticmethod
    def basis(n: int, dim_v: int, p: int, r: Sequence[int], coeff=1) -> "VTensorA":
        if not 0 <= p < dim_v:
            raise DimensionMismatch(f"component {p} outside 0..{dim_v - 1}")
        c = rational(coeff)
        r = tuple(int(e) for e in r)
        if len(r) != n:
            raise DimensionMismatch(f"exponent length {len(r)} != {n}")
        return VTensorA(n, dim_v, {(p, r): c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_same(self, other: "VTensorA"):
        if self.n != other.n or self.dim_v != other.dim_v:
            raise DimensionMismatch("tensor elements live in different spaces")

    def __add__(self, other: "VTensorA") -> "VTensorA":
        self._require_same(other)
        return VTensorA(self.n, self.dim_v, _merged(self.terms, other.terms, Fraction(1)))

    def __sub__(self, other: "VTensorA") -> "VTensorA":
        self._require_same(other)
        return VTensorA(self.n, self.dim_v, _merged(self.terms, other.terms, Fraction(-1)))

    def scale(self, c) -> "VTensorA":
        return VTensorA(self.n, self.dim_v, _scaled(self.terms, rational(c)))

    def poly_scale(self, a: LaurentPoly) -> "VTensorA":
        """Multiply the coefficient factor: a (v (x) x^s) = v (x) a x^s."""
        if a.n != self.n:
            raise DimensionMismatch("variable counts differ")
        out: dict[tuple[int, MultiIndex], Fraction] = {}
        for (p, s), ct in self.terms.items():
            for r, ca in a.terms.items():
                key = (p, tuple(u + w for u, w in zip(r, s)))
                _add_term(out, key, ct * ca)
        return VTensorA(self.n, self.dim_v, out)

    def sorted_terms(self) -> list[tuple[tuple[int, MultiIndex], Fraction]]:
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VTensorA)
            and (self.n, self.dim_v) == (other.n, other.dim_v)
            and dict(self.terms) == dict(other.terms)
        )

    def __str__(self) -> str:
        parts = []
        for (p, r), c in self.sorted_terms():
            parts.append(f"{_coeff_prefix(c)}v{p + 1} (x) {_exp_str(r)}")
        return _render_terms(parts)


ModuleElem = LaurentPoly | VTensorA
WindowedAction = Callable[[WittElem, ModuleElem], ModuleElem]


def module_scale(a: LaurentPoly, m: ModuleElem) -> ModuleElem:
    if isinstance(m, LaurentPoly):
        return a * m
    return m.poly_scale(a)


def shen_larsson_apply(theta: GlnRep, w: WittElem, t: VTensorA) -> VTensorA:
    """(x^r d_i) . (v (x) x^s) = s_i v (x) x^{r+s} + sum_k r_k theta(E_ki) v (x) x^{r+s}."""
    n = theta.n
    if w.n != n or t.n != n:
        raise DimensionMismatch("variable counts differ")
    if t.dim_v != theta.dim_v:
        raise DimensionMismatch("tensor component count differs from dim V")
    out: dict[tuple[int, MultiIndex], Fraction] = {}
    for (r, i), cw in w.terms.items():
        for (p, s), ct in t.terms.items():
            c = cw * ct
            key_exp = tuple(a + b for a, b in zip(r, s))
            if s[i]:
                _add_term(out, (p, key_exp), c * s[i])
            for k in range(n):
                if r[k]:
                    col = theta.theta[(k, i)].col(p)
                    for p2, e in enumerate(col):
                        if e:
                            _add_term(out, (p2, key_exp), c * r[k] * e)
    return VTensorA(n, theta.dim_v, out)


def shen_larsson_action(theta: GlnRep) -> WindowedAction:
    return lambda w, t: shen_larsson_apply(theta, w, t)


def natural_witt_action(w: WittElem, a: LaurentPoly) -> LaurentPoly:
    return w.apply(a)


def twisting_pq(
    p: Sequence[LaurentPoly], q, action: WindowedAction
) -> WindowedAction:
    """Add multiplication by the scalar twisting image to an existing action."""

    def twisted(w: WittElem, m: ModuleElem) -> ModuleElem:
        base = action(w, m)
        hw = crossed_hom_pq(p, q, w)
        if hw.is_zero():
            return base
        return base + module_scale(hw, m)

    return twisted


def vtensor_window_basis(theta: GlnRep, n: int, bound: int) -> list[VTensorA]:
    return [
        VTensorA.basis(n, theta.dim_v, p, r)
        for p in range(theta.dim_v)
        for r in window_exponents(n, bound)
    ]


def laurent_window_basis(n: int, bound: int) -> list[LaurentPoly]:
    return [LaurentPoly.monomial(n, r) for r in window_exponents(n, bound)]


def check_module_axiom_window(
    action: WindowedAction,
    n: int,
    window: Window,
    module_elems: Sequence[ModuleElem],
) -> list[Finding]:
    """[u, v].m = u.(v.m) - v.(u.m) on all windowed pairs and module elements."""
    findings = []
    actors = witt_window_basis(n, window.bound)
    for u, v in itertools.combinations(actors, 2):
        bw = witt_bracket(u, v)
        for m in module_elems:
            res = action(bw, m) - (action(u, action(v, m)) - action(v, action(u, m)))
            if not res.is_zero():
                findings.append(Finding("module-axiom", (str(u), str(v), str(m)), res))
    return findings


def check_weak_compat_window(
    action: WindowedAction,
    n: int,
    window: Window,
    module_elems: Sequence[ModuleElem],
) -> list[Finding]:
    """u.(a m) = a (u.m) + u(a) m for windowed monomials a; the sparse
    counterpart of the first-order-operator compatibility."""
    findings = []
    actors = witt_window_basis(n, window.bound)
    monomials = laurent_window_basis(n, window.bound)
    for u in actors:
        for a in monomials:
            ua = u.apply(a)
            for m in module_elems:
                lhs = action(u, module_scale(a, m))
                rhs = module_scale(a, action(u, m))
                if not ua.is_zero():
                    rhs = rhs + module_scale(ua, m)
                res = lhs - rhs
                if not res.is_zero():
                    findings.append(
                        Finding("weak-compat", (str(u), str(a), str(m)), res)
                    )
    return findings
