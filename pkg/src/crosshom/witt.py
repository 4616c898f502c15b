"""Sparse exact arithmetic for vector-field algebras over Laurent polynomials.

The ambient algebra is spanned by x^r d_i with r in Z^n and d_i = x_i @/@x_i,
with bracket

    [x^r d_i, x^s d_j] = s_i x^{r+s} d_j - r_j x^{r+s} d_i.

Everything is written in the d_i basis (including the Hamiltonian fields; in
that basis their bracket closes with coefficient sum(r_{n+i} s_i - s_{n+i} r_i)
and the quadratic coefficient matrices land in sp_{2n}).  A Window bounds
which basis elements get enumerated during verification; every individual
identity check is exact.

Dense finite-dimensional commutative algebras and their derivation-generated
Lie algebras (the generalized Witt construction) live here too, so the same
crossed-homomorphism checker from `liealg` can certify the canonical maps on
finite models.

Direction indices are 0-based in the Python API and rendered 1-based (d_1,
E_11, ...) in strings and JSON.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    MalformedP,
    NotCommuting,
    NotDerivation,
)
from .liealg import CrossedHom, FinLieAlgebra, LieAction, Setup
from .linalg import Matrix, Vector, is_zero_vector, rational, vector, vzero
from .report import Finding

MultiIndex = tuple[int, ...]

ZERO = Fraction(0)


def _add_term(terms: dict, key, coeff: Fraction):
    c = terms.get(key, ZERO) + coeff
    if c:
        terms[key] = c
    else:
        terms.pop(key, None)


def _scaled(terms: Mapping, c: Fraction) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in terms.items()}


def _merged(a: Mapping, b: Mapping, sb: Fraction) -> dict:
    out = dict(a)
    for k, v in b.items():
        _add_term(out, k, sb * v)
    return out


def _exp_str(r: MultiIndex) -> str:
    return "x^(" + ",".join(str(e) for e in r) + ")"


def _coeff_prefix(c: Fraction) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    return f"{c}*"


def _render_terms(parts: list[str]) -> str:
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Window:
    """Exponent bound B >= 1: the windowed set is all r with |r_k| <= B."""

    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise DimensionMismatch("window bound must be >= 1")


def window_exponents(n: int, bound: int) -> list[MultiIndex]:
    return list(itertools.product(range(-bound, bound + 1), repeat=n))


@dataclass(frozen=True)
class LaurentPoly:
    """Element of the Laurent polynomial algebra in n variables, sparse."""

    n: int
    terms: Mapping[MultiIndex, Fraction]

    @staticmethod
    def zero(n: int) -> "LaurentPoly":
        return LaurentPoly(n, {})

    @staticmethod
    def monomial(n: int, r: Sequence[int], coeff=1) -> "LaurentPoly":
        c = rational(coeff)
        r = tuple(int(e) for e in r)
        if len(r) != n:
            raise DimensionMismatch(f"exponent length {len(r)} != {n}")
        return LaurentPoly(n, {r: c} if c else {})

    @staticmethod
    def one(n: int) -> "LaurentPoly":
        return LaurentPoly.monomial(n, (0,) * n)

    def is_zero(self) -> bool:
        return not self.terms

    def _require_same(self, other: "LaurentPoly"):
        if self.n != other.n:
            raise DimensionMismatch(f"polynomials in {self.n} and {other.n} variables")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_same(other)
        return LaurentPoly(self.n, _merged(self.terms, other.terms, Fraction(1)))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_same(other)
        return LaurentPoly(self.n, _merged(self.terms, other.terms, Fraction(-1)))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.n, _scaled(self.terms, Fraction(-1)))

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.n, _scaled(self.terms, rational(c)))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._require_same(other)
        out: dict[MultiIndex, Fraction] = {}
        for r, cr in self.terms.items():
            for s, cs in other.terms.items():
                key = tuple(a + b for a, b in zip(r, s))
                _add_term(out, key, cr * cs)
        return LaurentPoly(self.n, out)

    def supported_only_on(self, var: int) -> bool:
        return all(
            all(e == 0 for k, e in enumerate(r) if k != var) for r in self.terms
        )

    def sorted_terms(self) -> list[tuple[MultiIndex, Fraction]]:
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.n == other.n
            and dict(self.terms) == dict(other.terms)
        )

    def __str__(self) -> str:
        parts = []
        for r, c in self.sorted_terms():
            if all(e == 0 for e in r):
                parts.append(str(c))
            else:
                parts.append(f"{_coeff_prefix(c)}{_exp_str(r)}")
        return _render_terms(parts)


@dataclass(frozen=True)
class WittElem:
    """Sparse element sum c_{r,i} x^r d_i; keys are (exponent tuple, direction)."""

    n: int
    terms: Mapping[tuple[MultiIndex, int], Fraction]

    @staticmethod
    def zero(n: int) -> "WittElem":
        return WittElem(n, {})

    @staticmethod
    def basis(n: int, r: Sequence[int], i: int, coeff=1) -> "WittElem":
        if not 0 <= i < n:
            raise IndexOutOfRange(f"direction {i} outside 0..{n - 1}")
        r = tuple(int(e) for e in r)
        if len(r) != n:
            raise DimensionMismatch(f"exponent length {len(r)} != {n}")
        c = rational(coeff)
        return WittElem(n, {(r, i): c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_same(self, other: "WittElem"):
        if self.n != other.n:
            raise DimensionMismatch(f"elements of W_{self.n} and W_{other.n}")

    def __add__(self, other: "WittElem") -> "WittElem":
        self._require_same(other)
        return WittElem(self.n, _merged(self.terms, other.terms, Fraction(1)))

    def __sub__(self, other: "WittElem") -> "WittElem":
        self._require_same(other)
        return WittElem(self.n, _merged(self.terms, other.terms, Fraction(-1)))

    def __neg__(self) -> "WittElem":
        return WittElem(self.n, _scaled(self.terms, Fraction(-1)))

    def scale(self, c) -> "WittElem":
        return WittElem(self.n, _scaled(self.terms, rational(c)))

    def apply(self, a: LaurentPoly) -> LaurentPoly:
        """Natural action on Laurent polynomials: (x^r d_i)(x^s) = s_i x^{r+s}."""
        if a.n != self.n:
            raise DimensionMismatch("variable counts differ")
        out: dict[MultiIndex, Fraction] = {}
        for (r, i), cw in self.terms.items():
            for s, ca in a.terms.items():
                if s[i]:
                    key = tuple(p + q for p, q in zip(r, s))
                    _add_term(out, key, cw * ca * s[i])
        return LaurentPoly(self.n, out)

    def sorted_terms(self) -> list[tuple[tuple[MultiIndex, int], Fraction]]:
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittElem)
            and self.n == other.n
            and dict(self.terms) == dict(other.terms)
        )

    def __str__(self) -> str:
        parts = []
        for (r, i), c in self.sorted_terms():
            mono = "" if all(e == 0 for e in r) else f"{_exp_str(r)} "
            parts.append(f"{_coeff_prefix(c)}{mono}d_{i + 1}")
        return _render_terms(parts)


def witt_bracket(a: WittElem, b: WittElem) -> WittElem:
    """[x^r d_i, x^s d_j] = s_i x^{r+s} d_j - r_j x^{r+s} d_i, extended bilinearly."""
    a._require_same(b)
    out: dict[tuple[MultiIndex, int], Fraction] = {}
    for (r, i), ca in a.terms.items():
        for (s, j), cb in b.terms.items():
            c = ca * cb
            key_exp = tuple(p + q for p, q in zip(r, s))
            if s[i]:
                _add_term(out, (key_exp, j), c * s[i])
            if r[j]:
                _add_term(out, (key_exp, i), -c * r[j])
    return WittElem(a.n, out)


def divergence(w: WittElem) -> LaurentPoly:
    """Linear extension of x^r d_i |-> r_i x^r."""
    out: dict[MultiIndex, Fraction] = {}
    for (r, i), c in w.terms.items():
        if r[i]:
            _add_term(out, r, c * r[i])
    return LaurentPoly(w.n, out)


def s_generator(n: int, i: int, j: int, r: Sequence[int]) -> WittElem:
    """Divergence-free generator r_j x^r d_i - r_i x^r d_j."""
    if not (0 <= i < n and 0 <= j < n):
        raise IndexOutOfRange(f"directions ({i}, {j}) outside 0..{n - 1}")
    r = tuple(int(e) for e in r)
    if len(r) != n:
        raise DimensionMismatch(f"exponent length {len(r)} != {n}")
    out = WittElem.basis(n, r, i, r[j])
    return out - WittElem.basis(n, r, j, r[i])


def hamiltonian_field(n: int, r: Sequence[int]) -> WittElem:
    """h(r) = sum_i (r_{n+i} x^r d_i - r_i x^r d_{n+i}) as an element of W_{2n}."""
    r = tuple(int(e) for e in r)
    if len(r) != 2 * n:
        raise DimensionMismatch(f"exponent length {len(r)} != {2 * n}")
    out = WittElem.zero(2 * n)
    for i in range(n):
        out = out + WittElem.basis(2 * n, r, i, r[n + i])
        out = out - WittElem.basis(2 * n, r, n + i, r[i])
    return out


def hamiltonian_bracket_coefficient(n: int, r: Sequence[int], s: Sequence[int]) -> Fraction:
    """Structure coefficient sum_i (r_{n+i} s_i - s_{n+i} r_i) of [h(r), h(s)]."""
    return Fraction(sum(r[n + i] * s[i] - s[n + i] * r[i] for i in range(n)))


@dataclass(frozen=True)
class GlLaurent:
    """Element of gl_n tensor Laurent polynomials; keys are (row, col, exponent)."""

    n: int
    terms: Mapping[tuple[int, int, MultiIndex], Fraction]

    @staticmethod
    def zero(n: int) -> "GlLaurent":
        return GlLaurent(n, {})

    @staticmethod
    def basis(n: int, i: int, j: int, r: Sequence[int], coeff=1) -> "GlLaurent":
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"matrix position ({i}, {j}) outside 0..{n - 1}")
        c = rational(coeff)
        r = tuple(int(e) for e in r)
        return GlLaurent(n, {(i, j, r): c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def _require_same(self, other: "GlLaurent"):
        if self.n != other.n:
            raise DimensionMismatch("gl sizes differ")

    def __add__(self, other: "GlLaurent") -> "GlLaurent":
        self._require_same(other)
        return GlLaurent(self.n, _merged(self.terms, other.terms, Fraction(1)))

    def __sub__(self, other: "GlLaurent") -> "GlLaurent":
        self._require_same(other)
        return GlLaurent(self.n, _merged(self.terms, other.terms, Fraction(-1)))

    def scale(self, c) -> "GlLaurent":
        return GlLaurent(self.n, _scaled(self.terms, rational(c)))

    def coefficient_matrices(self) -> dict[MultiIndex, Matrix]:
        """The matrix attached to each monomial x^r, as a dense Matrix."""
        buckets: dict[MultiIndex, dict] = {}
        for (i, j, r), c in self.terms.items():
            buckets.setdefault(r, {})[(i, j)] = c
        out = {}
        for r in sorted(buckets):
            entries = buckets[r]
            data = tuple(
                entries.get((i, j), ZERO) for i in range(self.n) for j in range(self.n)
            )
            out[r] = Matrix(self.n, self.n, data)
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, int, MultiIndex], Fraction]]:
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GlLaurent)
            and self.n == other.n
            and dict(self.terms) == dict(other.terms)
        )

    def __str__(self) -> str:
        parts = []
        for (i, j, r), c in self.sorted_terms():
            mono = "" if all(e == 0 for e in r) else f" (x) {_exp_str(r)}"
            parts.append(f"{_coeff_prefix(c)}E_{i + 1}{j + 1}{mono}")
        return _render_terms(parts)


def gl_bracket(a: GlLaurent, b: GlLaurent) -> GlLaurent:
    """[g (x) p, h (x) q] = [g, h] (x) pq with [E_ij, E_kl] = d_jk E_il - d_li E_kj."""
    a._require_same(b)
    out: dict[tuple[int, int, MultiIndex], Fraction] = {}
    for (i, j, r), ca in a.terms.items():
        for (k, l, s), cb in b.terms.items():
            c = ca * cb
            key_exp = tuple(p + q for p, q in zip(r, s))
            if j == k:
                _add_term(out, (i, l, key_exp), c)
            if l == i:
                _add_term(out, (k, j, key_exp), -c)
    return GlLaurent(a.n, out)


def witt_act_gl(w: WittElem, g: GlLaurent) -> GlLaurent:
    """Coefficientwise action: w(h (x) a) = h (x) w(a)."""
    if w.n != g.n:
        raise DimensionMismatch("variable counts differ")
    out: dict[tuple[int, int, MultiIndex], Fraction] = {}
    for (r, i), cw in w.terms.items():
        for (k, l, s), cg in g.terms.items():
            if s[i]:
                key_exp = tuple(p + q for p, q in zip(r, s))
                _add_term(out, (k, l, key_exp), cw * cg * s[i])
    return GlLaurent(g.n, out)


def canonical_crossed_hom_W(w: WittElem) -> GlLaurent:
    """Linear extension of x^r d_j |-> sum_i r_i E_ij (x) x^r."""
    out: dict[tuple[int, int, MultiIndex], Fraction] = {}
    for (r, j), c in w.terms.items():
        for i, ri in enumerate(r):
            if ri:
                _add_term(out, (i, j, r), c * ri)
    return GlLaurent(w.n, out)


def crossed_hom_pq(p: Sequence[LaurentPoly], q, w: WittElem) -> LaurentPoly:
    """Linear extension of x^r d_i |-> (p_i + q r_i) x^r into the coefficients.

    Each p_i must be a one-variable Laurent polynomial in x_i.
    """
    q = rational(q)
    n = w.n
    if len(p) != n:
        raise MalformedP(f"need {n} twisting polynomials, got {len(p)}")
    for i, pi in enumerate(p):
        if pi.n != n:
            raise DimensionMismatch(f"p_{i + 1} lives in {pi.n} variables, expected {n}")
        if not pi.supported_only_on(i):
            raise MalformedP(f"p_{i + 1} involves a variable other than x_{i + 1}")
    out = LaurentPoly.zero(n)
    for (r, i), c in w.terms.items():
        mono = LaurentPoly.monomial(n, r, c)
        out = out + (p[i] * mono)
        if r[i]:
            out = out + mono.scale(q * r[i])
    return out


def witt_window_basis(n: int, bound: int) -> list[WittElem]:
    return [
        WittElem.basis(n, r, i)
        for r in window_exponents(n, bound)
        for i in range(n)
    ]


def sdiv_window_basis(n: int, bound: int) -> list[WittElem]:
    """d_k plus all nonzero generators d_ij(r) with windowed exponents."""
    elems = [WittElem.basis(n, (0,) * n, k) for k in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        for r in window_exponents(n, bound):
            e = s_generator(n, i, j, r)
            if not e.is_zero():
                elems.append(e)
    return elems


def ham_window_basis(n: int, bound: int) -> list[WittElem]:
    return [
        h
        for r in window_exponents(2 * n, bound)
        if not (h := hamiltonian_field(n, r)).is_zero()
    ]


def symplectic_form(n: int) -> Matrix:
    """Block matrix ((0, I), (-I, 0)) of size 2n."""
    data = [ZERO] * (4 * n * n)
    for i in range(n):
        data[i * 2 * n + (n + i)] = Fraction(1)
        data[(n + i) * 2 * n + i] = Fraction(-1)
    return Matrix(2 * n, 2 * n, tuple(data))


FAMILIES = ("full", "sdiv", "ham", "pq")


def verify_witt_crossed_hom(
    n: int,
    family: str,
    window: Window,
    p: Sequence[LaurentPoly] | None = None,
    q=None,
) -> list[Finding]:
    """Check H[u,v] = u.(Hv) - v.(Hu) + [Hu, Hv] on all windowed basis pairs.

    family selects the elements and the map H:
      full -- x^r d_i with the quadratic matrix-valued H into gl_n;
      sdiv -- divergence-free generators (adds per-coefficient trace checks);
      ham  -- Hamiltonian fields inside W_{2n} (adds symplectic-landing checks);
      pq   -- x^r d_i with the scalar-valued twisting map (abelian target).

    The window only bounds which pairs are enumerated; each check is exact.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    findings: list[Finding] = []
    if family == "pq":
        if p is None or q is None:
            raise MalformedP("family pq requires the twisting data p and q")
        elems = witt_window_basis(n, window.bound)
        for a, b in itertools.combinations(elems, 2):
            lhs = crossed_hom_pq(p, q, witt_bracket(a, b))
            rhs = a.apply(crossed_hom_pq(p, q, b)) - b.apply(crossed_hom_pq(p, q, a))
            res = lhs - rhs
            if not res.is_zero():
                findings.append(Finding("crossed-hom", (str(a), str(b)), res))
        return findings

    if family == "full":
        elems = witt_window_basis(n, window.bound)
    elif family == "sdiv":
        elems = sdiv_window_basis(n, window.bound)
    else:
        elems = ham_window_basis(n, window.bound)

    images = [canonical_crossed_hom_W(e) for e in elems]
    for (a, Ha), (b, Hb) in itertools.combinations(zip(elems, images), 2):
        lhs = canonical_crossed_hom_W(witt_bracket(a, b))
        rhs = witt_act_gl(a, Hb) - witt_act_gl(b, Ha) + gl_bracket(Ha, Hb)
        res = lhs - rhs
        if not res.is_zero():
            findings.append(Finding("crossed-hom", (str(a), str(b)), res))

    if family == "sdiv":
        for e, He in zip(elems, images):
            for r, M in He.coefficient_matrices().items():
                tr = sum((M.entry(i, i) for i in range(M.rows)), ZERO)
                if tr:
                    findings.append(Finding("sl-landing", (str(e), _exp_str(r)), tr))
    elif family == "ham":
        J = symplectic_form(n)
        for e, He in zip(elems, images):
            for r, M in He.coefficient_matrices().items():
                cond = M.transpose() * J + J * M
                if not cond.is_zero():
                    findings.append(Finding("sp-landing", (str(e), _exp_str(r)), cond))
    return findings


# ---------------------------------------------------------------------------
# finite-dimensional commutative algebras and the generalized Witt construction


@dataclass(frozen=True)
class FinCommAlgebra:
    """Commutative associative algebra via structure constants on i <= j pairs."""

    basis_names: tuple[str, ...]
    structure: Mapping[tuple[int, int], Vector]
    unit: Vector | None = None

    def __post_init__(self):
        dim = len(self.basis_names)
        for (i, j), v in self.structure.items():
            if not (0 <= i <= j < dim):
                raise DimensionMismatch(f"product key ({i}, {j}) is not an i<=j pair")
            if len(v) != dim:
                raise DimensionMismatch(f"product value at ({i}, {j}) has length {len(v)}")
        if self.unit is not None and len(self.unit) != dim:
            raise DimensionMismatch("unit vector has the wrong length")

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.dim))

    def product_basis(self, i: int, j: int) -> Vector:
        key = (i, j) if i <= j else (j, i)
        return self.structure.get(key, vzero(self.dim))

    def multiply(self, a: Vector, b: Vector) -> Vector:
        if len(a) != self.dim or len(b) != self.dim:
            raise DimensionMismatch("operand lengths differ from the algebra dimension")
        out = [ZERO] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                v = self.product_basis(i, j)
                c = ai * bj
                for k, vk in enumerate(v):
                    if vk:
                        out[k] += c * vk
        return tuple(out)

    def mult_matrix(self, a: Vector) -> Matrix:
        """Left (= right) multiplication operator by a."""
        cols = [self.multiply(a, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols) if self.dim else Matrix.zero(0, 0)


def comm_algebra(
    names: Sequence[str],
    products: Mapping[tuple[int, int], Sequence],
    unit: Sequence | None = None,
) -> FinCommAlgebra:
    structure = {}
    for (i, j), v in sorted(products.items()):
        key = (i, j) if i <= j else (j, i)
        vec = vector(v)
        if not is_zero_vector(vec):
            structure[key] = vec
    return FinCommAlgebra(
        tuple(names), structure, vector(unit) if unit is not None else None
    )


def truncated_polynomial_algebra(bounds: Sequence[int]) -> FinCommAlgebra:
    """Monomial algebra on x_1..x_m with x_i^{bounds[i]} = 0; basis in lex order."""
    bounds = tuple(int(b) for b in bounds)
    if any(b < 1 for b in bounds):
        raise DimensionMismatch("each truncation bound must be >= 1")
    exps = list(itertools.product(*(range(b) for b in bounds)))
    index = {e: k for k, e in enumerate(exps)}
    m = len(bounds)

    def name(e: MultiIndex) -> str:
        if all(c == 0 for c in e):
            return "1"
        parts = []
        for v, c in enumerate(e):
            if c == 0:
                continue
            var = "x" if m == 1 else f"x{v + 1}"
            parts.append(var if c == 1 else f"{var}^{c}")
        return "*".join(parts)

    products = {}
    for a, ea in enumerate(exps):
        for b in range(a, len(exps)):
            eb = exps[b]
            prod = tuple(p + q for p, q in zip(ea, eb))
            if all(p < bd for p, bd in zip(prod, bounds)):
                vec = [ZERO] * len(exps)
                vec[index[prod]] = Fraction(1)
                products[(a, b)] = tuple(vec)
    unit = [ZERO] * len(exps)
    unit[index[(0,) * m]] = Fraction(1)
    return FinCommAlgebra(tuple(name(e) for e in exps), products, tuple(unit))


def scaling_derivation(bounds: Sequence[int], var: int) -> Matrix:
    """The Euler-type derivation x_var d/dx_var on the truncated algebra."""
    exps = list(itertools.product(*(range(int(b)) for b in bounds)))
    data = [ZERO] * (len(exps) * len(exps))
    for k, e in enumerate(exps):
        data[k * len(exps) + k] = Fraction(e[var])
    return Matrix(len(exps), len(exps), tuple(data))


def check_comm_algebra(A: FinCommAlgebra) -> list[Finding]:
    """Associativity on basis triples; the unit must act as the identity."""
    findings = []
    for i in range(A.dim):
        for j in range(A.dim):
            for k in range(A.dim):
                lhs = A.multiply(A.product_basis(i, j), A.basis_vector(k))
                rhs = A.multiply(A.basis_vector(i), A.product_basis(j, k))
                diff = tuple(x - y for x, y in zip(lhs, rhs))
                if not is_zero_vector(diff):
                    findings.append(
                        Finding(
                            "associativity",
                            (A.basis_names[i], A.basis_names[j], A.basis_names[k]),
                            diff,
                        )
                    )
    if A.unit is not None:
        m = A.mult_matrix(A.unit)
        diff = m - Matrix.identity(A.dim)
        if not diff.is_zero():
            findings.append(Finding("unit", ("1",), diff))
    return findings


def derivation_violations(A: FinCommAlgebra, D: Matrix) -> list[Finding]:
    """Leibniz rule D(ab) = D(a)b + aD(b) on basis pairs."""
    if (D.rows, D.cols) != (A.dim, A.dim):
        raise DimensionMismatch(f"operator is {D.rows}x{D.cols}, expected {A.dim}x{A.dim}")
    findings = []
    for i in range(A.dim):
        for j in range(i, A.dim):
            lhs = D.apply(A.product_basis(i, j))
            rhs = tuple(
                x + y
                for x, y in zip(
                    A.multiply(D.col(i), A.basis_vector(j)),
                    A.multiply(A.basis_vector(i), D.col(j)),
                )
            )
            diff = tuple(x - y for x, y in zip(lhs, rhs))
            if not is_zero_vector(diff):
                findings.append(
                    Finding("leibniz", (A.basis_names[i], A.basis_names[j]), diff)
                )
    return findings


def _validate_delta(A: FinCommAlgebra, Delta: Sequence[Matrix]):
    for k, D in enumerate(Delta):
        bad = derivation_violations(A, D)
        if bad:
            raise NotDerivation(f"Delta[{k}] violates the Leibniz rule: {bad[0]}")
    for a, b in itertools.combinations(range(len(Delta)), 2):
        if not (Delta[a] * Delta[b] - Delta[b] * Delta[a]).is_zero():
            raise NotCommuting(f"Delta[{a}] and Delta[{b}] do not commute")


def _gw_names(A: FinCommAlgebra, m: int) -> tuple[str, ...]:
    return tuple(
        f"{A.basis_names[s]}*D{i + 1}" for i in range(m) for s in range(A.dim)
    )


def generalized_witt(A: FinCommAlgebra, Delta: Sequence[Matrix]) -> FinLieAlgebra:
    """Free module A (x) Delta with [a p, b q] = a p(b) q - b q(a) p.

    Requires every member of Delta to be a derivation of A and all pairs to
    commute; the basis is a_s (x) D_i ordered with i major.
    """
    _validate_delta(A, Delta)
    m = len(Delta)
    dimA = A.dim
    dim = m * dimA
    structure: dict[tuple[int, int], Vector] = {}

    def bracket_pair(i: int, s: int, j: int, t: int) -> list[Fraction]:
        out = [ZERO] * dim
        w1 = A.multiply(A.basis_vector(s), Delta[i].col(t))
        for u, c in enumerate(w1):
            if c:
                out[j * dimA + u] += c
        w2 = A.multiply(A.basis_vector(t), Delta[j].col(s))
        for u, c in enumerate(w2):
            if c:
                out[i * dimA + u] -= c
        return out

    for p in range(dim):
        i, s = divmod(p, dimA)
        for qx in range(p + 1, dim):
            j, t = divmod(qx, dimA)
            vec = tuple(bracket_pair(i, s, j, t))
            if not is_zero_vector(vec):
                structure[(p, qx)] = vec
    return FinLieAlgebra(_gw_names(A, m), structure)


def gl_tensor_algebra(m: int, A: FinCommAlgebra) -> FinLieAlgebra:
    """gl_m (x) A as a finite Lie algebra; basis E_ij (x) a_s with (i, j) major."""
    dimA = A.dim
    dim = m * m * dimA

    def idx(i: int, j: int, s: int) -> int:
        return (i * m + j) * dimA + s

    names = tuple(
        f"E{i + 1}{j + 1}({A.basis_names[s]})"
        for i in range(m)
        for j in range(m)
        for s in range(dimA)
    )
    structure: dict[tuple[int, int], Vector] = {}
    for p in range(dim):
        ij, s = divmod(p, dimA)
        i, j = divmod(ij, m)
        for qx in range(p + 1, dim):
            kl, t = divmod(qx, dimA)
            k, l = divmod(kl, m)
            out = [ZERO] * dim
            prod = A.product_basis(s, t)
            if j == k:
                for u, c in enumerate(prod):
                    if c:
                        out[idx(i, l, u)] += c
            if l == i:
                for u, c in enumerate(prod):
                    if c:
                        out[idx(k, j, u)] -= c
            vec = tuple(out)
            if not is_zero_vector(vec):
                structure[(p, qx)] = vec
    return FinLieAlgebra(names, structure)


def generalized_witt_setup(A: FinCommAlgebra, Delta: Sequence[Matrix]) -> Setup:
    """Bundle (g, h, rho, H) for the canonical map on a finite model.

    g is the derivation-generated algebra, h = gl_m (x) A, rho acts through
    the coefficients, and H sends a_s D_j to sum_i E_ij (x) D_i(a_s).
    """
    g = generalized_witt(A, Delta)
    m = len(Delta)
    dimA = A.dim
    h = gl_tensor_algebra(m, A)

    def idx(i: int, j: int, s: int) -> int:
        return (i * m + j) * dimA + s

    mats = []
    for p in range(g.dim):
        i, s = divmod(p, dimA)
        # rho(a_s D_i) multiplies the coefficient by a_s after applying D_i.
        coeff_op = A.mult_matrix(A.basis_vector(s)) * Delta[i]
        data = [ZERO] * (h.dim * h.dim)
        for kl in range(m * m):
            base = kl * dimA
            for t in range(dimA):
                for u in range(dimA):
                    e = coeff_op.entry(u, t)
                    if e:
                        data[(base + u) * h.dim + (base + t)] = e
        mats.append(Matrix(h.dim, h.dim, tuple(data)))

    cols = []
    for p in range(g.dim):
        j, s = divmod(p, dimA)
        col = [ZERO] * h.dim
        for i in range(m):
            v = Delta[i].col(s)
            for u, c in enumerate(v):
                if c:
                    col[idx(i, j, u)] += c
        cols.append(tuple(col))
    H = CrossedHom(Matrix.from_columns(cols))
    return Setup(g, h, LieAction(g, h, tuple(mats)), H)


def canonical_crossed_hom_GW(
    A: FinCommAlgebra, Delta: Sequence[Matrix], element: Vector
) -> Vector:
    """Image of an element (coordinates in the a_s D_i basis) under the canonical map."""
    setup = generalized_witt_setup(A, Delta)
    if len(element) != setup.g.dim:
        raise DimensionMismatch(
            f"element has length {len(element)}, expected {setup.g.dim}"
        )
    return setup.H.apply(element)
