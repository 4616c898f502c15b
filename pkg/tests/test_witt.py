import itertools
import random
from fractions import Fraction

import pytest

from crosshom.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    MalformedP,
    NotCommuting,
    NotDerivation,
)
from crosshom.liealg import check_crossed_hom, check_lie_algebra
from crosshom.linalg import Matrix
from crosshom.witt import (
    GlLaurent,
    LaurentPoly,
    Window,
    WittElem,
    canonical_crossed_hom_GW,
    canonical_crossed_hom_W,
    check_comm_algebra,
    crossed_hom_pq,
    derivation_violations,
    divergence,
    generalized_witt,
    generalized_witt_setup,
    gl_bracket,
    hamiltonian_bracket_coefficient,
    hamiltonian_field,
    ham_window_basis,
    s_generator,
    scaling_derivation,
    sdiv_window_basis,
    symplectic_form,
    truncated_polynomial_algebra,
    verify_witt_crossed_hom,
    window_exponents,
    witt_bracket,
    witt_window_basis,
)


def w(n, r, i, c=1):
    return WittElem.basis(n, r, i, c)


def test_witt_bracket_one_var():
    assert witt_bracket(w(1, (1,), 0), w(1, (2,), 0)) == w(1, (3,), 0)


def test_witt_bracket_two_var():
    got = witt_bracket(w(2, (1, 1), 0), w(2, (2, 0), 1))
    expected = w(2, (3, 1), 1, 2) - w(2, (3, 1), 0)
    assert got == expected


def test_witt_bracket_antisymmetry():
    rng = random.Random(4)
    for _ in range(20):
        elem = WittElem.zero(2)
        for _ in range(3):
            r = (rng.randint(-2, 2), rng.randint(-2, 2))
            elem = elem + w(2, r, rng.randint(0, 1), rng.randint(-2, 2))
        assert witt_bracket(elem, elem).is_zero()


def test_witt_bracket_jacobi_sampled():
    rng = random.Random(8)
    basis = witt_window_basis(2, 1)
    for _ in range(60):
        a, b, c = (basis[rng.randrange(len(basis))] for _ in range(3))
        jac = (
            witt_bracket(a, witt_bracket(b, c))
            + witt_bracket(b, witt_bracket(c, a))
            + witt_bracket(c, witt_bracket(a, b))
        )
        assert jac.is_zero()


def test_divergence_formula():
    assert divergence(w(2, (2, 3), 0)) == LaurentPoly.monomial(2, (2, 3), 2)
    assert divergence(w(2, (0, 0), 0)).is_zero()
    assert divergence(w(2, (0, 0), 1)).is_zero()


def test_divergence_of_generators_vanishes():
    for r in window_exponents(2, 2):
        assert divergence(s_generator(2, 0, 1, r)).is_zero()
    for r in window_exponents(2, 1):
        assert divergence(hamiltonian_field(1, r)).is_zero()


def test_divergence_closure_on_window():
    elems = sdiv_window_basis(2, 1)
    for a, b in itertools.combinations(elems, 2):
        assert divergence(witt_bracket(a, b)).is_zero()


def test_s_generator():
    got = s_generator(2, 0, 1, (1, 1))
    assert got == w(2, (1, 1), 0) - w(2, (1, 1), 1)
    assert s_generator(2, 0, 0, (3, 1)).is_zero()
    assert s_generator(2, 0, 1, (0, 0)).is_zero()
    with pytest.raises(IndexOutOfRange):
        s_generator(2, 0, 2, (1, 1))


def test_s_generator_bracket_with_degree_zero():
    # [d_k, d_ij(r)] = r_k d_ij(r)
    for k in range(2):
        for r in window_exponents(2, 2):
            lhs = witt_bracket(w(2, (0, 0), k), s_generator(2, 0, 1, r))
            rhs = s_generator(2, 0, 1, r).scale(r[k])
            assert lhs == rhs


def test_s_generator_bracket_formula():
    # [d_ij(r), d_pq(s)] expands into four shifted generators
    n = 3
    rng = random.Random(13)
    for _ in range(40):
        i, j, p, q = (rng.randrange(n) for _ in range(4))
        r = tuple(rng.randint(-2, 2) for _ in range(n))
        s = tuple(rng.randint(-2, 2) for _ in range(n))
        lhs = witt_bracket(s_generator(n, i, j, r), s_generator(n, p, q, s))
        t = tuple(a + b for a, b in zip(r, s))
        rhs = (
            s_generator(n, i, q, t).scale(r[j] * s[p])
            - s_generator(n, i, p, t).scale(r[j] * s[q])
            - s_generator(n, j, q, t).scale(r[i] * s[p])
            + s_generator(n, j, p, t).scale(r[i] * s[q])
        )
        assert lhs == rhs


def test_hamiltonian_field_examples():
    assert hamiltonian_field(1, (1, 0)) == w(2, (1, 0), 1, -1)
    assert hamiltonian_field(1, (0, 0)).is_zero()
    with pytest.raises(DimensionMismatch):
        hamiltonian_field(1, (1, 0, 0))


def test_hamiltonian_bracket_closure():
    # [h(r), h(s)] = (sum r_{n+i} s_i - s_{n+i} r_i) h(r+s) on the window
    for n in (1, 2):
        for r in window_exponents(2 * n, 1):
            for s in window_exponents(2 * n, 1):
                lhs = witt_bracket(hamiltonian_field(n, r), hamiltonian_field(n, s))
                coeff = hamiltonian_bracket_coefficient(n, r, s)
                t = tuple(a + b for a, b in zip(r, s))
                assert lhs == hamiltonian_field(n, t).scale(coeff)


def test_hamiltonian_specific_bracket():
    lhs = witt_bracket(hamiltonian_field(1, (1, 0)), hamiltonian_field(1, (0, 1)))
    assert lhs == hamiltonian_field(1, (1, 1)).scale(-1)


def test_canonical_crossed_hom_values():
    got = canonical_crossed_hom_W(w(2, (1, 2), 0))
    expected = GlLaurent.basis(2, 0, 0, (1, 2)) + GlLaurent.basis(2, 1, 0, (1, 2), 2)
    assert got == expected
    for i in range(2):
        assert canonical_crossed_hom_W(w(2, (0, 0), i)).is_zero()


def test_canonical_crossed_hom_of_hamiltonian_matrix():
    # the quadratic coefficient matrix of h((1,1)) is [[1, -1], [1, -1]]
    He = canonical_crossed_hom_W(hamiltonian_field(1, (1, 1)))
    mats = He.coefficient_matrices()
    assert list(mats) == [(1, 1)]
    assert mats[(1, 1)] == Matrix.from_rows([[1, -1], [1, -1]])


def test_hamiltonian_matrix_is_outer_product_on_window():
    # H(h(r)) = M (x) x^r with M[k][i] = r_k r_{n+i}, M[k][n+i] = -r_k r_i
    n = 1
    for r in window_exponents(2, 2):
        He = canonical_crossed_hom_W(hamiltonian_field(n, r))
        if all(e == 0 for e in r):
            assert He.is_zero()
            continue
        mats = He.coefficient_matrices()
        expected = Matrix.from_rows(
            [[r[k] * r[n + i] for i in range(n)] + [-r[k] * r[i] for i in range(n)]
             for k in range(2 * n)]
        )
        if expected.is_zero():
            assert mats == {}
        else:
            assert mats == {tuple(r): expected}


def test_crossed_hom_pq_values():
    zero1 = LaurentPoly.zero(1)
    # p = 0, q = 1: x^(2) d -> 2 x^(2)
    assert crossed_hom_pq([zero1], 1, w(1, (2,), 0)) == LaurentPoly.monomial(1, (2,), 2)
    # p = 0, q = 0: everything dies
    assert crossed_hom_pq([zero1], 0, w(1, (3,), 0)).is_zero()
    # p_1 = x_1, q = 0: x^(3) d -> x^(4)
    p = [LaurentPoly.monomial(1, (1,))]
    assert crossed_hom_pq(p, 0, w(1, (3,), 0)) == LaurentPoly.monomial(1, (4,))


def test_crossed_hom_pq_malformed():
    # p_1 depends on x_2
    p = [LaurentPoly.monomial(2, (0, 1)), LaurentPoly.zero(2)]
    with pytest.raises(MalformedP):
        crossed_hom_pq(p, 0, w(2, (1, 0), 0))


def test_pq_derivation_identity_windowed():
    # abelian target: H[u,v] = u(Hv) - v(Hu) for mixed p and q
    p = [LaurentPoly.monomial(2, (2, 0), Fraction(1, 2)), LaurentPoly.monomial(2, (0, -1), 3)]
    q = Fraction(-2, 3)
    elems = witt_window_basis(2, 1)
    for a, b in itertools.combinations(elems, 2):
        lhs = crossed_hom_pq(p, q, witt_bracket(a, b))
        rhs = a.apply(crossed_hom_pq(p, q, b)) - b.apply(crossed_hom_pq(p, q, a))
        assert lhs == rhs


def test_verify_full_family_small():
    assert verify_witt_crossed_hom(1, "full", Window(2)) == []
    assert verify_witt_crossed_hom(2, "full", Window(1)) == []


def test_verify_sdiv_family():
    findings = verify_witt_crossed_hom(2, "sdiv", Window(1))
    assert findings == []


def test_verify_ham_family():
    assert verify_witt_crossed_hom(1, "ham", Window(1)) == []


def test_verify_pq_family():
    p = [LaurentPoly.monomial(1, (-1,), 2)]
    assert verify_witt_crossed_hom(1, "pq", Window(2), p=p, q=Fraction(5, 7)) == []


def test_sl_landing_trace_zero():
    for e in sdiv_window_basis(2, 2):
        He = canonical_crossed_hom_W(e)
        for _, M in He.coefficient_matrices().items():
            assert sum((M.entry(i, i) for i in range(M.rows)), Fraction(0)) == 0


def test_sp_landing():
    J = symplectic_form(1)
    for e in ham_window_basis(1, 2):
        He = canonical_crossed_hom_W(e)
        for _, M in He.coefficient_matrices().items():
            assert (M.transpose() * J + J * M).is_zero()


def test_gl_bracket_matrix_units():
    # [E_12 (x) x, E_21 (x) y] = (E_11 - E_22) (x) xy
    a = GlLaurent.basis(2, 0, 1, (1, 0))
    b = GlLaurent.basis(2, 1, 0, (0, 1))
    got = gl_bracket(a, b)
    expected = GlLaurent.basis(2, 0, 0, (1, 1)) - GlLaurent.basis(2, 1, 1, (1, 1))
    assert got == expected


# --- finite commutative algebras and the generalized Witt construction ----


def test_truncated_algebra_valid():
    A = truncated_polynomial_algebra([4])
    assert check_comm_algebra(A) == []
    assert A.basis_names == ("1", "x", "x^2", "x^3")


def test_truncated_two_variables():
    A = truncated_polynomial_algebra([2, 3])
    assert check_comm_algebra(A) == []
    assert A.dim == 6
    x1 = A.basis_vector(A.basis_names.index("x1"))
    x2 = A.basis_vector(A.basis_names.index("x2"))
    prod = A.multiply(x1, x2)
    assert prod == A.basis_vector(A.basis_names.index("x1*x2"))


def test_scaling_derivation_is_derivation():
    for bounds in ([3], [4], [2, 2]):
        for var in range(len(bounds)):
            assert derivation_violations(
                truncated_polynomial_algebra(bounds), scaling_derivation(bounds, var)
            ) == []


def test_shift_operator_is_not_derivation():
    # d/dx on K[x]/(x^3) fails Leibniz on the top-degree pair (x, x^2)
    A = truncated_polynomial_algebra([3])
    shift = Matrix.from_rows([[0, 1, 0], [0, 0, 2], [0, 0, 0]])
    bad = derivation_violations(A, shift)
    assert any(f.site == ("x", "x^2") for f in bad)
    with pytest.raises(NotDerivation):
        generalized_witt(A, [shift])


def test_generalized_witt_brackets():
    # A = K[x]/(x^3), delta = x d/dx: [1 d, x d] = x d, [1 d, x^2 d] = 2 x^2 d,
    # [x d, x^2 d] = (x * 2x^2 - x^2 * x) d = x^3 d = 0
    A = truncated_polynomial_algebra([3])
    gw = generalized_witt(A, [scaling_derivation([3], 0)])
    assert gw.dim == 3
    assert check_lie_algebra(gw) == []
    assert gw.bracket_basis(0, 1) == (Fraction(0), Fraction(1), Fraction(0))
    assert gw.bracket_basis(0, 2) == (Fraction(0), Fraction(0), Fraction(2))
    assert gw.bracket_basis(1, 2) == (Fraction(0), Fraction(0), Fraction(0))


def test_generalized_witt_zero_derivation_abelian():
    A = truncated_polynomial_algebra([2])
    gw = generalized_witt(A, [Matrix.zero(2, 2)])
    assert gw.dim == 2
    assert gw.structure == {}


def test_generalized_witt_one_dimensional():
    A = truncated_polynomial_algebra([1])
    gw = generalized_witt(A, [Matrix.zero(1, 1)])
    assert gw.dim == 1
    assert gw.structure == {}


def test_generalized_witt_noncommuting_rejected():
    A = truncated_polynomial_algebra([3])
    d1 = scaling_derivation([3], 0)
    # x^2 d/dx: 1 -> 0, x -> x^2, x^2 -> 0 (in A); a genuine derivation
    d2 = Matrix.from_rows([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    assert derivation_violations(A, d2) == []
    with pytest.raises(NotCommuting):
        generalized_witt(A, [d1, d2])


def test_generalized_witt_setup_certified():
    for bounds, deltas in (
        ([4], [scaling_derivation([4], 0)]),
        ([2, 2], [scaling_derivation([2, 2], 0), scaling_derivation([2, 2], 1)]),
    ):
        A = truncated_polynomial_algebra(bounds)
        s = generalized_witt_setup(A, deltas)
        assert check_lie_algebra(s.g) == []
        assert check_lie_algebra(s.h) == []
        assert check_crossed_hom(s) == []


def test_canonical_gw_values():
    # delta = x d/dx on K[x]/(x^3): H(x^2 delta) = E_11 (x) delta(x^2) = 2 E_11 (x) x^2
    A = truncated_polynomial_algebra([3])
    delta = scaling_derivation([3], 0)
    val = canonical_crossed_hom_GW(A, [delta], (Fraction(0), Fraction(0), Fraction(1)))
    assert val == (Fraction(0), Fraction(0), Fraction(2))
    # constants die
    val = canonical_crossed_hom_GW(A, [delta], (Fraction(5), Fraction(0), Fraction(0)))
    assert val == (Fraction(0),) * 3


def test_canonical_gw_matches_sparse_canonical_map():
    # On K[x]/(x^m) with the scaling derivation the finite map reproduces the
    # sparse one: H(x^a d) = a E (x) x^a for a = 0..m-1.
    m = 4
    A = truncated_polynomial_algebra([m])
    s = generalized_witt_setup(A, [scaling_derivation([m], 0)])
    for a in range(m):
        col = s.H.column(a)
        sparse = canonical_crossed_hom_W(w(1, (a,), 0))
        expected = [Fraction(0)] * m
        for (_, _, r), c in sparse.terms.items():
            expected[r[0]] = c
        assert list(col) == expected


def test_window_validation():
    with pytest.raises(DimensionMismatch):
        Window(0)
