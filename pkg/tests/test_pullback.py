import itertools
from fractions import Fraction

import numpy as np
import pytest

from ikeda_periods.kernel import QuadScalar
from ikeda_periods.modforms import eigenforms
from ikeda_periods.pullback import (
    BasisTable,
    ConditionViolated,
    SingularTable,
    big_C,
    det_scalar,
    extract_std_L,
    g_nu,
    p_coefficients,
    product_hecke_L,
    q_poly_3k,
)
from ikeda_periods.qforms import block_matrix, det_int, enumerate_R_block

from conftest import A, A1, A2, LAM


def test_p_coefficients_interpolate_beyond_the_nodes():
    for R in enumerate_R_block(A1, A)[::40]:
        B = block_matrix(A1, A, R.tolist())
        P = p_coefficients(B)
        for x in (4, 5, -2, Fraction(1, 3)):
            M = [[Fraction(v) for v in row] for row in B.two]
            for i in range(3):
                for j in range(3):
                    M[i][j] *= x
            lhs = sum(c * x**a for a, c in enumerate(P))
            assert lhs == det_scalar(M) / 64


def test_q_poly_top_coefficient():
    B = block_matrix(A, A, [[0] * 3] * 3)
    P = p_coefficients(B)
    assert P[0] == 0 and P[3] == Fraction(det_int(A.two) ** 2, 64)
    assert q_poly_3k(B, 10) == P[3] + Fraction(2 * 9, 3) * P[2] + Fraction(9 * 17, 3) * P[1]


def leibniz(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        sgn = (-1) ** sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = sgn
        for i in range(n):
            term = term * M[i][perm[i]]
        total = total + term
    return total


def test_det_scalar_matches_leibniz():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3, 4):
        M = [[Fraction(int(x), 3) for x in row] for row in rng.integers(-5, 6, (n, n))]
        assert det_scalar(M) == leibniz(M)
    Q = [[1, LAM, 2], [LAM, 3, 1], [0, 1, LAM + 1]]
    assert det_scalar(Q) == leibniz([[QuadScalar(x, 0, 18209) if not isinstance(x, QuadScalar) else x
                                      for x in row] for row in Q])


def test_cramer_extraction_on_synthetic_table():
    rows = [A, A1, A2]
    a = [[1, 1, 1], [2, 3, 5], [7, 1, 4]]
    x = [Fraction(3), Fraction(-2), Fraction(5, 7)]
    c_vals = [sum(a[i][j] * x[j] for j in range(3)) for i in range(3)]
    table = BasisTable(rows, a)
    assert extract_std_L(10, table, 1, c_vals) == x[0]
    # c_{F_1}(A) * (coordinate on F_1) is unchanged when F_1 is rescaled
    t3 = table.scale_column(0, 3)
    assert extract_std_L(10, t3, 3, c_vals) == extract_std_L(10, table, 1, c_vals)


def test_singular_table():
    with pytest.raises(SingularTable):
        BasisTable([A, A1], [[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        BasisTable([A, A1], [[1, 2]])


def test_bracket_is_cuspidal_and_admissibility():
    G = g_nu(17, 10, 20, 20)
    assert G[0] == 0 and G.weight == 20
    with pytest.raises(ConditionViolated):
        g_nu(17, 11, 20, 20)
    with pytest.raises(ConditionViolated):
        g_nu(12, 5, 20, 20)


@pytest.mark.parametrize("a,b,c,d", [(16, 9, 14, 11), (17, 8, 15, 12), (18, 9, 14, 11)])
def test_hecke_product_exchange_weight_20(a, b, c, d):
    fs = eigenforms(20)
    basis = [g.series for g in fs]
    L = lambda x, y: product_hecke_L(x, y, fs[0], basis)  # noqa: E731
    assert L(a, b) * L(c, d) == L(a, d) * L(c, b)


def test_hecke_product_exchange_weight_28():
    fs = eigenforms(28)
    basis = [g.series for g in fs]
    for f in fs:
        L = lambda x, y: product_hecke_L(x, y, f, basis)  # noqa: E731
        assert L(25, 14) * L(23, 16) == L(25, 16) * L(23, 14)


def test_hecke_products_are_galois_conjugate():
    fp, fm = eigenforms(28)
    basis = [fp.series, fm.series]
    vp = product_hecke_L(25, 14, fp, basis)
    vm = product_hecke_L(25, 14, fm, basis)
    assert isinstance(vp, QuadScalar) and vm == vp.conj()


@pytest.mark.slow
def test_big_C_symmetry_k14():
    assert big_C(14, A1, A) == big_C(14, A, A1)


def test_big_C_rejects_odd_weight():
    with pytest.raises(ValueError):
        big_C(11, A, A)
