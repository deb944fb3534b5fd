from fractions import Fraction

import pytest

from ikeda_periods.eisenstein import EisensteinSpec, e1_star, fc_even_genus, sigma, z_norm
from ikeda_periods.kernel import zeta_neg
from ikeda_periods.qforms import HalfIntMat, e8_pair_count, psd_matrices_by_trace
from ikeda_periods.qseries import mul


def sigma_multiplicative(k, n):
    out, p = 1, 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out *= sum(p ** (k * j) for j in range(e + 1))
        p += 1
    return out


def normalized(l, N):
    E = e1_star(l, N)
    return E.scale(1 / E[0])


def test_sigma_against_multiplicative_formula():
    for k in (1, 3, 7, 9):
        for n in range(1, 80):
            assert sigma(k, n) == sigma_multiplicative(k, n)


def test_genus_one_ring_identities():
    N = 50
    E4, E6, E8, E10 = (normalized(l, N) for l in (4, 6, 8, 10))
    assert mul(E4, E4) == E8
    assert mul(E4, E6) == E10


def test_genus_one_coefficients_via_fc():
    for l in (4, 8, 10):
        for m in range(1, 51):
            assert fc_even_genus(HalfIntMat([[2 * m]]), l) == 2 * sigma_multiplicative(l - 1, m)
        assert fc_even_genus(HalfIntMat([[0]]), l) == zeta_neg(1 - l)


def test_z_norm():
    assert z_norm(1, 4) == Fraction(1, 120)
    assert z_norm(2, 4) == zeta_neg(-3) * zeta_neg(-5)
    with pytest.raises(ValueError):
        z_norm(2, 3)


def test_spec_validation():
    EisensteinSpec(2, 4)
    EisensteinSpec(6, 10)
    with pytest.raises(ValueError):
        EisensteinSpec(3, 4)
    with pytest.raises(ValueError):
        EisensteinSpec(2, 2)
    with pytest.raises(ValueError):
        EisensteinSpec(1, 5)


@pytest.mark.parametrize("two", [[[2, 0], [0, 2]], [[2, 1], [1, 2]], [[4, 2], [2, 4]],
                                 [[2, 0], [0, 0]], [[0, 0], [0, 0]], [[4, 0], [0, 2]]])
def test_siegel_weil_e8_genus_two(two):
    T = HalfIntMat(two)
    assert fc_even_genus(T, 4) / z_norm(2, 4) == e8_pair_count(T)


def test_fc_is_a_class_function():
    T = HalfIntMat([[2, 1], [1, 4]])
    U = [[1, 2], [0, 1]]
    assert fc_even_genus(T, 6) == fc_even_genus(T.transform(U), 6)


def test_genus_two_weight_four_all_small():
    Z = z_norm(2, 4)
    assert all(fc_even_genus(T, 4) / Z == e8_pair_count(T) for T in psd_matrices_by_trace(2, 2))
