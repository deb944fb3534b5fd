from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ikeda_periods.kernel import (
    QuadScalar,
    as_scalar,
    bernoulli,
    conj,
    dirichlet_L_neg,
    format_scalar,
    fundamental_discriminant,
    is_fundamental_discriminant,
    kronecker,
    xi_tilde_even,
    zeta_neg,
)


def akiyama_tanigawa(n):
    # gives B_n with B_1 = +1/2, so only compare n != 1
    a = [Fraction(1, m + 1) for m in range(n + 1)]
    for m in range(n + 1):
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def class_number(D):
    """Reduced primitive forms of discriminant D < 0."""
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


@pytest.mark.parametrize("n", [0, *range(2, 31)])
def test_bernoulli_against_akiyama_tanigawa(n):
    assert bernoulli(n) == akiyama_tanigawa(n)


def test_bernoulli_sign_convention():
    assert bernoulli(1) == Fraction(-1, 2)
    assert zeta_neg(0) == Fraction(-1, 2)


def test_zeta_values():
    assert zeta_neg(-1) == Fraction(-1, 12)
    assert zeta_neg(-3) == Fraction(1, 120)
    assert zeta_neg(-11) == Fraction(691, 32760)
    assert zeta_neg(-2) == 0


def test_xi_tilde():
    assert xi_tilde_even(1) == Fraction(1, 12)
    assert xi_tilde_even(2) == Fraction(1, 120)


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -20, -23, -24, -47, -71, -84])
def test_L_at_zero_is_class_number(D):
    w = {-3: 6, -4: 4}.get(D, 2)
    assert dirichlet_L_neg(D, 0) == Fraction(2 * class_number(D), w)


def test_L_at_negative_one_real_characters():
    assert dirichlet_L_neg(5, -1) == Fraction(-2, 5)
    assert dirichlet_L_neg(8, -1) == -1
    assert dirichlet_L_neg(1, -1) == Fraction(-1, 12)


def test_fundamental_discriminant_split():
    assert fundamental_discriminant(-12) == (-3, 2)
    assert fundamental_discriminant(-72) == (-8, 3)
    assert fundamental_discriminant(20) == (5, 2)
    for d in range(-200, 200):
        if d % 4 in (0, 1) and d:
            d0, f = fundamental_discriminant(d)
            assert d0 * f * f == d and is_fundamental_discriminant(d0)


@pytest.mark.parametrize("D", [-3, -4, -8, 5, 8, 12, -23, 29])
def test_kronecker_is_a_character(D):
    for m in range(1, 30):
        for n in range(1, 30):
            assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)
    for n in range(1, 60):
        assert kronecker(D, n) == kronecker(D, n + abs(D))


def test_kronecker_odd_primes_match_euler():
    for D in (-4, -3, 5, -7, 13):
        for p in (3, 5, 7, 11, 13, 17, 19):
            if D % p == 0:
                continue
            e = pow(D % p, (p - 1) // 2, p)
            assert kronecker(D, p) == (1 if e == 1 else -1)


rationals = st.builds(Fraction, st.integers(-10**4, 10**4), st.integers(1, 50))
quads = st.builds(lambda a, b: QuadScalar(a, b, 18209), rationals, rationals)


@given(quads, quads, quads)
def test_quadratic_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert (x * y).norm() == x.norm() * y.norm()
    assert conj(x * y) == conj(x) * conj(y)
    if x:
        assert (y / x) * x == y


def test_sqrt_squares_to_d():
    lam = QuadScalar(0, 1, 18209)
    assert lam * lam == 18209
    assert as_scalar(QuadScalar(Fraction(3, 2), 0, 18209)) == Fraction(3, 2)
    assert not isinstance(as_scalar(lam * lam), QuadScalar)


def test_format_scalar_roundtrip_text():
    assert format_scalar(Fraction(-17280)) == "-17280"
    assert "18209" in format_scalar(QuadScalar(1, 2, 18209))

