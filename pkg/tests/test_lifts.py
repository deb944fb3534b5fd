from collections import Counter

import pytest

from ikeda_periods.kernel import QuadScalar
from ikeda_periods.lifts import LiftContext, ikeda_fc, miyawaki_fc, miyawaki_terms
from ikeda_periods.qforms import HalfIntMat, block_matrix, disc_split

from conftest import A, LAM

ONE = HalfIntMat([[2]])


@pytest.fixture(scope="module", params=[(10, "plus"), (14, "plus"), (14, "minus")])
def ctx(request):
    return LiftContext.for_case(*request.param)


def test_fundamental_index_gives_plus_coefficient(ctx):
    for r in ([0], [0], [0]), ([0], [1], [0]):
        T = block_matrix(A, ONE, [list(x) for x in r])
        d, f = disc_split(T)
        assert f == 1
        assert ikeda_fc(T, ctx) == ctx.h.c(abs(d))


def test_conductor_two_closed_form(ctx):
    # F_2 = 1 - 12X + 32X^2 satisfies the functional equation, so the symmetrized
    # local factor collapses to c_f(2) + (-12) 2^{k-3}
    T = block_matrix(A, ONE, [[0], [0], [1]])
    assert ikeda_fc(T, ctx) == ctx.f.a(2) - 12 * 2 ** (ctx.k - 3)


def test_term_multiset(ctx):
    assert miyawaki_terms(A, ctx) == Counter({(5, 1): 8, (1, 2): 6, (8, 1): 1})


def test_decomposition(ctx):
    k, h, f = ctx.k, ctx.h, ctx.f
    assert miyawaki_fc(A, ctx) == h.c(8) + 8 * h.c(5) + 6 * (f.a(2) - 2 ** (k - 1) * 3)


def test_frozen_lift_coefficients():
    assert miyawaki_fc(A, LiftContext.for_case(10)) == -17280
    want = -(2**5) * 567 * (-107 + LAM)
    assert miyawaki_fc(A, LiftContext.for_case(14, "plus")) == want
    assert miyawaki_fc(A, LiftContext.for_case(14, "minus")) == want.conj()


def test_linear_in_h():
    ctx = LiftContext.for_case(10)
    assert miyawaki_fc(A, ctx.scaled(7)) == 7 * miyawaki_fc(A, ctx)


def test_context_validation():
    ctx = LiftContext.for_case(10)
    with pytest.raises(ValueError):
        LiftContext(10, ctx.h, ctx.f, n=2)
    with pytest.raises(ValueError):
        LiftContext(10, ctx.h.scale(2), ctx.f)
    with pytest.raises(ValueError):
        ikeda_fc(A, ctx)


def test_singular_index_vanishes():
    ctx = LiftContext.for_case(10)
    T = HalfIntMat([[2, 2, 0, 0], [2, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
    assert ikeda_fc(T, ctx) == 0


def test_quadratic_values_are_exact():
    c = miyawaki_fc(A, LiftContext.for_case(14, "plus"))
    assert isinstance(c, QuadScalar) and c.d == 18209
