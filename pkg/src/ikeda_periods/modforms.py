"""Level-one elliptic forms and the Kohnen plus space on Gamma_0(4).

Eigenforms whose Hecke field is quadratic are written over Q(lam), lam^2 = d with
d squarefree; the root with +lam is listed first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .eisenstein import e1_star
from .kernel import QuadScalar, _squarefree_part, as_scalar, conj
from .qseries import QSeries, coords_in_span, dilate, mul, theta_derivative

__all__ = [
    "Eigenform",
    "PlusForm",
    "UnsupportedField",
    "char_poly_Tp",
    "delta_l",
    "dim_sk",
    "eigenforms",
    "hecke_Tp",
    "kohnen_Tp2",
    "plus_space_basis",
    "plus_space_eigenforms",
    "sk_basis",
    "theta",
]


class UnsupportedField(ValueError):
    pass


def _eisenstein_normalized(k: int, N: int) -> QSeries:
    E = e1_star(k, N)
    return E.scale(1 / E[0])


def dim_sk(k: int) -> int:
    if k % 2 or k < 12:
        return 0
    d = k // 12 - (1 if k % 12 == 2 else 0)
    return d


@lru_cache(maxsize=None)
def _delta(N: int) -> QSeries:
    E4, E6 = _eisenstein_normalized(4, N), _eisenstein_normalized(6, N)
    D = (mul(mul(E4, E4), E4) - mul(E6, E6)).scale(Fraction(1, 1728))
    return QSeries(D.coeffs, 12)


def sk_basis(k: int, N: int) -> list[QSeries]:
    """Delta * E4^a * E6^b with 4a + 6b = k - 12."""
    if k % 2 or k < 12:
        raise ValueError("k must be even and at least 12")
    E4, E6 = _eisenstein_normalized(4, N), _eisenstein_normalized(6, N)
    out = []
    r = k - 12
    for b in range(r // 6 + 1):
        if (r - 6 * b) % 4:
            continue
        a = (r - 6 * b) // 4
        s = _delta(N)
        for _ in range(a):
            s = mul(s, E4)
        for _ in range(b):
            s = mul(s, E6)
        out.append(QSeries(s.coeffs, k))
    if len(out) != dim_sk(k):
        raise AssertionError(f"basis size {len(out)} differs from dim S_{k} = {dim_sk(k)}")
    return out


def hecke_Tp(k: int, p: int, a: QSeries) -> QSeries:
    """c'(n) = c(pn) + p^{k-1} c(n/p), known for n <= precision // p."""
    N = a.precision // p
    if N < 1:
        raise IndexError("precision too small for T(p)")
    out = []
    for n in range(N + 1):
        c = a[p * n]
        if n % p == 0:
            c = c + p ** (k - 1) * a[n // p]
        out.append(c)
    return QSeries(out, a.weight)


def _legendre_signed(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kohnen_Tp2(k: int, p: int, h: QSeries) -> QSeries:
    """Plus-space T(p^2) in weight k + 1/2, p odd."""
    if p == 2:
        raise ValueError("only odd p is supported")
    N = h.precision // (p * p)
    out = []
    for n in range(N + 1):
        c = h[p * p * n] + _legendre_signed((-1) ** k * n, p) * p ** (k - 1) * h[n]
        if n % (p * p) == 0:
            c = c + p ** (2 * k - 1) * h[n // (p * p)]
        out.append(c)
    return QSeries(out, h.weight)


# ---------------------------------------------------------------------------
# eigen-decomposition of at most 2x2 Hecke matrices


def _quadratic_eigen(M: list[list[Fraction]]):
    """Eigenvalues and eigenvectors of a rational 2x2 matrix; +lam root first."""
    tr = M[0][0] + M[1][1]
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    disc = tr * tr - 4 * det
    if disc <= 0:
        raise UnsupportedField("Hecke polynomial must split over a real quadratic field")
    num, den = disc.numerator * disc.denominator, disc.denominator
    d, f = _squarefree_part(num)
    # sqrt(disc) = f / den * sqrt(d)
    root = QuadScalar(0, Fraction(f, den), d) if d != 1 else Fraction(f, den)
    out = []
    for sgn in (1, -1):
        mu = as_scalar((tr + sgn * root) / 2)
        if M[0][1] != 0:
            v = [M[0][1], as_scalar(mu - M[0][0])]
        else:
            v = [as_scalar(mu - M[1][1]), as_scalar(M[1][0])]
        out.append((as_scalar(mu), v))
    return d, out


def char_poly_Tp(k: int, p: int, N: int = 60) -> list[Fraction]:
    """Coefficients [c0, c1, ..., 1] of the characteristic polynomial of T(p) on S_k."""
    basis = sk_basis(k, p * N)
    M = _hecke_matrix(basis, lambda s: hecke_Tp(k, p, s))
    if len(M) == 1:
        return [-M[0][0], Fraction(1)]
    if len(M) == 2:
        tr = M[0][0] + M[1][1]
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        return [det, -tr, Fraction(1)]
    raise UnsupportedField("dimension above 2")


def _hecke_matrix(basis: list[QSeries], op) -> list[list]:
    """Matrix (columns = images) of ``op`` in ``basis``."""
    images = [op(b) for b in basis]
    cols = [coords_in_span(img, [b.truncate(img.precision) for b in basis]) for img in images]
    d = len(basis)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


@dataclass(frozen=True)
class Eigenform:
    """Normalized (c(1) = 1) Hecke eigenform of level one."""

    weight: int
    series: QSeries
    d: int | None = None

    def a(self, n: int):
        return self.series[n]

    def conj(self) -> "Eigenform":
        return Eigenform(self.weight, self.series.map(conj), self.d)

    def check_multiplicative(self, upto: int | None = None):
        c = self.series
        N = upto or c.precision
        k = self.weight
        for m in range(2, N + 1):
            for n in range(2, N // m + 1):
                if _gcd(m, n) == 1 and c[m * n] != c[m] * c[n]:
                    raise AssertionError(f"c({m * n}) != c({m}) c({n})")
        for p in (q for q in range(2, N + 1) if _is_prime(q)):
            pr = p
            prev, cur = Fraction(1), c[p]
            while pr * p <= N:
                nxt = c[p] * cur - p ** (k - 1) * prev
                if c[pr * p] != nxt:
                    raise AssertionError(f"prime-power recursion fails at {pr * p}")
                prev, cur = cur, nxt
                pr *= p


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % q for q in range(2, int(n**0.5) + 1))


@lru_cache(maxsize=None)
def eigenforms(k: int, N: int = 100) -> tuple[Eigenform, ...]:
    """Normalized eigenforms of S_k to precision N (dimension at most 2)."""
    basis = sk_basis(k, 2 * N)
    if len(basis) == 1:
        b = basis[0]
        return (Eigenform(k, b.truncate(N).scale(1 / b[1])),)
    if len(basis) != 2:
        raise UnsupportedField("only dimensions 1 and 2 are supported")
    M = _hecke_matrix(basis, lambda s: hecke_Tp(k, 2, s))
    d, pairs = _quadratic_eigen(M)
    out = []
    for mu, v in pairs:
        s = basis[0].truncate(N).scale(v[0]) + basis[1].truncate(N).scale(v[1])
        s = s.scale(1 / s[1]).map(as_scalar)
        if s[2] != mu:
            raise AssertionError("eigenvector does not carry its eigenvalue")
        out.append(Eigenform(k, QSeries(s.coeffs, k), d))
    return tuple(out)


# ---------------------------------------------------------------------------
# half-integral weight


def theta(N: int) -> QSeries:
    c = [Fraction(0)] * (N + 1)
    n = 0
    while n * n <= N:
        c[n * n] += 1 if n == 0 else 2
        n += 1
    return QSeries(c, Fraction(1, 2))


def delta_l(l: int, N: int) -> QSeries:
    """delta_l = (1/4)((l/2 - 1) E*_{l-2}(4 tau) D theta - theta (D E*_{l-2})(4 tau)), D = q d/dq.

    The derivative of the Eisenstein series is taken before the dilation; this is
    the combination that is a Rankin-Cohen bracket of E*_{l-2}(4 tau) and theta.
    """
    if l % 2 or l < 6:
        raise ValueError("l must be even and at least 6")
    E = e1_star(l - 2, N // 4 + 1)
    E4 = dilate(E, 4).truncate(N)
    DE4 = dilate(theta_derivative(E), 4).truncate(N)
    th = theta(N)
    out = (mul(E4, theta_derivative(th)).scale(Fraction(l // 2 - 1)) - mul(th, DE4)).scale(Fraction(1, 4))
    return QSeries(out.coeffs, Fraction(2 * l + 1, 2))


@dataclass(frozen=True)
class PlusForm:
    """Element of the plus space of weight k + 1/2."""

    k: int
    series: QSeries

    def __post_init__(self):
        sgn = (-1) ** self.k
        for n, c in enumerate(self.series.coeffs):
            if c != 0 and (sgn * n) % 4 not in (0, 1):
                raise AssertionError(f"plus-space support violated at q^{n}")

    def c(self, n: int):
        return self.series[n]

    def conj(self) -> "PlusForm":
        return PlusForm(self.k, self.series.map(conj))

    def scale(self, c) -> "PlusForm":
        return PlusForm(self.k, self.series.scale(c).map(as_scalar))


def plus_space_basis(k: int, N: int) -> list[QSeries]:
    """delta_a(tau) E*_b(4 tau) products spanning the plus space of weight k + 1/2."""
    if k == 10:
        return [delta_l(10, N)]
    if k == 14:
        out = []
        for a, b in ((6, 8), (8, 6)):
            E = dilate(e1_star(b, N // 4 + 1), 4).truncate(N)
            out.append(QSeries(mul(delta_l(a, N), E).coeffs, Fraction(2 * k + 1, 2)))
        return out
    raise ValueError("plus-space bases are provided for k = 10 and 14")


@lru_cache(maxsize=None)
def plus_space_eigenforms(k: int, N: int = 400) -> tuple[tuple[PlusForm, Eigenform], ...]:
    """Hecke eigenforms h (c_h(1) = 1) of the plus space paired with their Shimura images."""
    basis = plus_space_basis(k, 9 * 50)
    fs = eigenforms(2 * k)
    if len(basis) != len(fs):
        raise AssertionError("plus space and S_{2k} dimensions differ")
    full = plus_space_basis(k, N)
    if len(basis) == 1:
        mu_vs = [(None, [Fraction(1)])]
    else:
        M = _hecke_matrix(basis, lambda s: kohnen_Tp2(k, 3, s))
        _, mu_vs = _quadratic_eigen(M)
    out = []
    for mu, v in mu_vs:
        s = full[0].scale(v[0])
        for vi, b in zip(v[1:], full[1:]):
            s = s + b.scale(vi)
        s = s.scale(1 / s[1]).map(as_scalar)
        h = PlusForm(k, QSeries(s.coeffs, Fraction(2 * k + 1, 2)))
        img = kohnen_Tp2(k, 3, h.series)
        eig = img[1] / h.series[1]
        if img != h.series.truncate(img.precision).scale(eig):
            raise AssertionError("plus form is not a T(9) eigenform")
        match = [f for f in fs if f.a(3) == eig]
        if len(match) != 1:
            raise AssertionError(f"no S_{2 * k} eigenform with a_3 = {eig}")
        out.append((h, match[0]))
    # +lam first, following the ordering of eigenforms(2k)
    out.sort(key=lambda hf: fs.index(hf[1]))
    return tuple(out)

