"""L-value extraction: the genus-3 doubling sum and Rankin-Cohen products.

The genus-3 side pulls E*_{6,k} back to H_3 x H_3 through the nu = 2 differential
operator and reads off the standard L-value by Cramer's rule against a table of
Fourier coefficients.  The elliptic side writes a Rankin-Cohen bracket of two
Eisenstein series in an eigenbasis and divides out the Gamma factor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .eisenstein import e1_star, fc_even_genus
from .kernel import as_scalar
from .qforms import HalfIntMat, block_matrix, det_int, enumerate_R_block
from .qseries import QSeries, coords_in_span, theta_derivative

__all__ = [
    "BasisTable",
    "ConditionViolated",
    "SingularTable",
    "big_C",
    "det_scalar",
    "extract_std_L",
    "g_nu",
    "gamma_kl",
    "p_coefficients",
    "product_hecke_L",
    "q_poly_3k",
]

log = logging.getLogger(__name__)


class ConditionViolated(ValueError):
    pass


class SingularTable(ArithmeticError):
    pass


def _gamma(n: int) -> int:
    return factorial(n - 1)


# ---------------------------------------------------------------------------
# genus 3


def p_coefficients(B: HalfIntMat) -> list[Fraction]:
    """[P_0, P_1, P_2, P_3] with det([[x R, W], [W^t, S]]) = sum_a x^a P_a,
    where R, W, S are the 3x3 blocks of the 6x6 matrix B."""
    if B.size != 6:
        raise ValueError("p_coefficients needs a 6x6 matrix")
    two = [list(r) for r in B.two]
    vals = []
    for x in range(4):
        M = [row[:] for row in two]
        for i in range(3):
            for j in range(3):
                M[i][j] *= x
        vals.append(Fraction(det_int(M), 64))
    # Lagrange on x = 0..3, then expand to monomials
    coeffs = [Fraction(0)] * 4
    for i in range(4):
        basis = [Fraction(1)]
        den = 1
        for j in range(4):
            if j == i:
                continue
            den *= i - j
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= j * basis[t + 1]
        for t in range(4):
            coeffs[t] += vals[i] * basis[t] / den
    return coeffs


def q_poly_3k(B: HalfIntMat, k: int) -> Fraction:
    P0, P1, P2, P3 = p_coefficients(B)
    return (Fraction(2 * (k - 1) * (2 * k - 3) * (k - 2), 3) * P0
            + Fraction((k - 1) * (2 * k - 3), 3) * P1
            + Fraction(2 * (k - 1), 3) * P2
            + P3)


def big_C(k: int, Ai: HalfIntMat, A: HalfIntMat) -> Fraction:
    """C(k; A_i, A): the (A_i, A) Fourier coefficient of the pulled-back, differentiated
    genus-6 Eisenstein series of weight k, up to the fixed normalization."""
    if k % 2:
        raise ValueError("k must be even")
    const = Fraction(-3 * _gamma(2 * k - 3) * _gamma(2 * k - 4), _gamma(2 * k) * _gamma(2 * k - 1))
    const *= 2 ** (3 * k + 7) * (2 * k - 1) * (2 * k - 3) * (k - 1)
    total = Fraction(0)
    blocks = enumerate_R_block(Ai, A)
    log.info("C(%d): %d blocks", k, len(blocks))
    for R in blocks:
        B = block_matrix(Ai, A, R.tolist())
        q = q_poly_3k(B, k)
        if q:
            total += fc_even_genus(B, k) * q
    return const * total


def det_scalar(M: Sequence[Sequence]) -> object:
    """Determinant over Q or Q(lam) by Gaussian elimination."""
    n = len(M)
    A = [[as_scalar(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return as_scalar(det)


@dataclass
class BasisTable:
    """Rows A_1..A_d, columns eigenforms F_1..F_d, entries a_ij = c_{F_j}(A_i)."""

    rows: list[HalfIntMat]
    a: list[list]
    provenance: list[str] = field(default_factory=list)

    def __post_init__(self):
        d = len(self.rows)
        if len(self.a) != d or any(len(r) != d for r in self.a):
            raise ValueError("table must be square with one row per matrix")
        if det_scalar(self.a) == 0:
            raise SingularTable("det(a_ij) vanishes")

    def scale_column(self, j: int, c) -> "BasisTable":
        a = [[x * c if jj == j else x for jj, x in enumerate(row)] for row in self.a]
        return BasisTable(self.rows, a, self.provenance)


def extract_std_L(k: int, table: BasisTable, cF1_A, c_values: Sequence | None = None):
    """c_{F_1}(A) det(a with column 1 replaced by C(k; A_i, A)) / det(a).

    ``c_values`` may supply the C(k; A_i, A) column directly; with one row this is
    C(k; A, A) itself.
    """
    if c_values is None:
        raise ValueError("pass c_values = [big_C(k, A_i, A) for each row]")
    if len(c_values) != len(table.rows):
        raise ValueError("one C value per table row")
    num = [[c_values[i]] + list(row[1:]) for i, row in enumerate(table.a)]
    return as_scalar(cF1_A * det_scalar(num) / det_scalar(table.a))


# ---------------------------------------------------------------------------
# Rankin-Cohen products


def _check_condition(l1: int, l2: int, k: int):
    if not ((l1 - l2) >= 3 and (l1 - l2) % 2 == 1 and k % 2 == 0 and l1 + 1 < k <= l1 + l2 - 3):
        raise ConditionViolated(f"(l1, l2, k) = ({l1}, {l2}, {k}) violates the admissibility condition")


def g_nu(l1: int, l2: int, k: int, N: int) -> QSeries:
    """The bracket of E*_{l1-l2+1} and E*_{l1+l2-k+1} of order nu = k - l1 - 1."""
    _check_condition(l1, l2, k)
    a, b = l1 - l2 + 1, l1 + l2 - k + 1
    nu = k - l1 - 1
    Ea, Eb = e1_star(a, N), e1_star(b, N)
    Da, Db = [Ea], [Eb]
    for _ in range(nu):
        Da.append(theta_derivative(Da[-1]))
        Db.append(theta_derivative(Db[-1]))
    out = None
    for mu in range(nu + 1):
        c = Fraction((-1) ** (nu - mu) * comb(nu, mu) * _gamma(a + nu) * _gamma(b + nu),
                     _gamma(a + mu) * _gamma(b + nu - mu))
        term = (Da[mu] * Db[nu - mu]).scale(c)
        out = term if out is None else out + term
    out = QSeries(out.coeffs, k)
    if out[0] != 0:
        raise AssertionError("bracket is not cuspidal")
    return out


def gamma_kl(k: int, l1: int) -> Fraction:
    return Fraction((-1) ** (k // 2) * _gamma(k - 1), 2 ** (k - 1) * _gamma(l1))


def product_hecke_L(l1: int, l2: int, f, eigenbasis: Sequence[QSeries], N: int | None = None):
    """L_alg(l1, l2; f): the coordinate of the bracket on f divided by gamma(k, l1).

    ``eigenbasis`` lists the normalized eigenforms of S_k with f among them.
    """
    k = f.weight
    N = N or (len(eigenbasis) + 30)
    G = g_nu(l1, l2, k, N)
    basis = [e.truncate(N) if e.precision > N else e for e in eigenbasis]
    coords = coords_in_span(G, basis)
    idx = next(i for i, e in enumerate(eigenbasis) if e is f.series or e == f.series)
    return as_scalar(coords[idx] / gamma_kl(k, l1))


