"""Local Siegel series F_p(B, X).

Primary route (``fp_polynomial``): the local density identity
b_p(B, k) = alpha_p(H_k, B), the reduction of alpha_p to primitive densities over
the even overlattices of B, and the closed count of isometric embeddings of the
reduction B mod p into the hyperbolic space of dimension 2k over F_p.  This is
exact in k, so b_p(B, X) is recovered by interpolation in X = p^{-k} and F_p by
exact division by gamma_p.

Second route (``fp_polynomial_fe``): functional equation plus the first one or
two coefficients of b_p obtained from exponential sums over low-level strata.

Oracle (``brute_bp``): the defining exponential sum, enumerated level by level.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .kernel import AlphaRingElem, kronecker
from .qforms import HalfIntMat, class_key, disc_split, reduce_nondegenerate

__all__ = [
    "DegreeUnsupported",
    "GammaFactor",
    "NonIntegerCoefficient",
    "SiegelPoly",
    "SizeUnsupported",
    "BudgetExceeded",
    "b_p_at_k",
    "b_p_polynomial",
    "even_overlattices",
    "local_factor_primes",
    "brute_bp",
    "embedding_count",
    "fe_sign",
    "fp_degree",
    "fp_evaluate",
    "fp_evaluate_alpha",
    "fp_polynomial",
    "fp_polynomial_fe",
    "quadratic_space_type",
    "stratum_sum_level2",
    "stratum_sum_rank1",
    "xi_p",
]


class DegreeUnsupported(ValueError):
    pass


class NonIntegerCoefficient(ArithmeticError):
    pass


class SizeUnsupported(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# polynomial helpers (coefficient lists, constant term first)


def _pmul(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    num = [Fraction(x) for x in num]
    den = [Fraction(x) for x in den]
    while len(den) > 1 and den[-1] == 0:
        den.pop()
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    r = list(num)
    for i in range(len(num) - len(den), -1, -1):
        c = r[i + len(den) - 1] / den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                r[i + j] -= c * d
    return q, r[: len(den) - 1]


def _trim(a: list) -> list:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


# ---------------------------------------------------------------------------
# gamma factor


@dataclass(frozen=True)
class GammaFactor:
    """gamma_p(B, X) as numerator / denominator polynomials in X."""

    p: int
    m: int
    xi: int | None = None

    @property
    def numerator(self) -> list[Fraction]:
        num = [Fraction(1), Fraction(-1)]
        for i in range(1, self.m // 2 + 1):
            num = _pmul(num, [1, 0, -(self.p ** (2 * i))])
        return num

    @property
    def denominator(self) -> list[Fraction]:
        if self.m % 2:
            return [Fraction(1)]
        if self.xi is None:
            raise ValueError("even size needs xi")
        return [Fraction(1), Fraction(-(self.p ** (self.m // 2)) * self.xi)]

    def series(self, n: int) -> list[Fraction]:
        """Power-series coefficients gamma_0..gamma_n."""
        num = self.numerator + [Fraction(0)] * (n + 1)
        den = self.denominator
        out = []
        # den has the form 1 - cX
        c = -den[1] if len(den) > 1 else Fraction(0)
        prev = Fraction(0)
        for j in range(n + 1):
            prev = num[j] + c * prev
            out.append(prev)
        return out


def xi_p(B: HalfIntMat, p: int) -> int:
    """chi_p((-1)^{m/2} det B) for even size, via the Kronecker character of d_B."""
    if B.size % 2:
        raise ValueError("xi_p needs even size")
    if B.size == 0:
        return 1
    return kronecker(disc_split(B).d, p)


def fp_degree(B: HalfIntMat, p: int) -> int:
    """Degree of F_p(B, X) for positive definite B."""
    m = B.size
    if m == 0:
        return 0
    if m % 2 == 0:
        f = disc_split(B).f
        return 2 * _vp(f, p) if f % p == 0 else 0
    half = B.det2 // 2
    return _vp(half, p) if half % p == 0 else 0


# ---------------------------------------------------------------------------
# quadratic spaces over F_p


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True)
class SpaceType:
    """Isometry data of (Z_p^m, T) mod p.

    r: rank of the polar form; eps: Witt type of a nondegenerate complement when r
    is even (None for odd r); t0: dimension of the singular radical; defect: 1 if
    the quadratic form is nonzero on the polar radical (p = 2 only).
    """

    p: int
    r: int
    eps: int | None
    t0: int
    defect: int = 0


def quadratic_space_type(G: Sequence[Sequence[int]], p: int) -> SpaceType:
    """Classify x -> x^t (G/2) x mod p for an even integral Gram matrix G = 2T."""
    m = len(G)
    if p != 2:
        inv2 = pow(2, -1, p)
        A = [[(G[i][j] * inv2) % p for j in range(m)] for i in range(m)]
        diag = []
        # symmetric elimination
        M = [row[:] for row in A]
        active = list(range(m))
        while active:
            piv = next((i for i in active if M[i][i] % p), None)
            if piv is None:
                pair = next(((i, j) for i in active for j in active if i < j and M[i][j] % p), None)
                if pair is None:
                    break
                i, j = pair
                # e_i <- e_i + e_j
                for c in range(m):
                    M[i][c] = (M[i][c] + M[j][c]) % p
                for r_ in range(m):
                    M[r_][i] = (M[r_][i] + M[r_][j]) % p
                piv = i
            d = M[piv][piv] % p
            diag.append(d)
            dinv = pow(d, -1, p)
            for i in active:
                if i == piv:
                    continue
                f = (M[i][piv] * dinv) % p
                if f:
                    for c in range(m):
                        M[i][c] = (M[i][c] - f * M[piv][c]) % p
                    for r_ in range(m):
                        M[r_][i] = (M[r_][i] - f * M[r_][piv]) % p
            active.remove(piv)
        r = len(diag)
        eps = None
        if r % 2 == 0:
            disc = (-1) ** (r // 2)
            for d in diag:
                disc *= d
            eps = _legendre(disc, p)
        return SpaceType(p, r, eps, m - r, 0)

    # p = 2: q(x) = sum (G_ii/2) x_i + sum_{i<j} G_ij x_i x_j, polar form G mod 2
    def q(x):
        s = 0
        for i in range(m):
            if x[i]:
                s += G[i][i] // 2
                for j in range(i + 1, m):
                    if x[j]:
                        s += G[i][j]
        return s % 2

    def pol(x, y):
        return sum(x[i] * G[i][j] * y[j] for i in range(m) for j in range(m) if x[i] and y[j]) % 2

    vecs = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    pairs = []
    while True:
        found = None
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                if pol(vecs[a], vecs[b]):
                    found = (a, b)
                    break
            if found:
                break
        if found is None:
            break
        a, b = found
        e, f = vecs[a], vecs[b]
        pairs.append((e, f))
        rest = []
        for idx, x in enumerate(vecs):
            if idx in (a, b):
                continue
            be, bf = pol(x, e), pol(x, f)
            y = tuple((x[i] + bf * e[i] + be * f[i]) % 2 for i in range(m))
            rest.append(y)
        vecs = rest
    arf = sum(q(e) * q(f) for e, f in pairs) % 2
    rad = [v for v in vecs if any(v)]
    defect = 1 if any(q(v) for v in rad) else 0
    t0 = len(rad) - defect
    return SpaceType(2, 2 * len(pairs), 1 if arf == 0 else -1, t0, defect)


def _order_O_even(a: int, eps: int, p: int) -> int:
    if a == 0:
        return 1
    out = 2 * p ** (a * (a - 1)) * (p**a - eps)
    for i in range(1, a):
        out *= p ** (2 * i) - 1
    return out


def _order_O_odd(a: int, p: int) -> int:
    out = 2 * p ** (a * a)
    for i in range(1, a + 1):
        out *= p ** (2 * i) - 1
    return out


def _singular_even(a: int, eps: int, p: int) -> int:
    """Nonzero singular vectors of a nondegenerate space of dimension 2a."""
    if a == 0:
        return 0
    return (p**a - eps) * (p ** (a - 1) + eps)


def embedding_count(st: SpaceType, k: int) -> int:
    """Number of isometric injections of the F_p quadratic space ``st`` (dimension
    r + t0 + defect) into the hyperbolic space of dimension 2k."""
    p, r = st.p, st.r
    w = 2 * k - r
    if w < 0:
        return 0
    if r % 2 == 0:
        eps = st.eps
        num = _order_O_even(k, 1, p)
        den = _order_O_even(w // 2, eps, p)
    else:
        eps = None
        num = _order_O_even(k, 1, p)
        den = _order_O_odd((w - 1) // 2, p)
    if num % den:
        raise ArithmeticError("orthogonal group orders do not divide")
    total = num // den
    for i in range(st.t0):
        dim = w - 2 * i
        if dim <= 0:
            return 0
        if dim % 2 == 0:
            s = _singular_even(dim // 2, eps, p)
        else:
            s = p ** (dim - 1) - 1
        total *= p**i * s
    if st.defect:
        dim = w - 2 * st.t0
        if dim <= 0:
            return 0
        a = dim // 2
        total *= p**st.t0 * (p ** (2 * a - 1) - eps * p ** (a - 1))
    return total


# ---------------------------------------------------------------------------
# even overlattices


def _kernel_mod_p(G: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    m = len(G)
    M = [[x % p for x in row] for row in G]
    pivots = []
    row = 0
    for col in range(m):
        piv = next((r for r in range(row, m) if M[r][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][col], -1, p)
        M[row] = [(x * inv) % p for x in M[row]]
        for r in range(m):
            if r != row and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * m
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-M[i][fcol]) % p
        basis.append(v)
    return basis


def _lines(basis: list[list[int]], p: int):
    """One normalized representative per line of the span of ``basis`` mod p."""
    t = len(basis)
    m = len(basis[0]) if basis else 0
    for coeffs in itertools.product(range(p), repeat=t):
        first = next((c for c in coeffs if c), 0)
        if first != 1:
            continue
        v = [sum(c * b[i] for c, b in zip(coeffs, basis)) % p for i in range(m)]
        yield v


def _coset_closure(gens: list[tuple[Fraction, ...]]) -> frozenset:
    m = len(gens[0])
    zero = tuple(Fraction(0) for _ in range(m))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % 1 for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def even_overlattices(G: Sequence[Sequence[int]], p: int) -> list[tuple[int, list[list[int]]]]:
    """All even overlattices of p-power index of the lattice with Gram 2B = G.

    Returns (nu, G') pairs with index p^nu and G' the doubled Gram on a basis.
    """
    m = len(G)
    G0 = [list(r) for r in G]
    ident = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    start = (0, G0, ident, [])
    out = [(0, G0)]
    level = [start]
    seen = {frozenset()}
    while level:
        nxt = []
        for nu, Gc, basis, gens in level:
            for v in _lines(_kernel_mod_p(Gc, p), p):
                Gv = [sum(Gc[i][j] * v[j] for j in range(m)) for i in range(m)]
                vGv = sum(v[i] * Gv[i] for i in range(m))
                need = 8 if p == 2 else p * p
                if vGv % need:
                    continue
                # new vector x = basis . v / p, replacing the basis vector at the
                # first index where v == 1
                i0 = next(i for i in range(m) if v[i] % p)
                x = [sum(basis[r][j] * v[j] for j in range(m)) / p for r in range(m)]
                new_gens = gens + [tuple(x)]
                key = _coset_closure(new_gens)
                if key in seen:
                    continue
                seen.add(key)
                C = [[Fraction(int(r == c)) for c in range(m)] for r in range(m)]
                for r in range(m):
                    C[r][i0] = Fraction(v[r], p)
                Gn = [[sum(C[a][i] * Gc[a][b] * C[b][j] for a in range(m) for b in range(m))
                       for j in range(m)] for i in range(m)]
                if any(x.denominator != 1 for row in Gn for x in row):
                    raise AssertionError("overlattice Gram lost integrality")
                Gn = [[int(x) for x in row] for row in Gn]
                new_basis = [row[:] for row in basis]
                for r in range(m):
                    new_basis[r][i0] = x[r]
                nxt.append((nu + 1, Gn, new_basis, new_gens))
                out.append((nu + 1, Gn))
        level = nxt
    return out


# ---------------------------------------------------------------------------
# local density route


def b_p_at_k(G: Sequence[Sequence[int]], p: int, k: int, lattices=None) -> Fraction:
    """b_p(B, k) = alpha_p(H_k, B) for the positive definite B with 2B = G."""
    m = len(G)
    if lattices is None:
        lattices = [(nu, quadratic_space_type(Gl, p)) for nu, Gl in even_overlattices(G, p)]
    total = Fraction(0)
    base = Fraction(p) ** (m * (m + 1) // 2 - 2 * k * m)
    for nu, st in lattices:
        total += Fraction(p) ** ((m + 1 - 2 * k) * nu) * base * embedding_count(st, k)
    return total


def _interpolate(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    """Coefficients (constant first) of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    deg = 0
    for i in range(n - 2, -1, -1):
        # poly = poly * (X - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for d in range(deg + 1):
            new[d + 1] += poly[d]
            new[d] -= poly[d] * xs[i]
        new[0] += coef[i]
        poly = new
        deg += 1
    return poly


@dataclass(frozen=True)
class SiegelPoly:
    """F_p(B, X) with integer coefficients, constant term first."""

    p: int
    m: int
    coeffs: tuple[int, ...]
    derivation: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*X" if j == 1 else f"{c}*X^{j}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


_fp_lock = threading.Lock()
_fp_cache: dict[tuple, SiegelPoly] = {}


def b_p_polynomial(G: Sequence[Sequence[int]], p: int) -> list[Fraction]:
    """b_p(B, X) as an exact polynomial in X."""
    m = len(G)
    lats = [(nu, quadratic_space_type(Gl, p)) for nu, Gl in even_overlattices(G, p)]
    nu_max = max(nu for nu, _ in lats)
    bound = 2 * m + 2 * nu_max
    npts = bound + 3
    k0 = m + 1
    xs, ys = [], []
    for j in range(npts):
        k = k0 + j
        xs.append(Fraction(1, p**k))
        ys.append(b_p_at_k(G, p, k, lats))
    poly = _interpolate(xs, ys)
    if any(poly[bound + 1:]):
        raise AssertionError("local density is not a polynomial of the expected degree")
    return _trim(poly[: bound + 1])


def _fp_from_density(B: HalfIntMat, p: int) -> SiegelPoly:
    m = B.size
    b = b_p_polynomial(B.two, p)
    xi = xi_p(B, p) if m % 2 == 0 else None
    gam = GammaFactor(p, m, xi)
    q, r = _pdivmod(_pmul(b, gam.denominator), gam.numerator)
    if any(r):
        raise NonIntegerCoefficient(f"gamma_p does not divide b_p for {B!r} at p={p}")
    q = _trim(q)
    if any(c.denominator != 1 for c in q):
        raise NonIntegerCoefficient(f"F_p has non-integral coefficients {q} for {B!r} at p={p}")
    coeffs = tuple(int(c) for c in q)
    if coeffs[0] != 1:
        raise NonIntegerCoefficient(f"F_p has constant term {coeffs[0]}")
    poly = SiegelPoly(p, m, coeffs, {"route": "local-density"})
    eta = fe_sign(poly)
    poly.derivation["fe_sign"] = eta
    predicted = fp_degree(B, p)
    poly.derivation["predicted_degree"] = predicted
    if poly.degree != predicted:
        raise DegreeUnsupported(f"degree {poly.degree} differs from predicted {predicted} for {B!r}")
    return poly


def fp_polynomial(B: HalfIntMat, p: int) -> SiegelPoly:
    """F_p^*(B, X) for positive semidefinite B (uses the nondegenerate kernel)."""
    if not B.is_pd:
        B, _ = reduce_nondegenerate(B)
    m = B.size
    if m == 0 or B.det2 % p:
        return SiegelPoly(p, m, (1,), {"route": "trivial"})
    key = (class_key(B), p)
    with _fp_lock:
        hit = _fp_cache.get(key)
    if hit is not None:
        return hit
    poly = _fp_from_density(B, p)
    with _fp_lock:
        _fp_cache.setdefault(key, poly)
    return poly


def fe_sign(F: SiegelPoly) -> int:
    """The sign eta in F(p^{-m-1}X^{-1}) = eta (p^{(m+1)/2} X)^{-deg} F(X); raises if
    neither sign works."""
    p, m, c = F.p, F.m, F.coeffs
    d = len(c) - 1
    for eta in (1, -1):
        ok = True
        for j in range(d + 1):
            e2 = (m + 1) * (d - 2 * j)  # twice the exponent of p
            if e2 % 2:
                ok = False
                break
            lhs = Fraction(c[d - j])
            rhs = eta * c[j] * Fraction(p) ** (e2 // 2)
            if lhs != rhs:
                ok = False
                break
        if ok:
            return eta
    raise AssertionError(f"functional equation fails for {F}")


# ---------------------------------------------------------------------------
# strata of the exponential sum


def stratum_sum_rank1(B: HalfIntMat, p: int) -> int:
    """[X^1] b_p(B, X): the sum over R = S/p with S of rank one mod p."""
    m = B.size
    if p == 2:
        total = 0
        for x in itertools.product((0, 1), repeat=m):
            if any(x):
                total += -1 if B.value(x) % 2 else 1
        return total
    total = 0
    for x in _lines([[int(i == j) for j in range(m)] for i in range(m)], p):
        total += (p if B.value(x) % p == 0 else 0) - 1
    return total


def _valuations(arr: np.ndarray, p: int, cap: int) -> np.ndarray:
    v = np.zeros(arr.shape, dtype=np.int64)
    a = arr.copy()
    zero = a == 0
    for _ in range(cap):
        div = (a % p == 0) & ~zero
        v += div
        a = np.where(div, a // p, a)
    v[zero] = cap
    return np.minimum(v, cap)


def _det_stack(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    if n == 1:
        return M[:, 0, 0]
    total = np.zeros(M.shape[0], dtype=object)
    for j in range(n):
        sub = np.delete(np.delete(M, 0, axis=1), j, axis=2)
        total = total + (-1) ** j * M[:, 0, j].astype(object) * _det_stack(sub)
    return total


def _nu_exponents(S: np.ndarray, p: int, L: int) -> np.ndarray:
    """log_p nu(S / p^L) for a stack of integer symmetric matrices."""
    n, m, _ = S.shape
    # determinantal-divisor valuations, capped
    cap = L * m + 1
    dvals = [np.zeros(n, dtype=np.int64)]
    for r in range(1, m + 1):
        best = np.full(n, cap, dtype=np.int64)
        for rows in itertools.combinations(range(m), r):
            for cols in itertools.combinations(range(m), r):
                sub = S[:, rows][:, :, cols]
                det = _det_stack(sub).astype(np.int64) if r < 4 else np.array(
                    [int(x) for x in _det_stack(sub)], dtype=object)
                if det.dtype == object:
                    val = np.array([_vp(int(x), p) if x else cap for x in det], dtype=np.int64)
                else:
                    val = _valuations(det, p, cap)
                best = np.minimum(best, val)
        dvals.append(best)
    nu = np.zeros(n, dtype=np.int64)
    for r in range(1, m + 1):
        a = dvals[r] - dvals[r - 1]
        a = np.where(dvals[r] >= cap, L, a)
        nu += L - np.minimum(a, L)
    return nu


def _cyclotomic_integer(counts: dict[int, int], p: int, L: int) -> int:
    """Sum counts[t] * zeta^t for zeta a primitive p^L-th root of unity; must be rational."""
    N = p**L
    poly = [0] * N
    for t, c in counts.items():
        poly[t % N] += c
    # reduce mod Phi_{p^L}(x) = sum_{i<p} x^{i p^{L-1}}
    step = p ** (L - 1)
    deg = (p - 1) * step
    for e in range(N - 1, deg - 1, -1):
        c = poly[e]
        if c:
            poly[e] = 0
            for i in range(p - 1):
                poly[e - deg + i * step] -= c
    if any(poly[1:deg]):
        raise AssertionError("exponential sum is not a rational integer")
    return poly[0]


def _sym_stack(m: int, N: int) -> np.ndarray:
    idx = [(i, j) for i in range(m) for j in range(i, m)]
    total = N ** len(idx)
    grids = np.indices((N,) * len(idx)).reshape(len(idx), total).T
    S = np.zeros((total, m, m), dtype=np.int64)
    for c, (i, j) in enumerate(idx):
        S[:, i, j] = grids[:, c]
        S[:, j, i] = grids[:, c]
    return S


def brute_bp(B: HalfIntMat, p: int, L: int, budget: int = 10**7) -> list[int]:
    """[X^j] b_p(B, X) for j <= L straight from the defining exponential sum."""
    m = B.size
    n_entries = m * (m + 1) // 2
    if p ** (L * n_entries) > budget:
        raise BudgetExceeded(f"{p}^{L * n_entries} matrices exceeds budget {budget}")
    N = p**L
    S = _sym_stack(m, N)
    G = np.array(B.two, dtype=np.int64)
    # tr(B S) = sum_i (G_ii/2) S_ii + sum_{i<j} G_ij S_ij
    tr = np.zeros(len(S), dtype=np.int64)
    for i in range(m):
        tr += (G[i, i] // 2) * S[:, i, i]
        for j in range(i + 1, m):
            tr += G[i, j] * S[:, i, j]
    nu = _nu_exponents(S, p, L)
    out = []
    for j in range(L + 1):
        sel = nu == j
        vals, cnts = np.unique(tr[sel] % N, return_counts=True)
        out.append(_cyclotomic_integer(dict(zip(vals.tolist(), cnts.tolist())), p, L))
    return out


def stratum_sum_level2(B: HalfIntMat, p: int, budget: int = 2 * 10**6) -> int:
    """[X^2] b_p(B, X) by enumerating Sym_m(Z/p^2)."""
    if B.size > 5:
        raise SizeUnsupported("level-2 strata are only enumerated for m <= 5")
    return brute_bp(B, p, 2, budget)[2]


def fp_polynomial_fe(B: HalfIntMat, p: int, eta: int = 1, budget: int = 2 * 10**6) -> SiegelPoly:
    """F_p from the functional equation (sign ``eta``) and the low strata."""
    if not B.is_pd:
        B, _ = reduce_nondegenerate(B)
    m = B.size
    d = fp_degree(B, p)
    if d == 0:
        return SiegelPoly(p, m, (1,), {"route": "trivial"})
    if d >= 5:
        raise DegreeUnsupported(f"degree {d} needs more than two strata")
    xi = xi_p(B, p) if m % 2 == 0 else None
    gam = GammaFactor(p, m, xi).series(2)
    c: list = [None] * (d + 1)
    trace = {}
    c[0] = Fraction(1)
    trace[0] = "trivial"

    def mirror(j):
        e2 = (m + 1) * (d - 2 * j)
        if e2 % 2:
            raise NonIntegerCoefficient("odd exponent in the functional equation")
        c[d - j] = eta * c[j] * Fraction(p) ** (e2 // 2)
        trace[d - j] = "FE"

    mirror(0)
    unknown = [j for j in range(1, d // 2 + 1)]
    if 1 in unknown:
        E1 = stratum_sum_rank1(B, p)
        c[1] = E1 - gam[1]
        trace[1] = "stratum-1"
        if d - 1 != 1:
            mirror(1)
    if 2 in unknown:
        E2 = stratum_sum_level2(B, p, budget)
        c[2] = E2 - gam[1] * c[1] - gam[2]
        trace[2] = "stratum-2"
        if d - 2 != 2:
            mirror(2)
    if d == 1:
        # overdetermined: the FE fixed c_1, the stratum must agree
        E1 = stratum_sum_rank1(B, p)
        if E1 - gam[1] != c[1]:
            raise AssertionError(f"stratum value {E1 - gam[1]} disagrees with FE value {c[1]}")
    if any(x is None or Fraction(x).denominator != 1 for x in c):
        raise NonIntegerCoefficient(f"non-integral F_p coefficients {c}")
    return SiegelPoly(p, m, tuple(int(x) for x in c), {"route": "fe+strata", "trace": trace, "fe_sign": eta})


# ---------------------------------------------------------------------------
# evaluation


def fp_evaluate(F: SiegelPoly, t) -> Fraction:
    t = Fraction(t)
    return sum((c * t**j for j, c in enumerate(F.coeffs)), Fraction(0))


def fp_evaluate_alpha(F: SiegelPoly, p: int, k: int, n: int, ap) -> AlphaRingElem:
    """F(p^{-n-3/2} alpha_p) written in beta = p^{(2k-1)/2} alpha_p:
    sum_j c_j p^{-j(k+n+1)} beta^j."""
    beta = AlphaRingElem.beta(p, k, ap)
    acc = AlphaRingElem.constant(Fraction(0), p, k, ap)
    power = AlphaRingElem.constant(Fraction(1), p, k, ap)
    for j, c in enumerate(F.coeffs):
        if c:
            acc = acc + power * (Fraction(c) / Fraction(p) ** (j * (k + n + 1)))
        power = power * beta
    return acc


def local_factor_primes(B: HalfIntMat) -> list[int]:
    """Primes dividing det(2B) (B positive definite)."""
    n = abs(B.det2)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out

