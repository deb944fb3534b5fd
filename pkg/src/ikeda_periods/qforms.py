"""Half-integral symmetric matrices: invariants, kernels, enumerations.

A half-integral matrix B is stored through the even integral matrix 2B, which is
unambiguous (integer entries, even diagonal).
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .kernel import fundamental_discriminant, is_fundamental_discriminant

__all__ = [
    "DiscSplit",
    "HalfIntMat",
    "NotPSD",
    "block_matrix",
    "class_key",
    "column_echelon",
    "det_int",
    "disc_split",
    "e8_pair_count",
    "e8_vectors",
    "enumerate_R_block",
    "int_rank",
    "psd_matrices_by_trace",
    "reduce_nondegenerate",
]


class NotPSD(ValueError):
    pass


def det_int(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def int_rank(M: Sequence[Sequence[int]]) -> int:
    A = [[Fraction(x) for x in r] for r in M]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        for r in range(rank + 1, len(A)):
            if A[r][c]:
                f = A[r][c] / A[rank][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def column_echelon(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Unimodular column reduction: returns (H, U, r) with M U = H, the last
    ``ncols - r`` columns of H zero and the first r independent."""
    rows = len(M)
    n = len(M[0]) if rows else 0
    H = [list(r) for r in M]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(dst, src, q):
        # column dst -= q * column src
        for r in H:
            r[dst] -= q * r[src]
        for r in U:
            r[dst] -= q * r[src]

    def col_swap(a, b):
        for r in H:
            r[a], r[b] = r[b], r[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    c = 0
    for i in range(rows):
        if c == n:
            break
        while True:
            nz = [j for j in range(c, n) if H[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(H[i][j]))
            if j0 != c:
                col_swap(j0, c)
            done = True
            for j in range(c + 1, n):
                if H[i][j]:
                    col_op(j, c, H[i][j] // H[i][c])
                    if H[i][j]:
                        done = False
            if done:
                break
        if any(H[i][j] for j in range(c, n)):
            c += 1
    return H, U, c


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _transpose(A):
    return [list(r) for r in zip(*A)]


class HalfIntMat:
    """Half-integral symmetric matrix B, held as the even integral matrix 2B."""

    __slots__ = ("two", "__dict__")

    def __init__(self, two: Sequence[Sequence[int]]):
        t = tuple(tuple(int(x) for x in row) for row in two)
        m = len(t)
        if any(len(r) != m for r in t):
            raise ValueError("matrix must be square")
        for i in range(m):
            if t[i][i] % 2:
                raise ValueError("2B must have even diagonal")
            for j in range(i):
                if t[i][j] != t[j][i]:
                    raise ValueError("matrix must be symmetric")
        self.two = t

    @classmethod
    def from_entries(cls, B: Sequence[Sequence]) -> "HalfIntMat":
        two = []
        for row in B:
            r = []
            for x in row:
                y = 2 * Fraction(x)
                if y.denominator != 1:
                    raise ValueError(f"entry {x} is not half-integral")
                r.append(int(y))
            two.append(r)
        return cls(two)

    @property
    def size(self) -> int:
        return len(self.two)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.two[i][j], 2)

    def entries(self) -> list[list[Fraction]]:
        return [[Fraction(x, 2) for x in row] for row in self.two]

    @cached_property
    def det2(self) -> int:
        """det(2B)."""
        return det_int(self.two)

    @cached_property
    def rank(self) -> int:
        return int_rank(self.two)

    def value(self, x: Sequence[int]) -> int:
        """B[x] = x^t B x (an integer)."""
        t = self.two
        m = len(t)
        s = 0
        for i in range(m):
            if x[i]:
                s += t[i][i] // 2 * x[i] * x[i]
                for j in range(i + 1, m):
                    s += t[i][j] * x[i] * x[j]
        return s

    def transform(self, U: Sequence[Sequence[int]]) -> "HalfIntMat":
        """B[U] = U^t B U."""
        return HalfIntMat(_matmul(_transpose(U), _matmul(self.two, U)))

    @cached_property
    def is_psd(self) -> bool:
        m = self.size
        for r in range(1, m + 1):
            for idx in itertools.combinations(range(m), r):
                if det_int([[self.two[i][j] for j in idx] for i in idx]) < 0:
                    return False
        return True

    @cached_property
    def is_pd(self) -> bool:
        return all(det_int([row[:r] for row in self.two[:r]]) > 0 for r in range(1, self.size + 1))

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Fraction]]:
        return [[Fraction(self.two[i][j], 2) for j in cols] for i in rows]

    def __eq__(self, other):
        return isinstance(other, HalfIntMat) and self.two == other.two

    def __hash__(self):
        return hash(self.two)

    def __repr__(self):
        return f"HalfIntMat(2B={[list(r) for r in self.two]})"

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.two]


def block_matrix(A1: HalfIntMat, A2: HalfIntMat, R: Sequence[Sequence[int]]) -> HalfIntMat:
    """[[A1, R/2], [R^t/2, A2]] for an integral n1 x n2 matrix R."""
    n1, n2 = A1.size, A2.size
    two = [[0] * (n1 + n2) for _ in range(n1 + n2)]
    for i in range(n1):
        for j in range(n1):
            two[i][j] = A1.two[i][j]
    for i in range(n2):
        for j in range(n2):
            two[n1 + i][n1 + j] = A2.two[i][j]
    for i in range(n1):
        for j in range(n2):
            two[i][n1 + j] = int(R[i][j])
            two[n1 + j][i] = int(R[i][j])
    return HalfIntMat(two)


def reduce_nondegenerate(B: HalfIntMat) -> tuple[HalfIntMat, int]:
    """Return (Btilde, m) with B ~_Z Btilde _|_ 0 and Btilde positive definite."""
    if not B.is_psd:
        raise NotPSD(f"{B!r} is not positive semidefinite")
    H, U, r = column_echelon(B.two)
    U1 = [row[:r] for row in U]
    Bt = B.transform(U1)
    if r and Bt.det2 <= 0:
        raise AssertionError("nondegenerate kernel of a psd matrix must be positive definite")
    return Bt, r


# ---------------------------------------------------------------------------
# discriminant splitting


class DiscSplit(tuple):
    """(d, f) with (-1)^{m/2} det(2B) = d f^2 and d a fundamental discriminant or 1."""

    __slots__ = ()

    def __new__(cls, d: int, f: int):
        return super().__new__(cls, (d, f))

    @property
    def d(self) -> int:
        return self[0]

    @property
    def f(self) -> int:
        return self[1]


def disc_split(B: HalfIntMat) -> DiscSplit:
    m = B.size
    if m % 2:
        raise ValueError("disc_split needs even rank")
    if m == 0:
        return DiscSplit(1, 1)
    n = (-1) ** (m // 2) * B.det2
    d, f = fundamental_discriminant(n)
    assert is_fundamental_discriminant(d) and d * f * f == n
    return DiscSplit(d, f)


# ---------------------------------------------------------------------------
# cache keys (reduction only; uniqueness is not needed for correctness)


def _reduce_gram(G: list[list[int]]) -> list[list[int]]:
    n = len(G)
    G = [list(r) for r in G]
    changed = True
    while changed:
        changed = False
        order = sorted(range(n), key=lambda i: G[i][i])
        if order != list(range(n)):
            G = [[G[i][j] for j in order] for i in order]
        for i in range(n):
            gii = G[i][i]
            if gii == 0:
                continue
            for j in range(n):
                if j == i or 2 * abs(G[i][j]) <= gii:
                    continue
                q = (2 * G[i][j] + gii) // (2 * gii)
                # basis vector j -= q * basis vector i
                for r in range(n):
                    G[r][j] -= q * G[r][i]
                for c in range(n):
                    G[j][c] -= q * G[i][c]
                changed = True
    for j in range(1, n):
        first = next((G[i][j] for i in range(j) if G[i][j]), 0)
        if first < 0:
            for r in range(n):
                G[r][j] = -G[r][j]
            for c in range(n):
                G[j][c] = -G[j][c]
    return G


def class_key(B: HalfIntMat) -> tuple:
    """A Z-equivalent representative used as a cache key."""
    return tuple(tuple(r) for r in _reduce_gram([list(r) for r in B.two]))


# ---------------------------------------------------------------------------
# block enumeration


def _principal_minors_ok(S: np.ndarray) -> np.ndarray:
    """Vectorized exact psd test for a stack of small integer symmetric matrices."""
    n = S.shape[-1]
    ok = np.ones(S.shape[0], dtype=bool)
    for r in range(1, n + 1):
        for idx in itertools.combinations(range(n), r):
            sub = S[:, idx][:, :, idx]
            ok &= _det_small(sub) >= 0
    return ok


def _det_small(M: np.ndarray) -> np.ndarray:
    n = M.shape[-1]
    if n == 1:
        return M[:, 0, 0]
    if n == 2:
        return M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
    if n == 3:
        return (
            M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
            - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
            + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0])
        )
    raise ValueError("only sizes up to 3 are vectorized")


def _adjugate(M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * det_int(minor)
    return adj


def enumerate_R_block(A1: HalfIntMat, A2: HalfIntMat) -> list[np.ndarray]:
    """All integral R with [[A1, R/2], [R^t/2, A2]] positive semidefinite.

    Candidates come from the 2x2 minor bound r_ij^2 <= 4 (A1)_ii (A2)_jj; the
    filter is the exact Schur-complement criterion det(P) Q - R^t adj(P) R >= 0
    with P = 2 A1 and Q = 2 A2.
    """
    if not (A1.is_pd and A2.is_pd):
        raise ValueError("enumerate_R_block needs positive definite blocks")
    n1, n2 = A1.size, A2.size
    if n2 > 3:
        raise ValueError("second block larger than 3 is not supported")
    P = [list(r) for r in A1.two]
    Q = np.array(A2.two, dtype=np.int64)
    dP = det_int(P)
    adjP = np.array(_adjugate(P), dtype=np.int64)
    ranges = []
    for i in range(n1):
        for j in range(n2):
            bound = 0
            lim = A1.two[i][i] * A2.two[j][j]  # = 4 a_ii b_jj
            while (bound + 1) ** 2 <= lim:
                bound += 1
            ranges.append(np.arange(-bound, bound + 1, dtype=np.int64))
    grids = np.meshgrid(*ranges, indexing="ij")
    Rs = np.stack([g.ravel() for g in grids], axis=1).reshape(-1, n1, n2)
    S = dP * Q[None, :, :] - np.einsum("kia,ij,kjb->kab", Rs, adjP, Rs)
    keep = _principal_minors_ok(S)
    return [R for R in Rs[keep]]


# ---------------------------------------------------------------------------
# E8 oracle

_e8_lock = threading.Lock()
_e8_cache: dict[int, np.ndarray] = {}


def e8_vectors(max_norm: int) -> np.ndarray:
    """E8 vectors of norm <= max_norm in doubled coordinates (entries of 2x).

    E8 = D8 u (D8 + (1/2,...,1/2)); doubled coordinates are all even with sum
    divisible by 4, or all odd with sum divisible by 4.
    """
    with _e8_lock:
        if max_norm in _e8_cache:
            return _e8_cache[max_norm]
        lim = 4 * max_norm  # doubled norm bound
        out = []
        b = 0
        while (b + 2) ** 2 <= lim:
            b += 2
        evens = np.arange(-b, b + 1, 2, dtype=np.int64)
        bo = 1
        while (bo + 2) ** 2 <= lim:
            bo += 2
        odds = np.arange(-bo, bo + 1, 2, dtype=np.int64)
        for vals in (evens, odds):
            pts = np.zeros((1, 0), dtype=np.int64)
            for _ in range(8):
                pts = np.concatenate(
                    [np.repeat(pts, len(vals), axis=0), np.tile(vals, len(pts))[:, None]], axis=1
                )
                pts = pts[(pts**2).sum(axis=1) <= lim]
            pts = pts[pts.sum(axis=1) % 4 == 0]
            out.append(pts)
        vecs = np.concatenate(out)
        _e8_cache[max_norm] = vecs
        return vecs


def e8_pair_count(T: HalfIntMat) -> int:
    """#{X in E8^n : half-Gram(X) = T} for n <= 2, by direct enumeration."""
    n = T.size
    if n == 0:
        return 1
    if n > 2:
        raise ValueError("e8_pair_count supports n <= 2")
    diag = [T.two[i][i] // 2 for i in range(n)]
    V = e8_vectors(2 * max(diag + [0]))
    norms = (V**2).sum(axis=1)  # = 4 |x|^2 = 8 T_ii
    if n == 1:
        if diag[0] == 0:
            return 1
        return int((norms == 8 * diag[0]).sum())
    X = V[norms == 8 * diag[0]] if diag[0] else np.zeros((1, 8), dtype=np.int64)
    Y = V[norms == 8 * diag[1]] if diag[1] else np.zeros((1, 8), dtype=np.int64)
    # x . y = 2 T_12 = T.two[0][1]; doubled coordinates scale dots by 4
    return int((X @ Y.T == 4 * T.two[0][1]).sum())


def psd_matrices_by_trace(n: int, max_trace: int) -> Iterable[HalfIntMat]:
    """Every psd half-integral n x n matrix with trace <= max_trace (n <= 2)."""
    if n == 1:
        for a in range(max_trace + 1):
            yield HalfIntMat([[2 * a]])
        return
    if n != 2:
        raise ValueError("only n <= 2")
    for a in range(max_trace + 1):
        for c in range(max_trace + 1 - a):
            b = 0
            while b * b <= 4 * a * c:
                for s in ((b, -b) if b else (0,)):
                    yield HalfIntMat([[2 * a, s], [s, 2 * c]])
                b += 1
