"""Truncated q-expansions over exact scalars."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .kernel import QuadScalar, as_scalar

__all__ = [
    "InconsistentSystem",
    "QSeries",
    "RankDeficient",
    "coords_in_span",
    "dilate",
    "mul",
    "scalar_from_json",
    "scalar_to_json",
    "series_document",
    "series_from_document",
    "solve_linear",
    "theta_derivative",
]

DEFAULT_PRECISION = 200


class RankDeficient(ArithmeticError):
    pass


class InconsistentSystem(ArithmeticError):
    pass


class QSeries:
    """sum_{n=0}^{N} c(n) q^n, dense, known exactly up to and including q^N."""

    __slots__ = ("coeffs", "weight")

    def __init__(self, coeffs: Sequence, weight=None):
        self.coeffs = tuple(as_scalar(c) if not isinstance(c, int) else Fraction(c) for c in coeffs)
        self.weight = weight

    @property
    def precision(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        if n < 0:
            return Fraction(0)
        if n > self.precision:
            raise IndexError(f"coefficient q^{n} beyond precision {self.precision}")
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, N: int) -> "QSeries":
        if N > self.precision:
            raise IndexError(f"cannot extend precision {self.precision} to {N}")
        return QSeries(self.coeffs[: N + 1], self.weight)

    def __add__(self, other):
        N = min(self.precision, other.precision)
        return QSeries([a + b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1])], self.weight)

    def __sub__(self, other):
        N = min(self.precision, other.precision)
        return QSeries([a - b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1])], self.weight)

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.weight)

    def scale(self, c) -> "QSeries":
        return QSeries([c * x for x in self.coeffs], self.weight)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def map(self, fn) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.weight)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        N = min(self.precision, other.precision)
        return all(a == b for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1]))

    def __repr__(self):
        head = " + ".join(f"({c})q^{n}" for n, c in enumerate(self.coeffs[:6]) if c)
        return f"QSeries({head or 0} + O(q^{self.precision + 1}))"

    def to_json(self) -> list:
        return [scalar_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: list, weight=None, d: int | None = None) -> "QSeries":
        return cls([scalar_from_json(x, d) for x in data], weight)


def _add_weights(a, b):
    if a is None or b is None:
        return None
    return Fraction(a) + Fraction(b)


def mul(a: QSeries, b: QSeries) -> QSeries:
    N = min(a.precision, b.precision)
    ca, cb = a.coeffs, b.coeffs
    nz_a = [(i, c) for i, c in enumerate(ca[: N + 1]) if c]
    out = [Fraction(0)] * (N + 1)
    for i, x in nz_a:
        for j in range(N + 1 - i):
            y = cb[j]
            if y:
                out[i + j] += x * y
    return QSeries(out, _add_weights(a.weight, b.weight))


def theta_derivative(a: QSeries) -> QSeries:
    """q d/dq, i.e. (2 pi i)^{-1} d/dtau; raises the weight by 2."""
    w = None if a.weight is None else Fraction(a.weight) + 2
    return QSeries([n * c for n, c in enumerate(a.coeffs)], w)


def dilate(a: QSeries, m: int) -> QSeries:
    """q -> q^m; known through q^{m N}."""
    if m < 1:
        raise ValueError("dilation factor must be positive")
    out = [Fraction(0)] * (m * a.precision + 1)
    for n, c in enumerate(a.coeffs):
        out[m * n] = c
    return QSeries(out, a.weight)


# ---------------------------------------------------------------------------
# exact linear algebra over Q or Q(lam)


def solve_linear(rows: list[list], rhs: list) -> list:
    """Solve a square system exactly by Gaussian elimination."""
    n = len(rows)
    M = [[as_scalar(x) for x in r] + [as_scalar(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise RankDeficient("singular system")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [as_scalar(M[r][n]) for r in range(n)]


def coords_in_span(target: QSeries, basis: list[QSeries], n_range: Sequence[int] | None = None) -> list:
    """Coordinates of ``target`` in ``basis``, read off from the indices ``n_range``
    and then checked against every coefficient the inputs share."""
    d = len(basis)
    N = min([target.precision] + [b.precision for b in basis])
    if n_range is None:
        # pick the first d indices giving an invertible minor
        n_range = []
        chosen: list[list] = []
        for n in range(N + 1):
            trial = chosen + [[b[n] for b in basis]]
            if _rank(trial) == len(trial):
                chosen = trial
                n_range.append(n)
                if len(n_range) == d:
                    break
        if len(n_range) < d:
            raise RankDeficient("basis is linearly dependent on the available coefficients")
    n_range = list(n_range)
    if len(n_range) != d:
        raise RankDeficient("need exactly one index per basis element")
    x = solve_linear([[b[n] for b in basis] for n in n_range], [target[n] for n in n_range])
    for n in range(N + 1):
        if sum((xi * b[n] for xi, b in zip(x, basis)), Fraction(0)) != target[n]:
            raise InconsistentSystem(f"target not in span (mismatch at q^{n})")
    return x


def _rank(rows: list[list]) -> int:
    M = [list(r) for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for r in range(rank + 1, len(M)):
            if M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# serialization


def scalar_to_json(x):
    """'num/den' for rationals, a pair ['num/den', 'num/den'] for a + b*lam."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    return [str(x.a), str(x.b)]


def scalar_from_json(v, d: int | None = None):
    if isinstance(v, list):
        if d is None:
            raise ValueError("quadratic pair needs the field parameter d")
        a, b = v
        return as_scalar(QuadScalar(Fraction(a), Fraction(b), d))
    return Fraction(v)


def series_document(series: QSeries) -> dict:
    """JSON document for a q-expansion; ``sqrt`` names d when pairs are present."""
    d = next((c.d for c in series.coeffs if isinstance(c, QuadScalar)), None)
    doc = {"precision": series.precision, "coeffs": series.to_json()}
    if series.weight is not None:
        doc["weight"] = str(series.weight)
    if d is not None:
        doc["sqrt"] = d
    return doc


def series_from_document(doc: dict) -> QSeries:
    d = doc.get("sqrt")
    w = Fraction(doc["weight"]) if "weight" in doc else None
    return QSeries([scalar_from_json(v, d) for v in doc["coeffs"]], w)
