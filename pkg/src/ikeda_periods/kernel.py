"""Exact scalar arithmetic and the classical special values everything else uses.

Scalars are :class:`fractions.Fraction` or :class:`QuadScalar` (elements of a real
quadratic field).  Nothing in the package ever touches a float.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial, gcd

__all__ = [
    "AlphaRingElem",
    "NonRationalLocalFactor",
    "QuadScalar",
    "alpha_symmetrize",
    "as_scalar",
    "bernoulli",
    "bernoulli_poly",
    "conj",
    "dirichlet_L_neg",
    "fundamental_discriminant",
    "is_fundamental_discriminant",
    "kronecker",
    "xi_tilde_even",
    "zeta_neg",
]


class NonRationalLocalFactor(ArithmeticError):
    """A local Ikeda factor kept a nonzero beta-component after reduction."""


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta values

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Return B_n with the convention B_1 = -1/2 (so zeta(0) = -1/2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(_bern):
        with _bern_lock:
            while len(_bern) <= n:
                m = len(_bern)
                s = sum(comb(m + 1, j) * _bern[j] for j in range(m))
                _bern.append(-s / (m + 1))
    return _bern[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def zeta_neg(s: int) -> Fraction:
    """Riemann zeta at a nonpositive integer ``s``."""
    if s > 0:
        raise ValueError("zeta_neg needs s <= 0")
    if s == 0:
        return Fraction(-1, 2)
    n = 1 - s
    return -bernoulli(n) / n


def xi_tilde_even(i: int) -> Fraction:
    """Gamma_C(2i) zeta(2i) = 2 (2 pi)^{-2i} Gamma(2i) zeta(2i), a rational number."""
    if i < 1:
        raise ValueError("i must be positive")
    # zeta(2i) = (-1)^{i+1} B_{2i} (2pi)^{2i} / (2 (2i)!)
    return Fraction((-1) ** (i + 1)) * bernoulli(2 * i) * factorial(2 * i - 1) / factorial(2 * i)


# ---------------------------------------------------------------------------
# Characters


def _squarefree_part(n: int) -> tuple[int, int]:
    """Write |n| = s * f^2 with s squarefree; return (sign(n)*s, f)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, f = 1, 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            f *= d
        if n % d == 0:
            n //= d
            s *= d
        d += 1
    return sign * s * n, f


def fundamental_discriminant(n: int) -> tuple[int, int]:
    """Split a nonzero integer as n = D * f^2 with D a fundamental discriminant or 1."""
    if n == 0:
        raise ValueError("zero has no discriminant")
    s, f = _squarefree_part(n)
    if s % 4 == 1:
        return s, f
    if f % 2:
        raise ValueError(f"{n} is not a discriminant (not 0,1 mod 4)")
    return 4 * s, f // 2


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    try:
        D, f = fundamental_discriminant(d)
    except ValueError:
        return False
    return f == 1 and D == d


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for a fundamental discriminant D (or D = 1)."""
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if D == 1:
        return 1
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * _jacobi(D, n)


def dirichlet_L_neg(D: int, s: int) -> Fraction:
    """L(s, chi_D) at a nonpositive integer via generalized Bernoulli numbers.

    D = 1 is the principal character, for which L(s, chi_1) = zeta(s).
    """
    if s > 0:
        raise ValueError("dirichlet_L_neg needs s <= 0")
    if D == 1:
        return zeta_neg(s)
    n = 1 - s
    f = abs(D)
    total = sum(kronecker(D, a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1))
    return -Fraction(f) ** (n - 1) * total / n


# ---------------------------------------------------------------------------
# Real quadratic fields


class QuadScalar:
    """a + b*lam with lam^2 = d; d is kept exactly as given."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 0):
        if d <= 0 and b:
            raise ValueError("QuadScalar needs a positive d when b != 0")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.d != self.d and other.b and self.b:
                raise ValueError(f"incompatible quadratic fields d={self.d}, d={other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadScalar(other, 0, self.d)
        return NotImplemented

    def _field(self, other: "QuadScalar") -> int:
        return self.d if self.b or not other.b else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadScalar(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conj(self) -> "QuadScalar":
        return QuadScalar(self.a, -self.b, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        return self * o.conj() * QuadScalar(1 / n, 0, o.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return QuadScalar(1, 0, self.d) / self ** (-e)
        result = QuadScalar(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadScalar):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.d == other.d
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"QuadScalar({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


def as_scalar(x):
    """Collapse a QuadScalar with zero irrational part to a Fraction."""
    if isinstance(x, QuadScalar) and x.b == 0:
        return x.a
    if isinstance(x, int):
        return Fraction(x)
    return x


def conj(x):
    """Galois conjugation lam -> -lam (identity on rationals)."""
    if isinstance(x, QuadScalar):
        return x.conj()
    return x


def format_scalar(x) -> str:
    """Render as 'a/b' or '(a+b*sqrt(d))/c'."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return str(x)
    den = x.a.denominator * x.b.denominator // gcd(x.a.denominator, x.b.denominator)
    na = x.a * den
    nb = x.b * den
    sign = "+" if nb >= 0 else "-"
    body = f"{na.numerator}{sign}{abs(nb.numerator)}*sqrt({x.d})"
    return f"({body})" if den == 1 else f"({body})/{den}"


# ---------------------------------------------------------------------------
# The ring Q(f)[beta] / (beta^2 - a_p beta + p^{2k-1})


class AlphaRingElem:
    """c0 + c1*beta where beta = p^{(2k-1)/2} alpha_p is a root of
    beta^2 - a_p beta + p^{2k-1}."""

    __slots__ = ("c0", "c1", "p", "k", "ap")

    def __init__(self, c0, c1, p: int, k: int, ap):
        self.c0 = c0
        self.c1 = c1
        self.p = p
        self.k = k
        self.ap = ap

    @classmethod
    def beta(cls, p, k, ap):
        return cls(Fraction(0), Fraction(1), p, k, ap)

    @classmethod
    def constant(cls, c, p, k, ap):
        return cls(c, Fraction(0), p, k, ap)

    def conjugate_root(self) -> "AlphaRingElem":
        """Apply beta -> a_p - beta."""
        return AlphaRingElem(self.c0 + self.c1 * self.ap, -self.c1, self.p, self.k, self.ap)

    def _lift(self, other):
        if isinstance(other, AlphaRingElem):
            return other
        return AlphaRingElem(other, Fraction(0), self.p, self.k, self.ap)

    def __add__(self, other):
        o = self._lift(other)
        return AlphaRingElem(self.c0 + o.c0, self.c1 + o.c1, self.p, self.k, self.ap)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return AlphaRingElem(self.c0 - o.c0, self.c1 - o.c1, self.p, self.k, self.ap)

    def __mul__(self, other):
        o = self._lift(other)
        # beta^2 = a_p beta - p^{2k-1}
        cc = self.c1 * o.c1
        norm = self.p ** (2 * self.k - 1)
        c0 = self.c0 * o.c0 - cc * norm
        c1 = self.c0 * o.c1 + self.c1 * o.c0 + cc * self.ap
        return AlphaRingElem(c0, c1, self.p, self.k, self.ap)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = AlphaRingElem.constant(Fraction(1), self.p, self.k, self.ap)
        for _ in range(e):
            result = result * self
        return result

    def __repr__(self):
        return f"AlphaRingElem({self.c0} + {self.c1}*beta; p={self.p}, k={self.k})"


def alpha_symmetrize(e: AlphaRingElem):
    """Return the beta-free part of a completed local factor; it must have no beta part."""
    if e.c1 != 0:
        raise NonRationalLocalFactor(f"local factor keeps beta-coefficient {e.c1}")
    return e.c0
