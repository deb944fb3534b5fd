"""Fourier coefficients of normalized Siegel Eisenstein series E*_{g,l}."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .kernel import dirichlet_L_neg, zeta_neg
from .qforms import HalfIntMat, class_key, disc_split, reduce_nondegenerate
from .qseries import QSeries
from .siegel_series import fp_evaluate, fp_polynomial, local_factor_primes

__all__ = ["EisensteinSpec", "e1_star", "fc_even_genus", "sigma", "z_norm"]


def z_norm(n: int, l: int) -> Fraction:
    """Z(n, l) = zeta(1-l) prod_{i=1}^{[n/2]} zeta(1+2i-2l)."""
    if l % 2 or l < 2:
        raise ValueError("l must be even and at least 2")
    out = zeta_neg(1 - l)
    for i in range(1, n // 2 + 1):
        out *= zeta_neg(1 + 2 * i - 2 * l)
    return out


@dataclass(frozen=True)
class EisensteinSpec:
    genus: int
    weight: int

    def __post_init__(self):
        g, l = self.genus, self.weight
        if l % 2:
            raise ValueError("weight must be even")
        if g == 1:
            if l < 4:
                raise ValueError("genus-1 weight must be at least 4")
            return
        if g % 2 or g < 2:
            raise ValueError("genus must be 1 or even")
        n = g // 2
        if l < n + 1:
            raise ValueError(f"weight {l} below n+1 = {n + 1}")
        if l == n + 1 and l % 4 == 2:
            raise ValueError("l = n+1 = 2 mod 4 is the excluded non-holomorphic case")

    @property
    def z(self) -> Fraction:
        return z_norm(self.genus, self.weight)


_fc_lock = threading.Lock()
_fc_cache: dict[tuple, Fraction] = {}


def _local_product(Bt: HalfIntMat, l: int) -> Fraction:
    m = Bt.size
    out = Fraction(1)
    for p in local_factor_primes(Bt):
        F = fp_polynomial(Bt, p)
        if F.degree:
            out *= fp_evaluate(F, Fraction(p) ** (l - m - 1))
    return out


def fc_even_genus(B: HalfIntMat, l: int) -> Fraction:
    """c_{2n,l}(B) for psd B of size 2n (or genus 1 when B is 1x1)."""
    g = B.size
    spec = EisensteinSpec(g, l)
    if g == 1:
        b = B.entry(0, 0)
        return zeta_neg(1 - l) if b == 0 else 2 * sigma(l - 1, int(b))
    n = g // 2
    Bt, m = reduce_nondegenerate(B)
    if m == 0:
        return spec.z
    key = (class_key(Bt), g, l)
    with _fc_lock:
        hit = _fc_cache.get(key)
    if hit is not None:
        return hit
    out = Fraction(2) ** ((m + 1) // 2) * _local_product(Bt, l)
    if m % 2 == 0:
        for i in range(m // 2 + 1, n + 1):
            out *= zeta_neg(1 + 2 * i - 2 * l)
        out *= dirichlet_L_neg(disc_split(Bt).d, 1 + m // 2 - l)
    else:
        for i in range((m + 1) // 2, n + 1):
            out *= zeta_neg(1 + 2 * i - 2 * l)
    with _fc_lock:
        _fc_cache.setdefault(key, out)
    return out


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def e1_star(l: int, N: int) -> QSeries:
    """Genus-1 E*_l: c(0) = zeta(1-l), c(m) = 2 sigma_{l-1}(m)."""
    EisensteinSpec(1, l)
    coeffs = [zeta_neg(1 - l)] + [Fraction(2 * sigma(l - 1, m)) for m in range(1, N + 1)]
    return QSeries(coeffs, l)
