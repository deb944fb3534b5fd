"""Fourier coefficients of the genus-4 Ikeda lift and of its Miyawaki restriction."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .kernel import AlphaRingElem, alpha_symmetrize, as_scalar
from .modforms import Eigenform, PlusForm, dim_sk, plus_space_eigenforms
from .qforms import HalfIntMat, block_matrix, disc_split, enumerate_R_block
from .siegel_series import fp_evaluate_alpha, fp_polynomial

__all__ = ["LiftContext", "ikeda_fc", "miyawaki_fc", "miyawaki_terms"]


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    n = abs(n)
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class LiftContext:
    """h in the plus space of weight k + 1/2 and its Shimura image f in S_{2k}."""

    k: int
    h: PlusForm
    f: Eigenform
    n: int = 1

    def __post_init__(self):
        if self.n != 1:
            raise ValueError("only the genus-4 lift (n = 1) is implemented")
        if self.h.c(1) != 1:
            raise ValueError("h must be normalized with c_h(1) = 1")
        if self.f.weight != 2 * self.k:
            raise ValueError("f must have weight 2k")

    @classmethod
    def for_case(cls, k: int, embedding: str = "plus") -> "LiftContext":
        pairs = plus_space_eigenforms(k)
        idx = 0 if embedding == "plus" or len(pairs) == 1 else 1
        h, f = pairs[idx]
        return cls(k, h, f)

    def scaled(self, c) -> "LiftContext":
        """Same context with h replaced by c*h (skips the normalization check)."""
        obj = object.__new__(LiftContext)
        object.__setattr__(obj, "k", self.k)
        object.__setattr__(obj, "h", self.h.scale(c))
        object.__setattr__(obj, "f", self.f)
        object.__setattr__(obj, "n", self.n)
        return obj


def ikeda_fc(T: HalfIntMat, ctx: LiftContext):
    """c(T) = c_h(|d_T|) f_T^{k-1/2} prod_{p | f_T} alpha_p^{-e_p} F_p(T, p^{-n-3/2} alpha_p)."""
    if T.size != 2 * ctx.n + 2:
        raise ValueError("T has the wrong size")
    if not T.is_pd:
        return Fraction(0)
    d, f = disc_split(T)
    value = ctx.h.c(abs(d))
    if not value:
        return Fraction(0)
    k = ctx.k
    for p in _prime_factors(f):
        e = 0
        g = f
        while g % p == 0:
            g //= p
            e += 1
        ap = ctx.f.a(p)
        F = fp_polynomial(T, p)
        # f^{k-1/2} alpha^{-e} = (p^{2k-1}/beta)^e = conj(beta)^e
        beta_bar = AlphaRingElem.beta(p, k, ap).conjugate_root()
        local = fp_evaluate_alpha(F, p, k, ctx.n, ap) * beta_bar**e
        value = value * alpha_symmetrize(local)
    return as_scalar(value)


def miyawaki_terms(A: HalfIntMat, ctx: LiftContext) -> Counter:
    """Multiset of (|d_T|, f_T) over the positive definite [[A, r/2], [r^t/2, 1]]."""
    one = HalfIntMat([[2]])
    out = Counter()
    for r in enumerate_R_block(A, one):
        T = block_matrix(A, one, r.tolist())
        if T.is_pd:
            d, f = disc_split(T)
            out[(abs(d), f)] += 1
    return out


def miyawaki_fc(A: HalfIntMat, ctx: LiftContext):
    """sum_r c_I([[A, r/2], [r^t/2, 1]]): the A-th coefficient of the normalized
    Miyawaki lift attached to the unique normalized eigenform of weight k + 2."""
    if dim_sk(ctx.k + 2) != 1:
        raise ValueError(f"dim S_{ctx.k + 2} must be 1")
    if A.size != 3:
        raise ValueError("A must be 3x3")
    one = HalfIntMat([[2]])
    total = Fraction(0)
    for r in enumerate_R_block(A, one):
        T = block_matrix(A, one, r.tolist())
        if T.is_pd:
            total = total + ikeda_fc(T, ctx)
    return as_scalar(total)
