"""Local invariants of rational quadratic forms.

Places are primes (ints) or :data:`INFINITY` for the real place.  Forms are
given by their diagonal coefficients (nonzero rationals).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RankNotFour
from .lattice import (
    QuadraticLattice,
    discriminant,
    padic_valuation,
    prime_factors,
    rational_diagonalize,
    signature,
)

INFINITY = "inf"


def _integer_rep(a) -> int:
    """An integer in the same square class as the nonzero rational ``a``."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("zero has no square class")
    return a.numerator * a.denominator


def _split(a: int, p: int) -> tuple[int, int]:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def is_padic_square(a, p) -> bool:
    """Whether the nonzero rational ``a`` is a square in ``Q_p`` (or ``R``)."""
    if p == INFINITY:
        return Fraction(a) > 0
    v, u = _split(_integer_rep(a), p)
    if v % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol ``(a, b)_p`` of nonzero rationals at a prime or the real place."""
    if p == INFINITY:
        return -1 if Fraction(a) < 0 and Fraction(b) < 0 else 1
    alpha, u = _split(_integer_rep(a), p)
    beta, w = _split(_integer_rep(b), p)
    if p == 2:
        eps_u, eps_w = ((u - 1) // 2) % 2, ((w - 1) // 2) % 2
        om_u, om_w = ((u * u - 1) // 8) % 2, ((w * w - 1) // 8) % 2
        e = eps_u * eps_w + alpha * om_w + beta * om_u
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre(u, p)
    if alpha % 2:
        sign *= legendre(w, p)
    return sign


def hasse_invariant(coefficients: Sequence, p) -> int:
    """Product of ``(a_i, a_j)_p`` over ``i < j``."""
    coeffs = list(coefficients)
    if any(Fraction(c) == 0 for c in coeffs):
        raise ValueError("diagonal form has a zero coefficient")
    eps = 1
    for i in range(len(coeffs)):
        for j in range(i + 1, len(coeffs)):
            eps *= hilbert_symbol(coeffs[i], coeffs[j], p)
    return eps


def relevant_places(lat: QuadraticLattice) -> list:
    """``2``, the primes dividing ``d(L)``, and the real place."""
    return sorted(set(prime_factors(2 * discriminant(lat)))) + [INFINITY]


def _require_rank_four(lat: QuadraticLattice):
    if lat.rank != 4:
        raise RankNotFour(f"expected a rank-4 lattice, got rank {lat.rank}")


def is_anisotropic_local(lat: QuadraticLattice, p) -> bool:
    """Anisotropy of the rank-4 form over ``Q_p`` or ``R``.

    Over ``Q_p`` a quaternary form is anisotropic exactly when its
    determinant is a square and its Hasse invariant equals ``-(-1, -1)_p``.
    """
    _require_rank_four(lat)
    if p == INFINITY:
        sig = signature(lat)
        return sig.positives == 0 or sig.negatives == 0
    f = rational_diagonalize(lat)
    d = Fraction(1)
    for c in f:
        d *= c
    return is_padic_square(d, p) and hasse_invariant(f, p) == -hilbert_symbol(-1, -1, p)


def local_anisotropy(lat: QuadraticLattice) -> dict:
    """Per-place verdicts over :func:`relevant_places`."""
    _require_rank_four(lat)
    return {p: is_anisotropic_local(lat, p) for p in relevant_places(lat)}


def is_anisotropic_global(lat: QuadraticLattice) -> bool:
    """Anisotropy over ``Q``; a rank-4 form is isotropic at every other prime."""
    _require_rank_four(lat)
    verdicts = local_anisotropy(lat)
    return any(verdicts.values())


def squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for p in prime_factors(n):
        v, _ = _split(n, p)
        if v % 2:
            out *= p
    return sign * out


def square_classes(values: Iterable, p) -> list:
    """Distinct ``Q_p`` square classes among ``values`` (first representatives)."""
    reps: list = []
    for x in values:
        if not any(is_padic_square(Fraction(x) / r, p) for r in reps):
            reps.append(x)
    return reps


__all__ = [
    "INFINITY",
    "hilbert_symbol",
    "hasse_invariant",
    "is_padic_square",
    "is_anisotropic_local",
    "is_anisotropic_global",
    "local_anisotropy",
    "relevant_places",
    "padic_valuation",
    "squarefree_part",
]
