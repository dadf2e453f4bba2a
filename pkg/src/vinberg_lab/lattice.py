"""Exact linear algebra for integral quadratic lattices.

Gram matrices are stored as tuples of tuples of Python ints; everything that
leaves the integers (dual lattices, diagonal forms) is done with
:class:`fractions.Fraction`.  Nothing in this module touches floating point.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Sequence

from .errors import ConditionsNotMet

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# small matrix helpers


def _to_rows(m) -> Matrix:
    return [list(r) for r in m]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def congruent(p, g):
    """Return ``p g p^T``."""
    return matmul(matmul(p, g), transpose(p))


def determinant(m) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination.

    Exact for integer input (returns int) and for Fraction input.
    """
    a = _to_rows(m)
    n = len(a)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in a for x in row):
        return _fraction_det(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _fraction_det(a) -> Fraction:
    a = [[Fraction(x) for x in row] for row in a]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, n):
            f = a[r][k] / a[k][k]
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return det


def solve(m, rhs) -> list[Fraction]:
    """Solve ``m x = rhs`` exactly; ``m`` must be square and invertible."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(m, rhs)]
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        for r in range(n):
            if r != k and a[r][k] != 0:
                f = a[r][k] / a[k][k]
                for c in range(k, n + 1):
                    a[r][c] -= f * a[k][c]
    return [a[i][n] / a[i][i] for i in range(n)]


def inverse(m) -> list[list[Fraction]]:
    n = len(m)
    cols = [solve(m, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def leading_minors(m) -> list:
    return [determinant([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_positive_definite(m) -> bool:
    """Sylvester's criterion on exact leading principal minors."""
    return all(x > 0 for x in leading_minors(m))


# ---------------------------------------------------------------------------
# normal forms


def smith_normal_form(m) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form of an integer matrix.

    Returns ``(u, d, v)`` with ``u`` and ``v`` unimodular and ``u m v == d``,
    ``d`` diagonal with nonnegative entries each dividing the next.
    """
    a = _to_rows(m)
    rows, cols = len(a), len(a[0]) if a else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        a[dst] = [x - f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for r in a:
            r[dst] -= f * r[src]
        for r in v:
            r[dst] -= f * r[src]

    for t in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not nz:
                break
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // piv
                if q:
                    add_row(i, t, q)
                clean &= a[i][t] == 0
            for j in range(t + 1, cols):
                q = a[t][j] // piv
                if q:
                    add_col(j, t, q)
                clean &= a[t][j] == 0
            if not clean:
                continue
            # pivot must divide the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
            u[t] = [x + y for x, y in zip(u[t], u[bad[0]])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def hermite_basis(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form basis of the lattice spanned by ``rows``.

    The result is upper triangular with positive pivots and entries above each
    pivot reduced modulo it, hence canonical for the lattice.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return []
    r0 = 0
    for c in range(len(a[0])):
        while True:
            nz = [i for i in range(r0, len(a)) if a[i][c]]
            if not nz:
                break
            i = min(nz, key=lambda k: abs(a[k][c]))
            a[r0], a[i] = a[i], a[r0]
            for k in range(r0 + 1, len(a)):
                q = a[k][c] // a[r0][c]
                if q:
                    a[k] = [x - q * y for x, y in zip(a[k], a[r0])]
            if all(a[k][c] == 0 for k in range(r0 + 1, len(a))):
                break
        if r0 >= len(a) or a[r0][c] == 0:
            continue
        if a[r0][c] < 0:
            a[r0] = [-x for x in a[r0]]
        for k in range(r0):
            q = a[k][c] // a[r0][c]
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], a[r0])]
        r0 += 1
        if r0 == len(a):
            break
    return [r for r in a[:r0] if any(r)]


def rational_hermite_basis(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    den = 1
    for r in rows:
        for x in r:
            den = math.lcm(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in r] for r in rows]
    return [[Fraction(x, den) for x in r] for r in hermite_basis(ints)]


# ---------------------------------------------------------------------------
# lattices


class Signature(NamedTuple):
    positives: int
    negatives: int


@dataclass(frozen=True)
class QuadraticLattice:
    """An integral lattice given by the Gram matrix of a basis."""

    gram: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        if determinant(g) == 0:
            raise ValueError("Gram matrix must be nondegenerate")

    @classmethod
    def diagonal(cls, *entries: int, name: str | None = None) -> QuadraticLattice:
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)), name)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def inner(self, x, y):
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j])

    def to_json(self) -> str:
        return dumps_lattice(self)

    def __str__(self):
        label = f"{self.name}: " if self.name else ""
        return label + "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.gram) + "]"


def discriminant(lat: QuadraticLattice) -> int:
    return determinant(lat.gram)


def invariant_factors(lat: QuadraticLattice) -> tuple[int, ...]:
    _, d, _ = smith_normal_form(lat.gram)
    return tuple(d[i][i] for i in range(lat.rank))


def congruence_diagonalize(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Symmetric Gaussian elimination over the rationals.

    Returns ``(diag, p)`` with ``p gram p^T`` equal to ``diag(diag)``.  When no
    nonzero diagonal pivot is left, a basis vector is replaced by the sum of
    two so that the pivot becomes ``2 a_ij``.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                raise ValueError("degenerate form")
            i, j = pair
            # row/col i += row/col j
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for r in a:
                r[i] += r[j]
            p[i] = [x + y for x, y in zip(p[i], p[j])]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for r in a:
                r[k], r[piv] = r[piv], r[k]
            p[k], p[piv] = p[piv], p[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                for r in a:
                    r[i] -= f * r[k]
                p[i] = [x - f * y for x, y in zip(p[i], p[k])]
    return [a[i][i] for i in range(n)], p


def rational_diagonalize(lat: QuadraticLattice) -> list[Fraction]:
    return congruence_diagonalize(lat.gram)[0]


def signature(lat: QuadraticLattice) -> Signature:
    diag = rational_diagonalize(lat)
    pos = sum(1 for x in diag if x > 0)
    return Signature(pos, lat.rank - pos)


def dual_quotient(lat: QuadraticLattice) -> list[int]:
    """Cyclic orders of the discriminant group ``L*/L`` (trivial factors dropped)."""
    return [e for e in invariant_factors(lat) if e != 1]


def dual_generators(lat: QuadraticLattice) -> list[tuple[int, list[Fraction]]]:
    """Generators of ``L*/L`` as ``(order, coordinates in the basis of L)``."""
    _, d, v = smith_normal_form(lat.gram)
    gens = []
    for i in range(lat.rank):
        if d[i][i] > 1:
            gens.append((d[i][i], [Fraction(v[r][i], d[i][i]) for r in range(lat.rank)]))
    return gens


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


prime_factors = _prime_factors


def _inner_q(gram, x, y) -> Fraction:
    n = len(gram)
    return sum((x[i] * gram[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0))


def prime_index_glue(lat: QuadraticLattice, p: int) -> list[list[Fraction]]:
    """Glue vectors of order ``p`` in ``L*/L`` with integral norm.

    One representative per subgroup of order ``p``; each gives an integral
    overlattice ``L + Z v`` of index ``p``.
    """
    gens = [(d // p, g) for d, g in dual_generators(lat) if d % p == 0]
    out = []
    for coeffs in product(range(p), repeat=len(gens)):
        nz = [c for c in coeffs if c]
        if not nz or nz[0] != 1:
            continue
        v = [Fraction(0)] * lat.rank
        for c, (mult, g) in zip(coeffs, gens):
            if c:
                v = [a + c * mult * b for a, b in zip(v, g)]
        if _inner_q(lat.gram, v, v).denominator == 1:
            out.append(v)
    return out


@dataclass(frozen=True)
class Overlattice:
    """An overlattice together with its basis in the coordinates of the original lattice."""

    lattice: QuadraticLattice
    basis: tuple[tuple[Fraction, ...], ...]
    index: int


def _extend(gram, basis, glue) -> tuple[list[list[Fraction]], QuadraticLattice]:
    n = len(gram)
    gens = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)] + [glue]
    local = rational_hermite_basis(gens)
    new_gram = congruence_rational(local, gram)
    new_basis = [[sum(local[i][k] * basis[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return new_basis, QuadraticLattice(tuple(tuple(int(x) for x in r) for r in new_gram))


def congruence_rational(b, gram):
    bg = [[sum(Fraction(b[i][k]) * gram[k][j] for k in range(len(gram))) for j in range(len(gram))] for i in range(len(b))]
    out = [[sum(bg[i][k] * b[j][k] for k in range(len(gram))) for j in range(len(b))] for i in range(len(b))]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ValueError("overlattice is not integral")
    return out


def _canonical_key(basis) -> tuple:
    return tuple(tuple(r) for r in rational_hermite_basis(basis))


def all_overlattices(lat: QuadraticLattice) -> list[Overlattice]:
    """Every integral overlattice of finite index, including ``lat`` itself."""
    n = lat.rank
    start = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    seen = {_canonical_key(start): Overlattice(lat, tuple(map(tuple, start)), 1)}
    stack = [(lat, start)]
    d0 = abs(discriminant(lat))
    while stack:
        cur, basis = stack.pop()
        d = abs(discriminant(cur))
        for p in _prime_factors(d):
            if d % (p * p):
                continue
            for glue in prime_index_glue(cur, p):
                new_basis, new_lat = _extend(cur.gram, basis, glue)
                key = _canonical_key(new_basis)
                if key in seen:
                    continue
                index = math.isqrt(d0 // abs(discriminant(new_lat)))
                seen[key] = Overlattice(new_lat, tuple(map(tuple, new_basis)), index)
                stack.append((new_lat, new_basis))
    return sorted(seen.values(), key=lambda o: (o.index, o.basis))


def is_maximal(lat: QuadraticLattice) -> bool:
    d = abs(discriminant(lat))
    return not any(prime_index_glue(lat, p) for p in _prime_factors(d) if d % (p * p) == 0)


def maximal_overlattice_chain(lat: QuadraticLattice) -> list[Overlattice]:
    """Maximal overlattices of ``lat`` as sublattices of ``lat ⊗ Q`` (no isomorphism dedup)."""
    return [o for o in all_overlattices(lat) if is_maximal(o.lattice)]


def maximal_overlattices(lat: QuadraticLattice) -> list[QuadraticLattice]:
    """Maximal integral overlattices of ``lat``, one per isomorphism class.

    Classes are separated with :func:`is_isomorphic`; lattices outside its
    domain fall back to comparing Gram matrices literally.
    """
    reps: list[QuadraticLattice] = []
    for o in maximal_overlattice_chain(lat):
        m = o.lattice
        if not any(_same_class(m, r) for r in reps):
            reps.append(m)
    return reps


def _same_class(a: QuadraticLattice, b: QuadraticLattice) -> bool:
    try:
        return is_isomorphic(a, b)
    except ConditionsNotMet:
        return a.gram == b.gram


# ---------------------------------------------------------------------------
# local structure and the genus test


def padic_valuation(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class JordanComponent(NamedTuple):
    scale: int  # exponent j of the scale p^j
    rank: int
    det: Fraction  # determinant of the component with the scale divided out
    odd: bool  # only meaningful for p = 2


def jordan_decomposition(lat: QuadraticLattice, p: int) -> list[JordanComponent]:
    """Jordan splitting of ``lat ⊗ Z_p`` computed over ``Z_(p)``.

    For odd ``p`` the splitting is diagonal.  For ``p = 2`` a 2x2 block is
    split off whenever the minimal valuation is attained only off the
    diagonal; such blocks are even.
    """
    a = [[Fraction(x) for x in row] for row in lat.gram]
    blocks: list[tuple[int, int, Fraction, bool]] = []
    while a:
        n = len(a)
        m = min(padic_valuation(x, p) for row in a for x in row if x != 0)
        diag = [i for i in range(n) if a[i][i] != 0 and padic_valuation(a[i][i], p) == m]
        if diag:
            i = diag[0]
            idx = [i]
        else:
            i, j = next((i, j) for i in range(n) for j in range(i + 1, n)
                        if a[i][j] != 0 and padic_valuation(a[i][j], p) == m)
            if p != 2:
                # x_i <- x_i + x_j produces a diagonal pivot of valuation m
                a[i] = [x + y for x, y in zip(a[i], a[j])]
                for r in a:
                    r[i] += r[j]
                continue
            idx = [i, j]
        block = [[a[r][c] for c in idx] for r in idx]
        binv = inverse(block)
        rest = [k for k in range(n) if k not in idx]
        new = []
        for r in rest:
            coef = [sum(a[r][idx[t]] * binv[t][s] for t in range(len(idx))) for s in range(len(idx))]
            new.append([a[r][c] - sum(coef[s] * a[idx[s]][c] for s in range(len(idx))) for c in rest])
        blocks.append((m, len(idx), determinant(block), len(idx) == 1))
        a = new
    comps = []
    for scale in sorted({b[0] for b in blocks}):
        mine = [b for b in blocks if b[0] == scale]
        rank = sum(b[1] for b in mine)
        det = Fraction(1)
        for b in mine:
            det *= b[2]
        comps.append(JordanComponent(scale, rank, det / Fraction(p) ** (scale * rank), any(b[3] for b in mine)))
    return comps


def satisfies_genus_condition(lat: QuadraticLattice) -> bool:
    """For every prime ``p``, some two invariant factors share their ``p``-adic valuation."""
    factors = invariant_factors(lat)
    for p in _prime_factors(abs(discriminant(lat))):
        vals = [padic_valuation(e, p) for e in factors]
        if len(set(vals)) == len(vals):
            return False
    return True


def _local_components_agree(a: QuadraticLattice, b: QuadraticLattice, p: int) -> bool:
    from .local import is_padic_square

    ja, jb = jordan_decomposition(a, p), jordan_decomposition(b, p)
    if [(c.scale, c.rank) for c in ja] != [(c.scale, c.rank) for c in jb]:
        return False
    if p == 2:
        return [c.odd for c in ja] == [c.odd for c in jb]
    return all(is_padic_square(ca.det / cb.det, p) for ca, cb in zip(ja, jb))


def is_isomorphic(a: QuadraticLattice, b: QuadraticLattice) -> bool:
    """Isomorphism of indefinite lattices for which genus equals class.

    Compares signature, discriminant, invariant factors, the Hasse invariants
    at every prime dividing ``2 d(a) d(b)`` and the ranks/determinants (odd
    ``p``) or ranks/parities (``p = 2``) of the Jordan components.
    """
    from .local import hasse_invariant

    for lat in (a, b):
        sig = signature(lat)
        if sig.positives == 0 or sig.negatives == 0:
            raise ConditionsNotMet(f"{lat} is definite")
        if lat.rank < 3:
            raise ConditionsNotMet(f"{lat} has rank below 3")
        if not satisfies_genus_condition(lat):
            raise ConditionsNotMet(f"{lat} has no repeated p-adic invariant factor valuation")
    if a.rank != b.rank or signature(a) != signature(b):
        return False
    da, db = discriminant(a), discriminant(b)
    if da != db or invariant_factors(a) != invariant_factors(b):
        return False
    fa, fb = rational_diagonalize(a), rational_diagonalize(b)
    for p in sorted(set(_prime_factors(2 * da * db))):
        if hasse_invariant(fa, p) != hasse_invariant(fb, p):
            return False
        if not _local_components_agree(a, b, p):
            return False
    return True


# ---------------------------------------------------------------------------
# JSON


def _json_int(x: int):
    return x if abs(x) < 2**53 else str(x)


def dumps_lattice(lat: QuadraticLattice) -> str:
    doc = {"gram": [[_json_int(x) for x in row] for row in lat.gram]}
    if lat.name:
        doc["name"] = lat.name
    return json.dumps(doc)


def lattice_from_dict(doc: dict) -> QuadraticLattice:
    if not isinstance(doc, dict) or "gram" not in doc:
        raise ValueError("lattice JSON needs a 'gram' field")
    rows = doc["gram"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError("'gram' must be a list of lists")
    gram = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise ValueError(f"bad Gram entry {x!r}")
            row.append(int(x))
        gram.append(tuple(row))
    return QuadraticLattice(tuple(gram), doc.get("name"))


def loads_lattice(text: str) -> QuadraticLattice:
    return lattice_from_dict(json.loads(text))
