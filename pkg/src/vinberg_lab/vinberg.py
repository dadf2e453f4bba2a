"""Vinberg's algorithm for hyperbolic lattices.

Roots are produced in order of the exact priority ``(a, v0)^2 / (a, a)``,
i.e. by increasing distance from the basic point ``v0`` to the mirror.  The
candidates of one priority value are examined in lexicographic order of
``(norm, coordinates)`` so that runs are reproducible.

For a fixed norm ``k`` and height ``h = -(a, v0)`` the candidates lie on an
ellipsoid in a coset of the positive definite lattice ``v0^perp``; those
ellipsoids are enumerated with a Fincke-Pohst search over an LLL-reduced
basis.  Floating point only steers the search bounds (with a safety margin);
every candidate is verified in exact integer arithmetic.
"""
from __future__ import annotations

import enum
import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .coxeter import RayTracker
from .errors import NotHyperbolic
from .geometry import LatticeVector, Root, root_condition
from .lattice import (
    QuadraticLattice,
    invariant_factors,
    signature,
    determinant,
    inverse,
    smith_normal_form,
    solve,
    transpose,
)

SCHEMA_VERSION = 1


class RunStatus(enum.Enum):
    FINITE_VOLUME = "FINITE_VOLUME"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"


def admissible_root_norms(lat: QuadraticLattice) -> set[int]:
    """Divisors of twice the largest invariant factor; every root norm is one of these."""
    e = 2 * invariant_factors(lat)[-1]
    return {k for k in range(1, e + 1) if e % k == 0}


def _gvec(gram, x):
    return [sum(r[j] * x[j] for j in range(len(x))) for r in gram]


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def default_basic_point(lat: QuadraticLattice, box: int = 3) -> tuple[int, ...]:
    """A negative-norm vector to start from.

    For a diagonal form with a single negative entry this is the matching basis
    vector.  Otherwise the box ``|x_i| <= box`` is searched for the negative
    vector of smallest absolute norm, first in lexicographic order.
    """
    g = lat.gram
    n = lat.rank
    diag = all(g[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    negs = [i for i in range(n) if g[i][i] < 0]
    if diag and len(negs) == 1:
        return tuple(int(i == negs[0]) for i in range(n))
    best = None
    for x in product(range(-box, box + 1), repeat=n):
        q = lat.inner(x, x)
        if q < 0 and math.gcd(*x) == 1:
            key = (-q, x)
            if best is None or key < best:
                best = key
    if best is None:
        raise NotHyperbolic("no negative vector found in the search box")
    return best[1]


@dataclass
class VinbergConfig:
    basic_point: LatticeVector
    allowed_norms: frozenset = frozenset()
    max_roots: int = 64
    max_height: int = 10_000  # bound on (a, v0)^2, the numerator of the priority
    chamber_point: tuple | None = None

    def __post_init__(self):
        if self.basic_point.norm() >= 0:
            raise ValueError("the basic point must have negative norm")
        if self.max_roots < 1 or self.max_height < 1:
            raise ValueError("budgets must be positive")
        self.allowed_norms = frozenset(self.allowed_norms)

    @classmethod
    def for_lattice(cls, lat: QuadraticLattice, basic_point=None, **kw) -> VinbergConfig:
        v0 = tuple(basic_point) if basic_point is not None else default_basic_point(lat)
        return cls(LatticeVector(lat, v0), **kw)

    def norms(self) -> list[int]:
        lat = self.basic_point.lattice
        adm = admissible_root_norms(lat)
        if not self.allowed_norms:
            return sorted(adm)
        return sorted(k for k in self.allowed_norms if k in adm)


# ---------------------------------------------------------------------------
# the definite lattice v0^perp


def _lll(basis: list[list[int]], gram) -> list[list[int]]:
    """LLL reduction (delta = 3/4) of a basis of a positive definite sublattice."""
    b = [list(v) for v in basis]
    n = len(b)

    def ip(x, y):
        return _dot(x, _gvec(gram, y))

    def gso():
        # Gram-Schmidt coefficients computed from the Gram matrix of b
        g = [[Fraction(ip(b[i], b[j])) for j in range(n)] for i in range(n)]
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            for j in range(i):
                s = g[i][j] - sum(mu[j][t] * mu[i][t] * norms[t] for t in range(j))
                mu[i][j] = s / norms[j]
            norms.append(g[i][i] - sum(mu[i][t] ** 2 * norms[t] for t in range(i)))
        return mu, norms

    k = 1
    while k < n:
        mu, norms = gso()
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            k = max(k - 1, 1)
    return b


class _Shells:
    """Solutions of ``(a, a) = k``, ``(a, v0) = -h`` in a rank-4 lattice.

    The candidates are parametrised by an integer vector ``z`` of length 3:
    ``a = (h * alpha + A z) / den`` with ``(z - h mu)^T P (z - h mu) = k - h^2 gamma``
    and ``z >= lower`` componentwise.  Two parametrisations are used:

    * the lattice ``v0^perp`` itself (``z`` = coordinates in an LLL-reduced
      basis, no lower bound); and
    * chamber coordinates ``z_i = -(a, r_i)`` for three independent cone roots
      ``r_i``, restricted to ``z >= 0``.  This only visits vectors on the
      correct side of every cone wall, which every later root must be.
    """

    def __init__(self, lat: QuadraticLattice, v0: Sequence[int], walls=None):
        if lat.rank != 4:
            raise NotHyperbolic("the search is implemented for rank-4 lattices")
        self.gram = [list(r) for r in lat.gram]
        v0 = list(v0)
        w = _gvec(self.gram, v0)  # (a, v0) = w . a
        _, d, v = smith_normal_form([w])
        self.step = d[0][0]  # heights are multiples of gcd(w)
        walls = [list(r) for r in walls or []]
        if len(walls) == 3 and determinant([_gvec(self.gram, r) for r in walls] + [w]) != 0:
            self._chamber(v0, walls)
        else:
            self._perp(w, v)
        # upper LDL^T of P: Q(y) = sum D_i (y_i + sum_{j>i} L_ij y_j)^2
        m = 3
        a = [[Fraction(x) for x in row] for row in self.P]
        self.D = [Fraction(0)] * m
        self.L = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            self.D[i] = a[i][i]
            for j in range(i + 1, m):
                self.L[i][j] = a[i][j] / a[i][i]
            for r in range(i + 1, m):
                for c in range(i + 1, m):
                    a[r][c] -= a[r][i] * a[i][c] / a[i][i]
        self.Df = [float(x) for x in self.D]
        self.Lf = [[float(x) for x in row] for row in self.L]
        self.gmax = max(abs(x) for row in self.gram for x in row)
        self.amax = max(abs(x) for row in self.A for x in row) + max(abs(x) for x in self.alpha)

    def _perp(self, w, v):
        cols = transpose(v)
        sigma = 1 if _dot(w, cols[0]) == self.step else -1
        c0 = [-sigma * x for x in cols[0]]  # w . c0 = -step
        basis = _lll([list(c) for c in cols[1:]], self.gram)
        gk = [[_dot(x, _gvec(self.gram, y)) for y in basis] for x in basis]
        rhs = [Fraction(-_dot(x, _gvec(self.gram, c0))) for x in basis]
        mu1 = solve(gk, rhs)
        cc = Fraction(_dot(c0, _gvec(self.gram, c0)))
        c1 = cc - sum(mu1[i] * gk[i][j] * mu1[j] for i in range(3) for j in range(3))
        st = self.step
        self.P = gk
        self.mu = [x / st for x in mu1]
        self.gamma = c1 / (st * st)
        self.lower = None
        self.den = st
        self.alpha = c0
        self.A = [[st * basis[j][i] for j in range(3)] for i in range(4)]
        self.chamber = False

    def _chamber(self, v0, walls):
        gr = [[_dot(x, _gvec(self.gram, y)) for y in walls] for x in walls]
        delta = determinant(gr)
        inv = [[x * delta for x in row] for row in inverse(gr)]
        adj = [[int(x) for x in row] for row in inv]
        n = -_dot(v0, _gvec(self.gram, v0))
        # a = (h delta v0 - n sum_j (adj z)_j r_j) / (n delta)
        self.P = [[Fraction(x, delta) for x in row] for row in adj]
        self.mu = [Fraction(0)] * 3
        self.gamma = Fraction(-1, n)
        self.lower = 0
        self.den = n * delta
        self.alpha = [delta * x for x in v0]
        self.A = [
            [-n * sum(walls[j][i] * adj[j][c] for j in range(3)) for c in range(3)]
            for i in range(4)
        ]
        self.chamber = True

    def solutions(self, k: int, h: int) -> list[tuple[int, ...]]:
        """All integer vectors with norm ``k`` and ``(a, v0) = -h`` in the search region."""
        if h % self.step:
            return []
        radius = k - h * h * self.gamma
        if radius < 0:
            return []
        rf = float(radius)
        tol = 1e-9 * (1.0 + rf)
        cen = [float(h * x) for x in self.mu]
        D, L = self.Df, self.Lf
        lb = self.lower

        # last coordinate
        span2 = math.sqrt(rf / D[2]) + 1e-7 * (1 + abs(cen[2]))
        lo2 = math.ceil(cen[2] - span2)
        if lb is not None:
            lo2 = max(lo2, lb)
        z2 = np.arange(lo2, math.floor(cen[2] + span2) + 1, dtype=np.int64)
        rem2 = rf - D[2] * (z2 - cen[2]) ** 2
        keep = rem2 >= -tol
        z2, rem2 = z2[keep], np.maximum(rem2[keep], 0.0)
        if z2.size == 0:
            return []
        # middle coordinate, one interval per value of z2
        c1 = cen[1] - L[1][2] * (z2 - cen[2])
        span1 = np.sqrt(rem2 / D[1]) + 1e-7 * (1 + np.abs(c1))
        lo1 = np.ceil(c1 - span1).astype(np.int64)
        if lb is not None:
            lo1 = np.maximum(lo1, lb)
        hi1 = np.floor(c1 + span1).astype(np.int64)
        counts = np.maximum(hi1 - lo1 + 1, 0)
        total = int(counts.sum())
        if total == 0:
            return []
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        z1 = np.repeat(lo1, counts) + (np.arange(total, dtype=np.int64) - starts)
        z2r = np.repeat(z2, counts)
        c1r = np.repeat(c1, counts)
        rem1 = np.repeat(rem2, counts) - D[1] * (z1 - c1r) ** 2
        keep = rem1 >= -tol
        z1, z2r, rem1 = z1[keep], z2r[keep], np.maximum(rem1[keep], 0.0)
        # first coordinate is pinned by the equation
        c0 = cen[0] - L[0][1] * (z1 - cen[1]) - L[0][2] * (z2r - cen[2])
        root = np.sqrt(rem1 / D[0])
        z0 = np.concatenate([np.rint(c0 - root), np.rint(c0 + root)]).astype(np.int64)
        z1 = np.concatenate([z1, z1])
        z2r = np.concatenate([z2r, z2r])
        if lb is not None:
            keep = z0 >= lb
            z0, z1, z2r = z0[keep], z1[keep], z2r[keep]
        z = np.stack([z0, z1, z2r], axis=1)
        zmax = float(np.abs(z).max()) if z.size else 0.0
        bound = (zmax + abs(h)) * self.amax
        if bound * bound * self.gmax * 16 < 2.0 ** 62:
            anum = h * np.array(self.alpha, dtype=np.int64)[None, :] + z @ np.array(self.A, dtype=np.int64).T
            ok = np.all(anum % self.den == 0, axis=1)
            a = anum[ok] // self.den
            g = np.array(self.gram, dtype=np.int64)
            norms = np.einsum("ij,jk,ik->i", a, g, a)
            rows = a[norms == k].tolist()
        else:
            rows = []
            for zz in z.tolist():
                num = [h * al + sum(self.A[i][j] * zz[j] for j in range(3)) for i, al in enumerate(self.alpha)]
                if all(x % self.den == 0 for x in num):
                    rows.append([x // self.den for x in num])
        out = {tuple(int(x) for x in r) for r in rows}
        return sorted(a for a in out if _dot(a, _gvec(self.gram, a)) == k)


def _is_root_coords(gram, a, k) -> bool:
    return math.gcd(*a) == 1 and root_condition(gram, a, k)


# ---------------------------------------------------------------------------
# fundamental cone


def _chamber_functional(lat: QuadraticLattice, v0, hint) -> list[Fraction]:
    """A point of ``v0^perp`` used to pick the chamber of the finite stabiliser."""
    n = lat.rank
    if hint is None:
        hint = [0] + [Fraction(n - 1 - i) + Fraction(1, 1000 ** (i + 1)) for i in range(n - 1)]
    hint = [Fraction(x) for x in hint]
    c = Fraction(lat.inner(hint, v0)) / lat.inner(v0, v0)
    return [x - c * y for x, y in zip(hint, v0)]


def fundamental_cone(lat: QuadraticLattice, v0, norms=None, chamber_point=None) -> list[Root]:
    """Simple roots of the finite reflection group fixing ``v0``.

    The chamber is the one containing ``chamber_point`` (projected to
    ``v0^perp``); the default point is ``(0, 3 + eps, 2 + eps^2, 1 + eps^3)``,
    which selects the chamber ``x_1 >= x_2 >= x_3 >= 0`` type for diagonal
    forms.
    """
    v0 = tuple(v0)
    if lat.inner(v0, v0) >= 0:
        raise ValueError("the basic point must have negative norm")
    norms = sorted(norms) if norms else sorted(admissible_root_norms(lat))
    ell = _Shells(lat, v0)
    gram = ell.gram
    c = _chamber_functional(lat, v0, chamber_point)
    cands = []
    for k in norms:
        for a in ell.solutions(k, 0):
            if not _is_root_coords(gram, a, k):
                continue
            s = _dot(c, _gvec(gram, a))
            if s == 0:
                raise ValueError("chamber point lies on a mirror; pass another chamber_point")
            if s < 0:
                cands.append((s * s / k, k, a))
    cands.sort()
    chosen: list[tuple[int, ...]] = []
    for _, k, a in cands:
        ga = _gvec(gram, a)
        if all(_dot(ga, b) <= 0 for b in chosen):
            chosen.append(a)
    return [Root.of(lat, a) for a in chosen]


# ---------------------------------------------------------------------------
# the main loop


@dataclass
class VinbergRun:
    lattice: QuadraticLattice
    basic_point: tuple
    norms: list[int]
    roots: list[Root] = field(default_factory=list)
    priorities: list = field(default_factory=list)  # None for cone roots
    heights: list = field(default_factory=list)
    cone_size: int = 0
    status: RunStatus = RunStatus.BUDGET_EXHAUSTED
    steps: int = 0  # shells searched
    _search: Iterator | None = field(default=None, repr=False, compare=False)
    _tracker: RayTracker | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "lattice": [list(r) for r in self.lattice.gram],
            "basic_point": list(self.basic_point),
            "norms": list(self.norms),
            "status": self.status.value,
            "steps": self.steps,
            "cone_size": self.cone_size,
            "roots": [
                {
                    "coords": list(r.coords),
                    "norm": r.norm,
                    "height": h,
                    "priority": None if p is None else str(p),
                }
                for r, p, h in zip(self.roots, self.priorities, self.heights)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _candidates(ell: _Shells, norms: list[int], max_height: int, run: VinbergRun):
    """Yield ``(priority, k, h, coords)`` in increasing priority, ties by (k, coords)."""
    gram = ell.gram
    heap = [(Fraction(ell.step * ell.step, k), k, ell.step) for k in norms if ell.step**2 <= max_height]
    heapq.heapify(heap)
    while heap:
        pr = heap[0][0]
        group = []
        while heap and heap[0][0] == pr:
            group.append(heapq.heappop(heap))
        found = []
        for _, k, h in group:
            run.steps += 1
            for a in ell.solutions(k, h):
                if _is_root_coords(gram, a, k):
                    found.append((k, a, h))
            if (h + ell.step) ** 2 <= max_height:
                nh = h + ell.step
                heapq.heappush(heap, (Fraction(nh * nh, k), k, nh))
        for k, a, h in sorted(found):
            yield pr, k, h, a


def start(lat: QuadraticLattice, config: VinbergConfig) -> VinbergRun:
    """Initial state: the fundamental cone at the basic point."""
    sig = signature(lat)
    if (sig.positives, sig.negatives) != (lat.rank - 1, 1):
        raise NotHyperbolic(f"signature {tuple(sig)} is not hyperbolic")
    if config.basic_point.lattice.gram != lat.gram:
        raise ValueError("basic point belongs to another lattice")
    v0 = tuple(config.basic_point.coords)
    norms = config.norms()
    run = VinbergRun(lat, v0, norms)
    for r in fundamental_cone(lat, v0, norms, config.chamber_point):
        run.roots.append(r)
        run.priorities.append(None)
        run.heights.append(0)
    run.cone_size = len(run.roots)
    run._tracker = RayTracker(lat, v0)
    for r in run.roots:
        run._tracker.add(r.coords)
    walls = [r.coords for r in run.roots] if run.cone_size == 3 else None
    run._search = _candidates(_Shells(lat, v0, walls), norms, config.max_height, run)
    return run


def next_root(state: VinbergRun, config: VinbergConfig) -> Root | None:
    """Next mirror of the polyhedron, or ``None`` once ``max_height`` is exhausted."""
    gram = state.lattice.gram
    accepted = [_gvec(gram, r.coords) for r in state.roots]
    for pr, k, h, a in state._search:
        if all(_dot(g, a) <= 0 for g in accepted):
            root = Root.of(state.lattice, a)
            state.roots.append(root)
            state.priorities.append(pr)
            state.heights.append(h)
            state._tracker.add(a)
            return root
    return None


def run(lat: QuadraticLattice, config: VinbergConfig | None = None) -> VinbergRun:
    """Run the algorithm until the mirrors bound a finite-volume polyhedron or a budget is hit."""
    config = config or VinbergConfig.for_lattice(lat)
    state = start(lat, config)
    while len(state.roots) < config.max_roots:
        if next_root(state, config) is None:
            break
        if state._tracker.finite_volume():
            state.status = RunStatus.FINITE_VOLUME
            break
    return state
