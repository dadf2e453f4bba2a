"""Vector-model geometry of hyperbolic space over a lattice.

Distances and angles are never evaluated transcendentally: the functions
here return squared cosines, squared hyperbolic cosines and squared
hyperbolic sines as exact rationals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateFrame, LatticeMismatch
from .lattice import QuadraticLattice, is_positive_definite, solve


@dataclass(frozen=True)
class LatticeVector:
    lattice: QuadraticLattice
    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.lattice.rank:
            raise ValueError(f"expected {self.lattice.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    @property
    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coords)

    def __neg__(self):
        return LatticeVector(self.lattice, tuple(-c for c in self.coords))

    def __add__(self, other: LatticeVector):
        _check_same(self, other)
        return LatticeVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LatticeVector):
        return self + (-other)

    def scaled(self, c) -> LatticeVector:
        return LatticeVector(self.lattice, tuple(c * x for x in self.coords))

    def norm(self):
        return inner(self, self)


def _check_same(x: LatticeVector, y: LatticeVector):
    if x.lattice.gram != y.lattice.gram:
        raise LatticeMismatch("vectors live in different lattices")


def inner(x: LatticeVector, y: LatticeVector):
    _check_same(x, y)
    return x.lattice.inner(x.coords, y.coords)


def is_primitive(coords: Sequence[int]) -> bool:
    return math.gcd(*coords) == 1


def root_condition(gram, coords: Sequence[int], k: int) -> bool:
    """Crystallographic condition ``2 (e, b_i) = 0 mod k`` for every basis vector."""
    n = len(gram)
    return all((2 * sum(gram[i][j] * coords[j] for j in range(n))) % k == 0 for i in range(n))


def is_root(e: LatticeVector, k: int) -> bool:
    """Whether ``e`` is a primitive vector of norm ``k`` whose reflection preserves the lattice."""
    if k <= 0 or not e.is_integral:
        return False
    coords = tuple(int(c) for c in e.coords)
    if not any(coords) or not is_primitive(coords):
        return False
    return e.norm() == k and root_condition(e.lattice.gram, coords, k)


@dataclass(frozen=True)
class Root:
    vector: LatticeVector
    norm: int

    def __post_init__(self):
        if not is_root(self.vector, self.norm):
            raise ValueError(f"{self.vector.coords} is not a {self.norm}-root")

    @classmethod
    def of(cls, lattice: QuadraticLattice, coords: Sequence[int]) -> Root:
        v = LatticeVector(lattice, tuple(coords))
        return cls(v, v.norm())

    @property
    def coords(self) -> tuple:
        return self.vector.coords

    @property
    def lattice(self) -> QuadraticLattice:
        return self.vector.lattice


def reflect(x: LatticeVector, e: Root) -> LatticeVector:
    """Image of ``x`` under the reflection in the mirror of ``e``."""
    c = Fraction(2 * inner(x, e.vector), e.norm)
    if c.denominator == 1:
        c = int(c)
    return LatticeVector(x.lattice, tuple(a - c * b for a, b in zip(x.coords, e.coords)))


def gram_of(vectors: Sequence[LatticeVector | Root]) -> list[list]:
    vs = [v.vector if isinstance(v, Root) else v for v in vectors]
    return [[inner(a, b) for b in vs] for a in vs]


def sinh_sq_distance(e0: LatticeVector, normals: Sequence[LatticeVector | Root]) -> Fraction:
    """``sinh^2`` of the distance from the point ``e0`` to the plane orthogonal to ``normals``.

    ``e0`` needs negative norm; it is normalised homogeneously, so any
    positive multiple gives the same answer.
    """
    n0 = inner(e0, e0)
    if n0 >= 0:
        raise ValueError("e0 must have negative norm")
    g = gram_of(normals)
    if not normals or not is_positive_definite(g):
        raise DegenerateFrame("normals must span a positive definite subspace")
    vs = [v.vector if isinstance(v, Root) else v for v in normals]
    y = [-inner(e0, v) for v in vs]
    lam = solve(g, y)
    return sum((a * b for a, b in zip(lam, y)), Fraction(0)) / (-n0)


class RelationKind(enum.Enum):
    ANGLE = "angle"
    PARALLEL = "parallel"
    DIVERGENT = "divergent"


_ANGLES = {Fraction(0): 2, Fraction(1, 4): 3, Fraction(1, 2): 4, Fraction(3, 4): 6}


@dataclass(frozen=True)
class FacetRelation:
    """Relative position of two mirrors.

    ``cos_squared`` is ``(u, v)^2 / ((u, u)(v, v))``; for divergent mirrors it
    is ``cosh^2`` of their distance.  ``m`` is set for angles ``pi/m`` with
    ``m`` in {2, 3, 4, 6}.
    """

    kind: RelationKind
    cos_squared: Fraction
    m: int | None = None
    obtuse: bool = False  # (u, v) > 0; never happens between walls of an acute polyhedron


def relation_from_products(uv, uu, vv) -> FacetRelation:
    if uu <= 0 or vv <= 0:
        raise ValueError("facet normals need positive norm")
    c2 = Fraction(uv * uv, uu * vv) if isinstance(uv, int) else Fraction(uv) ** 2 / (Fraction(uu) * vv)
    if c2 < 1:
        return FacetRelation(RelationKind.ANGLE, c2, _ANGLES.get(c2), uv > 0)
    if c2 == 1:
        return FacetRelation(RelationKind.PARALLEL, c2, None, uv > 0)
    return FacetRelation(RelationKind.DIVERGENT, c2, None, uv > 0)


def facet_relation(u: Root | LatticeVector, v: Root | LatticeVector) -> FacetRelation:
    u = u.vector if isinstance(u, Root) else u
    v = v.vector if isinstance(v, Root) else v
    return relation_from_products(inner(u, v), inner(u, u), inner(v, v))
