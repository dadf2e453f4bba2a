"""Coxeter diagrams and exact finite-volume tests for rank-4 hyperbolic lattices.

A set of roots ``a_i`` cuts out the cone ``{x : (x, a_i) <= 0}``; the
polyhedron has finite volume exactly when that cone is pointed, every extreme
ray is timelike or lightlike, and all of them point into the same half of the
light cone as the basic point.  Extreme rays are found from triples of facets
through the generalized cross product, so everything stays in the integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import NotHyperbolic
from .geometry import FacetRelation, RelationKind, Root, relation_from_products
from .lattice import QuadraticLattice, determinant, signature


def _gvec(gram, x):
    return [sum(r[j] * x[j] for j in range(len(x))) for r in gram]


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def _rank(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            f = a[i][c] / a[rank][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def cross4(r1, r2, r3) -> tuple[int, ...] | None:
    """Primitive integer vector orthogonal (dot product) to three rows, or None if dependent."""
    rows = (r1, r2, r3)
    v = []
    for i in range(4):
        minor = [[r[j] for j in range(4) if j != i] for r in rows]
        v.append((-1) ** i * _det3(minor))
    g = math.gcd(*v)
    if g == 0:
        return None
    return tuple(x // g for x in v)


def _ray_through(rows, triple) -> tuple[int, ...] | None:
    """The extreme-ray candidate on a facet triple, oriented into the cone, if feasible."""
    v = cross4(*(rows[i] for i in triple))
    if v is None:
        return None
    sign = 0
    for r in rows:
        s = _dot(r, v)
        if s == 0:
            continue
        if sign == 0:
            sign = 1 if s < 0 else -1
        elif (s < 0) != (sign == 1):
            return None
    if sign == 0:
        return None  # every facet passes through the line: cone not pointed
    return v if sign == 1 else tuple(-x for x in v)


def extreme_rays(rows: Sequence[Sequence[int]]) -> dict | None:
    """Extreme rays of ``{x : r . x <= 0}`` as ``{ray: active facet indices}``.

    Returns ``None`` when the cone is not pointed (the rows do not span).
    """
    rows = [list(r) for r in rows]
    if not rows or _rank(rows) < 4:
        return None
    out: dict = {}
    for t in combinations(range(len(rows)), 3):
        v = _ray_through(rows, t)
        if v is not None and v not in out:
            out[v] = frozenset(i for i, r in enumerate(rows) if _dot(r, v) == 0)
    return out


@dataclass
class FiniteVolumeResult:
    verdict: str  # "FINITE_VOLUME" or "INFINITE_VOLUME"
    witness: dict | None = None

    @property
    def finite(self) -> bool:
        return self.verdict == "FINITE_VOLUME"


def _judge(gram, rays: dict | None, v0=None) -> FiniteVolumeResult:
    if rays is None:
        return FiniteVolumeResult("INFINITE_VOLUME", {"reason": "facet normals do not span"})
    if not rays:
        return FiniteVolumeResult("INFINITE_VOLUME", {"reason": "cone has no extreme ray"})
    ordered = sorted(rays)
    for v in ordered:
        q = _dot(v, _gvec(gram, v))
        if q > 0:
            return FiniteVolumeResult(
                "INFINITE_VOLUME",
                {"reason": "spacelike extreme ray", "ray": list(v), "facets": sorted(rays[v])},
            )
    if v0 is not None:
        ref = _gvec(gram, v0)
        for v in ordered:
            if _dot(v, ref) >= 0:
                return FiniteVolumeResult(
                    "INFINITE_VOLUME",
                    {"reason": "ray in the past light cone", "ray": list(v), "facets": sorted(rays[v])},
                )
    else:
        ref = _gvec(gram, ordered[0])
        for v in ordered[1:]:
            if _dot(v, ref) >= 0:
                return FiniteVolumeResult(
                    "INFINITE_VOLUME",
                    {"reason": "rays in both light cones", "ray": list(v), "facets": sorted(rays[v])},
                )
    return FiniteVolumeResult("FINITE_VOLUME")


class RayTracker:
    """Incrementally maintained extreme rays of the cone of a growing root set.

    Adding a facet keeps the old rays that satisfy it and creates new ones only
    on the new facet, so only triples containing the new index are examined.
    """

    def __init__(self, lat: QuadraticLattice, v0=None):
        self.gram = [list(r) for r in lat.gram]
        self.v0 = tuple(v0) if v0 is not None else None
        self.rows: list[list[int]] = []
        self.rays: dict | None = None

    def add(self, coords) -> None:
        r = _gvec(self.gram, coords)
        self.rows.append(r)
        new = len(self.rows) - 1
        if self.rays is None:
            self.rays = extreme_rays(self.rows)
            return
        kept = {}
        for v, act in self.rays.items():
            s = _dot(r, v)
            if s < 0:
                kept[v] = act
            elif s == 0:
                kept[v] = act | {new}
        for i, j in combinations(range(new), 2):
            v = _ray_through(self.rows, (i, j, new))
            if v is not None and v not in kept:
                kept[v] = frozenset(t for t, row in enumerate(self.rows) if _dot(row, v) == 0)
        self.rays = kept

    def check(self) -> FiniteVolumeResult:
        return _judge(self.gram, self.rays, self.v0)

    def finite_volume(self) -> bool:
        return self.check().finite


def _lattice_of(roots: Sequence[Root]) -> QuadraticLattice:
    if not roots:
        raise ValueError("need at least one root")
    lat = roots[0].lattice
    if any(r.lattice.gram != lat.gram for r in roots):
        raise ValueError("roots from different lattices")
    return lat


def _require_hyperbolic(lat: QuadraticLattice):
    sig = signature(lat)
    if lat.rank != 4 or (sig.positives, sig.negatives) != (3, 1):
        raise NotHyperbolic("expected a lattice of signature (3, 1)")


def finite_volume_check(roots: Sequence[Root], v0=None) -> FiniteVolumeResult:
    """Exact finite-volume verdict for the polyhedron bounded by the mirrors of ``roots``.

    ``v0`` (an interior point) fixes the time orientation; without it the rays
    are only required to lie in a common half of the light cone.
    """
    lat = _lattice_of(roots)
    _require_hyperbolic(lat)
    rows = [_gvec(lat.gram, r.coords) for r in roots]
    return _judge(lat.gram, extreme_rays(rows), v0)


# ---------------------------------------------------------------------------
# diagrams


@dataclass
class CoxeterDiagram:
    nodes: list  # (root index, norm)
    edges: dict = field(default_factory=dict)  # (i, j) with i < j -> FacetRelation


def gram_matrix(roots: Sequence[Root]) -> list[list[int]]:
    lat = _lattice_of(roots)
    return [[lat.inner(a.coords, b.coords) for b in roots] for a in roots]


def build_diagram(roots: Sequence[Root]) -> CoxeterDiagram:
    g = gram_matrix(roots)
    n = len(roots)
    edges = {
        (i, j): relation_from_products(g[i][j], g[i][i], g[j][j])
        for i in range(n)
        for j in range(i + 1, n)
    }
    return CoxeterDiagram([(i, r.norm) for i, r in enumerate(roots)], edges)


def _gram_elliptic(g) -> bool:
    return all(determinant([row[:k] for row in g[:k]]) > 0 for k in range(1, len(g) + 1))


def _gram_psd(g) -> bool:
    """Exact positive semidefiniteness by symmetric elimination."""
    a = [[Fraction(x) for x in row] for row in g]
    idx = list(range(len(a)))
    while idx:
        piv = next((i for i in idx if a[i][i] != 0), None)
        if piv is None:
            return all(a[i][j] == 0 for i in idx for j in idx)
        if a[piv][piv] < 0:
            return False
        idx.remove(piv)
        for r in idx:
            f = a[r][piv] / a[piv][piv]
            for c in idx:
                a[r][c] -= f * a[piv][c]
    return True


def _components(g) -> list[list[int]]:
    n = len(g)
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and g[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _gram_parabolic(g) -> bool:
    if not _gram_psd(g):
        return False
    for comp in _components(g):
        sub = [[g[i][j] for j in comp] for i in comp]
        if determinant(sub) != 0:
            return False
    return True


def is_elliptic(roots: Sequence[Root]) -> bool:
    """Positive definite Gram matrix: the mirrors meet in a point of hyperbolic space (or less)."""
    return _gram_elliptic(gram_matrix(roots))


def is_parabolic(roots: Sequence[Root]) -> bool:
    """Every connected component of the diagram is degenerate positive semidefinite."""
    return _gram_parabolic(gram_matrix(roots))


def parabolic_rank(g) -> int:
    return len(g) - len(_components(g))


@dataclass
class Vertex:
    facets: tuple  # indices of all facets through the vertex
    vector: tuple
    ideal: bool


@dataclass
class PolyhedronCombinatorics:
    vertices: list
    edges: list  # facet pairs (i, j) whose intersection is an edge of the polyhedron
    unbounded_edges: list = field(default_factory=list)


def polyhedron_combinatorics(roots: Sequence[Root], v0=None) -> PolyhedronCombinatorics:
    lat = _lattice_of(roots)
    _require_hyperbolic(lat)
    gram = lat.gram
    rows = [_gvec(gram, r.coords) for r in roots]
    rays = extreme_rays(rows)
    if rays is None:
        return PolyhedronCombinatorics([], [])
    if v0 is not None:
        ref = _gvec(gram, v0)
    else:
        timelike = [v for v in sorted(rays) if _dot(v, _gvec(gram, v)) <= 0]
        ref = _gvec(gram, timelike[0]) if timelike else None
    vertices = []
    finite_rays = set()
    for v in sorted(rays):
        q = _dot(v, _gvec(gram, v))
        if q > 0 or ref is None:
            continue
        if _dot(v, ref) > 0 or (_dot(v, ref) == 0 and q < 0):
            continue
        finite_rays.add(v)
        vertices.append(Vertex(tuple(sorted(rays[v])), v, q == 0))
    edges, unbounded = [], []
    n = len(roots)
    for i in range(n):
        for j in range(i + 1, n):
            on = [v for v, act in rays.items() if i in act and j in act]
            if len(on) < 2:
                continue
            if all(v in finite_rays for v in on):
                edges.append((i, j))
            else:
                unbounded.append((i, j))
    return PolyhedronCombinatorics(vertices, edges, unbounded)


def diagram_criterion(roots: Sequence[Root]) -> bool:
    """Finite volume read off the Coxeter diagram alone (rank-4 lattices).

    There must be a vertex (an elliptic subdiagram of rank 3 or a parabolic one
    of rank 2), and every elliptic pair must lie in exactly two such vertex
    subdiagrams.  The roots must be the facets of an acute-angled polyhedron.
    """
    g = gram_matrix(roots)
    n = len(roots)

    def sub(idx):
        return [[g[i][j] for j in idx] for i in idx]

    vertex_sets = []
    for t in combinations(range(n), 3):
        s = sub(t)
        if _gram_elliptic(s) or (_gram_parabolic(s) and parabolic_rank(s) == 2):
            vertex_sets.append(set(t))
    for t in combinations(range(n), 4):
        s = sub(t)
        if _gram_parabolic(s) and parabolic_rank(s) == 2:
            vertex_sets.append(set(t))
    if not vertex_sets:
        return False
    for i, j in combinations(range(n), 2):
        if not _gram_elliptic(sub((i, j))):
            continue
        if sum(1 for s in vertex_sets if i in s and j in s) != 2:
            return False
    return True


def bad_reflections_finite(roots: Sequence[Root], good=(1, 2)) -> bool:
    """Whether the mirrors with norm outside ``good`` generate a finite group."""
    bad = [r for r in roots if r.norm not in good]
    if not bad:
        return True
    return is_elliptic(bad)


# ---------------------------------------------------------------------------
# DOT output


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def emit_dot(diagram: CoxeterDiagram, name: str = "coxeter") -> str:
    """Graphviz text for a diagram.

    Nodes are labelled by root norm.  Edges: none for right angles, plain for
    pi/3, double for pi/4, triple for pi/6, bold for parallel mirrors, dashed
    with the ``cosh^2`` label for divergent ones, and plain with the ``cos^2``
    label for any other angle.
    """
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for i, k in diagram.nodes:
        lines.append(f'  a{i + 1} [label="{k}", xlabel="a{i + 1}"];')
    for (i, j), rel in sorted(diagram.edges.items()):
        attrs = None
        if rel.kind is RelationKind.ANGLE:
            attrs = {
                2: None,
                3: 'style="solid"',
                4: 'style="solid", color="black:black"',
                6: 'style="solid", color="black:black:black"',
            }.get(rel.m, f'style="solid", label="cos2={_fmt(rel.cos_squared)}"')
        elif rel.kind is RelationKind.PARALLEL:
            attrs = 'style="bold"'
        else:
            attrs = f'style="dashed", label="{_fmt(rel.cos_squared)}"'
        if attrs:
            lines.append(f"  a{i + 1} -- a{j + 1} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
