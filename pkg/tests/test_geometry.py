import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import REFERENCE_DIAGONALS, diag
from vinberg_lab.errors import DegenerateFrame, LatticeMismatch
from vinberg_lab.geometry import (
    LatticeVector,
    RelationKind,
    Root,
    facet_relation,
    inner,
    is_root,
    reflect,
    relation_from_products,
    sinh_sq_distance,
)
from vinberg_lab.lattice import QuadraticLattice

L5 = diag(-3, 5, 1, 1)
LATTICES = [diag(*d) for d in REFERENCE_DIAGONALS.values()] + [
    diag(-1, 3, 2, 2),
    QuadraticLattice(((2, -1, 0, 0), (-1, -15, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))),
    QuadraticLattice(((1, 0, -1, -1), (0, 2, -1, -1), (-1, -1, 2, -4), (-1, -1, -4, 2))),
]


def vec(lat, *c):
    return LatticeVector(lat, tuple(c))


def random_cases(n, seed=2024):
    """``n`` random (lattice, root, x, y) with integer x, y."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        lat = rng.choice(LATTICES)
        e = tuple(rng.randint(-4, 4) for _ in range(4))
        v = LatticeVector(lat, e)
        k = v.norm()
        if not is_root(v, k):
            continue
        x = vec(lat, *(rng.randint(-20, 20) for _ in range(4)))
        y = vec(lat, *(rng.randint(-20, 20) for _ in range(4)))
        out.append((lat, Root(v, k), x, y))
    return out


CASES = random_cases(1000)


def test_reflection_isometry_and_involution():
    for lat, e, x, y in CASES:
        rx, ry = reflect(x, e), reflect(y, e)
        assert rx.is_integral and ry.is_integral
        assert inner(rx, ry) == inner(x, y)
        assert reflect(rx, e) == x
        assert reflect(e.vector, e) == -e.vector


def test_reflection_fixes_mirror():
    e = Root.of(L5, (1, 0, 3, 0))
    x = vec(L5, 1, 0, 1, 0)
    assert inner(x, e.vector) == 0
    assert reflect(x, e) == x


def test_non_root_reflection_leaves_lattice():
    lat = diag(-7, 1, 1, 1)
    v = vec(lat, 0, 1, 1, 1)  # norm 3, but 2(v, e1) = 2 is not divisible by 3
    assert not is_root(v, 3)
    with pytest.raises(ValueError):
        Root(v, 3)


def test_inner_examples():
    lat = diag(-7, 1, 1, 1)
    assert inner(vec(lat, 1, 0, 0, 0), vec(lat, 1, 0, 0, 0)) == -7
    assert inner(vec(L5, 1, 0, 3, 0), vec(L5, 1, 0, 0, 0)) == -3
    assert inner(vec(L5, 0, 1, 0, 0), vec(L5, 0, 0, 1, 0)) == 0
    with pytest.raises(LatticeMismatch):
        inner(vec(L5, 1, 0, 0, 0), vec(lat, 1, 0, 0, 0))


def test_root_examples():
    assert is_root(vec(L5, 1, 1, 0, 0), 2)
    assert is_root(vec(L5, 10, 6, 10, 5), 5)
    assert not is_root(vec(L5, 2, 0, 0, 0), 12)
    assert not is_root(vec(L5, 1, 0, 0, 0), -3)


def test_sinh_sq_distance_examples():
    v0 = vec(L5, 1, 0, 0, 0)
    assert sinh_sq_distance(v0, [Root.of(L5, (1, 0, 3, 0))]) == Fraction(1, 2)
    assert sinh_sq_distance(v0, [Root.of(L5, (0, 0, 1, 0))]) == 0
    assert sinh_sq_distance(v0.scaled(3), [Root.of(L5, (1, 0, 3, 0))]) == Fraction(1, 2)
    lat = diag(-1, 1, 1, 1)
    p = vec(lat, 3, 1, 2, 0)  # norm -4
    got = sinh_sq_distance(p, [vec(lat, 0, 0, 1, 0), vec(lat, 0, 0, 0, 1), vec(lat, 0, 1, 0, 0)])
    assert got == Fraction(1 + 4, 4)
    with pytest.raises(DegenerateFrame):
        sinh_sq_distance(v0, [vec(L5, 0, 0, 1, 0), vec(L5, 0, 0, 2, 0)])
    with pytest.raises(ValueError):
        sinh_sq_distance(vec(L5, 0, 1, 0, 0), [vec(L5, 0, 0, 1, 0)])


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_sinh_sq_distance_basis_invariance(a, b):
    lat = diag(-15, 1, 1, 1)
    v0 = vec(lat, 1, 0, 0, 0)
    u, w = vec(lat, 1, 4, 0, 0), vec(lat, 0, 0, 1, 1)
    # (u, w) spans a positive definite plane; [[1, a], [0, 1]] and swaps are unimodular
    u2 = u + w.scaled(a)
    w2 = w.scaled(-1) + u2.scaled(b)
    assert sinh_sq_distance(v0, [u, w]) == sinh_sq_distance(v0, [u2, w2])


def test_facet_relation_examples():
    a3, a4 = Root.of(L5, (0, -1, 0, 0)), Root.of(L5, (1, 0, 3, 0))
    rel = facet_relation(a3, a4)
    assert rel.kind is RelationKind.ANGLE and rel.m == 2
    a1, a7 = Root.of(L5, (0, 0, -1, 1)), Root.of(L5, (10, 6, 10, 5))
    rel = facet_relation(a1, a7)
    assert rel.kind is RelationKind.DIVERGENT and rel.cos_squared == Fraction(25, 10)
    rel = relation_from_products(-1, 2, 2)
    assert rel.m == 3 and rel.cos_squared == Fraction(1, 4)
    assert relation_from_products(-1, 1, 2).m == 4
    assert relation_from_products(-3, 2, 6).m == 6
    assert relation_from_products(-2, 1, 4).kind is RelationKind.PARALLEL
    general = relation_from_products(-1, 3, 2)
    assert general.kind is RelationKind.ANGLE and general.m is None


@given(st.integers(-20, 20), st.integers(1, 10), st.integers(1, 10), st.integers(1, 5), st.integers(1, 5))
def test_facet_relation_symmetric_and_scale_invariant(uv, uu, vv, s, t):
    r = relation_from_products(uv, uu, vv)
    assert r == relation_from_products(uv, vv, uu)
    scaled = relation_from_products(uv * s * t, uu * s * s, vv * t * t)
    assert (scaled.kind, scaled.cos_squared, scaled.m) == (r.kind, r.cos_squared, r.m)
    assert (r.kind is RelationKind.ANGLE) == (r.cos_squared < 1)
    assert (r.kind is RelationKind.PARALLEL) == (r.cos_squared == 1)
