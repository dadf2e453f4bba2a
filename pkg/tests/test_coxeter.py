from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import diag
from vinberg_lab.coxeter import (
    RayTracker,
    bad_reflections_finite,
    build_diagram,
    cross4,
    diagram_criterion,
    emit_dot,
    extreme_rays,
    finite_volume_check,
    gram_matrix,
    is_elliptic,
    is_parabolic,
    polyhedron_combinatorics,
)
from vinberg_lab.errors import NotHyperbolic
from vinberg_lab.geometry import Root
from vinberg_lab.vinberg import VinbergConfig, run

L5 = diag(-3, 5, 1, 1)
L10 = diag(-1, 3, 3, 2)

RUNS = {
    "L(5)": run(L5),
    "L(10)": run(L10),
    "L(1)": run(diag(-15, 1, 1, 1)),
    "L(2)": run(diag(-7, 1, 1, 1)),
    "L(1)/12": run(diag(-15, 1, 1, 1), VinbergConfig.for_lattice(diag(-15, 1, 1, 1), allowed_norms={1, 2})),
    "L(3)": run(diag(-23, 1, 1, 1), VinbergConfig.for_lattice(diag(-23, 1, 1, 1), max_roots=10, max_height=40_000)),
}


def test_cross4_is_orthogonal():
    rows = [(1, 2, 0, 3), (0, 1, 1, 1), (2, 0, 5, -1)]
    v = cross4(*rows)
    assert v is not None and all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)
    assert cross4((1, 0, 0, 0), (2, 0, 0, 0), (0, 1, 0, 0)) is None


def test_extreme_rays_of_the_orthant():
    rows = [[-1 if i == j else 0 for j in range(4)] for i in range(4)]
    rays = extreme_rays(rows)
    assert set(rays) == {tuple(int(i == j) for j in range(4)) for i in range(4)}
    assert extreme_rays(rows[:3]) is None


@pytest.mark.parametrize("name", list(RUNS))
def test_incremental_rays_match_recomputation(name):
    state = RUNS[name]
    gram = state.lattice.gram
    tracker = RayTracker(state.lattice, state.basic_point)
    rows = []
    for r in state.roots:
        tracker.add(r.coords)
        rows.append([sum(g[j] * r.coords[j] for j in range(4)) for g in gram])
        assert tracker.rays == extreme_rays(rows)
        roots = state.roots[: len(rows)]
        assert tracker.check() == finite_volume_check(roots, state.basic_point)


@pytest.mark.parametrize("name", list(RUNS))
def test_diagram_criterion_agrees_with_rays(name):
    state = RUNS[name]
    for n in range(3, len(state.roots) + 1):
        roots = state.roots[:n]
        assert diagram_criterion(roots) == finite_volume_check(roots, state.basic_point).finite


def test_verdicts():
    assert finite_volume_check(RUNS["L(5)"].roots).finite
    assert not bad_reflections_finite(RUNS["L(5)"].roots)
    assert not bad_reflections_finite(RUNS["L(10)"].roots)
    assert bad_reflections_finite(RUNS["L(1)"].roots)
    assert bad_reflections_finite(RUNS["L(1)/12"].roots)
    assert not finite_volume_check(RUNS["L(3)"].roots, RUNS["L(3)"].basic_point).finite


def test_wrong_signature_rejected():
    lat = diag(1, 1, 1, 1)
    with pytest.raises(NotHyperbolic):
        finite_volume_check([Root.of(lat, (1, 0, 0, 0))])


@pytest.mark.parametrize("name", ["L(5)", "L(10)", "L(1)", "L(2)", "L(1)/12"])
def test_vertices_are_elliptic_or_parabolic(name):
    state = RUNS[name]
    comb = polyhedron_combinatorics(state.roots, state.basic_point)
    assert comb.vertices and not comb.unbounded_edges
    g = gram_matrix(state.roots)
    for v in comb.vertices:
        sub = [state.roots[i] for i in v.facets]
        if v.ideal:
            assert is_parabolic(sub) and not is_elliptic(sub)
        else:
            assert len(v.facets) == 3 and is_elliptic(sub)
    # every edge joins exactly two vertices
    for i, j in comb.edges:
        assert sum(1 for v in comb.vertices if i in v.facets and j in v.facets) == 2
        assert g[i][j] ** 2 < g[i][i] * g[j][j]


def test_l5_has_ten_vertices_and_l10_eight():
    assert len(polyhedron_combinatorics(RUNS["L(5)"].roots).vertices) == 10
    assert len(polyhedron_combinatorics(RUNS["L(10)"].roots).vertices) == 8


@settings(max_examples=60)
@given(st.sampled_from(["L(5)", "L(10)", "L(1)", "L(3)"]), st.data())
def test_elliptic_and_parabolic_exclusive(name, data):
    roots = RUNS[name].roots
    idx = data.draw(st.sets(st.integers(0, len(roots) - 1), min_size=1, max_size=4))
    sub = [roots[i] for i in sorted(idx)]
    assert not (is_elliptic(sub) and is_parabolic(sub))


def test_small_diagrams():
    lat = diag(-1, 1, 1, 1)
    a = Root.of(lat, (0, 1, -1, 0))
    b = Root.of(lat, (0, 0, 1, -1))
    c = Root.of(lat, (0, 0, 0, 1))
    assert is_elliptic([a, b, c])  # B3
    assert not is_parabolic([a, b, c])
    d = Root.of(lat, (1, 1, 1, 0))
    e = Root.of(lat, (0, -1, 0, 0))
    assert is_parabolic([d, e]) and not is_elliptic([d, e])  # two parallel mirrors: affine A1


def test_dot_output():
    dot = emit_dot(build_diagram(RUNS["L(5)"].roots), "L5")
    assert dot.startswith("graph L5 {")
    assert dot.count("[label=") == 7
    assert 'style="dashed"' in dot and 'color="black:black:black"' in dot
    all_pairs = len(list(combinations(range(7), 2)))
    drawn = dot.count(" -- ")
    rel = build_diagram(RUNS["L(5)"].roots).edges
    assert drawn == all_pairs - sum(1 for r in rel.values() if r.m == 2)


@pytest.mark.parametrize("name", ["L(5)", "L(10)", "L(1)", "L(2)", "L(1)/12"])
def test_finite_volume_persists_and_bounded_case_has_no_parabolic_vertex(name):
    state = RUNS[name]
    verdicts = [finite_volume_check(state.roots[:n], state.basic_point).finite for n in range(4, len(state.roots) + 1)]
    first = verdicts.index(True)
    assert all(verdicts[first:])
    comb = polyhedron_combinatorics(state.roots, state.basic_point)
    if not any(v.ideal for v in comb.vertices):
        for v in comb.vertices:
            assert not is_parabolic([state.roots[i] for i in v.facets])
