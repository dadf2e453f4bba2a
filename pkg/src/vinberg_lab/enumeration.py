"""Candidate lattices from the outermost-edge case analysis.

Around the outermost edge of a fundamental polyhedron sit four faces with
normals ``e1..e4`` of norms ``d_i`` in {1, 2}.  Their Gram matrix is

    ( d1   -e12  -e13  -e14 )
    (-e12   d2   -e23  -e24 )
    (-e13  -e23   d3   -T   )
    (-e14  -e24  -T    d4   )

with ``e_ij`` in {0, 1}.  :data:`CASE_TREE` lists the admissible
configurations with their published bounds on ``T``; every such matrix that
is hyperbolic and anisotropic is pushed to its maximal overlattices, and the
results are collected up to isometry.

The module also carries the 27 matrices printed alongside the published
case analysis (:data:`PRINTED_MATRICES`) and the published ten-lattice table
(:data:`REFERENCE_TABLE`) so that both can be compared with what the tree
actually generates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import ConditionsNotMet
from .lattice import (
    QuadraticLattice,
    determinant,
    discriminant,
    invariant_factors,
    is_isomorphic,
    maximal_overlattices,
    signature,
)
from .local import is_anisotropic_global

EPS_KEYS = ("12", "13", "14", "23", "24")


class Leaf(NamedTuple):
    label: str
    d: tuple
    eps: tuple  # (e12, e13, e14, e23, e24)
    exact: int | None  # T fixed to this value (all faces perpendicular)
    below: int | None  # strict upper bound T < below

    def t_values(self) -> list[int]:
        if self.exact is not None:
            return [self.exact]
        if self.below is None:
            return []
        return list(range(0, self.below))


def _leaf(label, d, t, *ones):
    eps = tuple(int(k in ones) for k in EPS_KEYS)
    if t is None:
        return Leaf(label, d, eps, None, None)
    kind, value = t
    return Leaf(label, d, eps, value if kind == "=" else None, value if kind == "<" else None)


_D2, _D3, _D4, _D5 = (1, 1, 1, 2), (1, 1, 2, 2), (1, 2, 1, 1), (1, 2, 2, 1)
_D6, _D7, _D8, _D9 = (1, 2, 2, 2), (2, 2, 1, 1), (2, 2, 2, 1), (2, 2, 2, 2)

# label, diagonal, T constraint, indices with e_ij = 1
CASE_TREE: tuple[Leaf, ...] = (
    _leaf("2.0", _D2, ("=", 2)),
    _leaf("2.1", _D2, ("<", 2), "14"),
    _leaf("3.0", _D3, ("=", 3)),
    _leaf("3.1", _D3, ("<", 3), "13"),
    _leaf("3.2", _D3, ("<", 6), "13", "14"),
    _leaf("4.0", _D4, None),  # no T value is admissible
    _leaf("4.1.1", _D4, ("<", 3), "12"),
    _leaf("4.1.2", _D4, ("<", 3), "23"),
    _leaf("4.2.1", _D4, ("<", 3), "23", "24"),
    _leaf("5.0", _D5, ("=", 2)),
    _leaf("5.1.1", _D5, ("<", 5), "12"),
    _leaf("5.1.2", _D5, ("<", 2), "13"),
    _leaf("5.1.3", _D5, ("<", 3), "23"),
    _leaf("5.2.1", _D5, ("<", 5), "12", "23"),
    _leaf("5.2.2", _D5, ("<", 5), "13", "23"),
    _leaf("5.2.3", _D5, ("<", 4), "23", "24"),
    _leaf("6.0", _D6, ("=", 3)),
    _leaf("6.1.1", _D6, ("<", 4), "12"),
    _leaf("6.1.2", _D6, ("<", 4), "13"),
    _leaf("6.1.3", _D6, ("<", 4), "23"),
    _leaf("6.2.1", _D6, ("<", 8), "12", "23"),
    _leaf("6.2.2", _D6, ("<", 5), "13", "23"),
    _leaf("6.2.3", _D6, ("<", 6), "13", "14"),
    _leaf("6.2.4", _D6, ("<", 4), "13", "24"),
    _leaf("6.2.5", _D6, ("<", 6), "23", "24"),
    _leaf("6.3.1", _D6, ("<", 8), "12", "23", "24"),
    _leaf("6.3.2", _D6, ("<", 7), "13", "23", "24"),
    _leaf("6.3.3", _D6, ("<", 6), "13", "14", "23"),
    _leaf("6.4.1", _D6, ("<", 6), "13", "14", "23", "24"),
    _leaf("7.0", _D7, None),  # no T value is admissible
    _leaf("7.1.1", _D7, ("<", 3), "12"),
    _leaf("7.1.2", _D7, ("<", 2), "13"),
    _leaf("7.2.1", _D7, ("<", 6), "12", "13"),
    _leaf("7.2.2", _D7, ("<", 3), "13", "14"),
    _leaf("7.3.1", _D7, ("<", 8), "12", "13", "14"),
    _leaf("7.3.2", _D7, ("<", 5), "12", "14", "23"),
    _leaf("8.0", _D8, ("=", 2)),
    _leaf("8.1.1", _D8, ("<", 4), "12"),
    _leaf("8.1.2", _D8, ("<", 7), "23"),
    _leaf("8.1.3", _D8, ("<", 4), "14"),
    _leaf("8.2.1", _D8, ("<", 5), "12", "13"),
    _leaf("8.2.2", _D8, ("<", 7), "12", "14"),
    _leaf("8.2.3", _D8, ("<", 7), "13", "14"),
    _leaf("8.2.4", _D8, ("<", 7), "14", "23"),
    _leaf("8.2.5", _D8, ("<", 4), "13", "23"),
    _leaf("8.3.1", _D8, ("<", 7), "12", "13", "14"),
    _leaf("8.3.2", _D8, ("<", 7), "12", "13", "24"),
    _leaf("8.3.3", _D8, ("<", 7), "13", "23", "24"),
    _leaf("9.0", _D9, ("=", 3)),
    _leaf("9.1.1", _D9, ("<", 5), "12"),
    _leaf("9.1.2", _D9, ("<", 5), "23"),
    _leaf("9.2.1", _D9, ("<", 6), "12", "13"),
    _leaf("9.2.2", _D9, ("<", 4), "13", "23"),
    _leaf("9.2.3", _D9, ("<", 5), "13", "14"),
    _leaf("9.2.4", _D9, ("<", 4), "13", "24"),
    _leaf("9.3.1", _D9, ("<", 6), "14", "23", "24"),
    _leaf("9.3.2", _D9, ("<", 7), "12", "23", "24"),
    _leaf("9.3.3", _D9, ("<", 7), "12", "14", "23"),
    _leaf("9.4.1", _D9, ("<", 7), "13", "14", "23", "24"),
)


def enumerate_case_tree() -> list[tuple]:
    """``(label, d, eps, T constraint)`` for every leaf; the constraint is ``("=", n)``, ``("<", n)`` or None."""
    out = []
    for leaf in CASE_TREE:
        if leaf.exact is not None:
            t = ("=", leaf.exact)
        elif leaf.below is not None:
            t = ("<", leaf.below)
        else:
            t = None
        out.append((leaf.label, leaf.d, leaf.eps, t))
    return out


@dataclass(frozen=True)
class CandidateFrame:
    d: tuple
    eps: tuple
    T: int
    label: str = ""

    def gram(self) -> tuple:
        e12, e13, e14, e23, e24 = self.eps
        d1, d2, d3, d4 = self.d
        t = self.T
        return (
            (d1, -e12, -e13, -e14),
            (-e12, d2, -e23, -e24),
            (-e13, -e23, d3, -t),
            (-e14, -e24, -t, d4),
        )

    def within_nikulin_bound(self) -> bool:
        """``T^2 <= 196 d3 d4``, i.e. the framing faces are at most cosh^-1(14) apart."""
        return self.T * self.T <= 196 * self.d[2] * self.d[3]


def _eps(frame_eps, i, j):
    i, j = min(i, j), max(i, j)
    return frame_eps[EPS_KEYS.index(f"{i}{j}")] if f"{i}{j}" in EPS_KEYS else None


# angle between two faces in units of pi/12, from (d_i, d_j, eps); None if they do not meet
def _angle(di, dj, e):
    if e == 0:
        return 6
    return {(1, 2): 3, (2, 1): 3, (2, 2): 4}.get((di, dj))


def frame_violations(frame: CandidateFrame) -> list[str]:
    """Reasons why a frame cannot surround an outermost edge (empty when none apply).

    Checks that each end of the edge (faces 1, 2, 3 and faces 1, 2, 4) is a
    simple vertex with angle sum above pi, and excludes the right angle
    ``(1, 2)`` together with ``pi/4`` angles on ``(1, 3), (2, 4)`` or on
    ``(1, 4), (2, 3)``.
    """
    out = []
    d, eps = frame.d, frame.eps
    for far in (3, 4):
        faces = (1, 2, far)
        total = 0
        for a, b in ((1, 2), (1, far), (2, far)):
            e = _eps(eps, a, b)
            ang = _angle(d[a - 1], d[b - 1], e)
            if ang is None:
                out.append(f"faces {a},{b} do not meet at vertex {faces}")
                total = None
                break
            total += ang
        if total is not None and total <= 12:
            out.append(f"angle sum at vertex {faces} is at most pi")
    if _eps(eps, 1, 2) == 0:
        for (a, b), (c, e) in (((1, 3), (2, 4)), ((1, 4), (2, 3))):
            if _angle(d[a - 1], d[b - 1], _eps(eps, a, b)) == 3 and _angle(
                d[c - 1], d[e - 1], _eps(eps, c, e)
            ) == 3:
                out.append(f"right angle at (1,2) with pi/4 at {a}{b} and {c}{e}")
    return out


@dataclass
class CandidateLattice:
    frame: CandidateFrame
    lattice: QuadraticLattice
    maximal_forms: list = field(default_factory=list)

    @property
    def gram(self):
        return self.lattice.gram


def frames(leaves=CASE_TREE) -> list[CandidateFrame]:
    return [CandidateFrame(leaf.d, leaf.eps, t, leaf.label) for leaf in leaves for t in leaf.t_values()]


def frames_to_candidates(leaves=CASE_TREE) -> list[CandidateLattice]:
    """Hyperbolic anisotropic frame lattices with their maximal overlattices."""
    out = []
    for fr in frames(leaves):
        g = fr.gram()
        if determinant(g) == 0:
            continue
        lat = QuadraticLattice(g, name=f"{fr.label}/T={fr.T}")
        if tuple(signature(lat)) != (3, 1):
            continue
        if not is_anisotropic_global(lat):
            continue
        out.append(CandidateLattice(fr, lat, maximal_overlattices(lat)))
    return out


def _same(a: QuadraticLattice, b: QuadraticLattice) -> bool:
    try:
        return is_isomorphic(a, b)
    except ConditionsNotMet:
        return a.gram == b.gram


def distinct_maximal_forms(candidates: list[CandidateLattice]) -> list[tuple[QuadraticLattice, list]]:
    """Maximal forms up to isometry, each with the frames that produce it, in discovery order."""
    classes: list[tuple[QuadraticLattice, list]] = []
    for cand in candidates:
        for m in cand.maximal_forms:
            for rep, srcs in classes:
                if _same(rep, m):
                    srcs.append(cand.frame)
                    break
            else:
                classes.append((m, [cand.frame]))
    return classes


# ---------------------------------------------------------------------------
# published reference data


REFERENCE_TABLE: tuple[tuple[str, tuple, tuple, int], ...] = (
    ("L(1)", (-15, 1, 1, 1), (1, 1, 1, 15), -15),
    ("L(2)", (-7, 1, 1, 1), (1, 1, 1, 7), -7),
    ("L(3)", (-23, 1, 1, 1), (1, 1, 1, 23), -23),
    ("L(4)", (-31, 1, 1, 1), (1, 1, 1, 31), -31),
    ("L(5)", (-3, 5, 1, 1), (1, 1, 1, 15), -15),
    ("L(6)", (-39, 1, 1, 1), (1, 1, 1, 39), -39),
    ("L(7)", (-111, 1, 1, 1), (1, 1, 1, 111), -111),
    ("L(8)", (-71, 1, 1, 1), (1, 1, 1, 71), -71),
    ("L(9)", (-47, 1, 1, 1), (1, 1, 1, 47), -47),
    ("L(10)", (-1, 3, 3, 2), (1, 1, 3, 6), -18),
)


def reference_lattices() -> list[QuadraticLattice]:
    return [QuadraticLattice.diagonal(*diag, name=name) for name, diag, _, _ in REFERENCE_TABLE]


def _m(*rows):
    return tuple(tuple(r) for r in rows)


# (name, case, Gram matrix, determinant, published name of the maximal form or None)
PRINTED_MATRICES: tuple = (
    ("G1", "3", _m((1, 0, -1, -1), (0, 1, 0, 0), (-1, 0, 2, -3), (-1, 0, -3, 2)), -15, "L(1)"),
    ("G2", "4", _m((1, 0, 0, 0), (0, 2, -1, 0), (0, -1, 1, -2), (0, 0, -2, 1)), -7, "L(2)"),
    ("G3", "5", _m((1, 0, 0, 0), (0, 2, -1, -1), (0, -1, 2, -3), (0, -1, -3, 1)), -23, "L(3)"),
    ("G4", "5", _m((1, 0, -1, 0), (0, 2, 0, -1), (-1, 0, 2, -2), (0, -1, -2, 1)), -7, "L(2)"),
    ("G5", "5", _m((1, 0, -1, 0), (0, 2, 0, -1), (-1, 0, 2, -4), (0, -1, -4, 1)), -31, "L(4)"),
    ("G6", "5", _m((1, 0, -1, 0), (0, 2, -1, 0), (-1, -1, 2, -2), (0, 0, -2, 1)), -7, "L(2)"),
    ("G7", "5", _m((1, 0, -1, 0), (0, 2, -1, 0), (-1, -1, 2, -4), (0, 0, -4, 1)), -31, "L(4)"),
    ("G8", "5", _m((1, -1, 0, 0), (-1, 2, 0, 0), (0, 0, 2, -3), (0, 0, -3, 1)), -7, "L(2)"),
    ("G9", "5", _m((1, -1, 0, 0), (-1, 2, -1, 0), (0, -1, 2, -4), (0, 0, -4, 1)), -15, "L(1)"),
    ("G10", "6", _m((1, 0, -1, 0), (0, 2, 0, -1), (-1, 0, 2, -3), (0, -1, -3, 2)), -15, "L(5)"),
    ("G11", "6", _m((1, 0, -1, 0), (0, 2, -1, -1), (-1, -1, 2, -3), (0, -1, -3, 2)), -23, "L(3)"),
    ("G12", "6", _m((1, 0, -1, 0), (0, 2, -1, -1), (-1, -1, 2, -4), (0, -1, -4, 2)), -39, "L(6)"),
    ("G13", "6", _m((1, 0, -1, 0), (0, 2, -1, -1), (-1, -1, 2, -7), (0, -1, -7, 2)), -111, "L(7)"),
    ("G14", "6", _m((1, 0, -1, -1), (0, 2, -1, 0), (-1, -1, 2, -1), (-1, 0, -1, 2)), -7, "L(2)"),
    ("G15", "6", _m((1, 0, -1, -1), (0, 2, -1, 0), (-1, -1, 2, -3), (-1, 0, -3, 2)), -31, "L(4)"),
    ("G16", "6", _m((1, 0, -1, -1), (0, 2, -1, 0), (-1, -1, 2, -5), (-1, 0, -5, 2)), -71, "L(8)"),
    ("G17", "6", _m((1, 0, -1, -1), (0, 2, -1, -1), (-1, -1, 2, -4), (-1, -1, -4, 2)), -60, "L(2)"),
    ("G18", "6", _m((1, -1, 0, 0), (-1, 2, -1, 0), (0, -1, 2, -3), (0, 0, -3, 2)), -7, "L(2)"),
    ("G19", "6", _m((1, -1, 0, 0), (-1, 2, -1, 0), (0, -1, 2, -5), (0, 0, -5, 2)), -23, "L(3)"),
    ("G20", "6", _m((1, -1, 0, 0), (-1, 2, -1, 0), (0, -1, 2, -7), (0, 0, -7, 2)), -47, "L(9)"),
    ("G21", "6", _m((1, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, -3), (0, -1, -3, 2)), -15, "L(1)"),
    ("G22", "7", _m((2, -1, -1, 0), (-1, 2, 0, 0), (-1, 0, 1, -4), (0, 0, -4, 1)), -47, "L(9)"),
    ("G23", "9", _m((2, 0, -1, 0), (0, 2, -1, 0), (-1, -1, 2, -3), (0, 0, -3, 2)), -28, "L(2)"),
    ("G24", "9", _m((2, 0, -1, -1), (0, 2, 0, 0), (-1, 0, 2, -4), (-1, 0, -4, 2)), -72, "L(10)"),
    ("G25", "9", _m((2, 0, -1, -1), (0, 2, -1, -1), (-1, -1, 2, -3), (-1, -1, -3, 2)), -60, "L(1)"),
    ("G26", "9", _m((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, -4), (0, -1, -4, 2)), -60, "L(1)"),
    ("G27", "9", _m((2, -1, 0, -1), (-1, 2, -1, 0), (0, -1, 2, -3), (-1, 0, -3, 2)), -28, "L(2)"),
)


def frame_of_matrix(gram) -> CandidateFrame:
    """Read ``d``, ``eps`` and ``T`` back off a frame-shaped Gram matrix."""
    g = gram
    d = tuple(g[i][i] for i in range(4))
    eps = (-g[0][1], -g[0][2], -g[0][3], -g[1][2], -g[1][3])
    return CandidateFrame(d, eps, -g[2][3])


def leaf_of(frame: CandidateFrame) -> Leaf | None:
    """The case-tree leaf with the same ``d`` and ``eps``, if there is one."""
    for leaf in CASE_TREE:
        if leaf.d == frame.d and leaf.eps == frame.eps:
            return leaf
    return None


def name_against_reference(lat: QuadraticLattice) -> str | None:
    for ref in reference_lattices():
        if discriminant(ref) == discriminant(lat) and _same(ref, lat):
            return ref.name
    return None


@dataclass
class TableRow:
    name: str
    lattice: QuadraticLattice
    invariant_factors: tuple
    discriminant: int
    sources: list  # "label/T=t" of the frames producing it
    in_reference: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "gram": [list(r) for r in self.lattice.gram],
            "invariant_factors": list(self.invariant_factors),
            "discriminant": self.discriminant,
            "sources": self.sources,
            "in_reference_table": self.in_reference,
        }


def candidate_table(candidates: list[CandidateLattice] | None = None) -> list[TableRow]:
    """The distinct maximal anisotropic lattices, named after the reference table where possible.

    Forms that match no reference entry are named ``X(1), X(2), ...`` in
    discovery order.  Rows come sorted by name, reference entries first.
    """
    if candidates is None:
        candidates = frames_to_candidates()
    rows = []
    extra = 0
    for m, srcs in distinct_maximal_forms(candidates):
        name = name_against_reference(m)
        if name is None:
            extra += 1
            name = f"X({extra})"
        rows.append(
            TableRow(
                name,
                m,
                invariant_factors(m),
                discriminant(m),
                [f"{f.label}/T={f.T}" for f in srcs],
                not name.startswith("X"),
            )
        )

    def key(r):
        return (r.name[0] == "X", int(r.name[2:-1]))

    return sorted(rows, key=key)


def missing_reference_entries(rows: list[TableRow]) -> list[str]:
    have = {r.name for r in rows}
    return [name for name, *_ in REFERENCE_TABLE if name not in have]


def table_report(rows: list[TableRow]) -> dict:
    return {
        "rows": [r.to_dict() for r in rows],
        "missing_reference_entries": missing_reference_entries(rows),
        "unexpected_entries": [r.name for r in rows if not r.in_reference],
        "matches_reference": not missing_reference_entries(rows)
        and all(r.in_reference for r in rows),
    }


def dumps_table(rows: list[TableRow]) -> str:
    return json.dumps(table_report(rows), indent=2, sort_keys=True)
