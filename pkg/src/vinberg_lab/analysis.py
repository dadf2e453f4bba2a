"""Per-lattice reflectivity analysis and the candidate classification pipeline.

A lattice is judged in two passes.  First Vinberg's algorithm is run with only
1- and 2-roots; if that polyhedron has finite volume the lattice is
1.2-reflective.  Otherwise the unrestricted run decides: finite volume with a
finite group generated by the remaining reflections still means
1.2-reflective, finite volume with an infinite one means reflective but not
1.2-reflective.  Anything that runs out of budget is reported INCONCLUSIVE.
"""
from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .coxeter import bad_reflections_finite, build_diagram, diagram_criterion, emit_dot
from .enumeration import REFERENCE_TABLE, TableRow, candidate_table, table_report
from .errors import ConditionsNotMet
from .lattice import (
    QuadraticLattice,
    discriminant,
    invariant_factors,
    is_isomorphic,
    is_maximal,
    signature,
)
from .local import INFINITY, is_anisotropic_global, local_anisotropy
from .vinberg import SCHEMA_VERSION, RunStatus, VinbergConfig, VinbergRun, run


class Status(enum.Enum):
    ONE_TWO_REFLECTIVE = "ONE_TWO_REFLECTIVE"
    REFLECTIVE_NOT_ONE_TWO = "REFLECTIVE_NOT_ONE_TWO"
    INCONCLUSIVE = "INCONCLUSIVE"


_BUGAENKO = (
    "non-reflectivity follows from Bugaenko's sublattice theorem and Nikulin's list of "
    "rank-3 reflective lattices; see J. McLeod (2013, dissertation)"
)

# Where non-reflectivity of the budget-exhausted reference lattices is proved.
EXTERNAL_NOTES = {
    "L(3)": "non-reflectivity proved by A. Mark (2013), reflection groups of prime-discriminant lattices",
    "L(4)": _BUGAENKO,
    "L(6)": "non-reflectivity proved by J. McLeod (2013, dissertation)",
    "L(7)": _BUGAENKO,
    "L(8)": _BUGAENKO,
    "L(9)": _BUGAENKO,
}


def threads() -> int:
    """Worker cap from ``VINBERG_LAB_THREADS`` (default 1, i.e. serial)."""
    raw = os.environ.get("VINBERG_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def place_key(p):
    return str(p)


def invariants_report(lat: QuadraticLattice) -> dict:
    from .lattice import dual_quotient, maximal_overlattices

    sig = signature(lat)
    exts = maximal_overlattices(lat) if not is_maximal(lat) else []
    return {
        "discriminant": discriminant(lat),
        "invariant_factors": list(invariant_factors(lat)),
        "signature": [sig.positives, sig.negatives],
        "dual_quotient": dual_quotient(lat),
        "unimodular": abs(discriminant(lat)) == 1,
        "maximal": not exts,
        "maximal_extensions": [
            {
                "gram": [list(r) for r in m.gram],
                "discriminant": discriminant(m),
                "invariant_factors": list(invariant_factors(m)),
            }
            for m in exts
        ],
    }


def anisotropy_report(lat: QuadraticLattice) -> dict:
    per = local_anisotropy(lat)
    return {
        "places": {place_key(p): ("anisotropic" if v else "isotropic") for p, v in per.items()},
        "global": "anisotropic" if is_anisotropic_global(lat) else "isotropic",
    }


@dataclass
class Budget:
    max_roots: int = 64
    max_height: int = 10_000

    def config(self, lat, norms=(), basic_point=None, chamber_point=None) -> VinbergConfig:
        return VinbergConfig.for_lattice(
            lat,
            basic_point,
            allowed_norms=frozenset(norms),
            max_roots=self.max_roots,
            max_height=self.max_height,
            chamber_point=chamber_point,
        )


def verdict_of(state: VinbergRun, restricted: bool) -> tuple[Status, bool | None]:
    """Status implied by one run, plus the bad-reflection verdict (``None`` if not computed)."""
    if state.status is not RunStatus.FINITE_VOLUME:
        return Status.INCONCLUSIVE, None
    if restricted and set(state.norms) <= {1, 2}:
        return Status.ONE_TWO_REFLECTIVE, True
    bad = bad_reflections_finite(state.roots)
    return (Status.ONE_TWO_REFLECTIVE if bad else Status.REFLECTIVE_NOT_ONE_TWO), bad


def run_report(state: VinbergRun, restricted: bool) -> dict:
    status, bad = verdict_of(state, restricted)
    doc = state.to_dict()
    doc["finite_volume"] = state.status is RunStatus.FINITE_VOLUME
    doc["bad_reflections_finite"] = bad
    doc["diagram_criterion"] = diagram_criterion(state.roots) if doc["finite_volume"] else None
    doc["verdict"] = status.value
    doc["dot"] = emit_dot(build_diagram(state.roots)) if state.roots else None
    return doc


@dataclass
class ClassificationReport:
    name: str
    lattice: QuadraticLattice
    invariants: dict
    anisotropy: dict
    runs: list = field(default_factory=list)  # run_report dicts, in the order performed
    status: Status = Status.INCONCLUSIVE
    notes: list = field(default_factory=list)

    @property
    def decisive_run(self) -> dict | None:
        return self.runs[-1] if self.runs else None

    def to_dict(self) -> dict:
        last = self.decisive_run
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "gram": [list(r) for r in self.lattice.gram],
            "invariants": self.invariants,
            "anisotropy": self.anisotropy,
            "runs": self.runs,
            "diagram_dot": last["dot"] if last else None,
            "finite_volume": last["finite_volume"] if last else None,
            "bad_reflections_finite": last["bad_reflections_finite"] if last else None,
            "status": self.status.value,
            "notes": self.notes,
        }


def classify_lattice(lat: QuadraticLattice, budget: Budget | None = None, name=None) -> ClassificationReport:
    """Decide 1.2-reflectivity of a hyperbolic rank-4 lattice within ``budget``."""
    budget = budget or Budget()
    name = name or lat.name or "lattice"
    rep = ClassificationReport(name, lat, invariants_report(lat), anisotropy_report(lat))
    restricted = run(lat, budget.config(lat, norms=(1, 2)))
    rep.runs.append(run_report(restricted, True))
    status, _ = verdict_of(restricted, True)
    if status is Status.INCONCLUSIVE:
        full = run(lat, budget.config(lat))
        rep.runs.append(run_report(full, False))
        status, _ = verdict_of(full, False)
    rep.status = status
    if status is Status.INCONCLUSIVE:
        rep.notes.append(
            f"budget exhausted (max_roots={budget.max_roots}, max_height={budget.max_height})"
        )
        if name in EXTERNAL_NOTES:
            rep.notes.append(EXTERNAL_NOTES[name])
    return rep


def preferred_form(row: TableRow) -> QuadraticLattice:
    """A diagonal representative of a table row, so the basic point can be (1,0,0,0)."""
    for ref_name, diag, _, _ in REFERENCE_TABLE:
        if ref_name == row.name:
            return QuadraticLattice.diagonal(*diag, name=row.name)
    d = row.discriminant
    cand = QuadraticLattice.diagonal(d, 1, 1, 1, name=row.name)
    if is_isomorphic(cand, row.lattice):
        return cand
    return QuadraticLattice(row.lattice.gram, row.name)


def _classify_job(args):
    gram, name, max_roots, max_height = args
    lat = QuadraticLattice(gram, name)
    return classify_lattice(lat, Budget(max_roots, max_height), name).to_dict()


def classify_table(rows: list[TableRow], budget: Budget | None = None, workers: int | None = None) -> list[dict]:
    """Classification reports for every row, ordered like ``rows``."""
    budget = budget or Budget()
    workers = workers or threads()
    jobs = []
    for row in rows:
        lat = preferred_form(row)
        if not is_anisotropic_global(lat):
            raise ConditionsNotMet(f"{row.name} is isotropic")
        jobs.append((lat.gram, row.name, budget.max_roots, budget.max_height))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_classify_job, jobs))
    return [_classify_job(j) for j in jobs]


def enumeration_report(rows: list[TableRow] | None = None) -> dict:
    rows = candidate_table() if rows is None else rows
    doc = table_report(rows)
    doc["schema_version"] = SCHEMA_VERSION
    doc["stage"] = "enumerate"
    return doc


def full_report(budget: Budget | None = None, workers: int | None = None) -> dict:
    rows = candidate_table()
    doc = enumeration_report(rows)
    doc["stage"] = "full"
    reports = classify_table(rows, budget, workers)
    doc["classification"] = reports
    doc["one_two_reflective"] = [r["name"] for r in reports if r["status"] == Status.ONE_TWO_REFLECTIVE.value]
    doc["reflective_not_one_two"] = [
        r["name"] for r in reports if r["status"] == Status.REFLECTIVE_NOT_ONE_TWO.value
    ]
    doc["inconclusive"] = [r["name"] for r in reports if r["status"] == Status.INCONCLUSIVE.value]
    return doc


__all__ = [
    "Budget",
    "ClassificationReport",
    "EXTERNAL_NOTES",
    "INFINITY",
    "Status",
    "anisotropy_report",
    "classify_lattice",
    "classify_table",
    "enumeration_report",
    "full_report",
    "invariants_report",
    "preferred_form",
    "run_report",
    "threads",
    "verdict_of",
]
