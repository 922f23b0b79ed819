"""
Verification Suites
Constructive loop-set witness (some S with E(G_S) > E(G)), the complement
inequality and theorem-case checks, bipartite laws, and the two equienergetic
families nH ∨ nK̄12 / nH ∨ nK12 built on the hexagonal prism (H1) and the
truncated tetrahedron (H2), each with a loop on every H-side vertex.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from console import ok, progress_enabled
from energy import STRICT_TOL, energy, energy_self_loop
from graph_core import (
    Graph,
    GraphError,
    LoopSet,
    SelfLoopGraph,
    connected_components,
    disjoint_copies,
    encode_graph6,
    enumerate_labeled_graphs,
    format_loop_mask,
    format_record,
    is_bipartite,
    join,
    make_named,
    maximal_independent_set,
)
from spectral import (
    CLUSTER_TOL,
    ClusteredSpectrum,
    EigensolverError,
    RegularBlockSpec,
    cluster_spectrum,
    join_spectrum_regular,
)

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 6
SCAN_MAX_N = 10
REMARK_TOL = 1e-9

H_BASES = {"h1": "hex_prism", "h2": "trunc_tetrahedron"}

# spectra of the H bases with a loop on every vertex
LOOP_SPECTRA = {
    "h1": (4, 3, 3, 2, 1, 1, 1, 1, 0, -1, -1, -2),
    "h2": (4, 3, 3, 3, 1, 1, 0, 0, 0, -1, -1, -1),
}

PARTNERS = {"empty12": "empty", "complete12": "complete"}

Route = Literal["empty-graph", "independent-set", "complement-of-independent-set"]


class ToleranceAmbiguityError(RuntimeError):
    pass


class WitnessCertificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    loop_set: LoopSet
    e_base: float
    e_loops: float
    route: Route
    tol: float = STRICT_TOL

    @model_validator(mode="after")
    def _strict(self):
        if not self.e_loops > self.e_base + self.tol:
            raise ValueError(
                f"E(G_S)={self.e_loops:.12g} does not exceed E(G)={self.e_base:.12g} by more than {self.tol:g}"
            )
        return self

    @property
    def margin(self):
        return self.e_loops - self.e_base

    def as_record(self):
        return {
            "n": self.loop_set.n,
            "alpha": self.loop_set.alpha,
            "loops": format_loop_mask(self.loop_set),
            "e_base": self.e_base,
            "e_loops": self.e_loops,
            "margin": self.margin,
            "route": self.route,
        }


class Failure(BaseModel):
    id: str
    detail: str


class CheckSummary(BaseModel):
    total: int = 0
    passed: int = 0
    failures: list[Failure] = Field(default_factory=list)
    # text/CSV-only extras, kept out of the JSON schema
    subject: str = Field(default="checks", exclude=True)
    rows: list[dict] = Field(default_factory=list, exclude=True)
    tally: dict[str, int] = Field(default_factory=dict, exclude=True)
    measurements: dict[str, float] = Field(default_factory=dict, exclude=True)

    @model_validator(mode="after")
    def _counts(self):
        if self.passed > self.total:
            raise ValueError("passed exceeds total")
        return self

    @property
    def ok(self):
        return self.passed == self.total and not self.failures

    def record(self, input_id, passed, detail="", tag=None):
        self.total += 1
        if passed:
            self.passed += 1
        else:
            self.failures.append(Failure(id=input_id, detail=detail))
        self.rows.append({"id": input_id, "ok": passed, "detail": detail})
        if tag is not None:
            self.tally[tag] = self.tally.get(tag, 0) + 1

    def merge(self, other):
        tally = dict(self.tally)
        for tag, count in other.tally.items():
            tally[tag] = tally.get(tag, 0) + count
        return CheckSummary(
            total=self.total + other.total,
            passed=self.passed + other.passed,
            failures=self.failures + other.failures,
            subject=self.subject,
            rows=self.rows + other.rows,
            tally=tally,
            measurements={**self.measurements, **other.measurements},
        )

    def as_record(self):
        return {
            "total": self.total,
            "passed": self.passed,
            "failures": [f.model_dump() for f in self.failures],
        }

    def summary_line(self):
        return f"{self.total} {self.subject}: {self.passed} passed, {len(self.failures)} failures"


# --- Conjecture witness ---

def conjecture_witness(g, tol=STRICT_TOL):
    """
    A loop set S with E(G_S) > E(G).

    Edgeless graphs take S = {0}. Otherwise S is a maximal independent set of
    the first component with at least two vertices; when that S does not beat
    E(G), its complement must.
    """
    if g.n < 2:
        raise GraphError(f"the witness needs at least 2 vertices, got {g.n}")
    e_base = energy(g)

    if g.edge_count == 0:
        loops = LoopSet.from_members(g.n, [0])
        e_loops = energy_self_loop(SelfLoopGraph(g, loops)).energy
        return WitnessCertificate(loop_set=loops, e_base=e_base, e_loops=e_loops, route="empty-graph", tol=tol)

    component = next(block for block in connected_components(g).blocks if len(block) >= 2)
    loops = LoopSet.from_members(g.n, maximal_independent_set(g, component))
    e_loops = energy_self_loop(SelfLoopGraph(g, loops)).energy
    if e_loops > e_base + tol:
        return WitnessCertificate(loop_set=loops, e_base=e_base, e_loops=e_loops, route="independent-set", tol=tol)

    rest = loops.complement()
    e_rest = energy_self_loop(SelfLoopGraph(g, rest)).energy
    if e_rest > e_base + tol:
        return WitnessCertificate(
            loop_set=rest, e_base=e_base, e_loops=e_rest, route="complement-of-independent-set", tol=tol
        )
    raise ToleranceAmbiguityError(
        f"{encode_graph6(g)}: neither S={list(loops.members)} (E={e_loops:.12g}) nor its complement "
        f"(E={e_rest:.12g}) exceeds E(G)={e_base:.12g} by more than {tol:g}"
    )


def scan_loop_sets(g, tol=STRICT_TOL):
    """Every loop set S with E(G_S) > E(G) + tol, ascending by mask."""
    if g.n > SCAN_MAX_N:
        raise GraphError(f"loop-set scan is limited to n <= {SCAN_MAX_N}, got {g.n}")
    e_base = energy(g)
    found = []
    for mask in range(1 << g.n):
        loops = LoopSet(g.n, mask)
        if energy_self_loop(SelfLoopGraph(g, loops)).energy > e_base + tol:
            found.append(loops)
    return found


# --- Complement inequality and theorem cases ---

def check_subadditivity(g, s):
    """E(G_S) + E(G_{V∖S}) - 2 E(G); never below -tol."""
    e_s = energy_self_loop(SelfLoopGraph(g, s)).energy
    e_c = energy_self_loop(SelfLoopGraph(g, s.complement())).energy
    return e_s + e_c - 2.0 * energy(g)


def _theorem_case_failure(e, e_s, e_c, tol):
    if e_s < e - tol and not e_c > e + tol:
        return f"E(G_S)={e_s:.12g} < E(G)={e:.12g} but E(G_V∖S)={e_c:.12g} is not larger than E(G)"
    if abs(e_s - e) <= tol and not e_c >= e - tol:
        return f"E(G_S) = E(G)={e:.12g} but E(G_V∖S)={e_c:.12g} falls below E(G)"
    return None


def check_theorem_cases(g, s, tol=STRICT_TOL, input_id=None):
    if s.mask == 0 or s.mask == g.vertex_mask:
        raise GraphError("theorem cases need a loop set S with ∅ ≠ S ⊊ V")
    input_id = input_id or format_record(SelfLoopGraph(g, s))
    e = energy(g)
    e_s = energy_self_loop(SelfLoopGraph(g, s)).energy
    e_c = energy_self_loop(SelfLoopGraph(g, s.complement())).energy
    summary = CheckSummary(subject="theorem cases")
    failure = _theorem_case_failure(e, e_s, e_c, tol)
    summary.record(input_id, failure is None, failure or "")
    return summary


# --- Equienergetic families ---

@dataclass(frozen=True)
class FamilyInstance:
    variant: str
    partner: str
    n: int
    graph: SelfLoopGraph
    predicted_spectrum: ClusteredSpectrum
    predicted_energy: float

    def __post_init__(self):
        h_side = (1 << (12 * self.n)) - 1
        if self.graph.base.n != 24 * self.n or self.graph.loops.mask != h_side:
            raise GraphError("family graph must have 24n vertices with loops exactly on the 12n H-side vertices")


def closed_form_energy(partner, n):
    if partner == "empty12":
        return 24 * n - 4 + 4 * math.sqrt(36 * n * n + 1)
    return 45 * n - 14 + math.sqrt(576 * n * n + 49)


def _h_block(variant, n):
    residual = list(LOOP_SPECTRA[variant])
    residual.remove(4)
    return RegularBlockSpec(4.0, tuple([4.0] * (n - 1) + residual * n), 12 * n)


def _partner_block(partner, n):
    if partner == "empty12":
        return RegularBlockSpec(0.0, (0.0,) * (12 * n - 1), 12 * n)
    return RegularBlockSpec(11.0, (11.0,) * (n - 1) + (-1.0,) * (11 * n), 12 * n)


def build_family(variant, partner, n):
    if variant not in H_BASES:
        raise GraphError(f"unknown variant '{variant}' (expected h1 or h2)")
    if partner not in PARTNERS:
        raise GraphError(f"unknown partner '{partner}' (expected empty12 or complete12)")
    if n < 1:
        raise GraphError(f"family index n must be at least 1, got {n}")

    h_side = disjoint_copies(make_named(H_BASES[variant]), n)
    other = disjoint_copies(make_named(PARTNERS[partner], [12]), n)
    graph = SelfLoopGraph(join(h_side, other), LoopSet(24 * n, h_side.vertex_mask))
    predicted = join_spectrum_regular(_h_block(variant, n), _partner_block(partner, n))
    return FamilyInstance(
        variant=variant,
        partner=partner,
        n=n,
        graph=graph,
        predicted_spectrum=cluster_spectrum(predicted, CLUSTER_TOL),
        predicted_energy=closed_form_energy(partner, n),
    )


def verify_family_pair(partner, n, tol=STRICT_TOL):
    summary = CheckSummary(subject=f"checks on the {partner} pair at n={n}")
    instances = {v: build_family(v, partner, n) for v in H_BASES}
    energies = {}
    for variant, inst in instances.items():
        report = energy_self_loop(inst.graph)
        energies[variant] = report.energy
        computed = cluster_spectrum(report.spectrum, CLUSTER_TOL)
        summary.record(
            f"{variant}:spectrum",
            computed.matches(inst.predicted_spectrum, CLUSTER_TOL),
            f"computed {computed.pairs} vs predicted {inst.predicted_spectrum.pairs}",
        )
        gap = abs(report.energy - inst.predicted_energy)
        summary.record(
            f"{variant}:closed-form",
            gap <= tol,
            f"E={report.energy:.12g}, closed form {inst.predicted_energy:.12g}, gap {gap:.3e}",
        )
        summary.measurements[f"{variant}:energy"] = report.energy

    diff = abs(energies["h1"] - energies["h2"])
    summary.record("pair:equienergetic", diff <= tol, f"|E1 - E2| = {diff:.3e}")

    triangles = {v: inst.graph.base.triangle_count() for v, inst in instances.items()}
    h1_bipartite = is_bipartite(make_named(H_BASES["h1"])) is not None
    h2_bipartite = is_bipartite(make_named(H_BASES["h2"])) is not None
    summary.record(
        "pair:non-isomorphic",
        triangles["h1"] != triangles["h2"],
        f"triangles {triangles['h1']} vs {triangles['h2']}; H-base bipartite {h1_bipartite} vs {h2_bipartite}",
    )
    summary.measurements["predicted_energy"] = closed_form_energy(partner, n)
    summary.measurements["difference"] = diff
    return summary


# --- Exhaustive suites ---

def _labeled_items(n_max):
    if not 2 <= n_max <= EXHAUSTIVE_MAX_N:
        raise GraphError(f"exhaustive enumeration needs 2 <= n_max <= {EXHAUSTIVE_MAX_N}, got {n_max}")
    total = 1 << (n_max * (n_max - 1) // 2)
    return ((encode_graph6(g), g) for g in enumerate_labeled_graphs(n_max)), total


def _run_rows(worker, items, total, desc, jobs, **kwargs):
    items = tqdm(items, total=total, desc=desc, disable=not progress_enabled(), leave=False)
    return Parallel(n_jobs=jobs)(delayed(worker)(input_id, g, **kwargs) for input_id, g in items)


def _summarize(rows, subject):
    summary = CheckSummary(subject=subject)
    for row in rows:
        summary.record(row["id"], row["ok"], row["detail"], tag=row.get("tag"))
        for key, value in row.get("measurements", {}).items():
            summary.measurements[key] = min(value, summary.measurements.get(key, value))
    return summary


def _witness_row(input_id, g, tol):
    try:
        cert = conjecture_witness(g, tol)
    except (ToleranceAmbiguityError, EigensolverError, GraphError) as e:
        return {"id": input_id, "ok": False, "detail": str(e), "tag": "failed"}

    if cert.route == "empty-graph":
        sound = g.edge_count == 0
    elif cert.route == "independent-set":
        sound = g.induced_edges(cert.loop_set.mask) == 0
    else:
        sound = g.induced_edges(cert.loop_set.complement().mask) == 0
    detail = f"route={cert.route} S={list(cert.loop_set.members)} margin={cert.margin:.6g}"
    if not sound:
        detail = f"loop set does not have its route's defining property: {detail}"
    return {"id": input_id, "ok": sound, "detail": detail, "tag": cert.route,
            "measurements": {"min_margin": cert.margin}}


def exhaustive_conjecture_check(n_max=None, source="enumerate", corpus=None, tol=STRICT_TOL, jobs=1):
    """
    Run the constructive witness on every labeled graph with exactly n_max
    vertices, or, with source="corpus", on every (id, graph) record supplied.
    """
    if source == "enumerate":
        items, total = _labeled_items(n_max)
        subject = f"graphs on {n_max} vertices"
    elif source == "corpus":
        if corpus is None:
            raise GraphError("corpus mode needs graph records")
        records = [(input_id, g.base if isinstance(g, SelfLoopGraph) else g) for input_id, g in corpus]
        items, total = iter(records), len(records)
        subject = "corpus graphs"
    else:
        raise GraphError(f"unknown source '{source}' (expected enumerate or corpus)")

    logger.info("Running the loop-set witness on %d %s", total, subject)
    summary = _summarize(_run_rows(_witness_row, items, total, "witness", jobs, tol=tol), subject)
    ok(logger, "Witness suite: %s", summary.summary_line())
    return summary


def _subadditivity_row(input_id, g, tol):
    e = energy(g)
    full = g.vertex_mask
    e_loops = [energy_self_loop(SelfLoopGraph(g, LoopSet(g.n, mask))).energy for mask in range(full + 1)]
    problems = []
    min_gap = math.inf
    for mask in range(1, full):
        gap = e_loops[mask] + e_loops[full ^ mask] - 2.0 * e
        min_gap = min(min_gap, gap)
        if gap < -tol:
            problems.append(f"S={mask:#x}: gap {gap:.3e}")
        failure = _theorem_case_failure(e, e_loops[mask], e_loops[full ^ mask], tol)
        if failure:
            problems.append(f"S={mask:#x}: {failure}")
    detail = "; ".join(problems) if problems else f"min gap {min_gap:.6g}"
    return {"id": input_id, "ok": not problems, "detail": detail, "measurements": {"min_gap": min_gap}}


def exhaustive_subadditivity_check(n_max, tol=STRICT_TOL, jobs=1):
    """Complement inequality and theorem cases for every graph on n_max vertices and every ∅ ≠ S ⊊ V."""
    items, total = _labeled_items(n_max)
    subject = f"graphs on {n_max} vertices (all loop sets)"
    summary = _summarize(_run_rows(_subadditivity_row, items, total, "subadditivity", jobs, tol=tol), subject)
    ok(logger, "Subadditivity suite: %s", summary.summary_line())
    return summary


def random_subadditivity_check(samples, n, seed=0, tol=STRICT_TOL):
    if not 2 <= n <= 62:
        raise GraphError(f"random sampling needs 2 <= n <= 62, got {n}")
    rng = np.random.default_rng(seed)
    pairs = n * (n - 1) // 2
    summary = CheckSummary(subject=f"random (G, S) pairs on {n} vertices")
    for _ in range(samples):
        bits = rng.integers(0, 2, size=pairs)
        g = Graph.from_edge_mask(n, sum(1 << int(k) for k in np.flatnonzero(bits)))
        s = LoopSet(n, int(rng.integers(1, (1 << n) - 1)))
        gap = check_subadditivity(g, s)
        summary.record(format_record(SelfLoopGraph(g, s)), gap >= -tol, f"gap {gap:.6g}")
        summary.measurements["min_gap"] = min(gap, summary.measurements.get("min_gap", gap))
    return summary


def _bipartite_row(input_id, g, tol):
    if is_bipartite(g) is None:
        return {"id": input_id, "ok": True, "detail": "not bipartite", "tag": "skipped"}
    e = energy(g)
    full = g.vertex_mask
    e_loops = [energy_self_loop(SelfLoopGraph(g, LoopSet(g.n, mask))).energy for mask in range(full + 1)]
    problems = []
    for mask in range(full + 1):
        if abs(e_loops[mask] - e_loops[full ^ mask]) > tol:
            problems.append(f"S={mask:#x}: E(G_S)={e_loops[mask]:.12g} vs E(G_V∖S)={e_loops[full ^ mask]:.12g}")
        if e_loops[mask] < e - tol:
            problems.append(f"S={mask:#x}: E(G_S)={e_loops[mask]:.12g} below E(G)={e:.12g}")
    detail = "; ".join(problems) if problems else "complement equality and lower bound hold"
    return {"id": input_id, "ok": not problems, "detail": detail, "tag": "bipartite"}


def bipartite_law_check(n_max, tol=STRICT_TOL, jobs=1):
    """For bipartite G: E(G_S) = E(G_V∖S) and E(G_S) >= E(G) for every S."""
    items, total = _labeled_items(n_max)
    summary = _summarize(_run_rows(_bipartite_row, items, total, "bipartite", jobs, tol=tol),
                         f"graphs on {n_max} vertices (bipartite laws)")
    ok(logger, "Bipartite suite: %s (%d bipartite)", summary.summary_line(), summary.tally.get("bipartite", 0))
    return summary


def remark_spectra_check(tol=REMARK_TOL):
    """Eigensolved loop spectra of the two H bases against the catalogued lists."""
    summary = CheckSummary(subject="H-base loop spectra")
    for variant, kind in H_BASES.items():
        computed = energy_self_loop(SelfLoopGraph.all_loops(make_named(kind))).spectrum.values
        expected = sorted(LOOP_SPECTRA[variant], reverse=True)
        worst = max(abs(c - e) for c, e in zip(computed, expected))
        summary.record(f"{variant}:{kind}", worst <= tol, f"max deviation {worst:.3e}")
    return summary
