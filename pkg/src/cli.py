#!/usr/bin/env python3
"""
Self-Loop Energy CLI
Energy queries, loop-set witnesses, equienergetic family checks and the
exhaustive verification suites.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from console import ok, setup_logging
from energy import STRICT_TOL, EnergyError, energy_self_loop
from graph_core import (
    GraphError,
    SelfLoopGraph,
    decode_graph6,
    format_loop_mask,
    parse_loop_mask,
    read_corpus,
)
from reports import emit_report
from spectral import EigensolverError, SpectralError, cluster_spectrum
from verify import (
    CheckSummary,
    ToleranceAmbiguityError,
    bipartite_law_check,
    build_family,
    conjecture_witness,
    exhaustive_conjecture_check,
    exhaustive_subadditivity_check,
    remark_spectra_check,
    scan_loop_sets,
    verify_family_pair,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SUITES = ("conjecture", "subadditivity", "bipartite", "remark", "all")


class RunConfig(BaseModel):
    subcommand: Literal["energy", "witness", "family", "verify-all", "spectrum"]
    graph6: Optional[str] = None
    input: Optional[Path] = None
    loops: Optional[str] = None
    n: int = Field(default=1, ge=1)
    n_max: int = Field(default=4, ge=2)
    partner: Literal["empty", "complete"] = "empty"
    variant: Optional[Literal["h1", "h2"]] = None
    suite: Literal["conjecture", "subadditivity", "bipartite", "remark", "all"] = "conjecture"
    format: Optional[Literal["json", "csv", "text"]] = None
    tol: Optional[float] = Field(default=None, gt=0)
    jobs: int = Field(default=1, ge=1)
    scan: bool = False
    verbose: bool = False

    @property
    def strict_tol(self):
        return self.tol if self.tol is not None else STRICT_TOL

    @property
    def output_format(self):
        if self.format is not None:
            return self.format
        return "text" if self.subcommand == "verify-all" else "json"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], help="Report format (default json; text for verify-all)")
    common.add_argument("--tol", type=float, help=f"Strict comparison tolerance (default {STRICT_TOL:g})")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    graphs = argparse.ArgumentParser(add_help=False)
    source = graphs.add_mutually_exclusive_group()
    source.add_argument("--graph6", help="Single graph in graph6")
    source.add_argument("--input", type=Path, help="Corpus file, one `graph6[ : hexmask]` record per line")
    graphs.add_argument("--loops", help="Hex loop mask for --graph6 (digit k covers vertices 4k..4k+3)")

    parser = argparse.ArgumentParser(description="Energy of graphs with self-loops")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("energy", parents=[common, graphs], help="Energy report of G_S")
    sub.add_parser("spectrum", parents=[common, graphs], help="Loop-matrix spectrum with multiplicities")

    witness = sub.add_parser("witness", parents=[common, graphs], help="Loop set S with E(G_S) > E(G)")
    witness.add_argument("--scan", action="store_true", help="Also list every loop set that beats E(G) (n <= 10)")

    family = sub.add_parser("family", parents=[common], help="Equienergetic family nH ∨ nK̄12 / nH ∨ nK12")
    family.add_argument("--partner", choices=["empty", "complete"], default="empty")
    family.add_argument("--n", type=int, default=1)
    family.add_argument("--variant", choices=["h1", "h2"], help="Report one member instead of checking the pair")

    verify_all = sub.add_parser("verify-all", parents=[common], help="Exhaustive verification suites")
    verify_all.add_argument("--n-max", type=int, default=4, help="Enumerate all labeled graphs on this many vertices")
    verify_all.add_argument("--input", type=Path, help="Run the witness suite on a corpus instead")
    verify_all.add_argument("--suite", choices=SUITES, default="conjecture")
    verify_all.add_argument("--jobs", type=int, default=1, help="Parallel workers")
    return parser


def _reject_empty(records):
    for input_id, gs in records:
        if gs.base.n == 0:
            raise GraphError(f"{input_id}: the graph on 0 vertices has no loop matrix")
    return records


def _load_records(config):
    if config.graph6 is not None:
        g = decode_graph6(config.graph6)
        loops = parse_loop_mask(config.loops or "", g.n)
        return _reject_empty([(config.graph6, SelfLoopGraph(g, loops))]), False
    if config.input is not None:
        if config.loops is not None:
            raise GraphError("--loops applies to --graph6; corpus records carry their own masks")
        return _reject_empty(read_corpus(config.input)), True
    raise GraphError("need --graph6 or --input")


def _emit(config, records, many):
    emit_report(records if many else records[0], config.output_format)


def cmd_energy(config):
    records, many = _load_records(config)
    reports = [energy_self_loop(gs) for _, gs in records]
    _emit(config, reports, many)
    return EXIT_OK


def cmd_spectrum(config):
    records, many = _load_records(config)
    rows = []
    for input_id, gs in records:
        report = energy_self_loop(gs)
        clusters = cluster_spectrum(report.spectrum)
        if config.output_format == "csv":
            rows += [{"id": input_id, "value": v, "multiplicity": m} for v, m in clusters.pairs]
        else:
            rows.append({
                "id": input_id,
                "n": report.n,
                "alpha": report.alpha,
                "spectrum": list(report.spectrum.values),
                "clusters": [[v, m] for v, m in clusters.pairs],
            })
    emit_report(rows if many or config.output_format == "csv" else rows[0], config.output_format)
    return EXIT_OK


def cmd_witness(config):
    records, many = _load_records(config)
    results = []
    for input_id, gs in records:
        if gs.loops.alpha:
            logger.warning("%s: ignoring the supplied loop mask; the witness chooses its own", input_id)
        cert = conjecture_witness(gs.base, config.strict_tol)
        record = {"id": input_id, **cert.as_record()}
        if config.scan:
            found = scan_loop_sets(gs.base, config.strict_tol)
            record["witness_count"] = len(found)
            record["witness_sets"] = [format_loop_mask(s) for s in found]
        results.append(record)
    _emit(config, results, many)
    return EXIT_OK


def cmd_family(config):
    partner = f"{config.partner}12"
    tol = config.strict_tol
    if config.variant is not None:
        inst = build_family(config.variant, partner, config.n)
        report = energy_self_loop(inst.graph)
        gap = abs(report.energy - inst.predicted_energy)
        emit_report({
            "variant": inst.variant,
            "partner": inst.partner,
            "n": inst.n,
            "vertices": report.n,
            "alpha": report.alpha,
            "energy": report.energy,
            "predicted_energy": inst.predicted_energy,
            "matches": gap <= tol,
            "clusters": [[v, m] for v, m in inst.predicted_spectrum.pairs],
        }, config.output_format)
        return EXIT_OK if gap <= tol else EXIT_FAILED

    summary = verify_family_pair(partner, config.n, tol)
    if config.output_format == "text":
        emit_report(summary, "text")
    else:
        emit_report({
            "partner": partner,
            "n": config.n,
            "energy": summary.measurements["h1:energy"],
            "energy_h2": summary.measurements["h2:energy"],
            "predicted_energy": summary.measurements["predicted_energy"],
            "difference": summary.measurements["difference"],
            "equal": summary.measurements["difference"] <= tol,
            **summary.as_record(),
        }, config.output_format)
    return EXIT_OK if summary.ok else EXIT_FAILED


def cmd_verify_all(config):
    tol = config.strict_tol
    if config.input is not None:
        if config.suite != "conjecture":
            raise GraphError(f"--input runs the conjecture suite only, not '{config.suite}'")
        summary = exhaustive_conjecture_check(source="corpus", corpus=read_corpus(config.input), tol=tol, jobs=config.jobs)
    else:
        suites = {
            "conjecture": lambda: exhaustive_conjecture_check(config.n_max, tol=tol, jobs=config.jobs),
            "subadditivity": lambda: exhaustive_subadditivity_check(config.n_max, tol=tol, jobs=config.jobs),
            "bipartite": lambda: bipartite_law_check(config.n_max, tol=tol, jobs=config.jobs),
            "remark": remark_spectra_check,
        }
        if config.suite == "all":
            summary = CheckSummary()
            for run_suite in suites.values():
                summary = summary.merge(run_suite())
            summary.subject = f"checks across all suites (n={config.n_max})"
        else:
            summary = suites[config.suite]()
    emit_report(summary, config.output_format)
    if summary.ok:
        ok(logger, "All checks passed")
        return EXIT_OK
    logger.error("%d check(s) failed", len(summary.failures))
    return EXIT_FAILED


COMMANDS = {
    "energy": cmd_energy,
    "spectrum": cmd_spectrum,
    "witness": cmd_witness,
    "family": cmd_family,
    "verify-all": cmd_verify_all,
}


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.verbose)
    try:
        config = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
    except ValidationError as e:
        logger.error("invalid arguments: %s", e)
        return EXIT_USAGE

    try:
        return COMMANDS[config.subcommand](config)
    except (GraphError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except (ToleranceAmbiguityError, EigensolverError, EnergyError, SpectralError) as e:
        logger.error("%s", e)
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
