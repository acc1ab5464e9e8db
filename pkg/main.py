#!/usr/bin/env python3
"""
groupalg command line.

    python main.py graph --in data/graph_o2.dot --verdict
    python main.py oracle --groupoid data/groupoid_z2.json --check crosscheck --json

Exit status: 0 when the analysis completed (whatever the verdicts), 1 when an
input failed to load or validate, 2 on a usage error.
"""
import argparse
import hashlib
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

import algebra_analysis as alg
import coarse_roe
import graph_tools
import groupoid_core as gc
import inverse_semigroup as isg
import partial_action as pa
import self_similar as ss
import twisted_convolution as tc
from config import Config
from error_handling import (
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    handle_validation_error,
    safe_execute,
    with_error_boundary,
)
from groupalg_utils import SemiDecision, ValidationReport, Verdict, file_digest, jsonable, write_json_file
from utils.logging_utils import log_info


class Report(BaseModel):
    """Versioned JSON report; identical inputs and seed give identical reports up to timing."""

    model_config = ConfigDict(populate_by_name=True)

    schema_tag: str = Field(default=Config.REPORT_SCHEMA, alias="schema")
    input_digest: str
    command: str
    checks: List[str] = Field(default_factory=list)
    verdicts: Dict[str, Any] = Field(default_factory=dict)
    timing: Dict[str, float] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


def input_digest(paths: Sequence[str], seed: Optional[int] = None) -> str:
    h = hashlib.sha256()
    for path in paths:
        h.update(file_digest(path).encode())
    if seed is not None:
        h.update(f"seed={seed}".encode())
    return h.hexdigest()


def _summary(value: Any) -> str:
    if isinstance(value, Verdict):
        return ("yes" if value.holds else "no") + (f" ({value.reason})" if value.reason else "")
    if isinstance(value, SemiDecision):
        shown = value.status.value
        if value.value is not None:
            shown += f"({value.value})"
        return shown + (f" ({value.reason})" if value.reason else "")
    if isinstance(value, ValidationReport):
        return "valid" if value.ok else "invalid: " + ", ".join(value.codes())
    if hasattr(value, "kind"):
        return value.kind
    return json.dumps(jsonable(value), sort_keys=True)


class Session:
    """Collects the checks of one command into a Report."""

    def __init__(self, command: str, paths: Sequence[str], seed: Optional[int] = None):
        self.report = Report(input_digest=input_digest(paths, seed), command=command)
        self.values: Dict[str, Any] = {}
        self._start = time.perf_counter()

    def record(self, check: str, func: Callable, *args, **kwargs) -> Any:
        started = time.perf_counter()
        value = func(*args, **kwargs)
        self.report.timing[check] = round(time.perf_counter() - started, 6)
        self.report.checks.append(check)
        self.report.verdicts[check] = jsonable(value)
        self.values[check] = value
        return value

    def emit(self, as_json: bool) -> int:
        self.report.timing["total"] = round(time.perf_counter() - self._start, 6)
        if as_json:
            print(self.report.to_json())
        else:
            for check in self.report.checks:
                print(f"{check}: {_summary(self.values[check])}")
        log_info(f"{self.report.command}: {len(self.report.checks)} checks done")
        return EXIT_OK


def _checks(args, default: Sequence[str]) -> List[str]:
    return list(args.check) if args.check else list(default)


def _load_groupoid_and_cocycle(args):
    g = gc.load_groupoid(args.groupoid)
    handle_validation_error(gc.validate(g), g.name)
    sigma = tc.load_cocycle(args.cocycle, g) if args.cocycle else tc.trivial_cocycle(g)
    handle_validation_error(tc.validate_cocycle(sigma), f"cocycle on {g.name}")
    return g, sigma


def _paths(*paths: Optional[str]) -> List[str]:
    return [p for p in paths if p]


# --- Subcommands ---
ALGEBRA_CHECKS = ("validate", "centre", "simple", "maximal_abelian", "detects_ideals", "infinite_idempotent")


@with_error_boundary
def cmd_algebra(args) -> int:
    g, sigma = _load_groupoid_and_cocycle(args)
    session = Session("algebra", _paths(args.groupoid, args.cocycle))
    a = alg.from_groupoid(g, sigma)
    ac = alg.complexify(a) if sigma.field == "R" else a
    diag = alg.diagonal(ac, g)
    for check in _checks(args, ("validate", "simple", "maximal_abelian")):
        if check == "validate":
            session.record(check, alg.validate_algebra, a)
        elif check == "centre":
            session.record(check, lambda: {"dim": int(alg.centre(ac).shape[0])})
        elif check == "simple":
            session.record(check, alg.is_simple_burnside, ac)
        elif check == "maximal_abelian":
            session.record(check, alg.is_maximal_abelian, ac, diag)
        elif check == "detects_ideals":
            session.record(check, alg.detects_ideals, ac, diag)
        elif check == "infinite_idempotent":
            session.record(check, lambda: {
                g.label(u): alg.is_infinite_idempotent(ac, alg.element_vector(ac, tc.delta(g, u)))
                for u in g.unit_list})
    return session.emit(args.json)


ORACLE_CHECKS = ("validate", "crosscheck", "topologically_free", "effective", "principal",
                 "topologically_principal", "minimal", "hausdorff", "n_filling", "locally_contracting",
                 "norms", "faithfulness")


def _norm_table(f: tc.ConvElement, sigma: tc.TwoCocycle) -> Dict[str, Any]:
    rep = tc.regular_rep(f, sigma)
    out: Dict[str, Any] = {kind: tc.norm(f, kind) for kind in ("sup", "L1", "star_d", "star_r", "I")}
    for p in (1, 2, math.inf):
        tag = "inf" if math.isinf(p) else str(p)
        out[f"regular_{tag}"] = tc.operator_norm(rep, p)
        out[f"bound_{tag}"] = tc.lp_norm_bound(f, p)
    return out


@with_error_boundary
def cmd_oracle(args) -> int:
    g, sigma = _load_groupoid_and_cocycle(args)
    session = Session("oracle", _paths(args.groupoid, args.cocycle, args.element), args.seed)
    f = None
    if args.element:
        f = tc.load_element(args.element, g)
    for check in _checks(args, ("validate", "crosscheck")):
        if check == "validate":
            session.record(check, gc.validate, g)
        elif check == "crosscheck":
            session.record(check, alg.crosscheck, g, sigma)
        elif check == "topologically_free":
            session.record(check, gc.is_topologically_free, g)
        elif check == "effective":
            session.record(check, gc.is_effective, g)
        elif check == "principal":
            session.record(check, gc.is_principal, g)
        elif check == "topologically_principal":
            session.record(check, gc.is_topologically_principal, g)
        elif check == "minimal":
            session.record(check, gc.is_minimal, g)
        elif check == "hausdorff":
            session.record(check, gc.is_hausdorff, g)
        elif check == "n_filling":
            session.record(check, gc.is_n_filling, g, args.n)
        elif check == "locally_contracting":
            session.record(check, gc.is_locally_contracting, g)
        elif check in ("norms", "faithfulness"):
            if f is None:
                f = tc.random_element(g, np.random.default_rng(args.seed))
            if check == "norms":
                session.record(check, _norm_table, f, sigma)
            else:
                session.record(check, tc.check_faithfulness, f, sigma)
    return session.emit(args.json)


SGRP_CHECKS = ("validate", "tight", "closed", "topologically_free", "minimal", "locally_contracting", "crosscheck")


@with_error_boundary
def cmd_sgrp(args) -> int:
    s = isg.load_semigroup(args.input)
    session = Session("sgrp", [args.input])
    report = session.record("validate", isg.validate_semigroup, s)
    handle_validation_error(report, s.name)
    for check in _checks(args, ("tight", "crosscheck")):
        if check == "validate":
            continue
        if check == "tight":
            session.record(check, lambda: {
                "tight_filters": [isg.filter_label(s, phi) for phi in isg.tight_filters(s)],
                "ultrafilters": [isg.filter_label(s, phi) for phi in isg.ultrafilters(s)],
                "germs": len(isg.tight_groupoid(s)),
            })
        elif check == "closed":
            session.record(check, isg.is_closed, s)
        elif check == "topologically_free":
            session.record(check, isg.is_topologically_free_s, s)
        elif check == "minimal":
            session.record(check, isg.is_minimal_s, s)
        elif check == "locally_contracting":
            session.record(check, isg.is_locally_contracting_s, s)
        elif check == "crosscheck":
            session.record(check, isg.tight_groupoid_crosscheck, s)
    return session.emit(args.json)


PACTION_CHECKS = ("validate", "topologically_free", "minimal", "n_filling", "local_boundary", "cyclic", "crosscheck")


@with_error_boundary
def cmd_paction(args) -> int:
    theta, u = pa.load_action(args.input)
    session = Session("paction", [args.input])
    handle_validation_error(session.record("validate", pa.validate_action, theta), theta.name)
    if u is not None:
        handle_validation_error(session.record("validate_cocycle", pa.validate_action_cocycle, theta, u),
                                f"cocycle on {theta.name}")
    for check in _checks(args, ("topologically_free", "minimal")):
        if check == "validate":
            continue
        if check == "topologically_free":
            session.record(check, pa.is_topologically_free_pa, theta)
        elif check == "minimal":
            session.record(check, pa.is_minimal_pa, theta)
        elif check == "n_filling":
            session.record(check, pa.is_n_filling_pa, theta, args.n)
        elif check == "local_boundary":
            session.record(check, pa.is_local_boundary_pa, theta)
        elif check == "cyclic":
            session.record(check, pa.cyclic_subgroup_conditions, theta, u)
        elif check == "crosscheck":
            g, sigma = pa.transformation_groupoid(theta, u)
            session.record(check, alg.crosscheck, g, sigma)
    if args.emit_groupoid:
        g, sigma = pa.transformation_groupoid(theta, u)
        write_json_file(args.emit_groupoid, gc.groupoid_to_json(g))
        if sigma is not None and not tc.is_trivial(sigma):
            out = Path(args.emit_groupoid)
            write_json_file(str(out.with_name(out.stem + ".cocycle.json")), tc.cocycle_to_json(sigma))
        log_info(f"wrote transformation groupoid of {theta.name} to {args.emit_groupoid}")
    return session.emit(args.json)


@with_error_boundary
def cmd_graph(args) -> int:
    q = graph_tools.load_graph(args.input)
    session = Session("graph", [args.input])
    session.record("singular_vertices", lambda: sorted(graph_tools.singular_vertices(q)))
    session.record("every_cycle_has_entry", graph_tools.every_cycle_has_entry, q)
    session.record("cofinal", graph_tools.is_cofinal, q)
    if args.verdict:
        session.record("verdict", graph_tools.simplicity_verdict, q)
    if args.oracle:
        g = graph_tools.boundary_path_groupoid_acyclic(q)
        session.record("oracle_simple", alg.is_simple_burnside, alg.from_groupoid(g))
    return session.emit(args.json)


@with_error_boundary
def cmd_selfsim(args) -> int:
    a = ss.load_selfsim(args.input)
    depth = args.depth
    session = Session("selfsim", [args.input], depth)
    handle_validation_error(session.record("identities", ss.validate_cocycle_identities, a), a.name)
    session.record("orbits", ss.orbit_relation, a)
    if args.state:
        vertices = [args.vertex] if args.vertex else list(a.graph.vertices)
        session.record("strongly_fixed", ss.strongly_fixed_paths, a, args.state, depth)
        for v in vertices:
            session.record(f"slack@{v}", ss.is_slack, a, args.state, v, depth)
    if args.verdict:
        session.record("verdict", ss.verdict, a, depth)
    return session.emit(args.json)


ROE_CHECKS = ("simple", "ideals", "decompose", "normbound")


@with_error_boundary
def cmd_roe(args) -> int:
    cs, t = coarse_roe.load_coarse(args.input)
    session = Session("roe", [args.input], args.seed)
    for check in _checks(args, ("simple",)):
        if check == "simple":
            session.record(check, coarse_roe.is_simple_coarse, cs)
        elif check == "ideals":
            session.record(check, coarse_roe.coarse_ideals, cs)
        elif check == "decompose":
            largest = cs.largest if t is None else t.support
            session.record(check, lambda: [sorted(piece) for piece in coarse_roe.decompose_into_bisections(cs, largest)])
        elif check == "normbound":
            if t is None:
                t = coarse_roe.random_controlled_matrix(np.random.default_rng(args.seed), cs)
            for p in args.p:
                session.record(f"normbound_{p}", coarse_roe.matrix_rep_norm_bound, cs, t, p)
    return session.emit(args.json)


def _crosscheck_fixture(path: str, cocycle: Optional[str]) -> Dict[str, Any]:
    g = gc.load_groupoid(path)
    handle_validation_error(gc.validate(g), g.name)
    sigma = tc.load_cocycle(cocycle, g) if cocycle else None
    return alg.crosscheck(g, sigma)


def _companion_cocycle(path: Path) -> Optional[str]:
    candidate = path.with_name(path.name.replace("groupoid_", "cocycle_", 1))
    return str(candidate) if candidate.exists() else None


@with_error_boundary
def cmd_corpus(args) -> int:
    """crosscheck on every groupoid fixture of a directory, evaluated concurrently, reported in order."""
    directory = Path(args.dir or Config.DATA_DIR)
    if not directory.is_dir():
        raise UsageError(f"{directory} is not a directory")
    fixtures = sorted(directory.glob("groupoid_*.json"))
    session = Session("corpus", [str(p) for p in fixtures], args.seed)

    def run_one(path: Path):
        return safe_execute(_crosscheck_fixture, str(path), _companion_cocycle(path),
                            error_message=f"corpus fixture {path.name}")

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(run_one, fixtures))
    for path, result in zip(fixtures, results):
        session.record(path.name, lambda r=result: r if r is not None else {"skipped": "invalid fixture"})
    rng = np.random.default_rng(args.seed)
    for k in range(args.random):
        g = gc.random_groupoid(rng)
        session.record(f"random_{k}", alg.crosscheck, g)
    return session.emit(args.json)


# --- Parser ---
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the versioned JSON report")
    common.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="seed for randomized runs")
    common.add_argument("--depth", type=int, default=Config.DEFAULT_DEPTH, help="search depth for semi-decisions")

    parser = argparse.ArgumentParser(prog="groupalg", description="Finite groupoid algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("algebra", parents=[common], help="oracles on the convolution algebra")
    p.add_argument("--groupoid", required=True)
    p.add_argument("--cocycle")
    p.add_argument("--check", action="append", choices=ALGEBRA_CHECKS)
    p.set_defaults(handler=cmd_algebra)

    p = sub.add_parser("oracle", parents=[common], help="groupoid checkers and the theorem cross-check")
    p.add_argument("--groupoid", required=True)
    p.add_argument("--cocycle")
    p.add_argument("--element")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--check", action="append", choices=ORACLE_CHECKS)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("sgrp", parents=[common], help="inverse semigroups and their tight groupoids")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--check", action="append", choices=SGRP_CHECKS)
    p.set_defaults(handler=cmd_sgrp)

    p = sub.add_parser("paction", parents=[common], help="partial actions and transformation groupoids")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--check", action="append", choices=PACTION_CHECKS)
    p.add_argument("--emit-groupoid", dest="emit_groupoid")
    p.set_defaults(handler=cmd_paction)

    p = sub.add_parser("graph", parents=[common], help="graph algebra simplicity")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--verdict", action="store_true")
    p.add_argument("--oracle", action="store_true", help="Burnside oracle on the boundary-path groupoid (acyclic)")
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("selfsim", parents=[common], help="self-similar actions on graphs")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--verdict", action="store_true")
    p.add_argument("--state")
    p.add_argument("--vertex")
    p.set_defaults(handler=cmd_selfsim)

    p = sub.add_parser("roe", parents=[common], help="coarse spaces and controlled-propagation matrices")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--check", action="append", choices=ROE_CHECKS)
    p.add_argument("--p", action="append", default=None, help="1, 2 or inf (repeatable)")
    p.set_defaults(handler=cmd_roe)

    p = sub.add_parser("corpus", parents=[common], help="crosscheck every groupoid fixture of a directory")
    p.add_argument("--dir")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--random", type=int, default=0, help="also crosscheck this many random groupoids")
    p.set_defaults(handler=cmd_corpus)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if getattr(args, "p", None) is None and args.command == "roe":
        args.p = ["1", "2", "inf"]
    if args.depth < 1:
        print("groupalg: --depth must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    log_info(f"groupalg {args.command} started")
    return args.handler(args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
