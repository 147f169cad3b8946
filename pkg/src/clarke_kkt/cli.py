"""Command-line front end.

Commands:
    analyze <file> --at v1,...,vn   stationarity verdict for one candidate point
    suite [--export DIR]            run the built-in ground-truth suite
    check-properties <file> --at .. estimator property checks at a point

Exit codes for analyze: 0 stationary, 3 not stationary, 4 infeasible,
5 constraint qualification failed, 2 input or processing error.
JSON output is schema-stable and byte-reproducible for a fixed seed,
except for the timings field.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, sampling
from .errors import ClarkeKKTError, ProblemParseError
from .gendir import GenDirConfig, check_homogeneity, check_subadditivity
from .kkt import DEFAULT_ACTIVE_TOL, DEFAULT_EPS_STAT, verify_stationarity
from .problem import parse_problem
from .suite import evaluate_entry, registry

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_NOT_STATIONARY = 3
EXIT_INFEASIBLE = 4
EXIT_CQ_FAILED = 5

_VERDICT_EXIT = {
    "stationary": EXIT_OK,
    "not_stationary": EXIT_NOT_STATIONARY,
    "infeasible": EXIT_INFEASIBLE,
    "cq_failed": EXIT_CQ_FAILED,
    "error": EXIT_INPUT_ERROR,
}

HOMOGENEITY_LAMBDAS = (0.5, 1.0, 2.0, 10.0)
SUBADDITIVITY_PAIRS = 20


@dataclass
class RunConfig:
    seed: int = 42
    levels: int = 6
    samples: int = 200
    eps_stat: float = DEFAULT_EPS_STAT
    active_tol: float = DEFAULT_ACTIVE_TOL
    eps_mem: float = 0.05
    eps_sub: float = None
    sd_radius: float = None
    sd_count: int = None
    output: str = "human"

    def gendir_config(self) -> GenDirConfig:
        return GenDirConfig(levels=self.levels, samples_per_level=self.samples, seed=self.seed)

    def to_dict(self):
        return {
            "seed": self.seed,
            "levels": self.levels,
            "samples": self.samples,
            "eps_stat": self.eps_stat,
            "active_tol": self.active_tol,
            "eps_mem": self.eps_mem,
            "eps_sub": self.eps_sub,
            "sd_radius": self.sd_radius,
            "sd_count": self.sd_count,
        }


def _default_seed():
    env = os.environ.get("CLARKE_KKT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            pass
    return 42


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=_default_seed())
    parser.add_argument("--json", action="store_true", dest="as_json")
    parser.add_argument("--eps-stat", type=float, default=DEFAULT_EPS_STAT)
    parser.add_argument("--active-tol", type=float, default=DEFAULT_ACTIVE_TOL)
    parser.add_argument("--eps-mem", type=float, default=0.05)
    parser.add_argument("--eps-sub", type=float, default=None)
    parser.add_argument("--levels", type=int, default=6)
    parser.add_argument("--samples", type=int, default=200)
    parser.add_argument("--sd-radius", type=float, default=None)
    parser.add_argument("--sd-count", type=int, default=None)


def _run_config(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        levels=args.levels,
        samples=args.samples,
        eps_stat=args.eps_stat,
        active_tol=args.active_tol,
        eps_mem=args.eps_mem,
        eps_sub=args.eps_sub,
        sd_radius=args.sd_radius,
        sd_count=args.sd_count,
        output="json" if args.as_json else "human",
    )


def _parse_point(text, n):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"cannot parse point {text!r}")
    if len(values) != n:
        raise ValueError(f"point has {len(values)} coordinates, problem dimension is {n}")
    point = np.asarray(values)
    if not np.all(np.isfinite(point)):
        raise ValueError("point has non-finite coordinates")
    return point


def _load_problem(path):
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def _emit_json(obj, out):
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def cmd_analyze(args, out) -> int:
    cfg = _run_config(args)
    try:
        prob = _load_problem(args.file)
        point = _parse_point(args.at, prob.n)
    except (ProblemParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    start = time.perf_counter()
    report = verify_stationarity(
        prob, point, eps_stat=cfg.eps_stat, active_tol=cfg.active_tol,
        seed=cfg.seed, sd_radius=cfg.sd_radius, sd_count=cfg.sd_count,
    )
    elapsed = time.perf_counter() - start
    if cfg.output == "json":
        payload = {
            "version": __version__,
            "problem": prob.name,
            "point": list(point),
            "config": cfg.to_dict(),
            "feasibility": report.to_dict()["feasibility"],
            "cq": report.to_dict()["cq"],
            "certificate": report.to_dict()["certificate"],
            "verdict": report.verdict,
            "timings": {"analyze_s": elapsed},
        }
        _emit_json(payload, out)
    else:
        out.write(f"problem   : {prob.name}\n")
        out.write(f"point     : {list(point)}\n")
        out.write(f"feasible  : eq_norm={report.feasibility[0]:.3e} "
                  f"max_ineq={report.feasibility[1]:.3e}\n")
        if report.cq is not None:
            out.write(f"cq        : rank={report.cq.j1_rank} onto={report.cq.j1_onto} "
                      f"slater_ok={report.cq.slater_ok} active={list(report.cq.active_set)}\n")
        if report.certificate is not None:
            cert = report.certificate
            out.write(f"residual  : {cert.residual:.6e}\n")
            out.write(f"z1        : {list(cert.z1)}\n")
            out.write(f"z2        : {list(cert.z2)}\n")
            out.write(f"slackness : {cert.slackness:.6e}\n")
        if report.failed_stage is not None:
            out.write(f"failed at : {report.failed_stage}: {report.message}\n")
        out.write(f"verdict   : {report.verdict}\n")
    return _VERDICT_EXIT[report.verdict]


def cmd_suite(args, out) -> int:
    cfg = _run_config(args)
    if args.export is not None:
        export_dir = Path(args.export)
        export_dir.mkdir(parents=True, exist_ok=True)
        for entry in registry():
            (export_dir / f"{entry.name}.prob").write_text(entry.problem_text, encoding="utf-8")
        out.write(f"exported {len(registry())} problems to {export_dir}\n")
        return EXIT_OK
    entries = []
    timings = {}
    all_ok = True
    for entry in registry():
        start = time.perf_counter()
        result = evaluate_entry(
            entry, seed=cfg.seed, eps_stat=cfg.eps_stat,
            active_tol=cfg.active_tol, sd_radius=cfg.sd_radius, sd_count=cfg.sd_count,
        )
        timings[entry.name] = time.perf_counter() - start
        all_ok = all_ok and result["ok"]
        report = result["report"]
        cert = report.certificate
        entries.append({
            "name": entry.name,
            "verdict": report.verdict,
            "residual": None if cert is None else cert.residual,
            "z1": None if cert is None else list(cert.z1),
            "z2": None if cert is None else list(cert.z2),
            "z1_error": result["z1_error"],
            "z2_error": result["z2_error"],
            "probes": result["probes"],
            "ok": result["ok"],
        })
    if cfg.output == "json":
        payload = {
            "version": __version__,
            "config": cfg.to_dict(),
            "entries": entries,
            "ok": all_ok,
            "timings": timings,
        }
        _emit_json(payload, out)
    else:
        out.write(f"{'entry':<6}{'verdict':<16}{'residual':<14}{'z1':<20}{'z2':<20}"
                  f"{'ok':<6}{'time_s':<8}\n")
        for row in entries:
            residual = "-" if row["residual"] is None else f"{row['residual']:.3e}"
            z1 = "-" if not row["z1"] else ",".join(f"{v:.3f}" for v in row["z1"])
            z2 = "-" if not row["z2"] else ",".join(f"{v:.3f}" for v in row["z2"])
            out.write(f"{row['name']:<6}{row['verdict']:<16}{residual:<14}{z1:<20}{z2:<20}"
                      f"{str(row['ok']):<6}{timings[row['name']]:<8.2f}\n")
        out.write(f"overall: {'ok' if all_ok else 'FAILED'}\n")
    return EXIT_OK if all_ok else EXIT_FAILURE


def cmd_check_properties(args, out) -> int:
    cfg = _run_config(args)
    try:
        prob = _load_problem(args.file)
        point = _parse_point(args.at, prob.n)
    except (ProblemParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    gendir_cfg = cfg.gendir_config()
    start = time.perf_counter()
    reports = []
    for i in range(prob.n):
        phi = np.zeros(prob.n)
        phi[i] = 1.0
        reports.append(check_homogeneity(prob, point, phi, HOMOGENEITY_LAMBDAS, gendir_cfg))
    rng = sampling.substream(cfg.seed, sampling.NS_PROPERTIES, 0)
    for _ in range(SUBADDITIVITY_PAIRS):
        phi1 = rng.standard_normal(prob.n)
        phi2 = rng.standard_normal(prob.n)
        reports.append(check_subadditivity(prob, point, phi1, phi2, gendir_cfg, eps_sub=cfg.eps_sub))
    elapsed = time.perf_counter() - start
    all_ok = all(r.passed for r in reports)
    if cfg.output == "json":
        payload = {
            "version": __version__,
            "problem": prob.name,
            "point": list(point),
            "config": cfg.to_dict(),
            "reports": [r.to_dict() for r in reports],
            "ok": all_ok,
            "timings": {"check_properties_s": elapsed},
        }
        _emit_json(payload, out)
    else:
        for report in reports:
            out.write(f"{report.name:<15}{'pass' if report.passed else 'FAIL':<6}"
                      f"worst={report.worst:.3e} tol={report.tolerance:.3e}\n")
        out.write(f"overall: {'ok' if all_ok else 'FAILED'}\n")
    return EXIT_OK if all_ok else EXIT_FAILURE


def build_parser():
    parser = argparse.ArgumentParser(prog="clarke-kkt",
                                     description="Nonsmooth stationarity certificates")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="verdict for a candidate point of a problem file")
    analyze.add_argument("file")
    analyze.add_argument("--at", required=True, help="comma-separated point coordinates")
    _add_common(analyze)
    analyze.set_defaults(func=cmd_analyze)

    suite = sub.add_parser("suite", help="run the built-in ground-truth suite")
    suite.add_argument("--export", default=None, metavar="DIR",
                       help="write the suite problem files and exit")
    _add_common(suite)
    suite.set_defaults(func=cmd_suite)

    props = sub.add_parser("check-properties", help="estimator property checks at a point")
    props.add_argument("file")
    props.add_argument("--at", required=True)
    _add_common(props)
    props.set_defaults(func=cmd_check_properties)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, sys.stdout)
    except ClarkeKKTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
