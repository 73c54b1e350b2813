"""Command-line front end: compute / estimate / verify / sweep.

Every run is driven by a single YAML config file; ``--seed``, ``--out``,
``--grid``, ``--trials`` and ``--checks`` override the corresponding
config fields.  All randomness derives from the one root seed, so
re-running a command with the same config and seed reproduces every CSV
byte for byte.  Each command writes a manifest (config digest, package and
library versions, timestamp) next to its results, and renders figures
alongside the CSV output unless ``--no-figures`` is given.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from . import bodies as bd
from . import extremal, functionals, verify
from .errors import ConfigurationError, ContractError, DualOrliczError
from .orlicz import parse_function_spec, power
from .report import (render_body_figure, render_margin_figure, render_sweep_figure,
                     render_trace_figure, write_csv)
from .sphgrid import build_grid

FUNCTIONALS = ("volume", "vrad", "dual-mixed", "dual-surface", "dual-mean-radius",
               "primal-mixed", "multi-dual", "ith-dual")


# ---------------------------------------------------------------------------
# config handling

def load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigurationError(f"config file {path!r} does not exist")
    try:
        with open(p) as fh:
            cfg = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"config parse error in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"config {path} must be a mapping")
    return cfg


def _require(cfg: dict, field: str, command: str):
    if field not in cfg:
        raise ConfigurationError(f"{command}: missing required field {field!r}")
    return cfg[field]


def build_body(spec, grid, root_seed: int) -> bd.StarBody:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigurationError(f"body spec must be a mapping with a 'kind': {spec!r}")
    kind = spec["kind"]
    n = grid.dimension
    if kind == "ball":
        return bd.ball(n, float(spec.get("radius", 1.0)))
    if kind == "ellipsoid":
        if "matrix" in spec:
            return bd.ellipsoid(matrix=np.asarray(spec["matrix"], dtype=float))
        return bd.ellipsoid(semi_axes=np.asarray(_require(spec, "semi_axes", "ellipsoid"),
                                                 dtype=float))
    if kind == "lp-ball":
        return bd.lp_ball(n, float(_require(spec, "p", "lp-ball")))
    if kind == "cube":
        return bd.cube(n, float(spec.get("half_width", 1.0)))
    if kind == "polytope":
        facets = _require(spec, "facets", "polytope")
        A = np.asarray([f["a"] for f in facets], dtype=float)
        b = np.asarray([f["b"] for f in facets], dtype=float)
        return bd.polytope(A, b)
    if kind == "grid-sampled":
        return bd.from_grid_values(grid, np.asarray(_require(spec, "values", "grid-sampled"),
                                                    dtype=float))
    if kind == "random":
        return bd.make_random_star(
            n, grid,
            seed=int(spec.get("seed", root_seed)),
            roughness=float(spec.get("roughness", 0.3)),
            symmetric=bool(spec.get("symmetric", True)),
        )
    raise ConfigurationError(f"unknown body kind {kind!r}")


def build_grid_from_config(cfg: dict, seed: int, resolution_override=None):
    gspec = cfg.get("grid", {})
    dimension = int(gspec.get("dimension", 2))
    resolution = int(resolution_override or gspec.get("resolution", 512))
    scheme = gspec.get("scheme", "uniform-angle" if dimension == 2
                       else ("fibonacci" if dimension == 3 else "monte-carlo"))
    grid_seed = gspec.get("seed", seed) if scheme == "monte-carlo" else None
    return build_grid(dimension, resolution, scheme, seed=grid_seed)


def _config_digest(cfg: dict, seed: int) -> str:
    canon = yaml.safe_dump({"config": cfg, "seed": seed}, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def write_manifest(out: Path, cfg: dict, seed: int, command: str) -> None:
    manifest = {
        "command": command,
        "config_digest": _config_digest(cfg, seed),
        "seed": seed,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": sys.version.split()[0],
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.yaml", "w") as fh:
        yaml.safe_dump(manifest, fh, sort_keys=True)


def _write_record(out: Path, name: str, record: dict) -> None:
    with open(out / name, "w") as fh:
        yaml.safe_dump(record, fh, sort_keys=True)


# ---------------------------------------------------------------------------
# commands

def cmd_compute(cfg: dict, out: Path, seed: int, grid, figures: bool) -> int:
    section = _require(cfg, "compute", "compute")
    functional = _require(section, "functional", "compute")
    if functional not in FUNCTIONALS:
        raise ConfigurationError(
            f"compute.functional must be one of {FUNCTIONALS}, got {functional!r}")
    bodies_spec = section.get("bodies", {})
    funcs_spec = section.get("functions", {})

    def body(name):
        return build_body(_require(bodies_spec, name, "compute.bodies"), grid, seed)

    def func(name):
        return parse_function_spec(_require(funcs_spec, name, "compute.functions"))

    shown = []
    if functional == "volume":
        K = body("K")
        fv = functionals.volume(K, grid)
        shown = [K]
    elif functional == "vrad":
        K = body("K")
        value = functionals.vrad(K, grid)
        coarse = functionals.vrad(K, grid.coarsen())
        fv = functionals.FunctionalValue(value, abs(value - coarse), "vrad")
        shown = [K]
    elif functional == "dual-mixed":
        K, L = body("K"), body("L")
        fv = functionals.dual_mixed_volume(func("phi"), K, L, grid)
        shown = [K, L]
    elif functional == "dual-surface":
        K = body("K")
        fv = functionals.dual_surface_area(func("phi"), K, grid)
        shown = [K]
    elif functional == "dual-mean-radius":
        K = body("K")
        fv = functionals.dual_mean_radius(func("phi"), K, grid)
        shown = [K]
    elif functional == "primal-mixed":
        K, Q = body("K"), body("Q")
        fv = functionals.primal_mixed_volume(func("phi"), K, Q, grid)
        shown = [K, Q]
    elif functional == "multi-dual":
        Ks = [build_body(s, grid, seed) for s in _require(bodies_spec, "Ks", "compute.bodies")]
        Ls = [build_body(s, grid, seed) for s in _require(bodies_spec, "Ls", "compute.bodies")]
        phis = [parse_function_spec(s) for s in _require(funcs_spec, "phis", "compute.functions")]
        fv = functionals.multi_dual_mixed_volume(phis, Ks, Ls, grid)
        shown = Ks + Ls
    else:  # ith-dual
        K, L, Q1, Q2 = body("K"), body("L"), body("Q1"), body("Q2")
        i = float(_require(section, "i", "compute"))
        fv = functionals.ith_dual_mixed_volume(func("phi1"), func("phi2"), i,
                                               K, L, Q1, Q2, grid)
        shown = [K, L, Q1, Q2]

    print(f"{functional}: {fv.value:.6g} (quadrature error estimate {fv.quadrature_error:.2e})")
    write_manifest(out, cfg, seed, "compute")
    write_csv(out / "result.csv", ["functional", "value", "quadrature_error", "digest"],
              [{"functional": functional, "value": fv.value,
                "quadrature_error": fv.quadrature_error, "digest": fv.digest}])
    _write_record(out, "result.yaml", {
        "functional": functional, "value": float(fv.value),
        "quadrature_error": float(fv.quadrature_error), "digest": fv.digest,
        "grid": grid.describe(),
    })
    if figures and shown:
        render_body_figure(out / "bodies.png",
                           [bd.radial_eval(b, grid) for b in shown], title=functional)
    return 0


def cmd_estimate(cfg: dict, out: Path, seed: int, grid, figures: bool) -> int:
    section = _require(cfg, "estimate", "estimate")
    target = section.get("target", "affine")
    estimator = section.get("estimator", "full")
    budget = int(section.get("budget", extremal.DEFAULT_BUDGET))

    if target == "ith":
        bodies_spec = _require(section, "bodies", "estimate")
        funcs_spec = _require(section, "functions", "estimate")
        result = extremal.estimate_ith_mixed(
            parse_function_spec(_require(funcs_spec, "phi1", "estimate.functions")),
            parse_function_spec(_require(funcs_spec, "phi2", "estimate.functions")),
            float(_require(section, "i", "estimate")),
            build_body(_require(bodies_spec, "K", "estimate.bodies"), grid, seed),
            build_body(_require(bodies_spec, "L", "estimate.bodies"), grid, seed),
            grid, target=section.get("candidate_class", "affine"),
            budget=budget, seed=seed)
    elif target == "multi":
        bodies_spec = _require(section, "bodies", "estimate")
        funcs_spec = _require(section, "functions", "estimate")
        result = extremal.estimate_multi(
            [parse_function_spec(s) for s in _require(funcs_spec, "phis", "estimate.functions")],
            [build_body(s, grid, seed) for s in _require(bodies_spec, "Ks", "estimate.bodies")],
            grid, target=section.get("candidate_class", "affine"),
            mode=section.get("mode", "joint"), budget=budget, seed=seed)
    else:
        K = build_body(_require(section, "body", "estimate"), grid, seed)
        phi = parse_function_spec(_require(section, "function", "estimate"))
        problem = extremal.ExtremalProblem(
            target=target, phi=phi, body=K, grid=grid,
            sense=section.get("sense"),
            budget=budget,
            restarts=int(section.get("restarts", extremal.DEFAULT_RESTARTS)),
            seed=seed,
            min_step=float(section.get("min_step", extremal.MIN_STEP)),
        )
        if estimator == "ellipsoid":
            result = extremal.estimate_ellipsoid_restricted(problem)
        elif estimator == "full":
            result = extremal.estimate(problem)
        else:
            raise ConfigurationError(f"unknown estimator {estimator!r}")

    print(f"{target} estimate ({result.sense}): {result.value:.6g}")
    for name, value in sorted(result.markers.items()):
        shown = f"{value:.6g}" if isinstance(value, float) else value
        print(f"  marker {name}: {shown}")
    print(f"  converged: {result.converged}  evaluations: {result.evaluations}")
    print(f"  note: {result.bias_note}")

    write_manifest(out, cfg, seed, "estimate")
    write_csv(out / "trace.csv", ["evaluation", "objective", "step"],
              [{"evaluation": t[0], "objective": t[1], "step": t[2]} for t in result.trace])
    cand = result.candidate
    candidates = [cand] if isinstance(cand, bd.StarBody) else list(cand)

    def _write_candidate(path, body):
        rho = bd.radial_eval(body, grid).rho.values
        rows = []
        for node, r in zip(grid.nodes, rho):
            row = {f"u{j}": float(c) for j, c in enumerate(node)}
            row["radius"] = float(r)
            rows.append(row)
        write_csv(path, [f"u{j}" for j in range(grid.dimension)] + ["radius"], rows)

    if len(candidates) == 1:
        _write_candidate(out / "candidate.csv", candidates[0])
    else:
        for k, body in enumerate(candidates, start=1):
            _write_candidate(out / f"candidate{k}.csv", body)
    _write_record(out, "result.yaml", {
        "target": target, "estimator": estimator, "sense": result.sense,
        "value": float(result.value),
        "markers": {k: (float(v) if isinstance(v, float) else v)
                    for k, v in result.markers.items()},
        "converged": bool(result.converged),
        "evaluations": int(result.evaluations),
        "bias_note": result.bias_note,
    })
    if figures:
        render_trace_figure(out / "trace.png", result.trace, result.sense)
        render_body_figure(out / "candidate.png",
                           [bd.radial_eval(b, grid) for b in candidates],
                           title=f"{target} optimizer")
    return 0


def cmd_verify(cfg: dict, out: Path, seed: int, grid, figures: bool,
               checks_override=None, trials_override=None) -> int:
    section = cfg.get("verify", {})
    checks = checks_override or section.get("checks", "all")
    if isinstance(checks, str):
        checks = None if checks == "all" else [c.strip() for c in checks.split(",")]
    trials = int(trials_override or section.get("trials", 100))
    budget = int(section.get("search_budget", 300))
    for cid in checks or []:
        try:
            verify.get_check(cid)
        except DualOrliczError as exc:
            raise ConfigurationError(str(exc)) from exc

    reports = verify.run_suite(checks, trials=trials, seed=seed, grid=grid,
                               search_budget=budget)
    write_manifest(out, cfg, seed, "verify")
    trial_rows = [row for rep in reports for row in rep.rows]
    write_csv(out / "trials.csv",
              ["check", "seed", "trial", "lhs", "rhs", "margin", "verdict"], trial_rows)
    monitor_rows = [row for rep in reports for row in rep.monitor_rows]
    write_csv(out / "monitors.csv",
              ["check", "seed", "trial", "quantity", "value"], monitor_rows)
    summary = {}
    for rep in reports:
        check = verify.get_check(rep.check_id)
        summary[rep.check_id] = {
            "statement": check.statement,
            "inputs": check.inputs,
            "soundness": check.soundness,
            "tolerance": check.tolerance,
            "trials": rep.trials,
            "verdict": rep.verdict,
            "min_margin": None if not math.isfinite(rep.min_margin) and rep.min_margin > 0
            else float(rep.min_margin),
            "failures": len(rep.failures),
            "errors": len(rep.errors),
            "monitor_rows": len(rep.monitor_rows),
        }
    _write_record(out, "summary.yaml", summary)
    if figures:
        render_margin_figure(out / "margins.png", reports)

    failed = [r for r in reports if r.verdict == "fail"]
    for rep in reports:
        margin = f"{rep.min_margin:.3e}" if math.isfinite(rep.min_margin) else "n/a"
        print(f"{rep.check_id:28s} {rep.verdict:8s} trials={rep.trials} min_margin={margin}")
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


def cmd_sweep(cfg: dict, out: Path, seed: int, grid, figures: bool) -> int:
    section = _require(cfg, "sweep", "sweep")
    parameter = _require(section, "parameter", "sweep")
    values = section.get("values") or []
    if not values:
        raise ConfigurationError("sweep.values must be a non-empty list")
    rows, series, xs = [], {}, []

    if parameter == "p":
        K = build_body(_require(section, "body", "sweep"), grid, seed)
        B = bd.ball(grid.dimension)
        for p in values:
            phi = power(float(p))
            s_k = functionals.dual_surface_area(phi, K, grid)
            s_b = functionals.dual_surface_area(phi, B, grid)
            rows.append({"p": float(p), "value": s_k.value, "ball_value": s_b.value,
                         "ratio": s_k.value / s_b.value,
                         "quadrature_error": s_k.quadrature_error})
            xs.append(float(p))
        header = ["p", "value", "ball_value", "ratio", "quadrature_error"]
        series = {"ratio": [r["ratio"] for r in rows]}
        xlabel = "p"
    elif parameter == "resolution":
        body_spec = section.get("body", {"kind": "ball"})
        for res in values:
            g = build_grid_from_config(cfg, seed, resolution_override=int(res))
            K = build_body(body_spec, g, seed)
            fv = functionals.volume(K, g)
            rows.append({"resolution": int(res), "value": fv.value,
                         "quadrature_error": fv.quadrature_error})
            xs.append(int(res))
        header = ["resolution", "value", "quadrature_error"]
        series = {"quadrature_error": [r["quadrature_error"] for r in rows]}
        xlabel = "resolution"
    elif parameter == "roughness":
        for rough in values:
            K = bd.make_random_star(grid.dimension, grid, seed=seed,
                                    roughness=float(rough), symmetric=True)
            vr = functionals.vrad(K, grid)
            vr_polar = functionals.vrad(bd.polar(K, grid), grid)
            rows.append({"roughness": float(rough), "vrad": vr,
                         "vrad_polar": vr_polar, "mahler_product": vr * vr_polar})
            xs.append(float(rough))
        header = ["roughness", "vrad", "vrad_polar", "mahler_product"]
        series = {"mahler_product": [r["mahler_product"] for r in rows]}
        xlabel = "roughness"
    else:
        raise ConfigurationError(
            f"sweep.parameter must be p, resolution or roughness, got {parameter!r}")

    write_manifest(out, cfg, seed, "sweep")
    write_csv(out / "sweep.csv", header, rows)
    for row in rows:
        print(", ".join(f"{k}={format_value_short(v)}" for k, v in row.items()))
    if figures:
        render_sweep_figure(out / "sweep.png", xs, series, xlabel)
    return 0


def format_value_short(v) -> str:
    return f"{v:.6g}" if isinstance(v, float) else str(v)


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualorlicz",
        description="Dual Orlicz-Brunn-Minkowski functionals on discretized bodies",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("compute", "evaluate one functional"),
                            ("estimate", "run an extremal estimator"),
                            ("verify", "run inequality checks"),
                            ("sweep", "sweep a parameter and tabulate values")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="YAML config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="root seed override")
        p.add_argument("--grid", type=int, default=None, help="grid resolution override")
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
        if name == "verify":
            p.add_argument("--checks", default=None, help="comma-separated check ids")
            p.add_argument("--trials", type=int, default=None, help="trials per check")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        command = args.command
        if "command" in cfg and cfg["command"] != command:
            raise ConfigurationError(
                f"config declares command {cfg['command']!r} but {command!r} was invoked")
        seed = args.seed if args.seed is not None else int(cfg.get("seed", 1))
        out = Path(args.out or cfg.get("output", "out"))
        grid = build_grid_from_config(cfg, seed, resolution_override=args.grid)
        figures = not args.no_figures
        if command == "compute":
            return cmd_compute(cfg, out, seed, grid, figures)
        if command == "estimate":
            return cmd_estimate(cfg, out, seed, grid, figures)
        if command == "verify":
            return cmd_verify(cfg, out, seed, grid, figures,
                              checks_override=args.checks, trials_override=args.trials)
        return cmd_sweep(cfg, out, seed, grid, figures)
    except (ConfigurationError, ContractError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DualOrliczError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
