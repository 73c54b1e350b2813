"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run with ``pytest -s`` or ``-v`` to
see them) and asserts the criterion.  Budgets and runtimes are asserted
where the criterion states them.
"""

import math
import time

import numpy as np
import pytest
import yaml

from dualorlicz import bodies as bd
from dualorlicz import extremal as ex
from dualorlicz import functionals as fn
from dualorlicz import verify as vf
from dualorlicz.cli import main as cli_main
from dualorlicz.orlicz import power
from dualorlicz.sphgrid import build_grid, unit_ball_volume


def _report(num, name, ok, detail=""):
    print(f"\nACCEPTANCE {num} [{name}]: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


@pytest.fixture(scope="module")
def grid512():
    return build_grid(2, 512, "uniform-angle")


def test_criterion_1_quadrature(grid512):
    t0 = time.time()
    vol2 = fn.volume(bd.ball(2), grid512).value
    t2 = time.time() - t0
    err2 = abs(vol2 - math.pi) / math.pi

    t0 = time.time()
    g3 = build_grid(3, 20000, "fibonacci")
    vol3 = fn.volume(bd.ball(3), g3).value
    t3 = time.time() - t0
    err3 = abs(vol3 - 4 * math.pi / 3) / (4 * math.pi / 3)

    ok = err2 <= 1e-4 and err3 <= 1e-2 and t2 < 1.0 and t3 < 1.0
    _report(1, "quadrature", ok,
            f"n=2 rel err {err2:.2e} ({t2:.2f}s), n=3 rel err {err3:.2e} ({t3:.2f}s)")


def test_criterion_2_dilate_identity(grid512):
    t0 = time.time()
    bodies = {
        "ball": bd.ball(2, 1.3),
        "ellipsoid": bd.ellipsoid(semi_axes=[1.7, 0.6]),
        "cube": bd.cube(2, 1.0),
    }
    worst = 0.0
    for name, K in bodies.items():
        vol = fn.volume_value(K, grid512)
        for phi in (power(-1), power(0.5), power(3)):
            for lam in (0.5, 1.0, 2.0):
                L = bd.transform(bd.LinearMap.scaling(2, lam), K)
                got = fn.dual_mixed_value(phi, K, L, grid512)
                expected = float(phi(lam)) * vol
                worst = max(worst, abs(got - expected) / abs(expected))
    elapsed = time.time() - t0
    ok = worst <= 1e-6 and elapsed < 1.0
    _report(2, "dilate-identity", ok, f"worst rel err {worst:.2e} ({elapsed:.2f}s)")


def test_criterion_3_homogeneity(grid512):
    n = 2
    K = bd.make_random_star(2, grid512, seed=42, roughness=0.35)
    worst = 0.0
    for p in (-1.0, 1.0, float(n + 1)):
        base = fn.dual_surface_area(power(p), K, grid512).value
        for lam in (0.5, 2.0):
            scaled = bd.transform(bd.LinearMap.scaling(2, lam), K)
            got = fn.dual_surface_area(power(p), scaled, grid512).value
            expected = lam ** (n - p) * base
            worst = max(worst, abs(got - expected) / abs(expected))
    ok = worst <= 1e-6
    _report(3, "homogeneity", ok, f"worst rel err {worst:.2e}")


def test_criterion_4_ellipsoid_closed_form(grid512):
    rot = bd.LinearMap.rotation2d(0.6).matrix
    ellipsoids = [
        bd.ellipsoid(semi_axes=[1.8, 0.45]),            # axis ratio 4
        bd.ellipsoid(matrix=rot @ np.diag([1.3, 0.65])),
    ]
    budget = 6000
    worst, slowest = 0.0, 0.0
    for E in ellipsoids:
        closed = {}
        for phi in (power(-1, 2), power(0.5, 2)):
            closed_val = float(phi(1 / fn.vrad(E, grid512))) * 2 * fn.volume_value(E, grid512)
            for target in ("affine", "geominimal"):
                prob = ex.ExtremalProblem(target=target, phi=phi, body=E,
                                          grid=grid512, budget=budget, seed=1)
                t0 = time.time()
                full = ex.estimate(prob)
                restricted = ex.estimate_ellipsoid_restricted(prob)
                slowest = max(slowest, time.time() - t0)
                for res in (full, restricted):
                    worst = max(worst, abs(res.value - closed_val) / closed_val)
                    assert res.evaluations <= 20000
    ok = worst <= 1e-2 and slowest < 60.0
    _report(4, "ellipsoid-closed-form", ok,
            f"worst rel err {worst:.2e}, slowest case {slowest:.1f}s, budget {budget}")


def test_criterion_5_bound_sandwich(grid512):
    t0 = time.time()
    phi = power(-1, 2)
    eps = 3e-2
    failures = []
    for k in range(50):
        roughness = 0.1 + 0.3 * (k % 4) / 3
        K = bd.make_random_star(2, grid512, seed=1000 + k, roughness=roughness,
                                symmetric=True)
        geo = ex.estimate(ex.ExtremalProblem(target="geominimal", phi=phi, body=K,
                                             grid=grid512, budget=1800, seed=k))
        aff = ex.estimate(ex.ExtremalProblem(target="affine", phi=phi, body=K,
                                             grid=grid512, budget=1800, seed=k),
                          extra_seeds=[geo.candidate])
        s_phi = 2 * fn.dual_mixed_value(phi, K, bd.ball(2), grid512)
        lower = float(phi(1 / fn.vrad(K, grid512))) * 2 * fn.volume_value(K, grid512)
        chain_ok = (lower * (1 - eps) <= aff.value
                    and aff.value <= geo.value * (1 + eps)
                    and geo.value <= s_phi * (1 + eps))
        if not chain_ok:
            failures.append((k, lower, aff.value, geo.value, s_phi))
    elapsed = time.time() - t0
    ok = not failures and elapsed < 1800
    _report(5, "bound-sandwich", ok,
            f"50 bodies, {len(failures)} violations, {elapsed:.0f}s")


def test_criterion_6_inequality_suite(grid512):
    t0 = time.time()
    reports = vf.run_suite(None, trials=100, seed=1, grid=grid512)
    elapsed = time.time() - t0
    failed = [r.check_id for r in reports if r.verdict == "fail"]
    monitor_ok = any(r.monitor_rows for r in reports)
    lines = ", ".join(f"{r.check_id}={r.verdict}" for r in reports if r.verdict != "pass")
    ok = len(reports) == 22 and not failed and monitor_ok and elapsed < 7200
    _report(6, "inequality-suite", ok,
            f"22 checks x 100 trials, {elapsed:.0f}s"
            + (f"; failing: {lines}" if failed else "")
            + f"; monitor rows: {sum(len(r.monitor_rows) for r in reports)}")


def test_criterion_7_exact_discrete_identities():
    grids = [
        build_grid(2, 512, "uniform-angle"),
        build_grid(2, 128, "uniform-angle"),
        build_grid(3, 600, "fibonacci"),
    ]
    check_ids = ("cyclic-powers", "mixed-alexander-fenchel", "cyclic-powers-multi",
                 "ith-cyclic")
    worst = math.inf
    for grid in grids:
        for cid in check_ids:
            rep = vf.run_check(vf.get_check(cid), trials=5, seed=2, grid=grid)
            worst = min(worst, rep.min_margin)
    ok = worst >= -1e-12
    _report(7, "exact-discrete-identities", ok,
            f"worst margin {worst:.3e} over {len(grids)} grids x {len(check_ids)} checks")


def test_criterion_8_affine_invariance(grid512):
    phi = power(-1, 2)
    K = bd.make_random_star(2, grid512, seed=77, roughness=0.3, symmetric=True)
    maps = [
        np.diag([1.7, 1 / 1.7]),
        np.array([[1.0, 1.0], [0.0, 1.0]]),
        bd.LinearMap.rotation2d(0.5).matrix @ np.diag([1.5, 1 / 1.5]),
    ]

    def run(body, target):
        prob = ex.ExtremalProblem(target=target, phi=phi, body=body,
                                  grid=grid512, budget=3000, seed=11)
        return ex.estimate(prob).value

    worst = 0.0
    for target in ("affine", "geominimal"):
        base = run(K, target)
        for T in maps:
            moved = run(bd.transform(T, K), target)
            worst = max(worst, abs(moved - base) / abs(base))
    ok = worst <= 5e-2
    _report(8, "affine-invariance", ok, f"worst rel deviation {worst:.2e}")


def test_criterion_9_determinism(tmp_path):
    grid_cfg = {"dimension": 2, "resolution": 256, "scheme": "uniform-angle"}
    configs = {
        "compute": {"seed": 3, "grid": grid_cfg,
                    "compute": {"functional": "dual-surface",
                                "bodies": {"K": {"kind": "random", "seed": 5,
                                                 "roughness": 0.3}},
                                "functions": {"phi": {"kind": "power", "p": -1}}}},
        "estimate": {"seed": 3, "grid": grid_cfg,
                     "estimate": {"target": "affine", "body": {"kind": "ball"},
                                  "function": {"kind": "power", "p": -1},
                                  "budget": 600}},
        "verify": {"seed": 3, "grid": grid_cfg,
                   "verify": {"checks": ["dual-urysohn", "santalo-products"],
                              "trials": 3}},
        "sweep": {"seed": 3, "grid": grid_cfg,
                  "sweep": {"parameter": "p", "values": [-1, 0.5, 3],
                            "body": {"kind": "cube"}}},
    }
    csv_names = {"compute": ["result.csv"], "estimate": ["trace.csv", "candidate.csv"],
                 "verify": ["trials.csv", "monitors.csv"], "sweep": ["sweep.csv"]}
    mismatches = []
    for command, cfg in configs.items():
        cfg_path = tmp_path / f"{command}.yaml"
        with open(cfg_path, "w") as fh:
            yaml.safe_dump(cfg, fh)
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{command}-{tag}"
            code = cli_main([command, "--config", str(cfg_path), "--out", str(out),
                             "--no-figures"])
            assert code == 0, (command, code)
            outs.append(out)
        for name in csv_names[command]:
            if (outs[0] / name).read_bytes() != (outs[1] / name).read_bytes():
                mismatches.append(f"{command}/{name}")
    ok = not mismatches
    _report(9, "determinism", ok,
            "all CSVs byte-identical" if ok else f"mismatches: {mismatches}")
