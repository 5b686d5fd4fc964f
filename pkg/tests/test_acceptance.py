"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records one pass/fail line, printed in the terminal summary.
The slow end-to-end runs share module fixtures so that the multiplicity
minimizers feed the concentration checks and the determinism repeat.
"""

import csv
import json
import time

import numpy as np
import pytest

from gpvortex import cli
from gpvortex import fields_energy as fe
from gpvortex import photography as ph
from gpvortex.config import parse_text
from gpvortex.isoperimetric import splitting_penalty
from gpvortex.potentials import quartic_potential
from gpvortex.torus_grid import TorusGrid
from gpvortex.vector_field import UniformField, two_bumps

W = quartic_potential()
PHI = 0.01 * np.pi

TWO_BUMPS = """\
[grid]
n = {n}
L = 2.0

[field]
builder = two_bumps
q1 = 0.5, 1.0, 1.0
q2 = 1.5, 1.0, 1.0
width = 0.24
"""

UNIFORM = """\
[grid]
n = 16
L = 2.0

[field]
builder = uniform
direction = 0.0, 0.0, 1.0
"""


def bumps48():
    g = TorusGrid.cube(48, 2.0)
    return g, two_bumps(g, (0.5, 1.0, 1.0), (1.5, 1.0, 1.0), 0.24)


def read_rows(path):
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def comment_lines(path):
    with open(path) as fh:
        return [ln.strip() for ln in fh if ln.startswith("#")]


def run_gpx(workdir, cfg_text, *args):
    (workdir / "run.cfg").write_text(cfg_text)
    return cli.main([args[0], "--config", "run.cfg", "--workdir", str(workdir), *args[1:]])


# -- 1, 2, 3: exactness -------------------------------------------------------

def test_criterion_01_gradient_exactness(record):
    t0 = time.perf_counter()
    g = TorusGrid.cube(16, 1.0)
    X = two_bumps(g, (0.25, 0.5, 0.5), (0.75, 0.5, 0.5), 0.1)
    rng = np.random.default_rng(2024)
    worst_e = worst_p = 0.0
    for _ in range(3):
        u = rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape)
        chk = fe.gradient_check(g, u, 0.05, X, W, rng)
        worst_e = max(worst_e, chk.energy_rel_error)
        worst_p = max(worst_p, chk.momentum_rel_error)
    dt = time.perf_counter() - t0
    ok = record(1, "gradient exactness", worst_e <= 1e-6 and worst_p <= 1e-8 and dt < 10,
                f"energy {worst_e:.2e}, momentum {worst_p:.2e}, {dt:.1f} s")
    assert ok


def test_criterion_02_discrete_stokes(record):
    t0 = time.perf_counter()
    g = TorusGrid.cube(32, 1.0)
    X = two_bumps(g, (0.25, 0.5, 0.5), (0.75, 0.5, 0.5), 0.08)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        u = rng.normal(size=g.shape) + 1j * rng.normal(size=g.shape)
        p1 = fe.momentum(g, u, X)
        p2 = fe.momentum_via_jacobian(g, u, X)
        worst = max(worst, abs(p1 - p2) / abs(p1))
    dt = time.perf_counter() - t0
    ok = record(2, "discrete Stokes", worst <= 1e-10 and dt < 30, f"worst relative {worst:.2e}, {dt:.1f} s")
    assert ok


def ansatz_flux_samples():
    g, X = bumps48()
    pts = cli.sigma_samples(X.sigma, 5)
    phis = [PHI, 0.02, 0.05, PHI, 0.01]
    divisors = [8, 4, 6, 3, 5]
    out = []
    for p, phi, k in zip(pts, phis, divisors):
        r = ph.disk_radius(p, phi, X)
        res = ph.ansatz(ph.make_spec(p, phi, r / k, X, r=r), g, X)
        m = fe.momentum(g, res.u, X)
        out.append({"p": [float(v) for v in p], "phi": phi, "eps": r / k, "r": r,
                    "momentum": m, "error": abs(m - phi), "ring_radius": res.spec.ring_radius,
                    "c": res.c})
    return out


def test_criterion_03_ansatz_flux(record):
    t0 = time.perf_counter()
    rows = ansatz_flux_samples()
    dt = time.perf_counter() - t0
    worst = max(r["error"] for r in rows)
    ok = record(3, "ansatz flux exactness", worst <= 1e-8 and dt < 120,
                f"worst |Phi - phi| {worst:.1e} over {len(rows)} samples, {dt:.1f} s")
    assert ok


# -- 4, 5: photography ---------------------------------------------------------

@pytest.mark.slow
def test_criterion_04_energy_trend(record):
    t0 = time.perf_counter()
    g = TorusGrid.cube(64, 2.0)
    X = two_bumps(g, (0.5, 1.0, 1.0), (1.5, 1.0, 1.0), 0.24)
    p = X.sigma.component_points(0)[0]
    r = ph.disk_radius(p, PHI, X)
    target = 2 * np.pi * r
    energies = []
    for k in (4, 8, 16, 32):
        res = ph.ansatz(ph.make_spec(p, PHI, r / k, X, r=r), g, X)
        energies.append(fe.energy(g, res.u, r / k, W).total)
    dt = time.perf_counter() - t0
    decreasing = all(b < a for a, b in zip(energies, energies[1:]))
    gaps = [(e - target) / target for e in energies]
    toward = all(abs(b) < abs(a) for a, b in zip(gaps, gaps[1:]))
    c = ph.sublevel_c(PHI, 1.0)
    below = all(e <= c for e in energies)
    ok = decreasing and toward and abs(gaps[-1]) <= 0.15 and below and dt < 300
    detail = ("energies " + ", ".join(f"{e:.4f}" for e in energies) + f" vs 2 pi r = {target:.4f}; gaps "
              + ", ".join(f"{100 * x:+.1f}%" for x in gaps) + f"; all <= c = {c:.4f}: {below}; {dt:.0f} s")
    record(4, "energy trend toward 2 pi r", ok, detail)
    assert decreasing and below
    assert toward, detail
    assert abs(gaps[-1]) <= 0.15, detail


def test_criterion_05_radius_law(record):
    t0 = time.perf_counter()
    flat = UniformField()
    err_flat = max(abs(ph.disk_radius((0.0, 0.0, 0.0), phi, flat) - np.sqrt(phi / np.pi))
                   for phi in (1e-3, 1e-2, 0.1))
    g, X = bumps48()
    p = X.sigma.component_points(0)[0]
    sandwich = True
    phis = [1e-3, 2e-3, 5e-3, 1e-2]
    radii = []
    for phi in phis:
        r = ph.disk_radius(p, phi, X)
        lo, hi = ph.radius_bounds(p, phi, X, r)
        sandwich &= lo * (1 - 1e-12) <= r <= hi * (1 + 1e-12)
        radii.append(r)
    slope = np.polyfit(np.log(phis), np.log(radii), 1)[0]
    dt = time.perf_counter() - t0
    ok = record(5, "radius law", err_flat <= 1e-9 and sandwich and abs(slope - 0.5) <= 0.01 and dt < 60,
                f"flat error {err_flat:.1e}, sandwich {sandwich}, slope {slope:.4f}, {dt:.1f} s")
    assert ok


# -- 6, 7, 8: loops and lemmas -----------------------------------------------

def iso_run(workdir):
    code = run_gpx(workdir, TWO_BUMPS.format(n=48), "iso")
    return code, read_rows(workdir / "jm.csv"), comment_lines(workdir / "jm.csv")


@pytest.fixture(scope="module")
def iso_outputs(tmp_path_factory):
    bumps_dir = tmp_path_factory.mktemp("iso_bumps")
    flat_dir = tmp_path_factory.mktemp("iso_flat")
    t0 = time.perf_counter()
    code, rows, comments = iso_run(bumps_dir)
    code_flat = run_gpx(flat_dir, UNIFORM, "iso")
    dt = time.perf_counter() - t0
    return {"dir": bumps_dir, "code": code, "rows": rows, "comments": comments,
            "flat_code": code_flat, "flat_comments": comment_lines(flat_dir / "jm.csv"), "time": dt}


def fit_from_comments(comments):
    line = next(c for c in comments if c.startswith("# fit exponent"))
    parts = line.replace(",", " ").split()
    return float(parts[3]), float(parts[5])


@pytest.mark.slow
def test_criterion_06_isoperimetric_scaling(record, iso_outputs):
    out = iso_outputs
    exponent, _ = fit_from_comments(out["comments"])
    _, flat_prefactor = fit_from_comments(out["flat_comments"])
    gamma = 2 * np.sqrt(np.pi)
    pref_err = abs(flat_prefactor - gamma) / gamma
    mu = 2.0
    near = all(float(r["dist_to_sigma"]) <= mu * np.sqrt(float(r["phi"])) for r in out["rows"])
    ok = (0.48 <= exponent <= 0.52 and pref_err <= 0.01 and near and out["code"] == 0
          and out["flat_code"] == 0 and out["time"] < 600)
    dists = ", ".join(f"{float(r['dist_to_sigma']):.3f}" for r in out["rows"])
    record(6, "isoperimetric scaling", ok,
           f"exponent {exponent:.4f}, flat prefactor {flat_prefactor:.4f} ({100 * pref_err:.2f}%), "
           f"centroid distances {dists}, {out['time']:.0f} s")
    assert ok


def test_criterion_07_splitting_penalty(record):
    t0 = time.perf_counter()
    pen = splitting_penalty(0.01, 0.5, UniformField())
    dt = time.perf_counter() - t0
    target = np.sqrt(2) - 1
    ok = record(7, "splitting penalty", abs(pen - target) <= 0.03 * target and dt < 180,
                f"penalty {pen:.5f} vs {target:.5f}, {dt:.1f} s")
    assert ok


def test_criterion_08_lemma_suites(record):
    ctx = cli.load_context(parse_text(TWO_BUMPS.format(n=16)))
    assert ctx.cfg["seeds.subadd_draws"] == 100_000 and ctx.cfg["seeds.series_draws"] == 10_000
    t0 = time.perf_counter()
    res = cli.lemma_suites(ctx)
    dt = time.perf_counter() - t0
    sub, ser = res["suites"][0], res["suites"][1]
    ok = record(8, "lemma property suites", sub["passed"] and ser["passed"] and dt < 30,
                f"subadd {sub['violations']}/{sub['draws']}, series {ser['violations']}/{ser['draws']} "
                f"violations, {dt:.1f} s")
    assert ok


# -- 9, 10: multiplicity and concentration -----------------------------------

def multiplicity_run(workdir, capture=None):
    """Run `gpx multiplicity`; when ``capture`` is a dict it receives the context and seeded runs."""
    original = cli.multiplicity

    def spy(ctx, phi, runs=None):
        verdict, done = original(ctx, phi, runs)
        if capture is not None:
            capture.update(ctx=ctx, runs=done)
        return verdict, done

    t0 = time.perf_counter()
    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(cli, "multiplicity", spy)
        code = run_gpx(workdir, TWO_BUMPS.format(n=48), "multiplicity", "--save-fields")
    return code, time.perf_counter() - t0


@pytest.fixture(scope="module")
def mult_outputs(tmp_path_factory):
    workdir = tmp_path_factory.mktemp("multiplicity")
    captured: dict = {}
    code, dt = multiplicity_run(workdir, captured)
    verdict = json.loads((workdir / "multiplicity.json").read_text())
    return {"dir": workdir, "code": code, "time": dt, "verdict": verdict, **captured}


@pytest.mark.slow
def test_criterion_09_multiplicity(record, mult_outputs):
    out = mult_outputs
    v = out["verdict"]
    rows = v["rows"]
    seps = [s["relative"] for s in v["separations"]]
    ok = (out["code"] == 0 and v["passed"] and v["distinct_critical_points"] >= 2 and v["cat_sigma"] == 2
          and all(r["converged"] and r["residual_rel"] <= 1e-3 and r["below_c"] for r in rows)
          and min(seps) >= 0.1 and len({r["barycenter_component"] for r in rows}) == len(rows)
          and out["time"] < 1800)
    record(9, "multiplicity", ok,
           f"{v['distinct_critical_points']} critical points, residuals "
           + ", ".join(f"{r['residual_rel']:.1e}" for r in rows)
           + ", energies " + ", ".join(f"{r['final_energy']:.4f}" for r in rows)
           + f" <= c = {v['sublevel_c']:.4f}, separation {min(seps):.4f}, components "
           + ", ".join(str(r["barycenter_component"]) for r in rows) + f", {out['time']:.0f} s")
    assert ok


@pytest.mark.slow
def test_criterion_10_concentration_and_homotopy(record, mult_outputs):
    out = mult_outputs
    t0 = time.perf_counter()
    res = cli.homotopy_experiment(out["ctx"], PHI, out["runs"])
    dt = time.perf_counter() - t0
    rows = res["rows"]
    worst_ratio = min((r["concentration_ratio"] or 0.0) for r in rows)
    worst_gap = max((np.inf if r["homotopy_gap"] is None else r["homotopy_gap"]) / r["gap_bound"] for r in rows)
    ok = record(10, "concentration and homotopy gap", res["passed"] and len(rows) == 8 and dt < 600,
                f"{sum(r['passed'] for r in rows)}/{len(rows)} points, min ratio {worst_ratio:.4f}, "
                f"max gap/bound {worst_gap:.3f}, {dt:.0f} s")
    assert ok


# -- 11: determinism -----------------------------------------------------------

@pytest.mark.slow
def test_criterion_11_determinism(record, iso_outputs, mult_outputs, tmp_path):
    same = {}
    first = json.dumps(ansatz_flux_samples(), sort_keys=True)
    same["ansatz"] = first == json.dumps(ansatz_flux_samples(), sort_keys=True)

    iso_dir = tmp_path / "iso"
    iso_dir.mkdir()
    iso_run(iso_dir)
    same["iso"] = all((iso_dir / f).read_bytes() == (iso_outputs["dir"] / f).read_bytes()
                      for f in ("jm.csv", "loops.csv"))

    mult_dir = tmp_path / "mult"
    mult_dir.mkdir()
    multiplicity_run(mult_dir)
    files = ["multiplicity.json", "multiplicity.csv", "minimizer_0.gpxf", "minimizer_1.gpxf"]
    same["multiplicity"] = all((mult_dir / f).read_bytes() == (mult_outputs["dir"] / f).read_bytes()
                               for f in files)
    ok = record(11, "determinism", all(same.values()),
                ", ".join(f"{k} {'identical' if v else 'DIFFERENT'}" for k, v in same.items()))
    assert ok
