"""The ``gpx`` command line and the experiment pipelines behind it.

Every command reads one configuration file; fields go to GPXF files,
single-object reports to JSON and tables to CSV (header row plus a trailing
``# gpvortex v..., config hash ...`` line).  All outputs are written
atomically and all paths are relative to ``--workdir``.  Exit codes: 0 on
success, 2 when a check fails, 1 on errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from . import barycenter_diag as bd
from . import config as cf
from . import fields_energy as fe
from . import gpxf
from . import isoperimetric as iso
from . import photography as ph
from . import solver as sv
from .torus_grid import TorusGrid
from .vector_field import OutsideTube, dist_to_sigma

EXIT_OK, EXIT_ERROR, EXIT_CHECK = 0, 1, 2


# -- context and small helpers -------------------------------------------------

@dataclass
class Context:
    cfg: cf.ExperimentConfig
    grid: TorusGrid
    X: object
    pot: object
    workdir: Path

    def path(self, p) -> Path:
        return self.workdir / p

    @property
    def mu(self) -> float:
        return self.cfg["diagnostics.mu"]

    @property
    def eta(self) -> float:
        return self.cfg["diagnostics.eta"]


def load_context(cfg: cf.ExperimentConfig, workdir=".") -> Context:
    grid = cf.build_grid(cfg)
    return Context(cfg, grid, cf.build_field(cfg, grid), cf.build_potential(cfg), Path(workdir))


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


def write_json(path, obj) -> None:
    gpxf.atomic_write_bytes(path, (dumps(obj) + "\n").encode())


def csv_text(header, rows, meta_line: str, comments=()) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(meta_line + "\n")
    return buf.getvalue()


def write_csv(path, header, rows, meta_line: str, comments=()) -> None:
    gpxf.atomic_write_bytes(path, csv_text(header, rows, meta_line, comments).encode())


def sidecar_path(field_path) -> Path:
    return Path(field_path).with_suffix(".jsonl")


def read_sidecar(field_path) -> dict:
    p = sidecar_path(field_path)
    if not p.exists():
        return {}
    lines = [ln for ln in p.read_text().splitlines() if ln.strip()]
    return json.loads(lines[-1]) if lines else {}


def parse_floats(text: str) -> list:
    return [float(v) for v in text.replace(" ", "").split(",") if v]


def parse_point(text: str, X) -> np.ndarray:
    """``x,y,z`` or ``sigma:k`` (first point of component k) or ``sigma:k:j``."""
    if text.startswith("sigma"):
        parts = text.split(":")
        k = int(parts[1]) if len(parts) > 1 else 0
        j = int(parts[2]) if len(parts) > 2 else 0
        pts = X.sigma.component_points(k)
        if len(pts) == 0:
            raise ValueError(f"Sigma has no component {k}")
        return pts[j % len(pts)].copy()
    v = parse_floats(text)
    if len(v) != 3:
        raise ValueError(f"point needs three coordinates, got {text!r}")
    return np.array(v)


def sigma_samples(sigma, total: int) -> list:
    """``total`` points of Sigma spread evenly over the components and their node order."""
    k = sigma.n_components
    per = -(-total // k)
    out = []
    for c in range(k):
        pts = sigma.component_points(c)
        for j in range(per):
            if len(out) < total:
                out.append(pts[(j * len(pts)) // per].copy())
    return out


def _triple(v) -> str:
    return " ".join(repr(float(x)) for x in v)


# -- pipelines ----------------------------------------------------------------

def run_ansatz(ctx: Context, p, phi: float, eps: float | None = None):
    """Photograph at p; returns (AnsatzResult, metadata record)."""
    ph_cfg = ctx.cfg.section("photography")
    r = ph.disk_radius(p, phi, ctx.X, ph_cfg["n_radial"], ph_cfg["n_angular"])
    if eps is None:
        eps = r / ctx.cfg["solver.eps_ratio"]
    spec = ph.make_spec(p, phi, eps, ctx.X, modes=ph_cfg["modes"], r=r)
    res = ph.ansatz(spec, ctx.grid, ctx.X)
    E = fe.energy(ctx.grid, res.u, eps, ctx.pot)
    c = ph.sublevel_c(phi, ph_cfg["alpha"])
    rec = {"p": list(map(float, p)), "phi": phi, "eps": eps, "r": r, "energy": E.total,
           "momentum": res.momentum, "c": c, "below_c": E.total <= c,
           "ring_radius": res.spec.ring_radius, "phase_correction": res.c}
    return res, rec


def solver_config(ctx: Context, phi: float, eps: float) -> sv.SolverConfig:
    s = ctx.cfg.section("solver")
    return sv.SolverConfig(eps=eps, phi=phi, max_iters=s["max_iters"], tol_res=s["tol_res"],
                           c1=s["c1"], backtrack=s["backtrack"], step0=s["step0"],
                           restore_every=s["restore_every"], restore=s["restore"])


def run_minimize(ctx: Context, u0, phi: float, eps: float):
    return sv.minimize(ctx.grid, u0, solver_config(ctx, phi, eps), ctx.X, ctx.pot,
                       allow_flagged=ctx.cfg["potential.allow_flagged"])


def diagnostics(ctx: Context, u, phi: float, eps: float, p=None) -> dict:
    """Energy, momentum, concentration, barycenter and (with p) the homotopy gap."""
    g = ctx.grid
    E = fe.energy(g, u, eps, ctx.pot)
    dens = fe.energy_density(g, u, eps, ctx.pot)
    R = ctx.mu * math.sqrt(phi)
    out = {"energy": E.as_dict(), "momentum": fe.momentum(g, u, ctx.X),
           "concentration_radius": R}
    out["best_centers"] = [bd.best_center(g, dens, f * R, ctx.eta).as_dict() for f in (0.5, 1.0, 2.0)]
    try:
        b = bd.intrinsic_barycenter(g, dens, R, ctx.eta)
    except bd.NotConcentrated as exc:
        out.update(barycenter=None, error=str(exc))
        return out
    out["barycenter"] = list(map(float, b))
    out["concentration_ratio"] = bd.concentration_ratio(g, dens, b, R)
    out["dist_to_sigma"] = dist_to_sigma(b, ctx.X.sigma)
    out["sigma_component"] = ctx.X.sigma.component_of(b)
    out["delta"] = ctx.X.sigma.delta
    if p is not None:
        p = np.asarray(p, dtype=float)
        try:
            out["homotopy_gap"] = bd.homotopy_gap(g, p, u, eps, ctx.pot, ctx.X.sigma, R, ctx.eta)
        except OutsideTube as exc:
            out["homotopy_gap"] = None
            out["error"] = str(exc)
    return out


@dataclass
class SeededRun:
    p: np.ndarray
    ansatz: dict
    u: np.ndarray
    report: sv.SolverReport
    diag: dict

    def as_dict(self) -> dict:
        return {"p": list(map(float, self.p)), "ansatz": self.ansatz,
                "report": self.report.as_dict(), "diag": self.diag}


def seeded_run(ctx: Context, p, phi: float) -> SeededRun:
    """Ansatz at p, minimization from it, diagnostics of the result."""
    res, rec = run_ansatz(ctx, p, phi)
    u, rep = run_minimize(ctx, res.u, phi, rec["eps"])
    return SeededRun(np.asarray(p, dtype=float), rec, u, rep, diagnostics(ctx, u, phi, rec["eps"], p))


def multiplicity(ctx: Context, phi: float, runs=None) -> tuple[dict, list]:
    """One seeded minimization per Sigma component and the distinctness verdict."""
    sigma = ctx.X.sigma
    if runs is None:
        runs = [seeded_run(ctx, sigma.component_points(k)[0], phi) for k in range(sigma.n_components)]
    c = ph.sublevel_c(phi, ctx.cfg["photography.alpha"])
    rows = []
    for k, run in enumerate(runs):
        rep, d = run.report, run.diag
        rows.append({
            "index": k, "p": list(map(float, run.p)), "eps": run.ansatz["eps"],
            "seed_component": sigma.component_of(run.p), "converged": rep.converged,
            "iterations": rep.iterations, "final_energy": rep.final_energy,
            "best_lambda": rep.best_lambda, "lambda_tilde": rep.lambda_tilde,
            "residual_rel": rep.residual_rel, "constraint_drift_max": rep.constraint_drift_max,
            "below_c": rep.final_energy <= c, "barycenter": d.get("barycenter"),
            "barycenter_component": d.get("sigma_component"),
            "dist_to_sigma": d.get("dist_to_sigma"),
        })
    seps = []
    for i in range(len(runs)):
        for j in range(i + 1, len(runs)):
            ui, uj = runs[i].u, runs[j].u
            diff = math.sqrt(ctx.grid.inner(ui - uj, ui - uj))
            scale = max(math.sqrt(ctx.grid.inner(ui, ui)), math.sqrt(ctx.grid.inner(uj, uj)))
            seps.append({"i": i, "j": j, "l2_distance": diff, "relative": diff / scale})
    comps = [r["barycenter_component"] for r in rows]
    checks = {
        "converged": all(r["converged"] for r in rows),
        "residual": all(r["residual_rel"] <= 1e-3 for r in rows),
        "below_c": all(r["below_c"] for r in rows),
        "separation": all(s["relative"] >= 0.1 for s in seps),
        "distinct_components": None not in comps and len(set(comps)) == len(comps),
    }
    n_distinct = len(set(comps) - {None}) if checks["separation"] else 1
    verdict = {"phi": phi, "sublevel_c": c, "cat_sigma": sigma.n_components, "rows": rows,
               "separations": seps, "checks": checks, "distinct_critical_points": n_distinct,
               "passed": all(checks.values()) and n_distinct >= sigma.n_components}
    return verdict, runs


def homotopy_experiment(ctx: Context, phi: float, runs=None) -> dict:
    """Concentration, tube and homotopy-gap checks at sampled points of Sigma.

    Seeded runs whose starting point matches a sample are reused.
    """
    pts = sigma_samples(ctx.X.sigma, ctx.cfg["diagnostics.homotopy_points"])
    known = {} if runs is None else {tuple(map(float, r.p)): r for r in runs}
    h2 = 2 * ctx.grid.hmax
    rows = []
    for p in pts:
        run = known.get(tuple(map(float, p)))
        if run is None:
            run = seeded_run(ctx, p, phi)
        d = run.diag
        bound = 2 * run.ansatz["r"] + h2
        gap = d.get("homotopy_gap")
        rows.append({
            "p": list(map(float, p)), "r": run.ansatz["r"], "converged": run.report.converged,
            "concentration_ratio": d.get("concentration_ratio"), "dist_to_sigma": d.get("dist_to_sigma"),
            "homotopy_gap": gap, "gap_bound": bound,
            "passed": bool(run.report.converged and d.get("barycenter") is not None
                           and d["concentration_ratio"] >= ctx.eta
                           and d["dist_to_sigma"] <= d["delta"]
                           and gap is not None and gap <= bound),
        })
    return {"phi": phi, "rows": rows, "passed": all(r["passed"] for r in rows)}


def lemma_suites(ctx: Context) -> dict:
    """Randomized subadditivity and series suites plus finite-difference gradient checks."""
    seed = ctx.cfg["seeds.rng"]
    sub = iso.subadd_suite(np.random.default_rng([seed, 1]), ctx.cfg["seeds.subadd_draws"])
    ser = iso.series_suite(np.random.default_rng([seed, 2]), ctx.cfg["seeds.series_draws"])
    small = TorusGrid((16, 16, 16), ctx.grid.L)
    X = cf.build_field(ctx.cfg, small)
    rng = np.random.default_rng([seed, 3])
    worst_e = worst_p = 0.0
    for _ in range(3):
        u = rng.normal(size=small.shape) + 1j * rng.normal(size=small.shape)
        chk = fe.gradient_check(small, u, 0.05, X, ctx.pot, rng)
        worst_e = max(worst_e, chk.energy_rel_error)
        worst_p = max(worst_p, chk.momentum_rel_error)
    grad = {"name": "gradients", "energy_rel_error": worst_e, "momentum_rel_error": worst_p,
            "passed": worst_e <= 1e-6 and worst_p <= 1e-8}
    suites = [sub.as_dict(), ser.as_dict(), grad]
    return {"suites": suites, "passed": all(s["passed"] for s in suites)}


def iso_experiment(ctx: Context, phis, starts: int):
    """Loop minimization from random starts; returns (table dict, best LoopResults)."""
    icfg = ctx.cfg.section("iso")
    X = cf.build_loop_field(ctx.cfg, ctx.grid)
    lc = iso.LoopConfig(max_iters=icfg["max_iters"], tol=icfg["tol"])
    pos = iso.seed_positions(X, starts, np.random.default_rng(ctx.cfg["seeds.rng"]))
    sigma = getattr(X, "sigma", None)
    rows, best = iso.jm_rows(phis, X, pos, lc, sigma, icfg["n_vertices"])
    out = {"rows": [r.__dict__ for r in rows], "exponent": None, "prefactor": None,
           "converged": [b.converged for b in best]}
    if max(phis) >= 10 * min(phis) * (1 - 1e-12):
        out["exponent"], out["prefactor"] = iso.fit_power_law([r.phi for r in rows],
                                                              [r.best_mass for r in rows])
    if sigma is not None:
        out["mu_sqrt_phi"] = [ctx.mu * math.sqrt(r.phi) for r in rows]
        out["centroids_near_sigma"] = all(r.dist_to_sigma <= ctx.mu * math.sqrt(r.phi) for r in rows)
    return out, best


# -- scan ---------------------------------------------------------------------

_WORKER: dict = {}


def _scan_init(cfg_text: str, workdir: str) -> None:
    _WORKER["ctx"] = load_context(cf.parse_text(cfg_text), workdir)


def _scan_job(job):
    ctx = _WORKER["ctx"]
    phi, eps, p = job
    res, rec = run_ansatz(ctx, p, phi, eps)
    u, rep = run_minimize(ctx, res.u, phi, rec["eps"])
    d = diagnostics(ctx, u, phi, rec["eps"])
    bary = d.get("barycenter")
    return [phi, rec["eps"], _triple(p), rep.final_energy, rep.best_lambda, rep.residual_rel,
            "" if bary is None else _triple(bary), d.get("dist_to_sigma", float("nan"))]


def scan(ctx: Context, phis, eps_list, points) -> list:
    jobs = [(phi, eps, tuple(map(float, p))) for phi in phis for eps in (eps_list or [None])
            for p in points]
    cap = int(os.environ.get("GPX_THREADS", "0") or 0) or (os.cpu_count() or 1)
    workers = max(1, min(cap, len(jobs)))
    if workers == 1:
        _WORKER["ctx"] = ctx
        return [_scan_job(j) for j in jobs]
    with ProcessPoolExecutor(workers, initializer=_scan_init,
                             initargs=(ctx.cfg.to_text(), str(ctx.workdir))) as ex:
        # map keeps job order, so the table does not depend on scheduling
        return list(ex.map(_scan_job, jobs))


SCAN_HEADER = ["phi", "eps", "p", "final_energy", "lambda", "residual", "barycenter", "dist_to_sigma"]


# -- command line -------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"gpx: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gpx", description=__doc__.split("\n\n")[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter,
                     epilog="configuration keys and defaults:\n" + cf.describe_defaults())
    parser.add_argument("--version", action="version", version=f"gpvortex {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", required=True, help="experiment configuration file")
        p.add_argument("--workdir", default=".", help="base directory for every path")

    p = sub.add_parser("ansatz", help="build the photograph of a point")
    common(p)
    p.add_argument("--p", required=True, help="x,y,z or sigma:k[:j]")
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float, help="default r(p, phi) / solver.eps_ratio")
    p.add_argument("--out", required=True, help="GPXF output; metadata goes to the .jsonl sidecar")

    p = sub.add_parser("minimize", help="minimize the energy at fixed momentum")
    common(p)
    p.add_argument("--init", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float, help="default taken from the sidecar of --init")

    p = sub.add_parser("scan", help="grid of ansatz + minimization jobs")
    common(p)
    p.add_argument("--phis", required=True)
    p.add_argument("--eps-list", default="", help="absolute eps values (default r / eps_ratio)")
    p.add_argument("--points", default="", help="semicolon-separated points (default: one per component)")
    p.add_argument("--out", default="scan.csv")

    p = sub.add_parser("iso", help="loop minimization table")
    common(p)
    p.add_argument("--phi", default="", help="one or more comma-separated flux values")
    p.add_argument("--seeds", type=int, help="random starting positions")
    p.add_argument("--out", default="loops.csv")
    p.add_argument("--table", default="jm.csv")

    p = sub.add_parser("diag", help="diagnostics of a field")
    common(p)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--phi", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--p", help="seed point for the homotopy gap")
    p.add_argument("--out", help="JSON output (default: standard output)")

    p = sub.add_parser("check-lemmas", help="randomized lemma suites and gradient checks")
    common(p)
    p.add_argument("--out", help="JSON output (default: standard output)")

    p = sub.add_parser("multiplicity", help="one critical point per Sigma component")
    common(p)
    p.add_argument("--phi", type=float)
    p.add_argument("--out", default="multiplicity.csv")
    p.add_argument("--report", default="multiplicity.json")
    p.add_argument("--save-fields", action="store_true", help="write each minimizer as GPXF")
    return parser


def _emit(ctx: Context, obj, out) -> None:
    if out:
        write_json(ctx.path(out), obj)
    else:
        print(dumps(obj))


def _cmd_ansatz(ctx, a) -> int:
    phi = a.phi if a.phi is not None else ctx.cfg["solver.phi"]
    p = parse_point(a.p, ctx.X)
    res, rec = run_ansatz(ctx, p, phi, a.eps)
    out = ctx.path(a.out)
    gpxf.write_field(out, ctx.grid, res.u)
    rec["config_hash"] = ctx.cfg.hash()
    gpxf.atomic_write_bytes(sidecar_path(out), (json.dumps(_jsonable(rec), sort_keys=True) + "\n").encode())
    return EXIT_OK


def _cmd_minimize(ctx, a) -> int:
    init = ctx.path(a.init)
    grid, u0 = gpxf.read_field(init)
    if grid != ctx.grid:
        raise ValueError(f"field grid {grid.n}, {grid.L} differs from the configured grid")
    meta = read_sidecar(init)
    phi = a.phi if a.phi is not None else meta.get("phi", ctx.cfg["solver.phi"])
    eps = a.eps if a.eps is not None else meta.get("eps")
    if eps is None:
        raise ValueError("--eps is required when the initial field has no metadata sidecar")
    u, rep = run_minimize(ctx, u0, phi, eps)
    out = ctx.path(a.out)
    gpxf.write_field(out, ctx.grid, u)
    side = {"phi": phi, "eps": eps, "p": meta.get("p"), "config_hash": ctx.cfg.hash()}
    gpxf.atomic_write_bytes(sidecar_path(out), (json.dumps(_jsonable(side), sort_keys=True) + "\n").encode())
    write_json(ctx.path(a.report), rep.as_dict())
    return EXIT_OK if rep.converged else EXIT_CHECK


def _cmd_scan(ctx, a) -> int:
    phis = parse_floats(a.phis)
    eps_list = parse_floats(a.eps_list) if a.eps_list else []
    if a.points:
        points = [parse_point(t, ctx.X) for t in a.points.split(";") if t.strip()]
    else:
        points = [ctx.X.sigma.component_points(k)[0] for k in range(ctx.X.sigma.n_components)]
    rows = scan(ctx, phis, eps_list, points)
    write_csv(ctx.path(a.out), SCAN_HEADER, rows, ctx.cfg.metadata_line())
    return EXIT_OK


def _cmd_iso(ctx, a) -> int:
    phis = parse_floats(a.phi) if a.phi else list(ctx.cfg["iso.phis"])
    starts = a.seeds if a.seeds is not None else ctx.cfg["iso.starts"]
    table, best = iso_experiment(ctx, phis, starts)
    meta = ctx.cfg.metadata_line()
    loop_rows = [[k, i, float(v[0]), float(v[1]), float(v[2])]
                 for k, b in enumerate(best) for i, v in enumerate(b.loop.vertices)]
    write_csv(ctx.path(a.out), ["loop_id", "vertex_index", "x", "y", "z"], loop_rows, meta)
    rows = [[r["phi"], r["best_mass"], r["ratio"], _triple(r["centroid"]), r["dist_to_sigma"]]
            for r in table["rows"]]
    comments = []
    if table["exponent"] is not None:
        comments.append(f"fit exponent {table['exponent']!r}, prefactor {table['prefactor']!r}")
    write_csv(ctx.path(a.table), ["phi", "best_mass", "ratio", "centroid", "dist_to_sigma"],
              rows, meta, comments)
    return EXIT_OK if all(table["converged"]) else EXIT_CHECK


def _cmd_diag(ctx, a) -> int:
    inp = ctx.path(a.inp)
    grid, u = gpxf.read_field(inp)
    if grid != ctx.grid:
        raise ValueError("field grid differs from the configured grid")
    meta = read_sidecar(inp)
    phi = a.phi if a.phi is not None else meta.get("phi", ctx.cfg["solver.phi"])
    eps = a.eps if a.eps is not None else meta.get("eps")
    if eps is None:
        raise ValueError("--eps is required when the field has no metadata sidecar")
    p = parse_point(a.p, ctx.X) if a.p else None
    _emit(ctx, diagnostics(ctx, u, phi, eps, p), a.out)
    return EXIT_OK


def _cmd_check_lemmas(ctx, a) -> int:
    res = lemma_suites(ctx)
    _emit(ctx, res, a.out)
    return EXIT_OK if res["passed"] else EXIT_CHECK


def _cmd_multiplicity(ctx, a) -> int:
    phi = a.phi if a.phi is not None else ctx.cfg["solver.phi"]
    verdict, runs = multiplicity(ctx, phi)
    header = ["index", "p", "eps", "converged", "final_energy", "best_lambda", "residual_rel",
              "below_c", "barycenter", "barycenter_component", "dist_to_sigma"]
    rows = [[r["index"], _triple(r["p"]), r["eps"], r["converged"], r["final_energy"],
             r["best_lambda"], r["residual_rel"], r["below_c"],
             "" if r["barycenter"] is None else _triple(r["barycenter"]),
             r["barycenter_component"], r["dist_to_sigma"]] for r in verdict["rows"]]
    comments = [f"distinct critical points {verdict['distinct_critical_points']}, "
                f"verdict {'pass' if verdict['passed'] else 'fail'}"]
    write_csv(ctx.path(a.out), header, rows, ctx.cfg.metadata_line(), comments)
    write_json(ctx.path(a.report), verdict)
    if a.save_fields:
        for k, run in enumerate(runs):
            gpxf.write_field(ctx.path(f"minimizer_{k}.gpxf"), ctx.grid, run.u)
    print(f"distinct critical points: {verdict['distinct_critical_points']} "
          f"(cat(Sigma) = {verdict['cat_sigma']}); verdict {'pass' if verdict['passed'] else 'fail'}")
    return EXIT_OK if verdict["passed"] else EXIT_CHECK


COMMANDS = {"ansatz": _cmd_ansatz, "minimize": _cmd_minimize, "scan": _cmd_scan, "iso": _cmd_iso,
            "diag": _cmd_diag, "check-lemmas": _cmd_check_lemmas, "multiplicity": _cmd_multiplicity}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    workdir = Path(a.workdir)
    try:
        cfg = cf.parse_config(workdir / a.config)
        ctx = load_context(cfg, workdir)
        return COMMANDS[a.cmd](ctx, a)
    except (cf.ConfigError, OSError, ValueError, RuntimeError) as exc:
        print(f"gpx {a.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
