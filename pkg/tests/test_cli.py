import json

import numpy as np
import pytest

from gpvortex import fields_energy as fe
from gpvortex.cli import main, parse_point, sidecar_path
from gpvortex.gpxf import read_field

CFG = """\
[grid]
n = 24
L = 2.0

[field]
builder = two_bumps
q1 = 0.5, 1.0, 1.0
q2 = 1.5, 1.0, 1.0
width = 0.24

[solver]
eps_ratio = 3
max_iters = {iters}

[seeds]
subadd_draws = 2000
series_draws = 300
"""


@pytest.fixture
def workdir(tmp_path):
    (tmp_path / "run.cfg").write_text(CFG.format(iters=3))
    return tmp_path


def gpx(workdir, *args):
    return main([args[0], "--config", "run.cfg", "--workdir", str(workdir), *args[1:]])


def test_usage_errors_exit_one(workdir, capsys):
    assert main([]) == 1
    assert main(["nonsense"]) == 1
    assert main(["ansatz", "--config", "missing.cfg", "--p", "sigma:0", "--out", "a.gpxf",
                 "--workdir", str(workdir)]) == 1
    (workdir / "bad.cfg").write_text(CFG.format(iters=3).replace("n = 24", "n = 15"))
    assert main(["ansatz", "--config", "bad.cfg", "--p", "sigma:0", "--out", "a.gpxf",
                 "--workdir", str(workdir)]) == 1
    assert "grid.n" in capsys.readouterr().err


def test_ansatz_then_diag(workdir, capsys):
    assert gpx(workdir, "ansatz", "--p", "sigma:0", "--out", "a.gpxf") == 0
    grid, u = read_field(workdir / "a.gpxf")
    meta = json.loads(sidecar_path(workdir / "a.gpxf").read_text())
    assert meta["phi"] == pytest.approx(0.01 * np.pi)
    assert meta["eps"] == pytest.approx(meta["r"] / 3)
    assert meta["below_c"] is True
    assert len(meta["config_hash"]) == 16
    assert gpx(workdir, "diag", "--in", "a.gpxf", "--out", "d.json") == 0
    diag = json.loads((workdir / "d.json").read_text())
    assert diag["energy"]["total"] == pytest.approx(meta["energy"], rel=1e-12)
    assert diag["momentum"] == pytest.approx(meta["phi"], abs=1e-10)


def test_unconverged_minimize_exits_two(workdir):
    assert gpx(workdir, "ansatz", "--p", "sigma:1", "--out", "a.gpxf") == 0
    assert gpx(workdir, "minimize", "--init", "a.gpxf", "--out", "m.gpxf", "--report", "r.json") == 2
    rep = json.loads((workdir / "r.json").read_text())
    assert rep["iterations"] == 3 and rep["converged"] is False
    grid, u = read_field(workdir / "m.gpxf")
    assert grid.n == (24, 24, 24)


def test_minimize_rejects_field_on_other_grid(workdir):
    assert gpx(workdir, "ansatz", "--p", "sigma:0", "--out", "a.gpxf") == 0
    (workdir / "other.cfg").write_text(CFG.format(iters=3).replace("n = 24", "n = 16"))
    code = main(["minimize", "--config", "other.cfg", "--workdir", str(workdir), "--init", "a.gpxf",
                 "--out", "m.gpxf", "--report", "r.json"])
    assert code == 1


def test_check_lemmas(workdir):
    assert gpx(workdir, "check-lemmas", "--out", "lem.json") == 0
    res = json.loads((workdir / "lem.json").read_text())
    assert res["passed"] is True


def test_scan_csv_layout(workdir):
    assert gpx(workdir, "scan", "--phis", "0.0314159", "--out", "scan.csv") == 0
    lines = (workdir / "scan.csv").read_text().splitlines()
    assert lines[0].split(",")[:3] == ["phi", "eps", "p"]
    assert len(lines) == 1 + 2 + 1
    assert lines[-1].startswith("# gpvortex v")
    assert "config hash" in lines[-1]


def test_parse_point_forms():
    from gpvortex.config import build_field, build_grid, parse_text
    cfg = parse_text(CFG.format(iters=3).replace("n = 24", "n = 48"))
    X = build_field(cfg, build_grid(cfg))
    assert np.allclose(parse_point("0.1, 0.2, 0.3", X), [0.1, 0.2, 0.3])
    assert np.array_equal(parse_point("sigma:1", X), X.sigma.component_points(1)[0])
    assert np.array_equal(parse_point("sigma:0:2", X), X.sigma.component_points(0)[2])
    with pytest.raises(ValueError):
        parse_point("sigma:5", X)


def test_energy_of_written_field_matches_metadata(workdir):
    assert gpx(workdir, "ansatz", "--p", "sigma:0", "--out", "a.gpxf") == 0
    grid, u = read_field(workdir / "a.gpxf")
    meta = json.loads(sidecar_path(workdir / "a.gpxf").read_text())
    from gpvortex.potentials import quartic_potential
    assert fe.energy(grid, u, meta["eps"], quartic_potential()).total == pytest.approx(meta["energy"], rel=1e-12)
