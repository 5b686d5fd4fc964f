"""Experiment configuration: a strict ``[section]`` / ``key = value`` text format.

Unknown sections or keys, duplicates and malformed lines are fatal
(:class:`ParseError` with the line number); values are converted and range
checked at parse time (:class:`ValidationError` naming ``section.key``).
Only ``[grid]`` and ``[field]`` are required; every other key has a
default, listed by :func:`describe_defaults`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import __version__


class ConfigError(ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationError(ConfigError):
    def __init__(self, key: str, message: str, line: int | None = None):
        self.key = key
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")


# -- value types --------------------------------------------------------------

def _float(text: str) -> float:
    v = float(text)
    if not np.isfinite(v):
        raise ValueError("must be finite")
    return v


def _int(text: str) -> int:
    return int(text.strip())


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def _floats(text: str) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(_float(p) for p in parts)


def _point(text: str) -> tuple:
    v = _floats(text)
    if len(v) != 3:
        raise ValueError("expected three comma-separated numbers")
    return v


def _triple_int(text: str) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if len(parts) == 1:
        return (int(parts[0]),) * 3
    if len(parts) != 3:
        raise ValueError("expected one or three integers")
    return tuple(int(p) for p in parts)


def _triple_float(text: str) -> tuple:
    v = _floats(text)
    if len(v) == 1:
        return v * 3
    if len(v) != 3:
        raise ValueError("expected one or three numbers")
    return v


def _optional_float(text: str):
    return None if text.strip().lower() in ("auto", "none") else _float(text)


def _str(text: str) -> str:
    return text.strip()


def _fmt(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- schema -------------------------------------------------------------------

def _positive(v):
    return None if (v is None or v > 0) else "must be positive"


def _in_unit(v):
    return None if 0 < v < 1 else "must lie in (0, 1)"


def _grid_n(v):
    return None if all(k >= 16 and k % 2 == 0 for k in v) else "counts must be even and >= 16"


def _all_positive(v):
    return None if all(x > 0 for x in v) else "entries must be positive"


def _nonneg_int(v):
    return None if v >= 0 else "must be nonnegative"


def _at_least(m):
    return lambda v: None if v >= m else f"must be >= {m}"


def _choice(*opts):
    return lambda v: None if v in opts else f"must be one of {', '.join(opts)}"


# section -> key -> (converter, default, check, description); REQUIRED marks mandatory keys
REQUIRED = object()

SCHEMA = {
    "grid": {
        "n": (_triple_int, REQUIRED, _grid_n, "nodes per axis (one or three even integers >= 16)"),
        "L": (_triple_float, (1.0, 1.0, 1.0), _all_positive, "torus periods"),
    },
    "field": {
        "builder": (_str, REQUIRED, _choice("two_bumps", "single_bump", "mode", "uniform"),
                    "velocity field family"),
        "q1": (_point, (0.25, 0.5, 0.5), None, "first bump center (two_bumps, single_bump)"),
        "q2": (_point, (0.75, 0.5, 0.5), None, "second bump center (two_bumps)"),
        "width": (_float, 0.1, _positive, "Gaussian bump width"),
        "direction": (_point, (1.0, 0.0, 0.0), None, "direction of the uniform field"),
        "sigma_tol": (_float, 1e-3, _positive, "relative tolerance for the maximum set of |X|"),
        "sigma_delta": (_optional_float, None, _positive, "tube radius around Sigma (auto = min(L)/8)"),
    },
    "potential": {
        "kind": (_str, "quartic", _choice("quartic", "polynomial"), "quartic or polynomial in |z|^2"),
        "coeffs": (_floats, (0.25, -0.5, 0.25), None, "coefficients of 1, |z|^2, |z|^4, ..."),
        "allow_flagged": (_bool, False, None, "run even if the assumption checks raise flags"),
    },
    "solver": {
        "phi": (_float, 0.031415926535897934, _positive, "momentum constraint value"),
        "eps_ratio": (_float, 8.0, _at_least(1.0), "default eps = r(p, phi) / eps_ratio"),
        "max_iters": (_int, 5000, _nonneg_int, "iteration cap"),
        "tol_res": (_float, 1e-5, _positive, "relative projected-gradient tolerance"),
        "c1": (_float, 1e-4, _in_unit, "Armijo constant"),
        "backtrack": (_float, 0.5, _in_unit, "Armijo backtracking factor"),
        "step0": (_float, 1.0, _positive, "initial step"),
        "restore_every": (_int, 1, _at_least(1), "constraint restoration period"),
        "restore": (_str, "gradient", _choice("gradient", "phase"), "restoration move"),
    },
    "photography": {
        "alpha": (_float, 1.0, _positive, "alpha of the sublevel curve c(phi)"),
        "n_radial": (_int, 64, _at_least(64), "radial quadrature nodes of the disk flux"),
        "n_angular": (_int, 128, _at_least(128), "angular quadrature nodes of the disk flux"),
        "modes": (_int, 64, _at_least(8), "Fourier modes of the harmonic phase"),
    },
    "diagnostics": {
        "eta": (_float, 0.9, _in_unit, "concentration threshold"),
        "mu": (_float, 2.0, _positive, "concentration radius factor: radius = mu sqrt(phi)"),
        "homotopy_points": (_int, 8, _at_least(1), "Sigma samples for the homotopy gap"),
    },
    "iso": {
        "phis": (_floats, (1e-2, 5e-3, 2.5e-3, 1e-3), _all_positive, "flux values of the loop table"),
        "n_vertices": (_int, 64, _at_least(8), "vertices per loop"),
        "max_iters": (_int, 4000, _at_least(1), "vertex iteration cap per loop"),
        "tol": (_float, 1e-4, _positive, "relative projected-gradient tolerance"),
        "starts": (_int, 6, _at_least(1), "random starting positions per flux"),
    },
    "seeds": {
        "rng": (_int, 0, _nonneg_int, "master random seed"),
        "subadd_draws": (_int, 100000, _at_least(1), "random inputs for the subadditivity suite"),
        "series_draws": (_int, 10000, _at_least(1), "random inputs for the series suite"),
    },
}

SECTIONS = tuple(SCHEMA)
REQUIRED_SECTIONS = ("grid", "field")


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed configuration: one dict per section, every key filled in."""

    sections: dict

    def __getitem__(self, dotted: str):
        sec, key = dotted.split(".", 1)
        return self.sections[sec][key]

    def section(self, name: str) -> dict:
        return dict(self.sections[name])

    def to_text(self) -> str:
        """Canonical form: every section and key in schema order."""
        lines = []
        for sec in SECTIONS:
            lines.append(f"[{sec}]")
            for key in SCHEMA[sec]:
                lines.append(f"{key} = {_fmt(self.sections[sec][key])}")
            lines.append("")
        return "\n".join(lines)

    def hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    def metadata_line(self) -> str:
        return f"# gpvortex v{__version__}, config hash {self.hash()}"

    def replace(self, **dotted) -> "ExperimentConfig":
        """Copy with ``section__key=value`` overrides, validated like parsed values."""
        secs = {k: dict(v) for k, v in self.sections.items()}
        for name, v in dotted.items():
            sec, key = name.split("__", 1)
            conv, _, check, _ = SCHEMA[sec][key]
            msg = check(v) if check is not None else None
            if msg:
                raise ValidationError(f"{sec}.{key}", msg)
            secs[sec][key] = v
        return ExperimentConfig(secs)


def parse_text(text: str) -> ExperimentConfig:
    values: dict = {s: {} for s in SECTIONS}
    seen_sections = set()
    sec = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"malformed section header {line!r}", lineno)
            sec = line[1:-1].strip()
            if sec not in SCHEMA:
                raise ParseError(f"unknown section [{sec}]", lineno)
            if sec in seen_sections:
                raise ParseError(f"duplicate section [{sec}]", lineno)
            seen_sections.add(sec)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if sec is None:
            raise ParseError("key outside of any [section]", lineno)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA[sec]:
            raise ParseError(f"unknown key {sec}.{key}", lineno)
        if key in values[sec]:
            raise ParseError(f"duplicate key {sec}.{key}", lineno)
        conv, _, check, _ = SCHEMA[sec][key]
        try:
            v = conv(val)
        except ValueError as exc:
            raise ValidationError(f"{sec}.{key}", f"cannot parse {val!r} ({exc})", lineno) from None
        msg = check(v) if check is not None else None
        if msg:
            raise ValidationError(f"{sec}.{key}", msg, lineno)
        values[sec][key] = v
    for sec in REQUIRED_SECTIONS:
        if sec not in seen_sections:
            raise ParseError(f"missing required section [{sec}]")
    for sec in SECTIONS:
        for key, (_, default, _, _) in SCHEMA[sec].items():
            if key not in values[sec]:
                if default is REQUIRED:
                    raise ValidationError(f"{sec}.{key}", "required key is missing")
                values[sec][key] = default
    return ExperimentConfig(values)


def parse_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def describe_defaults() -> str:
    out = []
    for sec in SECTIONS:
        out.append(f"[{sec}]")
        for key, (_, default, _, doc) in SCHEMA[sec].items():
            d = "required" if default is REQUIRED else _fmt(default)
            out.append(f"  {key} = {d}    {doc}")
    return "\n".join(out)


# -- builders -------------------------------------------------------------------

def build_grid(cfg: ExperimentConfig):
    from .torus_grid import TorusGrid

    return TorusGrid(cfg["grid.n"], cfg["grid.L"])


def build_field(cfg: ExperimentConfig, grid=None):
    from . import vector_field as vf

    grid = build_grid(cfg) if grid is None else grid
    f = cfg.section("field")
    kw = {"sigma_tol": f["sigma_tol"], "sigma_delta": f["sigma_delta"]}
    b = f["builder"]
    if b == "two_bumps":
        return vf.two_bumps(grid, f["q1"], f["q2"], f["width"], **kw)
    if b == "single_bump":
        return vf.single_bump(grid, f["q1"], f["width"], **kw)
    if b == "mode":
        return vf.mode_field(grid, **kw)
    return vf.uniform_field(grid, f["direction"])


def build_loop_field(cfg: ExperimentConfig, grid=None):
    """Field used by the loop experiments; the uniform case is the analytic flat field."""
    from .vector_field import UniformField

    if cfg["field.builder"] == "uniform":
        return UniformField(cfg["field.direction"])
    return build_field(cfg, grid)


def build_potential(cfg: ExperimentConfig):
    from .potentials import polynomial_potential, quartic_potential

    if cfg["potential.kind"] == "quartic":
        return quartic_potential()
    return polynomial_potential(cfg["potential.coeffs"])
