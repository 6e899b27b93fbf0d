"""Command-line front end.

    szilard point  --stats boson0 --r 0.5 --temp 0.001
    szilard sweep  --stats fermion-spinless --r 0.3333333 [--t-grid 1e-3:10:121]
    szilard sweep  --stats fermion-spin-half --interaction spin:-1 --temp 0.05 [--r-grid 0.005:0.995:199]
    szilard figure fig5 --out fig5.csv
    szilard wall-demo
    szilard verify

A config file (``--config FILE``) holds ``key = value`` lines with ``#``
comments; keys are the long option names (dashes or underscores).  Command
line flags win over the file.  Without ``--out`` results go to
``$SZILARD_OUTPUT_DIR/<name>.<format>`` when that variable is set, else stdout.
"""
import argparse
import dataclasses
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import sweep as sweeps
from ._accel import backend_name
from .engine import WALL_GRID_POINTS, WALL_TOL, entropy_production
from .ensemble import DEFAULT_TRUNCATION, Interaction, Statistics, Truncation, validate_model
from .errors import ConfigError, DomainError, SzilardError
from .output import WRITERS

COMMANDS = ("point", "sweep", "figure", "wall-demo", "verify")
FORMATS = ("csv", "json")
OUTPUT_DIR_ENV = "SZILARD_OUTPUT_DIR"


@dataclass(frozen=True)
class RunConfig:
    command: str
    stats: str = "boson0"
    interaction: str = "none"
    n: int = 2
    r: float | None = None
    temp: float | None = None
    r_grid: str | None = None
    t_grid: str | None = None
    preset: str | None = None
    v0: float = 1.0
    out: str | None = None
    format: str | None = None
    eps: float = DEFAULT_TRUNCATION.eps
    wall_grid: int = WALL_GRID_POINTS
    wall_tol: float = WALL_TOL
    workers: int = 1

    @property
    def output_format(self):
        if self.format:
            return self.format
        return "json" if self.command == "point" else "csv"

    @property
    def truncation(self):
        return Truncation(eps=self.eps)


FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_CASTS = {"n": int, "r": float, "temp": float, "v0": float, "eps": float,
          "wall_grid": int, "wall_tol": float, "workers": int}


def _cast(key, value):
    if value is None or key not in _CASTS:
        return value
    try:
        return _CASTS[key](value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse {value!r} as {_CASTS[key].__name__}") from None


def read_config_file(path):
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            if key not in FIELDS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}; accepted: {', '.join(FIELDS)}")
            values[key] = value.strip()
    return values


def serialize(config):
    """Config-file text that ``parse_config`` reads back to an equal RunConfig."""
    lines = []
    for name in FIELDS:
        value = getattr(config, name)
        if value is None:
            continue
        lines.append(f"{name} = {value!r}" if isinstance(value, float) else f"{name} = {value}")
    return "\n".join(lines) + "\n"


def _parse_grid(text, key):
    try:
        lo, hi, num = text.split(":")
        lo, hi, num = float(lo), float(hi), int(num)
    except ValueError:
        raise ConfigError(f"{key}: expected 'start:stop:count', got {text!r}") from None
    if num < 1 or not lo <= hi or (num > 1 and lo == hi):
        raise ConfigError(f"{key}: need start < stop and count >= 1, got {text!r}")
    return lo, hi, num


def validate(config):
    if config.command not in COMMANDS:
        raise ConfigError(f"command: {config.command!r} not in {', '.join(COMMANDS)}")
    try:
        stats = Statistics(config.stats)
    except ValueError:
        raise ConfigError(f"stats: {config.stats!r} not in {', '.join(s.value for s in Statistics)}") from None
    try:
        inter = Interaction.parse(config.interaction)
        validate_model(stats, inter, config.n)
    except DomainError as exc:
        raise ConfigError(f"interaction/stats/n: {exc}") from None
    if config.format is not None and config.format not in FORMATS:
        raise ConfigError(f"format: {config.format!r} not in {', '.join(FORMATS)}")
    for key in ("eps", "wall_tol", "v0"):
        if not getattr(config, key) > 0:
            raise ConfigError(f"{key}: must be positive, got {getattr(config, key)!r}")
    if config.eps >= 1:
        raise ConfigError(f"eps: must be below 1, got {config.eps!r}")
    for key in ("wall_grid", "workers"):
        if getattr(config, key) < 1:
            raise ConfigError(f"{key}: must be positive, got {getattr(config, key)!r}")
    if config.wall_grid < 3:
        raise ConfigError(f"wall_grid: need at least 3 points, got {config.wall_grid}")
    if config.r is not None and not 0 < config.r < 1:
        raise ConfigError(f"r: must satisfy 0 < r < 1, got {config.r!r}")
    if config.temp is not None and not (config.temp > 0 and math.isfinite(config.temp)):
        raise ConfigError(f"temp: must be positive, got {config.temp!r}")
    for key in ("r_grid", "t_grid"):
        if getattr(config, key) is not None:
            _parse_grid(getattr(config, key), key)

    if config.command == "point" and (config.r is None or config.temp is None):
        raise ConfigError("point: both r and temp are required")
    if config.command == "sweep":
        if (config.r is None) == (config.temp is None):
            raise ConfigError("sweep: give exactly one of r (temperature sweep) or temp (position sweep)")
        if config.r is not None and config.r_grid is not None:
            raise ConfigError("sweep: r_grid conflicts with a fixed r")
        if config.temp is not None and config.t_grid is not None:
            raise ConfigError("sweep: t_grid conflicts with a fixed temp")
    if config.command != "figure" and config.preset is not None:
        raise ConfigError(f"preset: only the figure command takes a preset, got {config.preset!r}")
    if config.command == "figure" and config.preset not in sweeps.PRESETS:
        raise ConfigError(f"preset: {config.preset!r} not in {', '.join(sweeps.PRESETS)}")
    return config


def build_parser():
    p = argparse.ArgumentParser(prog="szilard", description="Szilard-engine entropy production.")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("preset", nargs="?", help="figure preset name (figure command)")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--stats", help=", ".join(s.value for s in Statistics))
    p.add_argument("--interaction", help="none | contact:V | spin:V (energies in E1)")
    p.add_argument("--n", type=int, help="particle number, 1 or 2")
    p.add_argument("--r", type=float, help="insertion position (fraction of box)")
    p.add_argument("--temp", type=float, help="temperature k_B T / E1")
    p.add_argument("--r-grid", help="linear grid start:stop:count")
    p.add_argument("--t-grid", help="log grid start:stop:count")
    p.add_argument("--v0", type=float, help="interaction magnitude for figure presets")
    p.add_argument("--out", help="output file")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--eps", type=float, help="truncation weight")
    p.add_argument("--wall-grid", type=int, help="points in the equilibrium-wall scan")
    p.add_argument("--wall-tol", type=float, help="golden-section bracket width")
    p.add_argument("--workers", type=int, help="parallel processes for sweeps")
    return p


def parse_config(argv):
    args = build_parser().parse_args(argv)
    values = read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key != "config" and value is not None:
            values[key] = value
    if "command" not in values:
        raise ConfigError(f"command: missing; choose from {', '.join(COMMANDS)}")
    values = {k: _cast(k, v) for k, v in values.items()}
    return validate(RunConfig(**values))


# ---------------------------------------------------------------------------
# execution
# ---------------------------------------------------------------------------


_PRESET_OWNED = ("stats", "interaction", "n")


def _meta(config, **extra):
    echo = {k: v for k, v in dataclasses.asdict(config).items() if v is not None}
    if config.command in ("figure", "wall-demo"):
        # presets fix the model themselves; the defaults here were never used
        echo = {k: v for k, v in echo.items() if k not in _PRESET_OWNED}
    meta = {"config": echo,
            "units": "energy E1 = h^2/8mL^2, temperature k_B T/E1, entropy k_B",
            "backend": backend_name(), "truncation_eps": config.eps}
    meta.update(extra)
    return meta


def _emit(config, name, columns, meta, stdout):
    fmt = config.output_format
    path = config.out
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{name}.{fmt}")
    if path is None:
        WRITERS[fmt](stdout, columns, meta)
        return None
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        WRITERS[fmt](fh, columns, meta)
    return path


def _grid_columns(grid):
    columns = {grid.axis: grid.values}
    records = [None if p is None else p.record() for p in grid.points]
    template = next((rec for rec in records if rec is not None), {})
    for key in template:
        if key in columns:
            continue
        columns[key] = np.array([np.nan if rec is None else rec[key] for rec in records])
    columns.update(grid.columns)
    return columns


def _run_point(config, stdout):
    point = entropy_production(Statistics(config.stats), Interaction.parse(config.interaction),
                               config.r, config.temp, config.n, config.truncation,
                               grid_points=config.wall_grid, tol=config.wall_tol)
    columns = {k: [v] for k, v in point.record().items()}
    meta = _meta(config, max_orbital_index=max(point.n_orbitals))
    _emit(config, "point", columns, meta, stdout)


def _run_sweep(config, stdout):
    stats, inter = Statistics(config.stats), Interaction.parse(config.interaction)
    kw = {"n": config.n, "truncation": config.truncation, "workers": config.workers}
    if config.r is not None:
        grid_values = (np.geomspace(*_parse_grid(config.t_grid, "t_grid")) if config.t_grid
                       else sweeps.default_t_grid())
        grid = sweeps.temp_sweep(stats, inter, config.r, grid_values, **kw)
    else:
        grid_values = (np.linspace(*_parse_grid(config.r_grid, "r_grid")) if config.r_grid
                       else sweeps.default_r_grid())
        grid = sweeps.r_sweep(stats, inter, config.temp, grid_values, **kw)
    meta = _meta(config, max_orbital_index=grid.max_orbitals(),
                 errors=[f"{grid.axis}[{k}]: {e}" for k, e in grid.errors])
    _emit(config, f"sweep_{grid.axis}", _grid_columns(grid), meta, stdout)
    return 1 if grid.errors else 0


def _run_figure(config, stdout, name):
    if name == "wall-demo":
        fig = sweeps.wall_demo()
    else:
        t_grid = np.geomspace(*_parse_grid(config.t_grid, "t_grid")) if config.t_grid else None
        r_grid = np.linspace(*_parse_grid(config.r_grid, "r_grid")) if config.r_grid else None
        fig = sweeps.figure_preset(name, t_grid=t_grid, r_grid=r_grid, v0=config.v0,
                                   truncation=config.truncation, workers=config.workers)
    columns = {fig.axis: fig.values, **fig.columns}
    meta = _meta(config, **fig.meta, errors=[f"{fixed} [{k}]: {e}" for fixed, k, e in fig.errors])
    _emit(config, name, columns, meta, stdout)
    return 1 if fig.errors else 0


def _run_verify(stdout):
    from . import verify

    results = verify.run_all(stdout)
    failed = [r for r in results if not r.passed]
    stdout.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    return 1 if failed else 0


def run(config, stdout=None):
    """Execute a validated RunConfig; returns the process exit status."""
    stdout = stdout or sys.stdout
    if config.command == "point":
        _run_point(config, stdout)
        return 0
    if config.command == "sweep":
        return _run_sweep(config, stdout)
    if config.command == "figure":
        return _run_figure(config, stdout, config.preset)
    if config.command == "wall-demo":
        return _run_figure(config, stdout, "wall-demo")
    return _run_verify(stdout)


def main(argv=None):
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
        return run(config)
    except SzilardError as exc:
        print(f"szilard: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
