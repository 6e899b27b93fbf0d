"""Temperature and insertion-position sweeps, scaling collapse, figure presets."""
import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import spectrum
from ._accel import backend_name
from .engine import classical_binary_entropy, entropy_production, fm_detuning
from .ensemble import DEFAULT_TRUNCATION, Interaction, Statistics, validate_model
from .errors import DomainError, SzilardError

T_MIN = 1e-6


def default_t_grid(num=121, lo=1e-3, hi=10.0):
    return np.geomspace(lo, hi, num)


def default_r_grid(num=199, lo=0.005, hi=0.995):
    return np.linspace(lo, hi, num)


def refined_r_grid(window=(0.44, 0.56), step=1e-4):
    """Default r grid merged with a dense window around the midpoint."""
    lo, hi = window
    dense = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    return np.unique(np.round(np.concatenate([default_r_grid(), dense]), 12))


@dataclass
class SweepGrid:
    axis: str
    values: np.ndarray
    stats: Statistics
    interaction: Interaction
    n: int
    fixed: dict
    points: list
    errors: list = field(default_factory=list)
    columns: dict = field(default_factory=dict)

    def column(self, name):
        if name in self.columns:
            return self.columns[name]
        return np.array([np.nan if p is None else getattr(p, name) for p in self.points], dtype=float)

    @property
    def dS(self):
        return self.column("dS")

    def max_orbitals(self):
        return max((max(p.n_orbitals) for p in self.points if p is not None), default=0)


def _evaluate(job):
    stats, inter, r, t, n, truncation = job
    try:
        return entropy_production(stats, inter, r, t, n, truncation), None
    except SzilardError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _run(jobs, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_evaluate(job) for job in jobs]


def _collect(axis, values, stats, inter, n, fixed, results):
    points, errors = [], []
    for k, (point, err) in enumerate(results):
        points.append(point)
        if err is not None:
            errors.append((k, err))
    return SweepGrid(axis, values, stats, inter, n, fixed, points, errors)


def _check_grid(values, lo, hi, name):
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DomainError(f"{name} grid must be a non-empty 1-D sequence")
    if values.size > 1 and not np.all(np.diff(values) > 0):
        raise DomainError(f"{name} grid must be strictly increasing")
    if not (values[0] >= lo and values[-1] <= hi):
        raise DomainError(f"{name} grid must lie within [{lo}, {hi}]")
    return values


def temp_sweep(stats, inter, r, t_grid, n=2, truncation=DEFAULT_TRUNCATION, workers=1):
    stats = validate_model(stats, inter, n)
    t_grid = _check_grid(t_grid, T_MIN, np.inf, "temperature")
    jobs = [(stats, inter, r, float(t), n, truncation) for t in t_grid]
    return _collect("t", t_grid, stats, inter, n, {"r": r}, _run(jobs, workers))


def r_sweep(stats, inter, t, r_grid, n=2, truncation=DEFAULT_TRUNCATION, workers=1):
    stats = validate_model(stats, inter, n)
    r_grid = _check_grid(r_grid, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0), "insertion")
    jobs = [(stats, inter, float(r), t, n, truncation) for r in r_grid]
    return _collect("r", r_grid, stats, inter, n, {"t": t}, _run(jobs, workers))


def collapse_transform(grid):
    """Add x_scaled = t / E_sym(r) and y_scaled = dS / dS_cl(r) to a one-atom t-sweep."""
    if grid.axis != "t" or grid.n != 1:
        raise DomainError("collapse needs a single-atom temperature sweep")
    r = grid.fixed["r"]
    asym = spectrum.e_sym(r)
    if asym == 0.0:
        raise DomainError("collapse undefined at r = 0.5 (E_sym = 0)")
    columns = dict(grid.columns)
    columns["x_scaled"] = grid.values / asym
    columns["y_scaled"] = grid.dS / classical_binary_entropy(r)
    return dataclasses.replace(grid, columns=columns)


def collapse_spread(grids, x_lo=0.2, x_hi=5.0, count=20):
    """Max over ``count`` log-spaced x' in [x_lo, x_hi] of the y' range across curves.

    Returns ``(spread, x, y)`` with ``y`` of shape (len(grids), count).
    """
    x = np.geomspace(x_lo, x_hi, count)
    rows = []
    for grid in grids:
        xs, ys = grid.column("x_scaled"), grid.column("y_scaled")
        ok = np.isfinite(ys)
        if xs[ok].min() > x_lo * (1 + 1e-12) or xs[ok].max() < x_hi * (1 - 1e-12):
            raise DomainError(
                f"r={grid.fixed['r']}: scaled axis [{xs[ok].min():.3g}, {xs[ok].max():.3g}] "
                f"does not cover [{x_lo}, {x_hi}]"
            )
        rows.append(np.interp(np.log(x), np.log(xs[ok]), ys[ok]))
    y = np.array(rows)
    return float(np.max(y.max(axis=0) - y.min(axis=0))), x, y


def half_crossing(grid):
    """x' where y' first rises through 0.5 (log-linear interpolation)."""
    xs, ys = grid.column("x_scaled"), grid.column("y_scaled")
    above = np.flatnonzero(ys >= 0.5)
    if above.size == 0 or above[0] == 0:
        return math.nan
    k = above[0]
    frac = (0.5 - ys[k - 1]) / (ys[k] - ys[k - 1])
    return float(np.exp(np.log(xs[k - 1]) + frac * (np.log(xs[k]) - np.log(xs[k - 1]))))


@dataclass(frozen=True)
class RStar:
    r_star: float
    r_deg: float


def _solve_detuning(v0, target):
    gap = target - v0
    if not gap > 0.0:
        raise DomainError(f"no insertion position in (0, 0.5) gives detuning {target!r} for v0={v0!r}")
    lo, hi = 1e-6, 0.5
    if fm_detuning(lo, v0) < target:
        raise DomainError(f"detuning {target!r} needs r below {lo} for v0={v0!r}")
    return optimize.bisect(lambda r: fm_detuning(r, v0) - target, lo, hi, xtol=1e-14, maxiter=200)


def find_r_star(v0, t):
    """Positions where the FM detuning equals t ln 3 (peak) and 0 (degeneracy)."""
    if not v0 < 0.0:
        raise DomainError(f"ferromagnetic coupling needs v0 < 0, got {v0!r}")
    if not t > 0.0:
        raise DomainError(f"temperature must be positive, got {t!r}")
    return RStar(_solve_detuning(v0, t * math.log(3.0)), _solve_detuning(v0, 0.0))


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

PRESETS = ("fig2", "fig2-inset", "fig3", "fig3-inset", "fig4", "fig4-inset",
           "fig5", "fig5-inset", "figS2", "wall-demo")

FIG2_R = (0.5, 0.45, 0.4, 0.35, 0.3)
FIG3_FERMION_R = (0.5, 1.0 / 3.0, 0.25, 0.2)
FIG3_BOSON_R = (0.5, 0.45, 0.35, 0.25)
INSET_T = 0.05
FIGS2_T = (0.1, 0.05, 0.01)


@dataclass
class Figure:
    name: str
    axis: str
    values: np.ndarray
    columns: dict
    meta: dict
    grids: list = field(default_factory=list)

    @property
    def errors(self):
        return [(g.fixed, k, e) for g in self.grids for k, e in g.errors]


def _label(x):
    return f"{x:.6g}"


def _figure(name, grids, labels, meta, extra=None):
    axis, values = grids[0].axis, grids[0].values
    columns = {}
    for grid, label in zip(grids, labels):
        if extra is None:
            columns[f"dS_{label}"] = grid.dS
        else:
            for col in extra:
                columns[f"{col}_{label}"] = grid.column(col)
    meta = dict(meta, preset=name, backend=backend_name(),
                max_orbital_index=max(g.max_orbitals() for g in grids),
                error_count=sum(len(g.errors) for g in grids))
    return Figure(name, axis, values, columns, meta, grids)


def figure_preset(name, t_grid=None, r_grid=None, v0=1.0, truncation=DEFAULT_TRUNCATION, workers=1):
    """Run the parameter set behind one figure panel; ``v0`` is the interaction magnitude."""
    if name not in PRESETS:
        raise DomainError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    if name == "wall-demo":
        return wall_demo()
    v0 = abs(v0)
    none = Interaction()
    base = {"v0": v0, "truncation_eps": truncation.eps}
    kw = {"truncation": truncation, "workers": workers}

    def temps():
        return default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)

    def positions():
        return refined_r_grid() if r_grid is None else np.asarray(r_grid, dtype=float)

    if name == "fig2":
        grids = [temp_sweep(Statistics.BOSON0, none, r, temps(), n=1, **kw) for r in FIG2_R]
        return _figure(name, grids, [f"r{_label(r)}" for r in FIG2_R], dict(base, n=1, r=list(FIG2_R)))
    if name == "fig2-inset":
        ts = default_t_grid(161, 1e-3, 100.0) if t_grid is None else np.asarray(t_grid, dtype=float)
        rs = FIG2_R[1:]
        grids = [collapse_transform(temp_sweep(Statistics.BOSON0, none, r, ts, n=1, **kw)) for r in rs]
        return _figure(name, grids, [f"r{_label(r)}" for r in rs], dict(base, n=1, r=list(rs)),
                       extra=("x_scaled", "y_scaled", "dS"))
    if name in ("fig3", "fig3-inset"):
        stats, rs = ((Statistics.FERMION_SPINLESS, FIG3_FERMION_R) if name == "fig3"
                     else (Statistics.BOSON0, FIG3_BOSON_R))
        grids = [temp_sweep(stats, none, r, temps(), **kw) for r in rs]
        return _figure(name, grids, [f"r{_label(r)}" for r in rs],
                       dict(base, stats=stats.value, n=2, r=list(rs)))
    if name == "fig4":
        cases = [("classical_attractive", Statistics.CLASSICAL, -v0),
                 ("classical_repulsive", Statistics.CLASSICAL, v0),
                 ("boson_attractive", Statistics.BOSON0, -v0),
                 ("boson_repulsive", Statistics.BOSON0, v0)]
        grids = [temp_sweep(s, Interaction("contact", v), 0.5, temps(), **kw) for _, s, v in cases]
        return _figure(name, grids, [c[0] for c in cases], dict(base, r=0.5, n=2))
    if name == "fig4-inset":
        cases = [("attractive", -v0), ("repulsive", v0)]
        grids = [r_sweep(Statistics.BOSON0, Interaction("contact", v), INSET_T, positions(), **kw)
                 for _, v in cases]
        return _figure(name, grids, [c[0] for c in cases], dict(base, stats="boson0", t=INSET_T, n=2))
    if name in ("fig5", "fig5-inset"):
        cases = [("none", none), ("ferromagnetic", Interaction("spin", -v0)),
                 ("antiferromagnetic", Interaction("spin", v0))]
        stats = Statistics.FERMION_SPIN_HALF
        if name == "fig5":
            grids = [temp_sweep(stats, inter, 0.5, temps(), **kw) for _, inter in cases]
            meta = dict(base, stats=stats.value, r=0.5, n=2)
        else:
            grids = [r_sweep(stats, inter, INSET_T, positions(), **kw) for _, inter in cases]
            meta = dict(base, stats=stats.value, t=INSET_T, n=2)
        return _figure(name, grids, [c[0] for c in cases], meta)
    # figS2
    inter = Interaction("spin", -v0)
    grids = [r_sweep(Statistics.FERMION_SPIN_HALF, inter, t, positions(), **kw) for t in FIGS2_T]
    rs = [find_r_star(-v0, t) for t in FIGS2_T]
    meta = dict(base, stats="fermion-spin-half", interaction=str(inter), n=2, t=list(FIGS2_T),
                r_star=[x.r_star for x in rs], r_deg=rs[0].r_deg)
    return _figure(name, grids, [f"t{_label(t)}" for t in FIGS2_T], meta)


def wall_demo(v0_grid=None, num_levels=4):
    """Delta-barrier spectrum, doublet splitting and localization versus barrier strength."""
    v0s = np.concatenate([[0.0], np.geomspace(0.1, 1e6, 71)]) if v0_grid is None else np.asarray(v0_grid, float)
    levels = np.array([spectrum.delta_wall_levels(spectrum.DeltaWallSpec(v, num_levels)) for v in v0s])
    columns = {f"E{k}": levels[:, k] for k in range(num_levels)}
    columns["splitting"] = levels[:, 1] - levels[:, 0]
    columns["left_weight"] = np.array([spectrum.left_weight(v) for v in v0s])
    discrepancy = []
    for v in v0s:
        try:
            discrepancy.append(spectrum.doublet_mixture_equivalence(v))
        except DomainError:
            discrepancy.append(math.nan)
    columns["mixture_discrepancy"] = np.array(discrepancy)
    meta = {"preset": "wall-demo", "num_levels": num_levels, "units": "E1 = h^2/8mL^2; v0 in E1*L"}
    return Figure("wall-demo", "v0", v0s, columns, meta)
