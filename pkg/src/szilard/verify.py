"""Built-in acceptance checks, shared by ``szilard verify`` and the test suite.

Every check returns a ``CheckResult``; tolerances are fixed here.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import oracle, spectrum
from .engine import classical_binary_entropy, entropy_production, low_t_fm_prediction
from .ensemble import Interaction, Statistics, Truncation
from .sweep import (
    collapse_spread, collapse_transform, default_t_grid, find_r_star, half_crossing,
    r_sweep, temp_sweep,
)

LN2 = math.log(2.0)
LN3 = math.log(3.0)
LN6 = math.log(6.0)
BOSON_RESIDUAL = 2.0 / 3.0 * LN3
SPIN_HALF_RESIDUAL = LN6 / 3.0
R_DEG_ENTROPY = -0.25 * math.log(0.25) - 0.75 * math.log(0.75)
T_LOW = 1e-3
FIG2_R = (0.45, 0.4, 0.35, 0.3)

NONE = Interaction()
B, FS, FH, CL = (Statistics.BOSON0, Statistics.FERMION_SPINLESS,
                 Statistics.FERMION_SPIN_HALF, Statistics.CLASSICAL)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _ds(stats, inter, r, t, n=2, **kw):
    return entropy_production(stats, inter, r, t, n, **kw).dS


def check_single_atom_symmetric():
    errs = {t: abs(_ds(B, NONE, 0.5, t, n=1) - LN2) for t in (T_LOW, 1.0, 10.0)}
    worst = max(errs.values())
    return worst <= 1e-6, f"max |dS - ln2| = {worst:.2e} over t in {sorted(errs)} (tol 1e-6)"


def check_single_atom_limits():
    ok, parts = True, []
    for r in FIG2_R:
        low = _ds(B, NONE, r, T_LOW, n=1)
        high = _ds(B, NONE, r, 10.0, n=1)
        gap = abs(high - classical_binary_entropy(r))
        ok &= low < 1e-3 and gap <= 2e-2
        parts.append(f"r={r}: dS(1e-3)={low:.1e}, |dS(10)-dS_cl|={gap:.3f}")
    return ok, "; ".join(parts) + " (tol 1e-3, 2e-2)"


def check_scaling_collapse():
    t_grid = default_t_grid(161, 1e-3, 100.0)
    grids = [collapse_transform(temp_sweep(B, NONE, r, t_grid, n=1)) for r in FIG2_R]
    spread, _, _ = collapse_spread(grids, 0.2, 5.0, 20)
    crossings = [half_crossing(g) for g in grids]
    cross_ok = all(0.3 <= x <= 3.0 for x in crossings)
    return (spread < 0.05 and cross_ok,
            f"spread of dS/dS_cl over x' in [0.2, 5] = {spread:.4f} (tol 0.05); "
            f"y'=0.5 crossings at x' = {', '.join(f'{x:.3f}' for x in crossings)} (window [0.3, 3])")


def check_bosons():
    residual = _ds(B, NONE, 0.5, T_LOW)
    grid = temp_sweep(B, NONE, 0.45, default_t_grid())
    ds = grid.dS
    peak = int(np.nanargmax(ds))
    bump = ds[peak] > LN2 and ds[0] < LN2 and peak > 0
    return (abs(residual - BOSON_RESIDUAL) <= 1e-3 and bump,
            f"r=0.5: dS(1e-3)={residual:.6f} vs (2/3)ln3={BOSON_RESIDUAL:.6f}; "
            f"r=0.45: max dS={ds[peak]:.4f} at t={grid.values[peak]:.3g}, dS(1e-3)={ds[0]:.2e}")


def check_spinless_fermions():
    sym = _ds(FS, NONE, 0.5, T_LOW)
    acc = _ds(FS, NONE, 1.0 / 3.0, T_LOW)
    return (sym < 1e-3 and abs(acc - LN2) <= 1e-3,
            f"r=1/2: dS={sym:.2e} (< 1e-3); r=1/3: dS={acc:.6f} vs ln2 (tol 1e-3)")


def check_contact_bosons():
    attractive = Interaction("contact", -1.0)
    repulsive = Interaction("contact", 1.0)
    att = _ds(B, attractive, 0.5, T_LOW)
    rep = _ds(B, repulsive, 0.5, T_LOW)
    classical = temp_sweep(CL, attractive, 0.5, default_t_grid()).dS
    cmax = float(np.nanmax(classical))
    return (att >= LN2 - 1e-3 and rep < 1e-2 and cmax > LN2,
            f"attractive dS(1e-3)={att:.6f} (>= ln2-1e-3); repulsive dS(1e-3)={rep:.2e} (< 1e-2); "
            f"classical attractive max={cmax:.4f} (> ln2)")


def check_spin_half():
    none = _ds(FH, NONE, 0.5, T_LOW)
    afm = _ds(FH, Interaction("spin", 1.0), 0.5, T_LOW)
    fm = _ds(FH, Interaction("spin", -1.0), 0.5, T_LOW)
    ok = abs(none - SPIN_HALF_RESIDUAL) <= 1e-3 and abs(afm - BOSON_RESIDUAL) <= 1e-3 and fm < 1e-3
    return ok, (f"none={none:.6f} vs (1/3)ln6={SPIN_HALF_RESIDUAL:.6f}; "
                f"AFM={afm:.6f} vs (2/3)ln3; FM={fm:.2e} (< 1e-3)")


def _fm_peak(t, grid):
    sweep = r_sweep(FH, Interaction("spin", -1.0), t, grid)
    k = int(np.nanargmax(sweep.dS))
    return sweep.values[k], sweep.dS[k]


def check_ferromagnetic_peak():
    grid = np.round(np.arange(0.44, 0.5, 1e-4), 10)
    pred = find_r_star(-1.0, 0.05)
    r_peak, ds_peak = _fm_peak(0.05, grid)
    at_deg = _ds(FH, Interaction("spin", -1.0), pred.r_deg, T_LOW)
    peaks = [_fm_peak(t, grid)[0] for t in (0.1, 0.05, 0.01)]
    approach = [abs(p - pred.r_deg) for p in peaks]
    monotone = all(a > b for a, b in zip(approach, approach[1:]))
    ok = (abs(ds_peak - LN2) <= 2e-2 and abs(r_peak - pred.r_star) <= 0.01
          and abs(at_deg - R_DEG_ENTROPY) <= 1e-3 and monotone)
    return ok, (f"t=0.05 peak dS={ds_peak:.5f} at r={r_peak:.4f} (r*={pred.r_star:.4f}); "
                f"dS(r_deg={pred.r_deg:.4f}, 1e-3)={at_deg:.6f} vs {R_DEG_ENTROPY:.6f}; "
                f"argmax r for t=0.1,0.05,0.01: {', '.join(f'{p:.4f}' for p in peaks)}")


def check_closed_form():
    worst = 0.0
    for t in (0.02, 0.01, 0.005, 0.002, 0.001):
        for r in np.linspace(0.44, 0.5, 61):
            full = _ds(FH, Interaction("spin", -1.0), float(r), t)
            worst = max(worst, abs(low_t_fm_prediction(float(r), -1.0, t).dS - full))
    return worst < 1e-3, f"max |closed form - full| = {worst:.2e} over r in [0.44, 0.5], t <= 0.02 (tol 1e-3)"


MODELS = [
    (CL, NONE, 1), (CL, NONE, 2), (CL, Interaction("contact", -1.0), 2), (CL, Interaction("contact", 1.0), 2),
    (B, NONE, 1), (B, NONE, 2), (B, Interaction("contact", -1.0), 2), (B, Interaction("contact", 1.0), 2),
    (FS, NONE, 2), (FS, Interaction("contact", 0.5), 2),
    (FH, NONE, 2), (FH, Interaction("spin", -1.0), 2), (FH, Interaction("spin", 1.0), 2),
]


def random_draws(count, seed, r_range=(0.05, 0.95), t_range=(1e-3, 10.0)):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        stats, inter, n = MODELS[rng.integers(len(MODELS))]
        scale = rng.uniform(0.2, 2.0)
        if inter.kind != "none":
            inter = Interaction(inter.kind, inter.v0 * scale)
        r = float(rng.uniform(*r_range))
        t = float(np.exp(rng.uniform(np.log(t_range[0]), np.log(t_range[1]))))
        yield stats, inter, n, r, t


def check_invariants(count=200, oracle_count=24, seed=20111):
    worst_norm = worst_bound = worst_refl = worst_oracle = 0.0
    for stats, inter, n, r, t in random_draws(count, seed):
        point = entropy_production(stats, inter, r, t, n)
        mirror = entropy_production(stats, inter, 1.0 - r, t, n)
        worst_norm = max(worst_norm, abs(point.p.sum() - 1.0))
        worst_bound = max(worst_bound, point.dS - point.s_system)
        worst_refl = max(worst_refl, abs(point.dS - mirror.dS))
    fixed = Truncation(n_orbitals=oracle.N_ORBITALS)
    for stats, inter, n, r, t in random_draws(oracle_count, seed + 1, (0.2, 0.8), (1.0, 10.0)):
        main = entropy_production(stats, inter, r, t, n, truncation=fixed).dS
        ref = oracle.engine_ds(stats.value, inter.kind, inter.v0, n, r, t)
        worst_oracle = max(worst_oracle, abs(main - ref))
    ok = worst_norm <= 1e-12 and worst_bound <= 1e-10 and worst_refl <= 1e-10 and worst_oracle <= 1e-8
    return ok, (f"{count} draws: |sum p - 1| <= {worst_norm:.1e}, max(dS - S) = {worst_bound:.1e}, "
                f"|dS(r) - dS(1-r)| <= {worst_refl:.1e}; oracle ({oracle_count} draws) |diff| <= {worst_oracle:.1e}")


def check_wall_demo():
    mix = max(spectrum.doublet_mixture_equivalence(v) for v in (10.0, 100.0, 1e4))
    strengths = (0.0, 1.0, 10.0, 100.0, 1000.0, 1e6)
    split = [spectrum.doublet_splitting(v) for v in strengths]
    decreasing = all(a > b for a, b in zip(split, split[1:]))
    free = spectrum.delta_wall_levels(spectrum.DeltaWallSpec(0.0, 6))
    level_err = float(np.max(np.abs(free - np.array([1, 4, 9, 16, 25, 36]))))
    ok = mix <= 1e-14 and decreasing and split[-1] < 1e-3 and level_err <= 1e-10
    return ok, (f"mixture discrepancy {mix:.1e} (tol 1e-14); splitting "
                f"{', '.join(f'{s:.3g}' for s in split)} (decreasing, < 1e-3 at 1e6); "
                f"free-box level error {level_err:.1e}")


CHECKS = [
    ("1 single atom r=0.5 gives ln2", check_single_atom_symmetric),
    ("2 single atom third-law and classical limits", check_single_atom_limits),
    ("3 scaling collapse", check_scaling_collapse),
    ("4 spin-0 bosons", check_bosons),
    ("5 spinless fermions", check_spinless_fermions),
    ("6 contact-interacting bosons", check_contact_bosons),
    ("7 spin-1/2 fermions at r=0.5", check_spin_half),
    ("8 ferromagnetic r-sweep and r*", check_ferromagnetic_peak),
    ("9 low-temperature closed form", check_closed_form),
    ("10 invariants and brute-force oracle", check_invariants),
    ("11 wall-insertion demo", check_wall_demo),
]


def run_check(name, func):
    try:
        passed, detail = func()
    except Exception as exc:  # report, never abort the table
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), detail)


def run_all(stream=None, names=None):
    results = []
    for name, func in CHECKS:
        if names and not any(name.startswith(f"{k} ") for k in names):
            continue
        result = run_check(name, func)
        results.append(result)
        if stream is not None:
            stream.write(f"[{'PASS' if result.passed else 'FAIL'}] {name}: {result.detail}\n")
            stream.flush()
    return results
