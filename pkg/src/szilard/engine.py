"""Szilard-engine cycle: insertion, isothermal expansion, entropy production.

For a wall inserted at ``r`` the forward protocol finds m particles on the
left with probability p_m.  The expansion then carries the wall to the
equilibrium position l_eq[m]; p*_m is the probability of the same m when the
wall is inserted directly at l_eq[m].  The entropy production is

    dS = -sum_m p_m ln(p_m / p*_m),   work = t * dS.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr, expit, logsumexp

from .ensemble import (
    DEFAULT_TRUNCATION, LOG3, Interaction, Statistics, enumerate_states,
    log_occupancy, log_z_sectors, system_entropy, validate_model,
)
from .errors import ConvergenceError, DomainError, ProtocolError
from .spectrum import e_sym

log = logging.getLogger(__name__)

WALL_GRID_POINTS = 2001
WALL_TOL = 1e-10
NEGATIVE_DS_WARN = -1e-9

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EnginePoint:
    r: float
    t: float
    stats: Statistics
    interaction: Interaction
    n: int
    p: np.ndarray
    l_eq: np.ndarray
    p_star: np.ndarray
    dS: float
    work: float
    s_system: float
    n_orbitals: tuple = (0, 0)

    def record(self):
        """Flat dict for CSV/JSON output."""
        out = {"r": self.r, "t": self.t, "dS": self.dS, "work": self.work, "s_system": self.s_system}
        for m in range(self.n + 1):
            out[f"p{m}"] = float(self.p[m])
        for m in range(self.n + 1):
            out[f"p_star{m}"] = float(self.p_star[m])
        for m in range(self.n + 1):
            out[f"l_eq{m}"] = float(self.l_eq[m])
        return out


def _check_point(r, t):
    if not 0.0 < r < 1.0:
        raise DomainError(f"insertion position must satisfy 0 < r < 1, got {r!r}")
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"temperature must be positive and finite, got {t!r}")


def golden_section_max(f, a, b, tol=WALL_TOL):
    """Maximize a unimodal ``f`` on [a, b]; returns the midpoint of the final bracket."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def equilibrium_wall(stats, inter, m, r, t, n=2, truncation=DEFAULT_TRUNCATION,
                     grid_points=WALL_GRID_POINTS, tol=WALL_TOL, backend=None):
    """Wall position reached by the quasi-static expansion from ``r`` with m on the left.

    All particles on one side push the wall to the far end.  Otherwise the
    wall climbs log Z_m(l) from the grid point nearest ``r`` to the first
    local maximum, which golden-section search then refines.
    """
    validate_model(stats, inter, n)
    _check_point(r, t)
    if not 0 <= m <= n:
        raise DomainError(f"left count must lie in 0..{n}, got {m!r}")
    if m == 0:
        return 0.0
    if m == n:
        return 1.0

    grid = np.linspace(0.0, 1.0, grid_points)
    values = log_z_sectors(stats, inter, n, grid, t, truncation, backend)[:, m]
    values = np.where(np.isnan(values), -np.inf, values)
    i = int(np.argmin(np.abs(grid - r)))
    last = grid_points - 1
    while True:
        left = values[i - 1] if i > 0 else -np.inf
        right = values[i + 1] if i < last else -np.inf
        if right > values[i] and right >= left:
            i += 1
        elif left > values[i]:
            i -= 1
        else:
            break
    if i in (0, last) or not np.isfinite(values[i]):
        profile = ", ".join(f"{grid[k]:.3f}:{values[k]:.4g}" for k in range(0, grid_points, max(1, grid_points // 20)))
        raise ConvergenceError(
            f"no interior maximum of log Z_{m} reached from r={r!r} at t={t!r} "
            f"({stats.value if hasattr(stats, 'value') else stats}, {inter}); profile {profile}"
        )

    def objective(l):
        return float(log_z_sectors(stats, inter, n, [l], t, truncation, backend)[0, m])

    return golden_section_max(objective, grid[i - 1], grid[i + 1], tol)


def _log_p_star(stats, inter, r, t, n, truncation, backend, **wall):
    l_eq = np.array([equilibrium_wall(stats, inter, m, r, t, n, truncation, backend=backend, **wall)
                     for m in range(n + 1)])
    log_ps = np.zeros(n + 1)
    for m in range(1, n):
        logz = log_z_sectors(stats, inter, n, [l_eq[m]], t, truncation, backend)[0]
        log_ps[m] = logz[m] - logsumexp(logz)
    return log_ps, l_eq


def p_star(stats, inter, r, t, n=2, truncation=DEFAULT_TRUNCATION, backend=None):
    """Time-reversed occupancies p*_m; exactly 1 for m = 0 and m = n."""
    validate_model(stats, inter, n)
    _check_point(r, t)
    return np.exp(_log_p_star(stats, inter, r, t, n, truncation, backend)[0])


def relative_entropy_term(log_p, log_p_star):
    """-sum p ln(p / p*) with 0 ln(0 / x) = 0."""
    total = 0.0
    for m, (lp, lps) in enumerate(zip(log_p, log_p_star)):
        if lp == -np.inf:
            continue
        if lps == -np.inf:
            raise ProtocolError(f"p_{m} = {math.exp(lp):.3e} > 0 but p*_{m} = 0")
        total -= math.exp(lp) * (lp - lps)
    return total


def entropy_production(stats, inter, r, t, n=2, truncation=DEFAULT_TRUNCATION, backend=None,
                       grid_points=WALL_GRID_POINTS, tol=WALL_TOL):
    """Full engine evaluation at insertion position ``r`` and temperature ``t``."""
    stats = validate_model(stats, inter, n)
    _check_point(r, t)
    table = enumerate_states(stats, inter, r, t, n, truncation)
    log_p = log_occupancy(table)
    log_ps, l_eq = _log_p_star(stats, inter, r, t, n, truncation, backend,
                               grid_points=grid_points, tol=tol)
    ds = relative_entropy_term(log_p, log_ps)
    if ds < NEGATIVE_DS_WARN:
        log.warning("negative entropy production %.3e at r=%r t=%r (%s, %s)", ds, r, t, stats.value, inter)
    return EnginePoint(r=r, t=t, stats=stats, interaction=inter, n=n,
                       p=np.exp(log_p), l_eq=l_eq, p_star=np.exp(log_ps),
                       dS=ds, work=t * ds, s_system=system_entropy(table), n_orbitals=table.n_max)


def classical_binary_entropy(r):
    """-r ln r - (1 - r) ln(1 - r)."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"r must satisfy 0 < r < 1, got {r!r}")
    return float(entr(r) + entr(1.0 - r))


def classical_engine(inter, r, t, n=2):
    """Engine with distinguishable classical particles (configurational weights)."""
    return entropy_production(Statistics.CLASSICAL, inter, r, t, n)


@dataclass(frozen=True)
class LowTPrediction:
    p0: float
    p1: float
    dS: float
    delta_e: float


def fm_detuning(r, v0):
    """Singlet-pair minus triplet-split energy gap E_sym(r) + v0 (v0 < 0)."""
    return e_sym(r) + v0


def low_t_fm_prediction(r, v0, t):
    """Two-configuration closed form for ferromagnetic spin-1/2 fermions.

    Only the paired singlet (m = 0, or m = 2 past the midpoint) and the
    three split triplets compete, with p*_0 = 1 and p*_1 = 1.
    """
    if not v0 < 0.0:
        raise DomainError(f"ferromagnetic coupling needs v0 < 0, got {v0!r}")
    if not t > 0.0:
        raise DomainError(f"temperature must be positive, got {t!r}")
    detuning = fm_detuning(r, v0)
    x = detuning / t
    p0 = float(expit(x - LOG3))
    p1 = float(expit(LOG3 - x))
    return LowTPrediction(p0, p1, float(entr(p0) + entr(p1)), detuning)
