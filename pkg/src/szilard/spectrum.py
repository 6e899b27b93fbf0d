"""Single-particle spectra of the divided box and the delta-barrier wall demo.

Units: energies in E1 = h^2 / (8 m L^2), the ground level of the undivided
box; wall positions as fractions of L; delta-barrier strength in E1 * L.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, DomainError

ROOT_XTOL = 1e-12


def _check_fraction(r):
    if not 0.0 < r < 1.0:
        raise DomainError(f"wall position must satisfy 0 < r < 1, got {r!r}")


def _check_level(n):
    if int(n) != n or n < 1:
        raise DomainError(f"level index must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class DividedBoxSpec:
    """Box of unit length with a hard wall at fraction ``r``."""

    r: float

    def __post_init__(self):
        _check_fraction(self.r)

    def left(self, n):
        return left_level(n, self.r)

    def right(self, n):
        return right_level(n, self.r)


def left_level(n, r):
    """n-th level of the left compartment, n**2 / r**2."""
    _check_level(n)
    _check_fraction(r)
    return n * n / (r * r)


def right_level(n, r):
    """n-th level of the right compartment, n**2 / (1 - r)**2."""
    _check_level(n)
    _check_fraction(r)
    return n * n / ((1.0 - r) * (1.0 - r))


def e_sym(r):
    """Asymmetry |E^L_1 - E^R_1| between the two ground levels."""
    return abs(left_level(1, r) - right_level(1, r))


def delta_e(r):
    """Smallest intra-side spacing min(E^L_2 - E^L_1, E^R_2 - E^R_1)."""
    _check_fraction(r)
    return min(3.0 / (r * r), 3.0 / ((1.0 - r) * (1.0 - r)))


# ---------------------------------------------------------------------------
# delta-barrier at the box centre
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaWallSpec:
    v0: float
    num_levels: int = 4

    def __post_init__(self):
        if not self.v0 >= 0.0:
            raise DomainError(f"barrier strength must be >= 0, got {self.v0!r}")
        if self.num_levels < 2:
            raise DomainError(f"need at least 2 levels, got {self.num_levels!r}")


def _even_matching(energy, v0):
    # derivative jump at x = 1/2 for psi = sin(kx) | sin(k(1-x)), k = pi sqrt(E)
    half_k = 0.5 * np.pi * np.sqrt(energy)
    return 4.0 * half_k * np.cos(half_k) + v0 * np.pi ** 2 * np.sin(half_k)


def even_level(j, v0):
    """j-th parity-even level (j >= 1); lies in [(2j-1)**2, 4 j**2)."""
    lo, hi = (2 * j - 1) ** 2, 4.0 * j * j
    if v0 == 0.0:
        return float(lo)
    f_lo, f_hi = _even_matching(lo, v0), _even_matching(hi, v0)
    if np.sign(f_lo) == np.sign(f_hi):
        raise ConvergenceError(
            f"even level {j} at v0={v0!r}: no sign change on bracket "
            f"[{lo}, {hi}] (f={f_lo:.3e}, {f_hi:.3e})"
        )
    try:
        root, info = optimize.bisect(_even_matching, lo, hi, args=(v0,),
                                     xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps,
                                     maxiter=200, full_output=True, disp=False)
    except RuntimeError as exc:  # pragma: no cover - bisection on a valid bracket
        raise ConvergenceError(f"even level {j} at v0={v0!r} on [{lo}, {hi}]: {exc}") from exc
    if not info.converged:
        raise ConvergenceError(
            f"even level {j} at v0={v0!r}: bisection stalled on [{lo}, {hi}] "
            f"after {info.iterations} iterations (last {root!r})"
        )
    return root


def odd_level(j):
    """j-th parity-odd level, 4 j**2, independent of the barrier."""
    return 4.0 * j * j


def delta_wall_levels(spec):
    """Lowest ``spec.num_levels`` eigenvalues with a central delta barrier, ascending."""
    levels = []
    j = 1
    while len(levels) < spec.num_levels:
        levels.append(even_level(j, spec.v0))
        levels.append(odd_level(j))
        j += 1
    return np.array(levels[:spec.num_levels])


def doublet_splitting(v0):
    levels = delta_wall_levels(DeltaWallSpec(v0, 2))
    return levels[1] - levels[0]


# ---------------------------------------------------------------------------
# doublet <-> localized-state mixture
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoStateDensity:
    """2x2 density matrix in the {|0>, |1>} energy basis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (2, 2):
            raise DomainError(f"expected a 2x2 matrix, got shape {m.shape}")
        if abs(np.trace(m) - 1.0) > 1e-12 or not np.allclose(m, m.T, atol=1e-14):
            raise DomainError("density matrix must be symmetric with unit trace")
        if np.linalg.eigvalsh(m).min() < -1e-14:
            raise DomainError("density matrix must be positive semidefinite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def mixture(cls, states, weights=None):
        states = [np.asarray(s, dtype=float) for s in states]
        if weights is None:
            weights = [1.0 / len(states)] * len(states)
        return cls(sum(w * np.outer(s, s) for w, s in zip(weights, states)))


def localized_pair():
    """|L>, |R> = (|0> +- |1>) / sqrt(2) as vectors in the energy basis."""
    ground, excited = np.eye(2)
    return (ground + excited) / np.sqrt(2.0), (ground - excited) / np.sqrt(2.0)


def _require_isolated_doublet(v0):
    levels = delta_wall_levels(DeltaWallSpec(v0, 3))
    if not levels[1] - levels[0] < levels[2] - levels[1]:
        raise DomainError(
            f"v0={v0!r} too small: doublet splitting {levels[1] - levels[0]:.4g} "
            f"is not below the gap to the next level {levels[2] - levels[1]:.4g}"
        )
    return levels


def doublet_mixture_equivalence(v0):
    """Max entrywise |rho_E - rho_LR| for the equal doublet mixture.

    rho_E mixes the two lowest eigenstates, rho_LR the localized pair built
    from them; both live on the same two-dimensional subspace.
    """
    _require_isolated_doublet(v0)
    ground, excited = np.eye(2)
    rho_energy = TwoStateDensity.mixture([ground, excited])
    rho_lr = TwoStateDensity.mixture(localized_pair())
    return float(np.max(np.abs(rho_energy.matrix - rho_lr.matrix)))


def doublet_wavefunctions(v0, x):
    """Position-space ground and first excited states at positions ``x``.

    Signs are fixed so that (psi0 + psi1) / sqrt(2) sits in the left half.
    """
    x = np.asarray(x, dtype=float)
    k = np.pi * np.sqrt(even_level(1, v0))
    norm = 1.0 / np.sqrt(0.5 - np.sin(k) / (2.0 * k))
    psi0 = norm * np.where(x < 0.5, np.sin(k * x), np.sin(k * (1.0 - x)))
    psi1 = np.sqrt(2.0) * np.sin(2.0 * np.pi * x)
    inside = (x >= 0.0) & (x <= 1.0)
    return np.where(inside, psi0, 0.0), np.where(inside, psi1, 0.0)


def left_weight(v0):
    """Probability of |L> in the left half of the box; 1 for an impenetrable wall."""
    def density(x):
        psi0, psi1 = doublet_wavefunctions(v0, x)
        return 0.5 * (psi0 + psi1) ** 2

    value, _ = integrate.quad(density, 0.0, 0.5, epsabs=1e-13, epsrel=1e-12)
    return value
