"""Brute-force reference engine on a fixed orbital set.

Independent of ``ensemble``/``engine``.  ``sector_weights`` enumerates
two-particle states pair by pair over explicit (side, orbital) modes, with
spin weights from Pauli-matrix algebra.  ``exchange_sector_weights`` is a
second construction from the exchange-operator trace

    Z_m = (Tr[P_m e^{-H/t}] + eta Tr[P_m X e^{-H/t}]) / 2,

X the particle swap (space x spin), eta = +1 for bosons, -1 for fermions;
its subtraction loses digits for fermions at low t.

All sums are naive linear-space sums and the equilibrium wall is the argmax
of a dense scan, so this is only meant for moderate temperatures.
"""
import itertools

import numpy as np
from scipy.linalg import expm

N_ORBITALS = 6
SCAN_POINTS = 100_001

_PAULI = [np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]], dtype=complex),
          np.array([[1, 0], [0, -1]], dtype=complex)]


def _spin_traces(kind, v0, t):
    """(Tr e^{-V/t}, Tr[swap e^{-V/t}]) over the two-spin space."""
    coupling = v0 if kind == "spin" else 0.0
    s_dot_s = sum(np.kron(p / 2, p / 2) for p in _PAULI)
    swap = np.zeros((4, 4))
    for a, b in itertools.product(range(2), repeat=2):
        swap[2 * a + b, 2 * b + a] = 1.0
    boltz = expm(-coupling * s_dot_s / t)
    return float(np.trace(boltz).real), float(np.trace(swap @ boltz).real)


def _spin_weights(kind, v0, t):
    """(weight of the singlet alone, trace over all four spin states)."""
    coupling = v0 if kind == "spin" else 0.0
    s_dot_s = sum(np.kron(p / 2, p / 2) for p in _PAULI).real
    lowest = np.linalg.eigvalsh(s_dot_s)[0]
    return float(np.exp(-coupling * lowest / t)), float(np.trace(expm(-coupling * s_dot_s / t)))


def _classical(kind, v0, n, l, t):
    contact = v0 if kind == "contact" else 0.0
    z = np.zeros((l.size, n + 1))
    for sides in itertools.product((0, 1), repeat=n):  # 1 = left
        w = np.ones(l.size)
        for s in sides:
            w = w * (l if s else 1.0 - l)
        if n == 2 and sides[0] == sides[1]:
            w = w * np.exp(-contact / t)
        z[:, sum(sides)] += w
    return z


def _mode_weights(l, t, n_orb):
    k = np.arange(1, n_orb + 1, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        left = np.exp(-np.outer(1.0 / (l * l), k * k) / t)
        right = np.exp(-np.outer(1.0 / ((1.0 - l) ** 2), k * k) / t)
    left[~np.isfinite(left)] = 0.0
    right[~np.isfinite(right)] = 0.0
    return left, right


def sector_weights(stats, kind, v0, n, l, t, n_orb=N_ORBITALS):
    """Linear-space Z_m, m = 0..n, for wall positions ``l`` (array)."""
    l = np.atleast_1d(np.asarray(l, dtype=float))
    if stats == "classical":
        return _classical(kind, v0, n, l, t)
    left, right = _mode_weights(l, t, n_orb)
    if n == 1:
        return np.stack([right.sum(axis=1), left.sum(axis=1)], axis=1)

    contact = v0 if kind == "contact" else 0.0
    singlet, full = _spin_weights(kind, v0, t)
    modes = [(1, k) for k in range(n_orb)] + [(0, k) for k in range(n_orb)]
    columns = {1: left, 0: right}
    if stats == "fermion-spinless":
        pairs = itertools.combinations(modes, 2)
    else:
        pairs = itertools.combinations_with_replacement(modes, 2)
    z = np.zeros((l.size, 3))
    for a, b in pairs:
        w = columns[a[0]][:, a[1]] * columns[b[0]][:, b[1]]
        if a[0] == b[0]:
            w = w * np.exp(-contact / t)
        if stats == "fermion-spin-half":
            w = w * (singlet if a == b else full)
        z[:, a[0] + b[0]] += w
    return z


def exchange_sector_weights(stats, kind, v0, n, l, t, n_orb=N_ORBITALS):
    """Same as ``sector_weights``, built from the exchange-operator trace."""
    l = np.atleast_1d(np.asarray(l, dtype=float))
    contact = v0 if kind == "contact" else 0.0
    if stats == "classical":
        return _classical(kind, v0, n, l, t)
    left, right = _mode_weights(l, t, n_orb)
    if n == 1:
        return np.stack([right.sum(axis=1), left.sum(axis=1)], axis=1)

    spin_tr, spin_swap = _spin_traces(kind, v0, t) if stats == "fermion-spin-half" else (1.0, 1.0)
    eta = 1.0 if stats == "boson0" else -1.0
    same = np.exp(-contact / t)
    modes = [left, right]
    z = np.zeros((l.size, 3))
    for a_side, b_side in itertools.product((0, 1), repeat=2):
        m = (a_side == 0) + (b_side == 0)
        fa, fb = modes[a_side], modes[b_side]
        direct = fa.sum(axis=1) * fb.sum(axis=1)
        exchange = (fa * fb).sum(axis=1) if a_side == b_side else 0.0
        factor = same if a_side == b_side else 1.0
        z[:, m] += 0.5 * factor * (direct * spin_tr + eta * exchange * spin_swap)
    return z


def engine_ds(stats, kind, v0, n, r, t, n_orb=N_ORBITALS, scan_points=SCAN_POINTS):
    """Entropy production from naive sums and a dense wall scan."""
    z = sector_weights(stats, kind, v0, n, r, t, n_orb)[0]
    p = z / z.sum()
    p_star = np.ones(n + 1)
    if n == 2:
        grid = np.linspace(0.0, 1.0, scan_points)[1:-1]
        z1 = sector_weights(stats, kind, v0, n, grid, t, n_orb)[:, 1]
        l_eq = grid[np.argmax(z1)]
        zs = sector_weights(stats, kind, v0, n, l_eq, t, n_orb)[0]
        p_star[1] = zs[1] / zs.sum()
    mask = p > 0
    return float(-np.sum(p[mask] * np.log(p[mask] / p_star[mask])))
