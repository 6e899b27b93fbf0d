"""Canonical ensembles of one or two particles in the divided box.

Two routes compute the same sector partition functions Z_m (m = number of
particles left of the wall):

* ``enumerate_states`` builds an explicit, certified ``StateTable``; the
  table answers occupancy and entropy queries.
* ``log_z_sectors`` composes the compartment kernels in ``kernels`` and is
  vectorized over wall positions; the engine uses it for wall scans.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from . import kernels
from .errors import DomainError, TruncationError

LOG3 = math.log(3.0)


class Statistics(str, enum.Enum):
    CLASSICAL = "classical"
    BOSON0 = "boson0"
    FERMION_SPINLESS = "fermion-spinless"
    FERMION_SPIN_HALF = "fermion-spin-half"


@dataclass(frozen=True)
class Interaction:
    """``none``; ``contact`` (v0 when both particles share a side); ``spin`` (v0 s1.s2)."""

    kind: str = "none"
    v0: float = 0.0

    KINDS = ("none", "contact", "spin")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"interaction kind must be one of {self.KINDS}, got {self.kind!r}")
        if self.kind == "none" and self.v0 != 0.0:
            raise DomainError("interaction 'none' takes no strength")
        if not math.isfinite(self.v0):
            raise DomainError(f"interaction strength must be finite, got {self.v0!r}")

    @classmethod
    def parse(cls, text):
        """Parse ``none``, ``contact:V`` or ``spin:V``."""
        text = text.strip()
        if text == "none":
            return cls()
        kind, sep, value = text.partition(":")
        if not sep or kind not in ("contact", "spin"):
            raise DomainError(f"interaction must be 'none', 'contact:V' or 'spin:V', got {text!r}")
        try:
            v0 = float(value)
        except ValueError:
            raise DomainError(f"bad interaction strength in {text!r}") from None
        return cls(kind, v0)

    def __str__(self):
        return "none" if self.kind == "none" else f"{self.kind}:{self.v0!r}"

    @property
    def contact(self):
        return self.v0 if self.kind == "contact" else 0.0

    def spin_shifts(self):
        """(singlet, triplet) energy shifts: (-3 v0 / 4, v0 / 4)."""
        if self.kind != "spin":
            return 0.0, 0.0
        return -0.75 * self.v0, 0.25 * self.v0


@dataclass(frozen=True)
class Truncation:
    """Spectrum cutoff: relative Boltzmann weight ``eps`` or a fixed orbital count."""

    eps: float = 1e-12
    n_orbitals: int | None = None
    single_cap: int = 4000
    pair_cap: int = 700

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise DomainError(f"truncation eps must lie in (0, 1), got {self.eps!r}")
        if self.n_orbitals is not None and self.n_orbitals < 1:
            raise DomainError(f"n_orbitals must be positive, got {self.n_orbitals!r}")

    @property
    def log_cut(self):
        return -math.log(self.eps)

    @property
    def n_fixed(self):
        return self.n_orbitals or 0


DEFAULT_TRUNCATION = Truncation()


def validate_model(stats, inter, n):
    stats = Statistics(stats)
    if n not in (1, 2):
        raise DomainError(f"particle number must be 1 or 2, got {n!r}")
    if n == 1 and inter.kind != "none":
        raise DomainError("interactions need two particles")
    if inter.kind == "spin" and stats is not Statistics.FERMION_SPIN_HALF:
        raise DomainError(f"spin-spin interaction requires {Statistics.FERMION_SPIN_HALF.value}, got {stats.value}")
    return stats


# ---------------------------------------------------------------------------
# explicit state tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ManyBodyState:
    m: int
    left: tuple
    right: tuple
    spin: int | None
    energy: float
    degeneracy: int


@dataclass(frozen=True)
class StateTable:
    """Enumerated states at wall position ``l``, sorted by energy within each m.

    ``orbitals`` columns are (left_1, left_2, right_1, right_2) with 0 for an
    empty slot; ``spin`` is -1 (no spin), 0 (singlet) or 1 (triplet).
    Classical tables hold one row per m with an effective free energy.
    """

    stats: Statistics
    interaction: Interaction
    n: int
    l: float
    t: float
    truncation: Truncation
    m: np.ndarray
    orbitals: np.ndarray
    spin: np.ndarray
    energy: np.ndarray
    degeneracy: np.ndarray
    n_max: tuple = (0, 0)
    discarded_weight: float = 0.0

    def __len__(self):
        return self.energy.size

    def sector(self, m):
        return self.m == m

    def ground_energy(self, m):
        sel = self.energy[self.sector(m)]
        if sel.size == 0:
            raise TruncationError(f"sector m={m} is empty (l={self.l!r}, t={self.t!r})")
        return float(sel[0])

    def states(self):
        for k in range(len(self)):
            o = self.orbitals[k]
            yield ManyBodyState(
                m=int(self.m[k]),
                left=tuple(int(i) for i in o[:2] if i),
                right=tuple(int(i) for i in o[2:] if i),
                spin=None if self.spin[k] < 0 else int(self.spin[k]),
                energy=float(self.energy[k]),
                degeneracy=int(self.degeneracy[k]),
            )

    def ground_degeneracy(self, rel_tol=1e-9):
        """Degeneracy-weighted count of ground states per m."""
        e0 = self.energy.min()
        tol = rel_tol * max(1.0, abs(e0))
        hit = self.energy - e0 <= tol
        return np.bincount(self.m[hit], weights=self.degeneracy[hit], minlength=self.n + 1).astype(int)


def _levels(a, count):
    k = np.arange(1, count + 1, dtype=np.float64)
    return k, k * k / (a * a)


def _side_count(a, t, trunc, spread, cap):
    if trunc.n_orbitals:
        return trunc.n_orbitals
    count = int(math.sqrt(1.0 + a * a * (t * trunc.log_cut + spread))) + 1
    if count > cap:
        raise TruncationError(
            f"cutoff needs {count} orbitals in a compartment of length {a!r} at t={t!r}, cap is {cap}"
        )
    return count


class _Rows:
    def __init__(self):
        self.cols = {k: [] for k in ("m", "orbitals", "spin", "energy", "degeneracy")}

    def add(self, m, orbitals, spin, energy, degeneracy):
        size = energy.size
        self.cols["m"].append(np.full(size, m, dtype=np.int64))
        self.cols["orbitals"].append(orbitals.astype(np.int64).reshape(size, 4))
        self.cols["spin"].append(np.full(size, spin, dtype=np.int64))
        self.cols["energy"].append(energy.astype(np.float64))
        self.cols["degeneracy"].append(np.full(size, degeneracy, dtype=np.int64))

    def arrays(self):
        return {k: np.concatenate(v) for k, v in self.cols.items()}


def _place(left=None, right=None, size=0):
    out = np.zeros((size, 4), dtype=np.int64)
    if left is not None:
        out[:, :left.shape[1]] = left
    if right is not None:
        out[:, 2:2 + right.shape[1]] = right
    return out


def _same_side(rows, m, k, e, stats, inter, on_left):
    """Both particles in one compartment with orbitals ``k`` and levels ``e``."""
    contact = inter.contact
    singlet, triplet = inter.spin_shifts()
    i, j = np.triu_indices(k.size, k=0)
    diag = i == j
    pairs = np.stack([k[i], k[j]], axis=1)
    energy = e[i] + e[j] + contact

    def emit(mask, spin, shift, deg):
        sub = pairs[mask]
        orbitals = _place(left=sub, size=sub.shape[0]) if on_left else _place(right=sub, size=sub.shape[0])
        rows.add(m, orbitals, spin, energy[mask] + shift, deg)

    if stats is Statistics.BOSON0:
        emit(np.ones_like(diag), -1, 0.0, 1)
    elif stats is Statistics.FERMION_SPINLESS:
        emit(~diag, -1, 0.0, 1)
    else:
        emit(diag, 0, singlet, 1)
        emit(~diag, 0, singlet, 1)
        emit(~diag, 1, triplet, 3)


def _split(rows, kl, el, kr, er, stats, inter):
    singlet, triplet = inter.spin_shifts()
    i, j = np.meshgrid(np.arange(kl.size), np.arange(kr.size), indexing="ij")
    i, j = i.ravel(), j.ravel()
    orbitals = _place(left=kl[i][:, None], right=kr[j][:, None], size=i.size)
    energy = el[i] + er[j]
    if stats is Statistics.FERMION_SPIN_HALF:
        rows.add(1, orbitals, 0, energy + singlet, 1)
        rows.add(1, orbitals, 1, energy + triplet, 3)
    else:
        rows.add(1, orbitals, -1, energy, 1)


def classical_log_weights(inter, n, l):
    """Configurational log-weights per m (kinetic factors cancel in every ratio)."""
    l = np.asarray(l, dtype=np.float64)
    with np.errstate(divide="ignore"):
        log_l, log_r = np.log(l), np.log1p(-l)
    if n == 1:
        return np.stack([log_r, log_l], axis=-1)
    return np.stack([2.0 * log_r, math.log(2.0) + log_l + log_r, 2.0 * log_l], axis=-1)


def enumerate_states(stats, inter, l, t, n=2, truncation=DEFAULT_TRUNCATION):
    """Certified state table for ``n`` particles with the wall at ``l``."""
    stats = validate_model(stats, inter, n)
    if not 0.0 < l < 1.0:
        raise DomainError(f"wall position must satisfy 0 < l < 1, got {l!r}")
    if not t > 0.0:
        raise DomainError(f"temperature must be positive, got {t!r}")

    if stats is Statistics.CLASSICAL:
        # effective free energy -t log(weight); contact enters as a same-side energy
        logw = classical_log_weights(inter, n, l)
        energy = -t * logw
        if n == 2:
            energy[0] += inter.contact
            energy[2] += inter.contact
        return StateTable(stats, inter, n, l, t, truncation,
                          m=np.arange(n + 1), orbitals=np.zeros((n + 1, 4), dtype=np.int64),
                          spin=np.full(n + 1, -1), energy=energy,
                          degeneracy=np.ones(n + 1, dtype=np.int64))

    spread = abs(inter.v0) if inter.kind == "spin" else 0.0
    cap = truncation.single_cap if n == 1 else truncation.pair_cap
    a_left, a_right = l, 1.0 - l
    kl, el = _levels(a_left, _side_count(a_left, t, truncation, spread, cap))
    kr, er = _levels(a_right, _side_count(a_right, t, truncation, spread, cap))

    rows = _Rows()
    if n == 1:
        rows.add(1, _place(left=kl[:, None], size=kl.size), -1, el, 1)
        rows.add(0, _place(right=kr[:, None], size=kr.size), -1, er, 1)
    else:
        _same_side(rows, 2, kl, el, stats, inter, on_left=True)
        _split(rows, kl, el, kr, er, stats, inter)
        _same_side(rows, 0, kr, er, stats, inter, on_left=False)
    cols = rows.arrays()

    discarded = 0.0
    if not truncation.n_orbitals:
        keep = np.zeros(cols["m"].size, dtype=bool)
        for m in range(n + 1):
            sel = cols["m"] == m
            if not sel.any():
                continue
            excitation = (cols["energy"] - cols["energy"][sel].min()) / t
            keep |= sel & (excitation <= truncation.log_cut)
            dropped = sel & ~keep
            if dropped.any():
                discarded = max(discarded, float(np.exp(-excitation[dropped].min())))
        cols = {k: v[keep] for k, v in cols.items()}

    order = np.lexsort((cols["energy"], cols["m"]))
    cols = {k: v[order] for k, v in cols.items()}
    return StateTable(stats, inter, n, l, t, truncation, n_max=(kl.size, kr.size),
                      discarded_weight=discarded, **cols)


# ---------------------------------------------------------------------------
# queries on a table
# ---------------------------------------------------------------------------


def _resolve_t(table, t):
    if t is None or t == table.t:
        return table.t
    if table.stats is Statistics.CLASSICAL:
        raise DomainError("classical tables carry t-dependent free energies; rebuild at the new t")
    if t > table.t:
        raise DomainError(f"table certified at t={table.t!r}, cannot be evaluated at higher t={t!r}")
    return t


def _log_weights(table, t):
    return -table.energy / t + np.log(table.degeneracy)


def partition_by_m(table, t=None):
    """[(m, log Z_m)] for m = 0..n, accumulated in the log domain."""
    t = _resolve_t(table, t)
    lw = _log_weights(table, t)
    out = []
    for m in range(table.n + 1):
        sel = table.sector(m)
        if not sel.any():
            raise TruncationError(f"sector m={m} is empty (l={table.l!r}, t={t!r})")
        out.append((m, float(logsumexp(lw[sel]))))
    return out


def log_occupancy(table, t=None):
    logz = np.array([z for _, z in partition_by_m(table, t)])
    return logz - logsumexp(logz)


def occupancy_probabilities(table, t=None):
    """p_m = Z_m / sum Z, indexed by m."""
    return np.exp(log_occupancy(table, t))


def system_entropy(table, t=None):
    """-sum over states of p ln p, a g-fold degenerate row counting g times."""
    t = _resolve_t(table, t)
    lw = -table.energy / t
    log_state = lw - logsumexp(lw, b=table.degeneracy)
    return float(-np.sum(table.degeneracy * np.exp(log_state) * log_state))


# ---------------------------------------------------------------------------
# vectorized sector partition functions
# ---------------------------------------------------------------------------


def log_spin_factors(inter, t):
    """(log singlet weight, log singlet+triplet weight) from the spin-spin shift."""
    singlet, triplet = inter.spin_shifts()
    log_s = -singlet / t
    log_mix = np.logaddexp(log_s, LOG3 - triplet / t)
    return log_s, float(log_mix)


def _same_side_log_z(stats, inter, a, t, trunc, backend):
    cut, fixed, cap = trunc.log_cut, trunc.n_fixed, trunc.pair_cap
    pair, _ = kernels.log_z_pair(a, t, cut, fixed, cap, backend)
    if stats is Statistics.FERMION_SPINLESS:
        logz = pair
    else:
        # sum_i x_i**2 is the single-particle sum at half the temperature
        diag, _ = kernels.log_z_single(a, 0.5 * t, cut, fixed, cap, backend)
        if stats is Statistics.BOSON0:
            logz = np.logaddexp(diag, pair)
        else:
            log_s, log_mix = log_spin_factors(inter, t)
            logz = np.logaddexp(diag + log_s, pair + log_mix)
    return logz - inter.contact / t


def log_z_sectors(stats, inter, n, l, t, truncation=DEFAULT_TRUNCATION, backend=None):
    """log Z_m for wall positions ``l`` (array), shape ``(len(l), n + 1)``.

    Positions 0 and 1 are allowed; sectors that would squeeze a particle into
    a zero-length compartment get -inf.
    """
    stats = validate_model(stats, inter, n)
    l = np.atleast_1d(np.asarray(l, dtype=np.float64))
    right = 1.0 - l
    if stats is Statistics.CLASSICAL:
        logz = classical_log_weights(inter, n, l)
        if n == 2:
            logz[:, 0] -= inter.contact / t
            logz[:, 2] -= inter.contact / t
        return logz

    cut, fixed = truncation.log_cut, truncation.n_fixed
    cap = truncation.single_cap if n == 1 else truncation.pair_cap
    zl, _ = kernels.log_z_single(l, t, cut, fixed, cap, backend)
    zr, _ = kernels.log_z_single(right, t, cut, fixed, cap, backend)
    if n == 1:
        return np.stack([zr, zl], axis=-1)
    split = zl + zr
    if stats is Statistics.FERMION_SPIN_HALF:
        split = split + log_spin_factors(inter, t)[1]
    return np.stack([
        _same_side_log_z(stats, inter, right, t, truncation, backend),
        split,
        _same_side_log_z(stats, inter, l, t, truncation, backend),
    ], axis=-1)
