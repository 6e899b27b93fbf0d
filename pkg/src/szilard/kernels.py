"""Hot kernels: log partition functions of a particle-in-a-box compartment.

A compartment of fractional length ``a`` has levels ``n**2 / a**2`` (units of
the undivided-box ground energy).  Every kernel works on an array of lengths
at fixed temperature and returns ``(log_z, n_used)`` where ``n_used`` is the
largest orbital index that entered the sum (``-1`` flags a blown cap).

Sums are truncated adaptively: a term is kept while its Boltzmann weight
relative to the leading term is at least ``exp(-log_cut)``.  With
``n_fixed > 0`` exactly ``n_fixed`` orbitals are used instead.

Two interchangeable implementations exist for each kernel: an ``@njit`` loop
and a vectorized numpy version.  ``SZILARD_NUMBA=0`` selects numpy.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import TruncationError

_CHUNK = 256


@njit
def _single_loop(lengths, t, log_cut, n_fixed, n_cap):
    out = np.empty(lengths.size)
    used = np.zeros(lengths.size, dtype=np.int64)
    for k in range(lengths.size):
        a = lengths[k]
        if a <= 0.0:
            out[k] = -np.inf
            continue
        beta = 1.0 / (a * a * t)
        acc = 0.0
        n = 1
        failed = False
        while True:
            x = (float(n) * n - 1.0) * beta
            if n_fixed > 0:
                if n > n_fixed:
                    break
            elif x > log_cut:
                break
            if n > n_cap:
                failed = True
                break
            acc += math.exp(-x)
            n += 1
        if failed:
            out[k] = np.nan
            used[k] = -1
        else:
            out[k] = -beta + math.log(acc)
            used[k] = n - 1
    return out, used


@njit
def _pair_loop(lengths, t, log_cut, n_fixed, n_cap):
    out = np.empty(lengths.size)
    used = np.zeros(lengths.size, dtype=np.int64)
    for k in range(lengths.size):
        a = lengths[k]
        if a <= 0.0:
            out[k] = -np.inf
            continue
        beta = 1.0 / (a * a * t)
        acc = 0.0
        jmax = 0
        failed = False
        if n_fixed > 0:
            for i in range(1, n_fixed):
                for j in range(i + 1, n_fixed + 1):
                    acc += math.exp(-(float(i) * i + float(j) * j - 5.0) * beta)
            jmax = n_fixed
        else:
            i = 1
            while (float(i) * i + float(i + 1) * (i + 1) - 5.0) * beta <= log_cut:
                j = i + 1
                while True:
                    x = (float(i) * i + float(j) * j - 5.0) * beta
                    if x > log_cut:
                        break
                    if j > n_cap:
                        failed = True
                        break
                    acc += math.exp(-x)
                    if j > jmax:
                        jmax = j
                    j += 1
                if failed:
                    break
                i += 1
        if failed:
            out[k] = np.nan
            used[k] = -1
        elif acc == 0.0:
            out[k] = -np.inf
            used[k] = jmax
        else:
            out[k] = -5.0 * beta + math.log(acc)
            used[k] = jmax
    return out, used


def _single_numpy(lengths, t, log_cut, n_fixed, n_cap):
    out = np.full(lengths.size, -np.inf)
    used = np.zeros(lengths.size, dtype=np.int64)
    ok = np.flatnonzero(lengths > 0.0)
    for start in range(0, ok.size, _CHUNK):
        idx = ok[start:start + _CHUNK]
        beta = 1.0 / (lengths[idx] ** 2 * t)
        if n_fixed > 0:
            nmax = n_fixed
        else:
            nmax = int(math.sqrt(1.0 + log_cut / beta.min())) + 2
            nmax = min(nmax, n_cap + 1)
        n = np.arange(1, nmax + 1, dtype=np.float64)
        x = (n * n - 1.0)[None, :] * beta[:, None]
        if n_fixed > 0:
            keep = np.ones_like(x, dtype=bool)
        else:
            keep = x <= log_cut
        count = keep.sum(axis=1)
        acc = np.where(keep, np.exp(-x), 0.0).sum(axis=1)
        with np.errstate(divide="ignore"):
            out[idx] = -beta + np.log(acc)
        used[idx] = count
        if n_fixed <= 0:
            blown = count > n_cap
            out[idx[blown]] = np.nan
            used[idx[blown]] = -1
    return out, used


def _pair_numpy(lengths, t, log_cut, n_fixed, n_cap):
    out = np.full(lengths.size, -np.inf)
    used = np.zeros(lengths.size, dtype=np.int64)
    ok = np.flatnonzero(lengths > 0.0)
    for start in range(0, ok.size, _CHUNK):
        idx = ok[start:start + _CHUNK]
        beta = 1.0 / (lengths[idx] ** 2 * t)
        if n_fixed > 0:
            nmax = n_fixed
        else:
            nmax = int(math.sqrt(4.0 + log_cut / beta.min())) + 2
            nmax = min(nmax, n_cap + 1)
        if nmax < 2:
            used[idx] = nmax
            continue
        i, j = np.triu_indices(nmax, k=1)
        i = i.astype(np.float64) + 1.0
        j = j.astype(np.float64) + 1.0
        x = (i * i + j * j - 5.0)[None, :] * beta[:, None]
        if n_fixed > 0:
            keep = np.ones_like(x, dtype=bool)
        else:
            keep = x <= log_cut
        acc = np.where(keep, np.exp(-x), 0.0).sum(axis=1)
        jmax = np.where(keep, j[None, :], 0.0).max(axis=1).astype(np.int64)
        with np.errstate(divide="ignore"):
            out[idx] = np.where(acc > 0.0, -5.0 * beta + np.log(np.where(acc > 0.0, acc, 1.0)), -np.inf)
        used[idx] = jmax
        if n_fixed <= 0:
            blown = jmax > n_cap
            out[idx[blown]] = np.nan
            used[idx[blown]] = -1
    return out, used


def _check(name, lengths, t, used, n_cap):
    if np.any(used < 0):
        bad = lengths[used < 0]
        raise TruncationError(
            f"{name}: cutoff not certified below cap n={n_cap} "
            f"(t={t!r}, compartment lengths {bad[:5].tolist()})"
        )


def _dispatch(jit_impl, np_impl, name, lengths, t, log_cut, n_fixed, n_cap, backend):
    lengths = np.ascontiguousarray(np.atleast_1d(lengths), dtype=np.float64)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    impl = jit_impl if backend == "numba" else np_impl
    out, used = impl(lengths, float(t), float(log_cut), int(n_fixed), int(n_cap))
    _check(name, lengths, t, used, n_cap)
    return out, used


def log_z_single(lengths, t, log_cut, n_fixed=0, n_cap=4000, backend=None):
    """log sum_n exp(-n**2 / (a**2 t)) for each compartment length ``a``."""
    return _dispatch(_single_loop, _single_numpy, "single-particle sum",
                     lengths, t, log_cut, n_fixed, n_cap, backend)


def log_z_pair(lengths, t, log_cut, n_fixed=0, n_cap=700, backend=None):
    """log sum_{i<j} exp(-(i**2 + j**2) / (a**2 t)) for each compartment length ``a``."""
    return _dispatch(_pair_loop, _pair_numpy, "pair sum",
                     lengths, t, log_cut, n_fixed, n_cap, backend)
