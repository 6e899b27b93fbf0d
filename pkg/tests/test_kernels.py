import math
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import logsumexp

from szilard import kernels
from szilard._accel import HAVE_NUMBA
from szilard.errors import TruncationError

LOG_CUT = -math.log(1e-12)
needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


def _naive_single(a, t, n):
    k = np.arange(1, n + 1)
    return float(logsumexp(-k * k / (a * a * t)))


def _naive_pair(a, t, n):
    k = np.arange(1, n + 1)
    e = (k[:, None] ** 2 + k[None, :] ** 2) / (a * a * t)
    return float(logsumexp(-e[np.triu_indices(n, 1)]))


@pytest.mark.parametrize("backend", ["numpy", pytest.param("numba", marks=needs_numba)])
@pytest.mark.parametrize("a, t", [(0.5, 1.0), (0.3, 10.0), (0.9, 0.05)])
def test_fixed_cutoff_matches_naive_sum(backend, a, t):
    single, _ = kernels.log_z_single([a], t, LOG_CUT, n_fixed=8, backend=backend)
    pair, _ = kernels.log_z_pair([a], t, LOG_CUT, n_fixed=8, backend=backend)
    assert single[0] == pytest.approx(_naive_single(a, t, 8), rel=1e-13)
    assert pair[0] == pytest.approx(_naive_pair(a, t, 8), rel=1e-13)


@pytest.mark.parametrize("a, t", [(0.5, 1.0), (0.2, 50.0), (0.7, 1e-3)])
def test_adaptive_cutoff_converged(a, t):
    single, used = kernels.log_z_single([a], t, LOG_CUT, backend="numpy")
    assert single[0] == pytest.approx(_naive_single(a, t, 3 * int(used[0]) + 5), rel=1e-11, abs=1e-12)
    pair, used = kernels.log_z_pair([a], t, LOG_CUT, backend="numpy")
    assert pair[0] == pytest.approx(_naive_pair(a, t, 2 * int(used[0]) + 5), rel=1e-11, abs=1e-12)


@needs_numba
def test_backends_agree():
    lengths = np.linspace(0.0, 1.0, 401)
    for t in (1e-3, 0.1, 1.0, 30.0):
        for fn in (kernels.log_z_single, kernels.log_z_pair):
            a, ua = fn(lengths, t, LOG_CUT, backend="numpy")
            b, ub = fn(lengths, t, LOG_CUT, backend="numba")
            assert np.array_equal(np.isneginf(a), np.isneginf(b))
            finite = np.isfinite(a)
            assert np.allclose(a[finite], b[finite], rtol=1e-13, atol=1e-13)
            assert np.array_equal(ua, ub)


def test_zero_length_compartment_is_empty():
    out, _ = kernels.log_z_single([0.0, 0.5], 1.0, LOG_CUT, backend="numpy")
    assert out[0] == -np.inf and np.isfinite(out[1])


def test_cap_raises():
    with pytest.raises(TruncationError):
        kernels.log_z_pair([1.0], 1e4, LOG_CUT, n_cap=20, backend="numpy")


@pytest.mark.parametrize("flag, expected", [("0", "numpy"), ("off", "numpy")])
def test_env_flag_selects_numpy(flag, expected):
    out = subprocess.run([sys.executable, "-c", "from szilard._accel import backend_name; print(backend_name())"],
                         env=dict(os.environ, SZILARD_NUMBA=flag), capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
