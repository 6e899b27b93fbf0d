import math

import numpy as np
import pytest
from scipy.optimize import brentq

from szilard import oracle
from szilard.engine import (
    classical_binary_entropy, classical_engine, entropy_production, equilibrium_wall,
    fm_detuning, golden_section_max, low_t_fm_prediction, p_star, relative_entropy_term,
)
from szilard.ensemble import Interaction, Statistics, Truncation
from szilard.errors import DomainError, ProtocolError

B, FS, FH, CL = (Statistics.BOSON0, Statistics.FERMION_SPINLESS,
                 Statistics.FERMION_SPIN_HALF, Statistics.CLASSICAL)
NONE = Interaction()
LN2, LN3, LN6 = math.log(2.0), math.log(3.0), math.log(6.0)
T_LOW = 1e-3


@pytest.mark.parametrize("t", [1e-3, 0.1, 1.0, 10.0])
def test_single_atom_midpoint(t):
    point = entropy_production(B, NONE, 0.5, t, n=1)
    assert point.dS == pytest.approx(LN2, abs=1e-12)
    assert point.work == pytest.approx(t * LN2, rel=1e-12)
    assert list(point.p_star) == [1.0, 1.0]


@pytest.mark.parametrize("stats, inter, r, expected", [
    (B, NONE, 0.5, 2 / 3 * LN3),
    (FH, NONE, 0.5, LN6 / 3),
    (FS, NONE, 1 / 3, LN2),
    (FH, Interaction("spin", 1.0), 0.5, 2 / 3 * LN3),
    (FH, Interaction("spin", -1.0), 0.5, 0.0),
])
def test_low_temperature_limits(stats, inter, r, expected):
    assert entropy_production(stats, inter, r, T_LOW).dS == pytest.approx(expected, abs=1e-3)


def test_single_atom_wall_goes_to_end():
    for r in (0.1, 0.5, 0.8):
        assert equilibrium_wall(B, NONE, 1, r, 1.0, n=1) == 1.0
        assert equilibrium_wall(B, NONE, 0, r, 1.0, n=1) == 0.0


@pytest.mark.parametrize("stats, inter", [(B, NONE), (FS, NONE), (FH, NONE), (FH, Interaction("spin", -1.0)),
                                          (B, Interaction("contact", 1.0))])
def test_split_sector_wall_at_midpoint(stats, inter):
    assert equilibrium_wall(stats, inter, 1, 0.5, 0.3) == pytest.approx(0.5, abs=1e-8)


@pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
def test_wall_matches_dense_scan(t):
    # the dense 1e5-point scan of the brute-force sum peaks at 0.5 for all three t
    l_eq = equilibrium_wall(FS, NONE, 1, 1 / 3, t)
    grid = np.linspace(0.0, 1.0, 100001)[1:-1]
    scan = grid[np.argmax(oracle.sector_weights("fermion-spinless", "none", 0.0, 2, grid, t, 12)[:, 1])]
    assert scan == 0.5
    assert l_eq == pytest.approx(scan, abs=1e-5)


def test_golden_section():
    x = golden_section_max(lambda v: -(v - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)


def test_p_star_spin_half_midpoint():
    ps = p_star(FH, NONE, 0.5, T_LOW)
    assert ps[0] == 1.0 and ps[2] == 1.0
    assert ps[1] == pytest.approx(4 / 6, abs=1e-9)


def test_relative_entropy_protocol_error():
    with pytest.raises(ProtocolError):
        relative_entropy_term(np.log([0.5, 0.5]), [0.0, -np.inf])
    assert relative_entropy_term([-np.inf, 0.0], [0.0, 0.0]) == 0.0


@pytest.mark.parametrize("r, expected", [(0.5, LN2), (0.3, 0.6108643020548935)])
def test_classical_binary_entropy(r, expected):
    assert classical_binary_entropy(r) == pytest.approx(expected, rel=1e-12)
    assert classical_binary_entropy(1 - r) == pytest.approx(expected, rel=1e-12)


def test_classical_single_atom_is_binary_entropy():
    for t in (1e-3, 1.0, 10.0):
        for r in (0.2, 0.45):
            assert classical_engine(NONE, r, t, n=1).dS == pytest.approx(classical_binary_entropy(r), abs=1e-12)


def test_classical_contact_limits():
    attractive = [classical_engine(Interaction("contact", -1.0), 0.5, t).dS for t in (0.01, 0.1, 1.0)]
    assert all(v > LN2 for v in attractive)
    assert attractive[0] == pytest.approx(LN2, abs=1e-3)
    repulsive = classical_engine(Interaction("contact", 1.0), 0.5, 0.01)
    assert repulsive.p[1] == pytest.approx(1.0, abs=1e-12)
    assert repulsive.dS == pytest.approx(0.0, abs=1e-12)


def test_low_t_prediction_examples():
    # exactly degenerate: Boltzmann weights 1 : 3
    pred = low_t_fm_prediction(0.5, -1.0, 1e-3)
    assert pred.delta_e == pytest.approx(-1.0)
    assert pred.p0 < 1e-12
    # choose r where the detuning equals t ln 3
    t = 0.05
    r_half = brentq(lambda r: fm_detuning(r, -1.0) - t * LN3, 0.4, 0.49, xtol=1e-15)
    half = low_t_fm_prediction(r_half, -1.0, t)
    assert half.p0 == pytest.approx(0.5, abs=1e-12) and half.dS == pytest.approx(LN2, abs=1e-12)
    r0 = brentq(lambda r: fm_detuning(r, -1.0), 0.4, 0.49, xtol=1e-15)
    deg = low_t_fm_prediction(r0, -1.0, t)
    assert deg.dS == pytest.approx(-0.25 * math.log(0.25) - 0.75 * math.log(0.75), abs=1e-12)
    assert low_t_fm_prediction(0.3, -1.0, 1e-3).dS == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        low_t_fm_prediction(0.45, 1.0, 0.1)


@pytest.mark.parametrize("stats, inter, r, n", [
    (B, NONE, 0.3, 1), (B, NONE, 0.45, 2), (FS, NONE, 0.5, 2), (FS, NONE, 0.4, 2),
    (FH, NONE, 0.4, 2), (FH, Interaction("spin", -1.0), 0.5, 2), (B, Interaction("contact", 1.0), 0.5, 2),
])
def test_third_law(stats, inter, r, n):
    low = entropy_production(stats, inter, r, 1e-3, n).dS
    mid = entropy_production(stats, inter, r, 1e-2, n).dS
    assert low < 1e-2
    # both may underflow to exactly zero
    assert low < mid or (low == mid == 0.0) or low <= 1e-300


@pytest.mark.parametrize("r, t", [(0.0, 1.0), (1.0, 1.0), (0.5, 0.0), (0.5, -1.0)])
def test_domain_errors(r, t):
    with pytest.raises(DomainError):
        entropy_production(B, NONE, r, t)


def test_bound_and_normalization():
    for stats, inter in [(B, NONE), (FH, Interaction("spin", 0.7)), (CL, Interaction("contact", -0.5))]:
        for r, t in [(0.3, 0.05), (0.55, 1.0), (0.7, 8.0)]:
            point = entropy_production(stats, inter, r, t)
            assert point.p.sum() == pytest.approx(1.0, abs=1e-12)
            assert point.dS <= point.s_system + 1e-10


def test_matches_oracle_at_fixed_cutoff():
    fixed = Truncation(n_orbitals=oracle.N_ORBITALS)
    for stats, inter in [(B, NONE), (FS, Interaction("contact", 0.5)), (FH, Interaction("spin", -1.0))]:
        ours = entropy_production(stats, inter, 0.42, 2.0, truncation=fixed).dS
        ref = oracle.engine_ds(stats.value, inter.kind, inter.v0, 2, 0.42, 2.0)
        assert ours == pytest.approx(ref, abs=1e-8)


def test_record_columns():
    rec = entropy_production(B, NONE, 0.4, 1.0).record()
    assert list(rec) == ["r", "t", "dS", "work", "s_system", "p0", "p1", "p2",
                         "p_star0", "p_star1", "p_star2", "l_eq0", "l_eq1", "l_eq2"]


@pytest.mark.parametrize("r, gap", [(0.45, 0.0071), (0.3, 0.1259)])
def test_single_atom_finite_size_gap_at_t10(r, gap):
    # plain summation of both compartments; the classical plateau is not reached yet at t = 10
    n = np.arange(1, 5000)
    zl, zr = np.exp(-n * n / (r * r * 10.0)).sum(), np.exp(-n * n / ((1 - r) ** 2 * 10.0)).sum()
    p = zl / (zl + zr)
    direct = -p * math.log(p) - (1 - p) * math.log(1 - p)
    ds = entropy_production(B, NONE, r, 10.0, n=1).dS
    assert ds == pytest.approx(direct, abs=1e-12)
    assert abs(ds - classical_binary_entropy(r)) == pytest.approx(gap, abs=1e-4)
