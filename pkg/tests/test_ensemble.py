import math

import numpy as np
import pytest
from scipy.special import logsumexp
from hypothesis import given, settings, strategies as st

from szilard import oracle
from szilard.ensemble import (
    Interaction, Statistics, Truncation, enumerate_states, log_z_sectors,
    occupancy_probabilities, partition_by_m, system_entropy, validate_model,
)
from szilard.errors import DomainError, TruncationError

B, FS, FH, CL = (Statistics.BOSON0, Statistics.FERMION_SPINLESS,
                 Statistics.FERMION_SPIN_HALF, Statistics.CLASSICAL)
NONE = Interaction()
T_LOW = 1e-3


def test_interaction_parse_round_trip():
    for text in ("none", "contact:-1.0", "spin:0.25"):
        assert str(Interaction.parse(text)) == text
    with pytest.raises(DomainError):
        Interaction.parse("magnetic:1")
    with pytest.raises(DomainError):
        Interaction.parse("spin:abc")


@pytest.mark.parametrize("stats, inter, n", [
    (B, Interaction("spin", 1.0), 2),
    (FS, Interaction("spin", -1.0), 2),
    (B, Interaction("contact", 1.0), 1),
    (B, NONE, 3),
])
def test_invalid_models(stats, inter, n):
    with pytest.raises(DomainError):
        validate_model(stats, inter, n)


def test_spin_half_six_fold_ground():
    table = enumerate_states(FH, NONE, 0.5, T_LOW)
    assert list(table.ground_degeneracy()) == [1, 4, 1]
    assert np.allclose(occupancy_probabilities(table), [1 / 6, 4 / 6, 1 / 6], atol=1e-12)


def test_spinless_unique_ground():
    table = enumerate_states(FS, NONE, 0.5, T_LOW)
    assert list(table.ground_degeneracy()) == [0, 1, 0]


def test_spinless_accidental_degeneracy():
    table = enumerate_states(FS, NONE, 1 / 3, T_LOW)
    assert list(table.ground_degeneracy()) == [1, 1, 0]
    assert table.ground_energy(0) == pytest.approx(11.25, rel=1e-12)
    assert table.ground_energy(1) == pytest.approx(11.25, rel=1e-12)
    ground = [s for s in table.states() if s.energy < 11.25 + 1e-9]
    assert {(s.m, s.left, s.right) for s in ground} == {(0, (), (1, 2)), (1, (1,), (1,))}


@pytest.mark.parametrize("stats, inter, expected", [
    (B, NONE, [1, 1, 1]),
    (FS, NONE, [0, 1, 0]),
    (FH, NONE, [1, 4, 1]),
    (FH, Interaction("spin", 1.0), [1, 1, 1]),
    (FH, Interaction("spin", -1.0), [0, 3, 0]),
])
def test_ground_degeneracy_at_midpoint(stats, inter, expected):
    assert list(enumerate_states(stats, inter, 0.5, T_LOW).ground_degeneracy()) == expected


def test_singlet_triplet_gap():
    v0 = 0.7
    table = enumerate_states(FH, Interaction("spin", v0), 0.5, 1.0)
    split = [s for s in table.states() if s.m == 1 and s.left == (1,) and s.right == (1,)]
    energies = {s.spin: s.energy for s in split}
    assert energies[1] - energies[0] == pytest.approx(v0, rel=1e-12)
    assert {s.spin: s.degeneracy for s in split} == {0: 1, 1: 3}


def test_bosons_equal_sector_weights():
    z = np.array([v for _, v in partition_by_m(enumerate_states(B, NONE, 0.5, T_LOW))])
    assert np.allclose(z - z[0], 0.0, atol=1e-12)


def test_single_atom_occupancies():
    assert np.allclose(occupancy_probabilities(enumerate_states(B, NONE, 0.5, 1.0, n=1)), [0.5, 0.5])
    p = occupancy_probabilities(enumerate_states(B, NONE, 0.3, T_LOW, n=1))
    assert p[0] == pytest.approx(1.0, abs=1e-12) and p[1] < 1e-12


def test_system_entropy_examples():
    assert system_entropy(enumerate_states(B, NONE, 0.3, T_LOW, n=1)) == pytest.approx(0.0, abs=1e-12)
    table = enumerate_states(B, NONE, 0.5, T_LOW)
    assert system_entropy(table) == pytest.approx(math.log(3.0), abs=1e-12)
    # brute-force Gibbs entropy over the expanded state list
    e = np.repeat(table.energy, table.degeneracy)
    w = np.exp(-(e - e.min()) / table.t)
    p = w / w.sum()
    assert system_entropy(table) == pytest.approx(-np.sum(p * np.log(p)), rel=1e-12)


def test_table_rejects_higher_temperature():
    table = enumerate_states(B, NONE, 0.4, 0.1)
    partition_by_m(table, 0.05)
    with pytest.raises(DomainError):
        partition_by_m(table, 1.0)


def test_table_rejects_boundary_wall():
    with pytest.raises(DomainError):
        enumerate_states(B, NONE, 0.0, 1.0)


def test_cap_exceeded():
    with pytest.raises(TruncationError):
        enumerate_states(B, NONE, 0.5, 1e4, truncation=Truncation(pair_cap=30))


def test_classical_configurational_weights():
    r, t, v0 = 0.3, 0.5, -0.4
    p = occupancy_probabilities(enumerate_states(CL, Interaction("contact", v0), r, t))
    w = np.array([(1 - r) ** 2 * math.exp(-v0 / t), 2 * r * (1 - r), r * r * math.exp(-v0 / t)])
    assert np.allclose(p, w / w.sum(), rtol=1e-13)


MODELS = [
    (CL, NONE, 1), (CL, Interaction("contact", 0.8), 2), (B, NONE, 1), (B, NONE, 2),
    (B, Interaction("contact", -0.6), 2), (FS, NONE, 2), (FS, Interaction("contact", 1.2), 2),
    (FH, NONE, 2), (FH, Interaction("spin", -1.0), 2), (FH, Interaction("spin", 0.5), 2),
    (FH, Interaction("contact", 0.3), 2),
]
IDS = [f"{s.value}-{i}-n{n}" for s, i, n in MODELS]


@pytest.mark.parametrize("stats, inter, n", MODELS, ids=IDS)
@pytest.mark.parametrize("l, t", [(0.5, 1e-3), (0.37, 0.2), (0.81, 3.0), (0.2, 40.0)])
def test_table_matches_kernels(stats, inter, n, l, t):
    from_table = np.array([v for _, v in partition_by_m(enumerate_states(stats, inter, l, t, n))])
    from_kernels = log_z_sectors(stats, inter, n, [l], t)[0]
    assert np.allclose(from_table, from_kernels, rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("stats, inter, n", MODELS, ids=IDS)
@given(l=st.floats(0.05, 0.95), t=st.floats(0.5, 10.0))
@settings(max_examples=15, deadline=None)
def test_matches_brute_force_oracle(stats, inter, n, l, t):
    fixed = Truncation(n_orbitals=oracle.N_ORBITALS)
    ours = log_z_sectors(stats, inter, n, [l], t, fixed)[0]
    ref = oracle.sector_weights(stats.value, inter.kind, inter.v0, n, l, t)[0]
    # the linear-space oracle underflows for strongly squeezed sectors
    ok = ref > 1e-250
    assert np.allclose(ours[ok], np.log(ref[ok]), rtol=1e-10, atol=1e-10)
    assert np.all(ours[~ok] < -570.0)


def test_oracle_constructions_agree():
    for stats in ("boson0", "fermion-spin-half"):
        for kind, v0 in (("none", 0.0), ("spin", -0.8), ("contact", 0.5)):
            if kind == "spin" and stats != "fermion-spin-half":
                continue
            a = oracle.sector_weights(stats, kind, v0, 2, [0.3, 0.6], 2.0)
            b = oracle.exchange_sector_weights(stats, kind, v0, 2, [0.3, 0.6], 2.0)
            assert np.allclose(a, b, rtol=1e-9)


@pytest.mark.parametrize("stats, inter, n", MODELS, ids=IDS)
@given(l=st.floats(0.02, 0.98), t=st.floats(1e-3, 20.0))
@settings(max_examples=20, deadline=None)
def test_reflection(stats, inter, n, l, t):
    logz = log_z_sectors(stats, inter, n, [l, 1.0 - l], t)
    p = np.exp(logz - logsumexp(logz, axis=1, keepdims=True))
    assert np.allclose(p[0], p[1][::-1], atol=1e-12)
