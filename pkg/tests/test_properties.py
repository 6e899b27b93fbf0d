"""Randomized invariants over every statistics/interaction combination."""
import numpy as np
from hypothesis import given, settings, strategies as st

from szilard.engine import entropy_production
from szilard.ensemble import Interaction
from szilard.verify import MODELS

models = st.sampled_from(MODELS)
positions = st.floats(0.03, 0.97)
temperatures = st.floats(-3.0, 1.0).map(lambda x: float(10.0 ** x))
scales = st.floats(0.2, 2.0)


def _scaled(inter, scale):
    return inter if inter.kind == "none" else Interaction(inter.kind, inter.v0 * scale)


@given(models, scales, positions, temperatures)
@settings(max_examples=60, deadline=None)
def test_normalized_and_bounded(model, scale, r, t):
    stats, inter, n = model
    point = entropy_production(stats, _scaled(inter, scale), r, t, n)
    assert abs(point.p.sum() - 1.0) <= 1e-12
    assert point.dS <= point.s_system + 1e-10
    assert np.all((point.p_star >= 0) & (point.p_star <= 1.0))
    assert point.p_star[0] == 1.0 and point.p_star[-1] == 1.0


@given(models, scales, positions, temperatures)
@settings(max_examples=40, deadline=None)
def test_reflection(model, scale, r, t):
    stats, inter, n = model
    inter = _scaled(inter, scale)
    a = entropy_production(stats, inter, r, t, n)
    b = entropy_production(stats, inter, 1.0 - r, t, n)
    assert abs(a.dS - b.dS) <= 1e-10
    assert np.allclose(a.p, b.p[::-1], atol=1e-12)


@given(models, positions, temperatures)
@settings(max_examples=30, deadline=None)
def test_work_is_t_times_entropy(model, r, t):
    stats, inter, n = model
    point = entropy_production(stats, inter, r, t, n)
    assert point.work == t * point.dS
