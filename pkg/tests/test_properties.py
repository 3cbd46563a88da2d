"""Property tests over generated instances (hypothesis)."""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from privquant import DesignProblem, Pmf, QuantizerSpec, kkt_check, solve
from privquant.baselines import smallest_level_noise, uniform_noise
from privquant.estimators import Estimator, dpi_gap
from privquant.info_theory import entropy, mi_objective, sum_pmf, sum_support

SETTINGS = settings(max_examples=150, deadline=None)


def simplex(n, allow_zero=True):
    low = 0.0 if allow_zero else 1e-3
    weights = st.lists(st.floats(low, 1.0), min_size=n, max_size=n)
    return weights.filter(lambda w: sum(w) > 1e-3).map(lambda w: np.asarray(w) / np.sum(w))


@st.composite
def instances(draw, max_levels=6, allow_zero=True):
    n = draw(st.integers(1, max_levels))
    spec = QuantizerSpec(draw(st.floats(-5, 5)), draw(st.floats(0.1, 3)), n)
    py = draw(simplex(n, allow_zero))
    pz = draw(simplex(n, allow_zero))
    return Pmf(spec.levels, py), Pmf(spec.levels, pz), spec


def enumerated_mi(pY, pZ):
    joint = {}
    for i, a in enumerate(pY.probs):
        for k, b in enumerate(pZ.probs):
            key = (i + k, i)
            joint[key] = joint.get(key, 0.0) + a * b
    return oracles.mi_from_joint(joint)


@SETTINGS
@given(instances())
def test_leakage_matches_enumeration(inst):
    pY, pZ, _ = inst
    assert mi_objective(pY, pZ) == pytest.approx(enumerated_mi(pY, pZ), abs=1e-10)


@SETTINGS
@given(instances())
def test_leakage_bounds(inst):
    pY, pZ, _ = inst
    mi = mi_objective(pY, pZ)
    assert -1e-12 <= mi <= min(entropy(pY), entropy(sum_pmf(pY, pZ))) + 1e-12


@SETTINGS
@given(instances(), st.floats(-50, 50), st.floats(0.01, 20))
def test_leakage_ignores_level_placement(inst, y1, step):
    pY, pZ, spec = inst
    moved = QuantizerSpec(y1, step, spec.num_levels).levels
    other = mi_objective(Pmf(moved, pY.probs), Pmf(moved, pZ.probs))
    assert other == pytest.approx(mi_objective(pY, pZ), abs=1e-12)


@SETTINGS
@given(instances())
def test_leakage_invariant_under_reversal(inst):
    pY, pZ, spec = inst
    rev = mi_objective(Pmf(spec.levels, pY.probs[::-1]), Pmf(spec.levels, pZ.probs[::-1]))
    assert rev == pytest.approx(mi_objective(pY, pZ), abs=1e-12)


@SETTINGS
@given(instances(), st.data())
def test_convex_along_segments(inst, data):
    pY, p, spec = inst
    q = data.draw(simplex(spec.num_levels))
    t = data.draw(st.floats(0, 1))
    mix = Pmf(spec.levels, t * p.probs + (1 - t) * q)
    chord = t * mi_objective(pY, p) + (1 - t) * mi_objective(pY, Pmf(spec.levels, q))
    assert mi_objective(pY, mix) <= chord + 1e-12


@SETTINGS
@given(instances())
def test_sum_pmf_is_normalised_on_its_alphabet(inst):
    pY, pZ, spec = inst
    pv = sum_pmf(pY, pZ)
    assert pv.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(pv.support, sum_support(spec.first_level, spec.step, spec.num_levels))
    assert pv.mean() == pytest.approx(pY.mean() + pZ.mean(), abs=1e-9 * (1 + abs(pv.mean())))


@SETTINGS
@given(instances(), st.data())
def test_processing_never_adds_information(inst, data):
    pY, pZ, spec = inst
    n = spec.num_levels
    vs = sum_support(spec.first_level, spec.step, n)
    hv = Estimator(vs, data.draw(st.lists(st.integers(0, 3), min_size=vs.size, max_size=vs.size)))
    hy = Estimator(spec.levels, data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    lhs, rhs = dpi_gap(pY, pZ, hv, hy)
    assert lhs <= rhs + 1e-12


@settings(max_examples=60, deadline=5000)
@given(instances(max_levels=5, allow_zero=False), st.floats(0, 1))
def test_solution_is_certified_and_beats_baselines(inst, frac):
    pY, _, spec = inst
    sq = spec.levels**2
    assume(spec.num_levels > 1 and np.ptp(sq) > 1e-6)
    eps = float(sq.min() + frac * np.ptp(sq))
    problem = DesignProblem(pY, spec, eps)
    design = solve(problem)
    assert design.distortion <= eps * (1 + 1e-9) + 1e-12
    assert kkt_check(problem, design) < 1e-6
    for base in (uniform_noise(spec), smallest_level_noise(spec)):
        if base.second_moment() <= eps:
            assert design.mi_bits <= mi_objective(pY, base) + 1e-6


@settings(max_examples=40, deadline=5000)
@given(instances(max_levels=4, allow_zero=False), st.floats(0, 1), st.floats(0, 1))
def test_larger_budget_never_leaks_more(inst, a, b):
    pY, _, spec = inst
    sq = spec.levels**2
    assume(spec.num_levels > 1 and np.ptp(sq) > 1e-6)
    lo, hi = sorted((a, b))
    small = solve(DesignProblem(pY, spec, float(sq.min() + lo * np.ptp(sq))))
    large = solve(DesignProblem(pY, spec, float(sq.min() + hi * np.ptp(sq))))
    assert large.mi_bits <= small.mi_bits + 1e-6
