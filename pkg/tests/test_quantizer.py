import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from privquant import DomainError, ModelError, Pmf, QuantizerSpec, SensorModel
from privquant.quantizer import levels, quantize, quantized_pmf
from privquant import scenarios


def test_levels_small():
    assert levels(QuantizerSpec(0, 1, 3)).tolist() == [0, 1, 2]


def test_levels_single():
    assert levels(QuantizerSpec(-5, 2, 1)).tolist() == [-5]


def test_levels_sensor1_literal_parameters():
    y1 = np.pi**2 - 3 * np.sqrt(np.pi)
    step = 6 * np.sqrt(np.pi) / 11
    lv = levels(QuantizerSpec(y1, step, 11))
    assert lv.size == 11
    assert lv[0] == pytest.approx(4.552, abs=1e-3)
    assert lv[-1] == pytest.approx(14.220, abs=1e-3)
    assert np.all(np.diff(lv) > 0)


@pytest.mark.parametrize("bad", [dict(step=0), dict(step=-1), dict(num_levels=0), dict(num_levels=2.5)])
def test_spec_validation(bad):
    kw = dict(first_level=0.0, step=1.0, num_levels=3) | bad
    with pytest.raises(DomainError):
        QuantizerSpec(**kw)


@pytest.mark.parametrize("y, expected", [(0.49, 0), (0.5, 0), (0.500001, 1), (1.5, 1), (100, 2), (-100, 0)])
def test_quantize_cells(y, expected):
    assert quantize(y, QuantizerSpec(0, 1, 3)) == expected


def test_quantize_rejects_non_finite():
    with pytest.raises(DomainError):
        quantize(np.nan, QuantizerSpec(0, 1, 3))
    with pytest.raises(DomainError):
        quantize(np.inf, QuantizerSpec(0, 1, 3))


def test_quantize_vectorised_matches_scalar():
    spec = QuantizerSpec(-1.0, 0.25, 9)
    ys = np.linspace(-3, 3, 101)
    assert np.array_equal(quantize(ys, spec), [quantize(y, spec) for y in ys])


@settings(max_examples=300, deadline=None)
@given(
    y=st.floats(-1e6, 1e6),
    y1=st.floats(-100, 100),
    step=st.floats(1e-3, 10),
    n=st.integers(1, 40),
)
def test_quantize_lands_on_a_level(y, y1, step, n):
    spec = QuantizerSpec(y1, step, n)
    q = quantize(y, spec)
    assert q in spec.levels
    # nearest level unless saturated
    if spec.levels[0] + step / 2 < y <= spec.levels[-1] - step / 2:
        assert abs(q - y) <= step / 2 * (1 + 1e-9)


def test_pmf_validation():
    with pytest.raises(DomainError):
        Pmf([0, 1], [0.5, 0.6])
    with pytest.raises(DomainError):
        Pmf([1, 0], [0.5, 0.5])
    with pytest.raises(DomainError):
        Pmf([0, 0], [0.5, 0.5])
    with pytest.raises(DomainError):
        Pmf([0, 1], [1.5, -0.5])
    assert Pmf.normalized([0, 1], [1, 3]).probs.tolist() == [0.25, 0.75]


def test_point_mass_inside_first_cell():
    model = SensorModel.uniform(0.0, 0.1)
    p = quantized_pmf(model, QuantizerSpec(0, 1, 3))
    assert p.probs.tolist() == [1.0, 0.0, 0.0]
    assert p.support.tolist() == [0.0, 1.0, 2.0]


def test_sensor1_pmf_symmetric_on_symmetric_levels():
    b = scenarios.sensor1()
    p = quantized_pmf(b.model, b.spec)
    assert np.allclose(p.probs, p.probs[::-1], atol=1e-15)
    assert np.argmax(p.probs) == 5
    assert abs(p.probs.sum() - 1) < 1e-12


def test_sensor1_pmf_literal_step_is_not_symmetric():
    # with step 6 sigma / N the levels stop at pi^2 + 2.45 sigma, so the top bin
    # collects more tail mass than the bottom one
    b = scenarios.sensor1(literal_step=True)
    p = quantized_pmf(b.model, b.spec)
    assert p.probs[-1] > p.probs[0]
    assert p.probs[5] == pytest.approx(p.probs[6], abs=1e-15)
    assert p.probs[5] == p.probs.max()


def test_sensor2_pmf_edge_bins_absorb_tails():
    b = scenarios.sensor2()
    a = np.pi**2 / 40
    p = quantized_pmf(b.model, b.spec)
    inner = 1 / 11  # each interior cell has width 2a/11 inside the support
    assert np.allclose(p.probs[1:-1], inner, rtol=1e-9)
    # edge cells reach from the end of the support to the first interior edge
    lo = (b.spec.edges[0] - (np.pi**2 / 4 - a)) / (2 * a)
    assert p.probs[0] == pytest.approx(lo, rel=1e-12)
    assert p.probs.sum() == pytest.approx(1.0, abs=1e-12)


def test_improper_cdf_rejected():
    class Broken:
        def cdf(self, x):
            return np.full(np.shape(x), 0.5)

    with pytest.raises(ModelError):
        quantized_pmf(Broken(), QuantizerSpec(0, 1, 3))

    class Decreasing:
        def cdf(self, x):
            x = np.asarray(x, dtype=float)
            return np.where(np.isinf(x), (x > 0).astype(float), 0.5 - 0.1 * np.tanh(x))

    with pytest.raises(ModelError):
        quantized_pmf(Decreasing(), QuantizerSpec(0, 1, 3))


@settings(max_examples=200, deadline=None)
@given(
    mean=st.floats(-50, 50),
    var=st.floats(1e-3, 100),
    y1=st.floats(-60, 60),
    step=st.floats(1e-2, 5),
    n=st.integers(1, 30),
    gaussian=st.booleans(),
)
def test_quantized_pmf_is_a_distribution(mean, var, y1, step, n, gaussian):
    model = SensorModel.gaussian(mean, var) if gaussian else SensorModel.uniform(mean, np.sqrt(var))
    p = quantized_pmf(model, QuantizerSpec(y1, step, n))
    assert np.all(p.probs >= 0)
    assert abs(p.probs.sum() - 1) <= 1e-12


def test_monte_carlo_histogram_within_three_standard_errors():
    b = scenarios.sensor1()
    exact = quantized_pmf(b.model, b.spec).probs
    n = 10**6
    ys = b.model.sample(np.random.default_rng(7), size=n)
    counts = np.bincount(np.searchsorted(b.spec.edges, ys, side="left"), minlength=11)
    freq = counts / n
    se = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(freq - exact) <= 3 * se + 1e-12)
