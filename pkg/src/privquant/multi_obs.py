"""Repeated observations ``Y(t) = CX + W(t)`` stacked over a window of M steps."""

from dataclasses import dataclass

import numpy as np

from .distributions import SensorModel, as_generator
from .exceptions import DomainError
from .info_theory import JointPmf, _check_pair, mi_objective, mutual_information, sum_support
from .quantizer import Pmf, QuantizerSpec, quantize_index


@dataclass(frozen=True)
class StackedModel:
    base_pY: Pmf
    base_pZ: Pmf
    horizon: int

    def __post_init__(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise DomainError(f"horizon must be an integer >= 1, got {self.horizon}")
        _check_pair(self.base_pY, self.base_pZ)


def stacked_mi(model: StackedModel) -> float:
    """Leakage of the stacked window with i.i.d. noise: ``M`` times one step.

    Holds because the stacked measurements and noises are all mutually
    independent, so the leakage decouples across time steps exactly as it
    does across sensors.
    """
    return model.horizon * mi_objective(model.base_pY, model.base_pZ)


def simulate_stream(model: SensorModel, spec: QuantizerSpec, design, steps: int, rng_state) -> float:
    """Plug-in estimate of ``I[V; Y^Q]`` from a simulated stream of ``steps`` samples.

    Each step draws a measurement, quantizes it, adds noise drawn from
    ``design.pZ`` (a :class:`~privquant.solver.NoiseDesign` or a
    :class:`Pmf`) and records the pair of level indices.
    """
    if int(steps) != steps or steps < 1:
        raise DomainError(f"steps must be a positive integer, got {steps}")
    pz = getattr(design, "pZ", design)
    if pz.support.size != spec.num_levels or not np.allclose(pz.support, spec.levels):
        raise DomainError("noise PMF must live on the quantizer levels")
    rng = as_generator(rng_state)
    n = spec.num_levels
    iy = quantize_index(model.sample(rng, size=steps), spec)
    iz = rng.choice(n, size=steps, p=pz.probs)
    counts = np.zeros((2 * n - 1, n))
    np.add.at(counts, (iy + iz, iy), 1.0)
    joint = JointPmf(sum_support(spec.first_level, spec.step, n), spec.levels, counts / steps)
    return max(mutual_information(joint), 0.0)
