"""Built-in two-sensor benchmark: X = (pi^2, pi^2/4), C = I.

Sensor 1 has Gaussian noise with variance pi and an 11-level quantizer
covering ``pi^2 +/- 3 sigma``; sensor 2 has uniform noise on ``(-a, a)``
with ``a = pi^2/40`` and an 11-level quantizer starting at ``9.09 a``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .distributions import SensorModel
from .quantizer import QuantizerSpec


@dataclass(frozen=True)
class BenchmarkSensor:
    name: str
    model: SensorModel
    spec: QuantizerSpec
    epsilons: Tuple[float, ...]
    reported_distortion: Optional[float] = None


def sensor1(literal_step=False) -> BenchmarkSensor:
    """Gaussian sensor; levels run from ``pi^2 - 3 sigma`` to ``pi^2 + 3 sigma``.

    The step is ``6 sigma / (N - 1)`` so the 11 levels are symmetric about
    the mean; this is the layout under which the unconstrained optimum has
    ``E[Z^2] = 105.03``. ``literal_step=True`` uses ``6 sigma / N`` instead,
    which leaves the top level at ``pi^2 + 2.45 sigma``.
    """
    n = 11
    sigma = np.sqrt(np.pi)
    step = 6 * sigma / (n if literal_step else n - 1)
    spec = QuantizerSpec(np.pi**2 - 3 * sigma, step, n)
    return BenchmarkSensor(
        "sensor1", SensorModel.gaussian(np.pi**2, np.pi), spec, (60.0, 40.0), 105.03
    )


def sensor2() -> BenchmarkSensor:
    n = 11
    a = np.pi**2 / 40
    spec = QuantizerSpec(9.09 * a, 2 * a / n, n)
    return BenchmarkSensor(
        "sensor2", SensorModel.uniform(np.pi**2 / 4, a), spec, (5.6, 5.1), 6.10
    )


def benchmark_sensors():
    return [sensor1(), sensor2()]
