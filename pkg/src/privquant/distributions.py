"""Continuous sensor models ``Y_i = (CX)_i + W_i`` with zero-mean noise laws."""

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .exceptions import DomainError
from .quantizer import Pmf, QuantizerSpec, quantize_index


def as_generator(rng_state):
    """Accept a seed, ``None`` or a ``numpy.random.Generator``."""
    if isinstance(rng_state, np.random.Generator):
        return rng_state
    return np.random.default_rng(rng_state)


@dataclass(frozen=True)
class GaussianNoise:
    variance: float

    def __post_init__(self):
        if not (np.isfinite(self.variance) and self.variance > 0):
            raise DomainError(f"Gaussian variance must be > 0, got {self.variance}")

    @property
    def std(self):
        return float(np.sqrt(self.variance))

    def cdf(self, w):
        return ndtr(np.asarray(w, dtype=float) / self.std)

    def sample(self, rng, size=None):
        return rng.normal(0.0, self.std, size=size)


@dataclass(frozen=True)
class UniformNoise:
    """Uniform noise on ``(-half_width, half_width)``."""

    half_width: float

    def __post_init__(self):
        if not (np.isfinite(self.half_width) and self.half_width > 0):
            raise DomainError(f"uniform half width must be > 0, got {self.half_width}")

    @property
    def variance(self):
        return self.half_width**2 / 3

    def cdf(self, w):
        a = self.half_width
        return np.clip((np.asarray(w, dtype=float) + a) / (2 * a), 0.0, 1.0)

    def sample(self, rng, size=None):
        a = self.half_width
        return rng.uniform(-a, a, size=size)


@dataclass(frozen=True)
class SensorModel:
    """One sensor: deterministic component ``mean`` plus independent noise.

    Any ``noise_law`` exposing ``cdf(w)`` and ``sample(rng, size)`` for a
    zero-mean variable can be plugged in.
    """

    mean: float
    noise_law: object

    def __post_init__(self):
        if not np.isfinite(self.mean):
            raise DomainError(f"sensor mean must be finite, got {self.mean}")

    @classmethod
    def gaussian(cls, mean, variance):
        return cls(float(mean), GaussianNoise(float(variance)))

    @classmethod
    def uniform(cls, mean, half_width):
        return cls(float(mean), UniformNoise(float(half_width)))

    def cdf(self, x):
        out = self.noise_law.cdf(np.asarray(x, dtype=float) - self.mean)
        return float(out) if np.ndim(out) == 0 else out

    def sample(self, rng_state, size=None):
        rng = as_generator(rng_state)
        return self.mean + self.noise_law.sample(rng, size)


def cdf(model: SensorModel, x):
    return model.cdf(x)


def sample(model: SensorModel, rng_state, size=None):
    """Draw from ``model``; pass the same Generator to continue one stream."""
    return model.sample(rng_state, size)


def empirical_pmf(samples, spec: QuantizerSpec) -> Pmf:
    """Histogram of quantized samples over the quantizer levels."""
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.size == 0:
        raise DomainError("empirical_pmf needs at least one sample")
    counts = np.bincount(quantize_index(samples, spec), minlength=spec.num_levels)
    return Pmf(spec.levels, counts / samples.size)
