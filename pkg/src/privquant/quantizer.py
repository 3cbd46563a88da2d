"""Uniform finite-range quantizer and probability mass functions on its levels."""

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, ModelError

PMF_SUM_ATOL = 1e-12


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform quantizer with ``num_levels`` levels ``first_level + j * step``.

    Values at or below ``first_level + step/2`` map to the first level, values
    above the last interior edge saturate to the top level. Every cell is
    left-open, right-closed, so a value sitting exactly on an edge goes to the
    lower level.
    """

    first_level: float
    step: float
    num_levels: int

    def __post_init__(self):
        if not np.isfinite(self.first_level):
            raise DomainError(f"first_level must be finite, got {self.first_level}")
        if not (np.isfinite(self.step) and self.step > 0):
            raise DomainError(f"step must be a positive finite number, got {self.step}")
        if int(self.num_levels) != self.num_levels or self.num_levels < 1:
            raise DomainError(f"num_levels must be an integer >= 1, got {self.num_levels}")
        object.__setattr__(self, "num_levels", int(self.num_levels))
        object.__setattr__(self, "first_level", float(self.first_level))
        object.__setattr__(self, "step", float(self.step))

    @property
    def edges(self):
        """Interior cell boundaries ``level_j + step/2`` for j < N."""
        return self.levels[:-1] + self.step / 2

    @property
    def levels(self):
        return self.first_level + self.step * np.arange(self.num_levels)

    @property
    def min_square_level(self):
        """Smallest achievable E[Z^2] for noise supported on the levels."""
        return float(np.min(self.levels**2))


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function over a strictly increasing real support."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=float).reshape(-1)
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if support.shape != probs.shape:
            raise DomainError(
                f"support and probs differ in length ({support.size} vs {probs.size})"
            )
        if support.size == 0:
            raise DomainError("a Pmf needs at least one support point")
        if not np.all(np.isfinite(support)) or np.any(np.diff(support) <= 0):
            raise DomainError("support must be finite and strictly increasing")
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise DomainError("probabilities must be finite and non-negative")
        if abs(probs.sum() - 1.0) > PMF_SUM_ATOL:
            raise DomainError(f"probabilities sum to {probs.sum()!r}, not 1")
        support.flags.writeable = False
        probs.flags.writeable = False
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def normalized(cls, support, weights):
        """Build a Pmf from non-negative weights, rescaling them to sum to one."""
        w = np.asarray(weights, dtype=float)
        total = w.sum()
        if not np.isfinite(total) or total <= 0:
            raise DomainError("weights must have a positive finite sum")
        return cls(support, w / total)

    @classmethod
    def point_mass(cls, support, index):
        p = np.zeros(len(support))
        p[index] = 1.0
        return cls(support, p)

    def __len__(self):
        return self.support.size

    def __eq__(self, other):
        if not isinstance(other, Pmf):
            return NotImplemented
        return np.array_equal(self.support, other.support) and np.array_equal(
            self.probs, other.probs
        )

    def __repr__(self):
        return f"Pmf(support={self.support.tolist()}, probs={self.probs.tolist()})"

    def mean(self):
        return float(self.support @ self.probs)

    def second_moment(self):
        return float(self.support**2 @ self.probs)


def levels(spec: QuantizerSpec) -> np.ndarray:
    """Return the quantization levels ``[y1, y1 + step, ..., y1 + (N-1) step]``."""
    return spec.levels


def quantize_index(y, spec: QuantizerSpec):
    """Zero-based cell index of each value in ``y``."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("cannot quantize non-finite values")
    # side="left" puts values equal to an edge into the lower cell
    return np.searchsorted(spec.edges, y, side="left")


def quantize(y, spec: QuantizerSpec):
    """Map ``y`` (scalar or array) to its quantization level."""
    idx = quantize_index(y, spec)
    out = spec.levels[idx]
    return float(out) if np.ndim(out) == 0 else out


def quantized_pmf(model, spec: QuantizerSpec) -> Pmf:
    """Exact PMF of the quantized measurement from CDF differences over the cells.

    ``model`` is anything with a vectorised ``cdf`` method, normally a
    :class:`~privquant.distributions.SensorModel`.
    """
    bounds = np.concatenate(([-np.inf], spec.edges, [np.inf]))
    c = np.asarray(model.cdf(bounds), dtype=float)
    if not np.all(np.isfinite(c)):
        raise ModelError("CDF returned non-finite values")
    if c[0] != 0.0 or c[-1] != 1.0:
        raise ModelError(f"CDF limits are ({c[0]}, {c[-1]}), expected (0, 1)")
    probs = np.diff(c)
    if np.any(probs < 0):
        raise ModelError("CDF is not monotone nondecreasing")
    return Pmf(spec.levels, probs)
