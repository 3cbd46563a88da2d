"""Reference noise PMFs to compare an optimal design against."""

import numpy as np
from scipy.optimize import brentq

from .quantizer import Pmf, QuantizerSpec


def uniform_noise(spec: QuantizerSpec) -> Pmf:
    n = spec.num_levels
    return Pmf(spec.levels, np.full(n, 1.0 / n))


def smallest_level_noise(spec: QuantizerSpec) -> Pmf:
    """Point mass on the level with the smallest magnitude (lowest index on ties)."""
    return Pmf.point_mass(spec.levels, int(np.argmin(spec.levels**2)))


def _geometric_probs(n, scale):
    center = (n - 1) / 2
    logw = -np.abs(np.arange(n) - center) / scale
    w = np.exp(logw - logw.max())
    return w / w.sum()


def discrete_laplace_noise(spec: QuantizerSpec, target_distortion: float) -> Pmf:
    """Two-sided geometric PMF centred on the median level.

    The decay scale is tuned so that ``E[Z^2]`` equals ``target_distortion``
    when that value is reachable; otherwise the closest reachable scale on a
    log grid is used.
    """
    n = spec.num_levels
    if n == 1:
        return Pmf(spec.levels, [1.0])
    sq = spec.levels**2

    def gap(log_scale):
        return float(sq @ _geometric_probs(n, np.exp(log_scale))) - target_distortion

    grid = np.linspace(np.log(1e-3), np.log(1e4 * n), 400)
    vals = np.array([gap(g) for g in grid])
    sign_change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0)[0]
    if sign_change.size:
        k = int(sign_change[0])
        log_scale = grid[k] if vals[k] == 0 else brentq(gap, grid[k], grid[k + 1], xtol=1e-14)
    else:
        log_scale = grid[int(np.argmin(np.abs(vals)))]
    return Pmf(spec.levels, _geometric_probs(n, np.exp(log_scale)))
