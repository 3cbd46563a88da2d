"""Deterministic adversary estimates built from ``V`` and from ``Y^Q``.

Post-processing cannot create information, so for any pair of lookup-table
estimators ``I[h_V(V); h_Y(Y^Q)] <= I[V; Y^Q]``. :func:`dpi_gap` evaluates
both sides exactly by enumerating the finite alphabets.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .info_theory import JointPmf, _check_pair, mutual_information, sum_support
from .quantizer import Pmf


@dataclass(frozen=True, eq=False)
class Estimator:
    """Lookup table from observation values to state estimates."""

    domain: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dom = np.asarray(self.domain, dtype=float).reshape(-1)
        val = np.asarray(self.values, dtype=float).reshape(-1)
        if dom.shape != val.shape:
            raise DomainError("domain and values must have the same length")
        order = np.argsort(dom, kind="stable")
        dom, val = dom[order], val[order]
        if np.any(np.diff(dom) == 0):
            raise DomainError("estimator domain has duplicate entries")
        object.__setattr__(self, "domain", dom)
        object.__setattr__(self, "values", val)

    @classmethod
    def from_function(cls, domain, fn):
        domain = np.asarray(domain, dtype=float)
        return cls(domain, [fn(x) for x in domain])

    @classmethod
    def identity(cls, domain):
        return cls(domain, domain)

    @classmethod
    def constant(cls, domain, value=0.0):
        return cls(domain, np.full(len(domain), float(value)))

    def lookup(self, xs):
        """Estimates for the observations ``xs``; every one must be in the domain."""
        xs = np.asarray(xs, dtype=float)
        scale = max(1.0, float(np.max(np.abs(self.domain))))
        pos = np.clip(np.searchsorted(self.domain, xs), 0, self.domain.size - 1)
        lower = np.clip(pos - 1, 0, None)
        nearest = np.where(
            np.abs(self.domain[lower] - xs) < np.abs(self.domain[pos] - xs), lower, pos
        )
        if np.any(np.abs(self.domain[nearest] - xs) > 1e-9 * scale):
            raise DomainError("estimator is not defined on the whole observation alphabet")
        return self.values[nearest]

    def __call__(self, x):
        out = self.lookup(x)
        return float(out) if np.ndim(out) == 0 else out


def _estimate_joint(py, pz, est_v, est_y):
    # rows: distinct values of h_V(V); columns: distinct values of h_Y(Y)
    n = py.size
    iy, iz = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    iy, iz = iy.ravel(), iz.ravel()
    w = py[iy] * pz[iz]
    a = est_v[iy + iz]
    b = est_y[iy]
    rows, ra = np.unique(a, return_inverse=True)
    cols, cb = np.unique(b, return_inverse=True)
    joint = np.zeros((rows.size, cols.size))
    np.add.at(joint, (ra, cb), w)
    return JointPmf(rows, cols, joint)


def dpi_gap(pY: Pmf, pZ: Pmf, hV: Estimator, hY: Estimator):
    """Return ``(I[h_V(V); h_Y(Y^Q)], I[V; Y^Q])`` in bits, both exact.

    Raises
    ------
    DomainError
        If either estimator misses part of its observation alphabet.
    """
    py, pz, y1, step = _check_pair(pY, pZ)
    v_support = sum_support(y1, step, py.size)
    est_v = hV.lookup(v_support)
    est_y = hY.lookup(pY.support)
    lhs = mutual_information(_estimate_joint(py, pz, est_v, est_y))
    # same enumeration with identity maps so equality is exact for identities
    rhs = mutual_information(_estimate_joint(py, pz, v_support, pY.support))
    return max(lhs, 0.0), max(rhs, 0.0)


def mean_estimator(pY: Pmf, pZ: Pmf) -> Estimator:
    """Posterior mean ``v -> E[Y^Q | V = v]``; the prior mean where ``p(v) = 0``."""
    py, pz, y1, step = _check_pair(pY, pZ)
    n = py.size
    levels = pY.support
    num = np.zeros(2 * n - 1)
    den = np.zeros(2 * n - 1)
    for i in range(n):
        num[i : i + n] += levels[i] * py[i] * pz
        den[i : i + n] += py[i] * pz
    prior = float(levels @ py)
    values = np.where(den > 0, num / np.where(den > 0, den, 1.0), prior)
    return Estimator(sum_support(y1, step, n), values)
