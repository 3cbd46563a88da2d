"""Exact discrete information measures in bits.

The central quantity is the leakage ``I[V; Y] = H[V] - H[Z]`` of the sum
``V = Y + Z`` of a quantized measurement ``Y`` and independent noise ``Z``
that lives on the same equally spaced levels.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError
from .quantizer import Pmf

LOG2E = 1.0 / np.log(2.0)
_TINY = np.finfo(float).tiny


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Joint PMF of two discrete variables; rows index the first variable."""

    row_support: np.ndarray
    col_support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.row_support, dtype=float).reshape(-1)
        cols = np.asarray(self.col_support, dtype=float).reshape(-1)
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (rows.size, cols.size):
            raise DomainError(f"probs has shape {p.shape}, expected {(rows.size, cols.size)}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise DomainError("joint probabilities must be finite and non-negative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"joint probabilities sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "row_support", rows)
        object.__setattr__(self, "col_support", cols)
        object.__setattr__(self, "probs", p)

    def row_marginal(self):
        return Pmf(self.row_support, self.probs.sum(axis=1))

    def col_marginal(self):
        return Pmf(self.col_support, self.probs.sum(axis=0))


def _entropy_bits(p):
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def _probs(p):
    return p.probs if isinstance(p, Pmf) else np.asarray(p, dtype=float)


def entropy(p) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``.

    Accepts a :class:`Pmf` or a plain probability vector.
    """
    return max(_entropy_bits(_probs(p)), 0.0)


def joint_entropy(joint: JointPmf) -> float:
    return _entropy_bits(joint.probs)


def conditional_entropy(joint: JointPmf) -> float:
    """``H[col | row]`` computed directly from ``-sum p(x,y) log p(y|x)``."""
    p = joint.probs
    px = p.sum(axis=1, keepdims=True)
    mask = p > 0
    cond = np.divide(p, px, out=np.zeros_like(p), where=px > 0)
    return float(-(p[mask] * np.log2(cond[mask])).sum())


def mutual_information(joint: JointPmf) -> float:
    """``sum p(x,y) log2 [p(x,y) / (p(x) p(y))]`` over the positive entries."""
    p = joint.probs
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    rows, cols = np.nonzero(p > 0)
    pm = p[rows, cols]
    # differences of logs: the product of two tiny marginals can underflow
    terms = np.log2(pm) - np.log2(px[rows, 0]) - np.log2(py[0, cols])
    return float((pm * terms).sum())


def _check_pair(pY: Pmf, pZ: Pmf):
    if not (isinstance(pY, Pmf) and isinstance(pZ, Pmf)):
        raise DomainError("pY and pZ must be Pmf instances")
    if pY.support.shape != pZ.support.shape or not np.array_equal(pY.support, pZ.support):
        raise DomainError("pY and pZ must share the same support (the quantizer levels)")
    s = pY.support
    if s.size > 1:
        gaps = np.diff(s)
        if np.max(np.abs(gaps - gaps[0])) > 1e-9 * max(1.0, np.max(np.abs(s))):
            raise DomainError("support is not an equally spaced level set")
        step = float(gaps[0])
    else:
        step = 1.0
    return pY.probs, pZ.probs, float(s[0]), step


def sum_support(first_level, step, num_levels):
    """Alphabet ``2 y1 + j * step`` (j = 0..2N-2) of ``V = Y + Z``."""
    return 2 * first_level + step * np.arange(2 * num_levels - 1)


def _sum_probs(py, pz):
    # p^V_j = sum_k p^Y_{j+1-k} p^Z_k over the valid k range; identical to a full convolution
    return np.convolve(py, pz)


def sum_pmf(pY: Pmf, pZ: Pmf) -> Pmf:
    """PMF of ``V = Y + Z`` on its ``2N - 1`` point alphabet."""
    py, pz, y1, step = _check_pair(pY, pZ)
    pv = np.clip(_sum_probs(py, pz), 0.0, None)
    return Pmf(sum_support(y1, step, py.size), pv)


def mi_objective(pY: Pmf, pZ: Pmf) -> float:
    """Leakage ``I[Y + Z; Y] = H[Y + Z] - H[Z]`` in bits."""
    py, pz, _, _ = _check_pair(pY, pZ)
    return _entropy_bits(_sum_probs(py, pz)) - _entropy_bits(pz)


def joint_sum_measurement(pY: Pmf, pZ: Pmf) -> JointPmf:
    """Joint PMF of ``(V, Y)`` with ``p(v, y) = p^Y(y) p^Z(v - y)``, by enumeration."""
    py, pz, y1, step = _check_pair(pY, pZ)
    n = py.size
    joint = np.zeros((2 * n - 1, n))
    for i in range(n):
        for k in range(n):
            joint[i + k, i] += py[i] * pz[k]
    return JointPmf(sum_support(y1, step, n), pY.support, joint)


def mi_joint_direct(pY: Pmf, pZ: Pmf) -> float:
    """Leakage computed from the enumerated joint of ``(V, Y)``."""
    return max(mutual_information(joint_sum_measurement(pY, pZ)), 0.0)


def _noise_gradient(py, pz, floor=0.0):
    """Gradient of ``H[V] - H[Z]`` with respect to ``pz``, in bits.

    With ``floor > 0`` each entry below the floor gets the derivative it
    would have if that entry alone were raised to the floor; every other
    entry keeps its exact value. Lifting all small entries together would
    shift the sum PMF and bias the derivatives of the large ones. The
    ``log2 e`` terms from differentiating ``p log p`` are kept even though
    they cancel on the simplex tangent.
    """
    grad = _exact_noise_gradient(py, pz)
    for k in np.flatnonzero(pz < floor):
        lifted = pz.copy()
        lifted[k] = floor
        grad[k] = _exact_noise_gradient(py, lifted)[k]
    return grad


def _exact_noise_gradient(py, pz):
    pv = _sum_probs(py, pz)
    # p^V_j = 0 only receives zero p^Y weights unless some p^Z_k is exactly 0
    log_pv = np.log2(np.maximum(pv, _TINY))
    with np.errstate(divide="ignore"):
        log_pz = np.log2(pz)
    cross = np.correlate(log_pv + LOG2E, py, mode="valid")
    return -cross + log_pz + LOG2E


def mi_gradient(pY: Pmf, pZ: Pmf) -> np.ndarray:
    """Partial derivatives of the leakage with respect to each ``p^Z_k``.

    Only defined in the interior of the simplex.

    Raises
    ------
    DomainError
        If any noise probability is zero.
    """
    py, pz, _, _ = _check_pair(pY, pZ)
    if np.any(pz <= 0):
        raise DomainError("the gradient is unbounded where a noise probability is 0")
    return _noise_gradient(py, pz)


def decoupled_mi(pairs) -> float:
    """Total leakage of independent sensors: the sum of per-sensor values."""
    return float(sum(mi_objective(pY, pZ) for pY, pZ in pairs))


class ConvexityParts(NamedTuple):
    f_v: float
    f_z: float
    f_y: float
    f_i: float


def _xlog2x(a, b=None):
    # a * log2(b) with 0 log 0 = 0
    b = a if b is None else b
    return 0.0 if a == 0 else float(a * np.log2(b))


def convexity_parts(pY: Pmf, pZ: Pmf) -> ConvexityParts:
    """Split the leakage as ``H[Y] + f_v - f_z - f_y``.

    ``f_v`` is the V-entropy without its first and last terms; ``f_z`` and
    ``f_y`` remove the matching end contributions from ``H[Z]`` and ``H[Y]``.
    What remains, ``f_i``, is a sum of ``a log(a / (a + b + ...))`` terms and
    carries all of the dependence on ``pZ``. The identity is checked before
    returning.
    """
    py, pz, _, _ = _check_pair(pY, pZ)
    pv = _sum_probs(py, pz)
    f_v = _entropy_bits(pv[1:-1])
    a1, an = py[0] * pz[0], py[-1] * pz[-1]
    f_z = _entropy_bits(pz) + _xlog2x(a1, pz[0]) + _xlog2x(an, pz[-1])
    f_y = _entropy_bits(py) + _xlog2x(a1, py[0]) + _xlog2x(an, py[-1])
    if py.size == 1:
        # the first and last V-terms coincide; every term is 0 log 1 anyway
        f_z, f_y = _entropy_bits(pz), _entropy_bits(py)
    parts = ConvexityParts(f_v, f_z, f_y, f_v - f_z - f_y)
    gap = mi_objective(pY, pZ) - (_entropy_bits(py) + parts.f_i)
    if abs(gap) > 1e-9:
        raise ArithmeticError(f"decomposition identity violated by {gap:.3e} bits")
    return parts
