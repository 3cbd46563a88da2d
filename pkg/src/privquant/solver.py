"""Minimum-leakage noise design for one quantized sensor.

For a fixed measurement PMF ``pY`` on the quantizer levels, find the noise
PMF ``pZ`` on the same levels that minimizes ``H[Y + Z] - H[Z]`` subject to
``E[Z^2] <= epsilon``. The objective is convex in ``pZ`` and the constraint
is linear, so a stationary point of the Lagrangian is a global optimum.

The inner solver is entropic mirror descent on the simplex. Its unit step
``pZ <- pZ * 2**(-grad)`` minimizes the linear upper bound of the concave
term ``H[V]`` plus the exact ``-H[Z]``, so it never increases the objective;
longer steps are tried first and kept only when they decrease it. The outer
loop bisects the multiplier of the distortion constraint.
"""

import itertools
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from .exceptions import ComplexityError, DomainError, InfeasibleDistortion, NotConverged
from .info_theory import LOG2E, _entropy_bits, _noise_gradient, _sum_probs
from .quantizer import Pmf, QuantizerSpec

LN2 = np.log(2.0)
_TINY = np.finfo(float).tiny
# relative slack when deciding that epsilon sits on the feasibility boundary
_BOUNDARY_RTOL = 1e-12
# when a bisection ends without a certificate, it is repeated with inner
# solves this much tighter so that their distortions resolve the multiplier
_INNER_MARGIN = 1e-3
_MAX_STEP = 1e8


@dataclass(frozen=True)
class SolverOptions:
    max_outer_iterations: int = 200
    max_inner_iterations: int = 20000
    objective_tolerance: float = 1e-9
    kkt_tolerance: float = 1e-6
    probability_floor: float = 1e-12
    # consecutive small-improvement iterations required before stopping
    patience: int = 10
    # stop bisecting once epsilon - E[Z^2] falls below this fraction of epsilon
    distortion_rtol: float = 1e-10

    def __post_init__(self):
        for name in (
            "max_outer_iterations",
            "max_inner_iterations",
            "objective_tolerance",
            "kkt_tolerance",
            "probability_floor",
            "patience",
            "distortion_rtol",
        ):
            if not getattr(self, name) > 0:
                raise DomainError(f"solver option {name} must be positive")


@dataclass(frozen=True)
class DesignProblem:
    """Measurement PMF on the quantizer levels plus an optional budget.

    ``epsilon=None`` (or ``inf``) means no distortion constraint.
    """

    pY: Pmf
    spec: QuantizerSpec
    epsilon: Optional[float] = None

    def __post_init__(self):
        lv = self.spec.levels
        if self.pY.support.shape != lv.shape or not np.allclose(
            self.pY.support, lv, rtol=1e-12, atol=1e-12
        ):
            raise DomainError("pY must be supported on the quantizer levels")
        eps = self.epsilon
        if eps is not None:
            eps = float(eps)
            if np.isnan(eps) or eps < 0:
                raise DomainError(f"epsilon must be >= 0, got {self.epsilon}")
            object.__setattr__(self, "epsilon", None if np.isinf(eps) else eps)

    @property
    def constrained(self):
        return self.epsilon is not None

    @property
    def feasibility_bound(self):
        return self.spec.min_square_level

    def noise_pmf(self, probs):
        return Pmf(self.spec.levels, probs)


@dataclass(frozen=True)
class NoiseDesign:
    pZ: Pmf
    mi_bits: float
    distortion: float
    lam: float
    kkt_residual: float
    iterations: int
    converged: bool


def _lagrangian(py, z, sq, lam):
    return _entropy_bits(_sum_probs(py, z)) - _entropy_bits(z) + lam * float(sq @ z)


def _stationarity(py, z, sq, lam, floor, active=None):
    """Spread of ``grad + lam * level^2`` over the support, and lower-bound
    violations off the support. ``active`` restricts the check to a face."""
    g = _noise_gradient(py, z, floor) + lam * sq
    idx = np.ones(z.size, bool) if active is None else active
    on = idx & (z > floor)
    if not on.any():
        return np.inf, np.nan
    hi, lo = g[on].max(), g[on].min()
    mu = 0.5 * (hi + lo)
    res = 0.5 * (hi - lo)
    off = idx & ~on
    if off.any():
        res = max(res, float(np.max(mu - g[off])))
    return float(res), float(mu)


def _exact_gradient(py, logz, sq, lam):
    # log-domain gradient so underflowed probabilities still get finite updates
    z = np.exp(logz)
    pv = _sum_probs(py, z)
    log_pv = np.log2(np.maximum(pv, _TINY))
    cross = np.correlate(log_pv + LOG2E, py, mode="valid")
    return -cross + logz * LOG2E + LOG2E + lam * sq


def _normalize_log(logz):
    return logz - logsumexp(logz)


def _inner_solve(py, sq, lam, logz, active, opts, target=None):
    """Minimize the Lagrangian at fixed ``lam`` over the face ``active``.

    Stops once the stationarity residual is below ``target`` (default
    ``opts.kkt_tolerance``); the returned flag reports the final tolerance.
    """
    # lift warm starts to the floor: a coordinate that underflowed at a large
    # multiplier would otherwise need thousands of steps to recover
    logz = np.where(active, np.maximum(logz, np.log(opts.probability_floor)), -np.inf)
    logz = _normalize_log(logz)
    z = np.exp(logz)
    f = _lagrangian(py, z, sq, lam)
    eta, streak = 1.0, 0
    target = opts.kkt_tolerance if target is None else target
    for it in range(1, opts.max_inner_iterations + 1):
        res, _ = _stationarity(py, z, sq, lam, opts.probability_floor, active)
        if streak >= opts.patience and res < target:
            return logz, it - 1, True
        g = np.where(active, _exact_gradient(py, logz, sq, lam), 0.0)
        cand = _normalize_log(np.where(active, logz - eta * LN2 * g, -np.inf))
        zc = np.exp(cand)
        fc = _lagrangian(py, zc, sq, lam)
        if eta > 1.0 and fc > f:
            eta = max(1.0, eta / 4)
            cand = _normalize_log(np.where(active, logz - LN2 * g, -np.inf))
            zc = np.exp(cand)
            fc = _lagrangian(py, zc, sq, lam)
        elif fc <= f:
            eta = min(eta * 1.5, _MAX_STEP)
        streak = streak + 1 if abs(f - fc) < opts.objective_tolerance else 0
        logz, z, f = cand, zc, fc
    res, _ = _stationarity(py, z, sq, lam, opts.probability_floor, active)
    return logz, opts.max_inner_iterations, bool(res < opts.kkt_tolerance)


def _tilted_start(sq, active, epsilon):
    """Maximum-entropy point ``p ~ 2**(-beta * level^2)`` with ``E[Z^2] <= epsilon``."""
    def logp(beta):
        return _normalize_log(np.where(active, -beta * LN2 * sq, -np.inf))

    def dist(beta):
        return float(sq @ np.exp(logp(beta)))

    if dist(0.0) <= epsilon:
        return logp(0.0)
    lo, hi = 0.0, 1.0 / max(float(np.ptp(sq[active])), _TINY)
    while dist(hi) > epsilon and hi < 1e300:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dist(mid) <= epsilon:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * hi:
            break
    return logp(hi)


def _face_multiplier(py, z, sq, face, bound, floor):
    """Smallest multiplier that makes the off-face levels satisfy stationarity."""
    g = _noise_gradient(py, z, floor)
    on = face & (z > floor)
    mu = 0.5 * (g[on].max() + g[on].min())
    off = ~face
    if not off.any():
        return 0.0
    need = (mu - g[off]) / (sq[off] - bound)
    return float(max(0.0, need.max()) * (1 + 1e-9))


def kkt_check(problem: DesignProblem, design: NoiseDesign, floor: float = 1e-12) -> float:
    """Largest violation of the first-order optimality conditions, in bits.

    Covers stationarity of ``H[V] - H[Z] + lam * (E[Z^2] - epsilon)`` on the
    simplex (equal partial derivatives where ``pZ > floor``, no smaller ones
    elsewhere), primal feasibility and complementary slackness.
    """
    py = problem.pY.probs
    z = design.pZ.probs
    sq = problem.spec.levels ** 2
    lam = float(design.lam)
    res, _ = _stationarity(py, z, sq, lam, floor)
    d = float(sq @ z)
    if problem.constrained:
        res = max(res, d - problem.epsilon, abs(lam * (problem.epsilon - d)))
    else:
        res = max(res, abs(lam))
    return float(res)


def _make_design(problem, z, lam, iterations, converged, floor):
    pz = problem.noise_pmf(z)
    py = problem.pY.probs
    mi = max(_entropy_bits(_sum_probs(py, z)) - _entropy_bits(z), 0.0)
    d = float(problem.spec.levels ** 2 @ z)
    design = NoiseDesign(pz, mi, d, float(lam), 0.0, int(iterations), bool(converged))
    return replace(design, kkt_residual=kkt_check(problem, design, floor))


def _check_feasible(problem):
    bound = problem.feasibility_bound
    if problem.constrained and problem.epsilon < bound:
        raise InfeasibleDistortion(problem.epsilon, bound)
    return bound


def solve(problem: DesignProblem, opts: Optional[SolverOptions] = None) -> NoiseDesign:
    """Find the leakage-minimizing noise PMF for ``problem``.

    Raises
    ------
    InfeasibleDistortion
        If ``epsilon`` is below ``min_j level_j**2``.
    NotConverged
        If the iteration caps are hit before the optimality certificate
        reaches ``opts.kkt_tolerance``; the best iterate is attached.
    """
    opts = opts or SolverOptions()
    bound = _check_feasible(problem)
    py = problem.pY.probs
    sq = problem.spec.levels ** 2
    n = sq.size
    floor = opts.probability_floor

    if n == 1:
        return _make_design(problem, np.ones(1), 0.0, 0, True, floor)

    eps = problem.epsilon
    total = 0

    if eps is not None and eps <= bound * (1 + _BOUNDARY_RTOL):
        # only the smallest-magnitude levels remain feasible
        face = sq <= bound * (1 + _BOUNDARY_RTOL)
        logz, it, ok = _inner_solve(py, sq, 0.0, np.zeros(n), face, opts)
        z = np.exp(logz)
        lam = _face_multiplier(py, z, sq, face, bound, floor)
        return _finish(problem, z, lam, it, ok, opts)

    everywhere = np.ones(n, bool)
    logz, it, ok = _inner_solve(py, sq, 0.0, np.zeros(n), everywhere, opts)
    total += it
    z = np.exp(logz)
    if eps is None or float(sq @ z) <= eps:
        return _finish(problem, z, 0.0, total, ok, opts)

    for target in (opts.kkt_tolerance, _INNER_MARGIN * opts.kkt_tolerance):
        logz, lam, it, ok = _bisect(py, sq, eps, opts, target)
        total += it
        design = _make_design(problem, np.exp(logz), lam, total, False, floor)
        if ok is None:
            raise NotConverged("could not find a multiplier satisfying the distortion budget", design)
        if ok and design.kkt_residual < opts.kkt_tolerance:
            break
    return _finish(problem, design.pZ.probs, design.lam, total, ok, opts)


def _bisect(py, sq, eps, opts, target):
    """Bisection on the multiplier until the budget is met with equality.

    Returns the feasible end of the final bracket as ``(logz, lam, iterations, ok)``;
    ``ok`` is None when no multiplier meets the budget.
    """
    # distortion at the inner optimum is nonincreasing in lam
    n = sq.size
    everywhere = np.ones(n, bool)
    total = 0
    lo = 0.0
    hi = 1.0 / max(float(np.ptp(sq)), _TINY)
    start = _tilted_start(sq, everywhere, eps)
    best = None
    outer = 0
    while outer < opts.max_outer_iterations:
        outer += 1
        logz_hi, it, ok_hi = _inner_solve(py, sq, hi, start, everywhere, opts, target)
        total += it
        if float(sq @ np.exp(logz_hi)) <= eps:
            best = (logz_hi, ok_hi)
            break
        lo, hi, start = hi, 2 * hi, logz_hi
    if best is None:
        return start, hi, total, None

    logz_hi, ok_hi = best
    while outer < opts.max_outer_iterations:
        d_hi = float(sq @ np.exp(logz_hi))
        if eps - d_hi <= opts.distortion_rtol * max(eps, 1.0) or hi - lo <= 1e-15 * hi:
            break
        outer += 1
        mid = 0.5 * (lo + hi)
        logz_mid, it, ok_mid = _inner_solve(py, sq, mid, logz_hi, everywhere, opts, target)
        total += it
        if float(sq @ np.exp(logz_mid)) <= eps:
            hi, logz_hi, ok_hi = mid, logz_mid, ok_mid
        else:
            lo = mid
    return logz_hi, hi, total, ok_hi


def _finish(problem, z, lam, iterations, inner_ok, opts):
    design = _make_design(problem, z, lam, iterations, False, opts.probability_floor)
    converged = inner_ok and design.kkt_residual < opts.kkt_tolerance
    design = replace(design, converged=converged)
    if not converged:
        raise NotConverged(
            f"KKT residual {design.kkt_residual:.3e} after {iterations} iterations", design
        )
    return design


def _compositions(total, parts):
    """All non-negative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]])
    bars = np.array(list(itertools.combinations(range(total + parts - 1), parts - 1)))
    padded = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), total + parts - 1)])
    return np.diff(padded, axis=1) - 1


def brute_force_solve(problem: DesignProblem, grid_resolution: int = 200) -> NoiseDesign:
    """Best feasible point of the simplex grid with spacing ``1/grid_resolution``.

    Exhaustive and slow; meant as a test oracle for :func:`solve`.
    """
    n = problem.spec.num_levels
    if n > 4:
        raise ComplexityError(f"brute force is limited to 4 levels, got {n}")
    if grid_resolution < 50:
        raise DomainError("grid_resolution must be at least 50")
    _check_feasible(problem)
    py = problem.pY.probs
    sq = problem.spec.levels ** 2
    grid = _compositions(int(grid_resolution), n) / grid_resolution

    pv = np.zeros((grid.shape[0], 2 * n - 1))
    for i in range(n):
        pv[:, i : i + n] += py[i] * grid

    def rows_entropy(p):
        logs = np.log2(p, where=p > 0, out=np.zeros_like(p))
        return -(p * logs).sum(axis=1)

    mi = rows_entropy(pv) - rows_entropy(grid)
    if problem.constrained:
        feasible = grid @ sq <= problem.epsilon + 1e-12 * max(1.0, problem.epsilon)
        mi = np.where(feasible, mi, np.inf)
    k = int(np.argmin(mi))
    return _make_design(problem, grid[k], 0.0, grid.shape[0], False, 1e-12)


def tradeoff_sweep(problem_base: DesignProblem, epsilons, opts: Optional[SolverOptions] = None):
    """Solve once per budget. ``None`` or ``inf`` entries are unconstrained."""
    keys = [np.inf if e is None else float(e) for e in epsilons]
    if any(b < a for a, b in zip(keys, keys[1:])):
        raise DomainError("epsilons must be sorted in ascending order")
    return [solve(replace(problem_base, epsilon=e), opts) for e in epsilons]
