"""scikit-learn compatible wrappers.

``UniformQuantizer`` maps each column to its quantizer levels.
``NoiseDesigner`` learns per-column measurement PMFs from data, solves one
noise design per column and, in ``transform``, returns quantized values
plus noise drawn from the designs, i.e. what a sensor would transmit.
"""

import numbers

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_random_state
from sklearn.utils.validation import check_is_fitted, validate_data

from .distributions import empirical_pmf
from .exceptions import DomainError
from .info_theory import decoupled_mi
from .quantizer import Pmf, QuantizerSpec, quantize, quantized_pmf
from .solver import DesignProblem, SolverOptions, solve


def _per_feature(value, n_features, name):
    if value is None or isinstance(value, numbers.Number):
        return [value] * n_features
    values = list(value)
    if len(values) != n_features:
        raise ValueError(f"{name} has {len(values)} entries but X has {n_features} columns")
    return values


def _build_specs(first_level, step, num_levels, n_features):
    return [
        QuantizerSpec(y1, d, n)
        for y1, d, n in zip(
            _per_feature(first_level, n_features, "first_level"),
            _per_feature(step, n_features, "step"),
            _per_feature(num_levels, n_features, "num_levels"),
        )
    ]


class UniformQuantizer(TransformerMixin, BaseEstimator):
    """Quantize every column with its own uniform finite-range quantizer.

    Parameters
    ----------
    first_level, step, num_levels : scalar or sequence
        Quantizer parameters; scalars apply to every column.
    """

    def __init__(self, first_level=0.0, step=1.0, num_levels=2):
        self.first_level = first_level
        self.step = step
        self.num_levels = num_levels

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=float)
        self.specs_ = _build_specs(self.first_level, self.step, self.num_levels, X.shape[1])
        return self

    def transform(self, X):
        check_is_fitted(self, "specs_")
        X = validate_data(self, X, dtype=float, reset=False)
        return np.column_stack([quantize(X[:, j], s) for j, s in enumerate(self.specs_)])


class NoiseDesigner(TransformerMixin, BaseEstimator):
    """Minimum-leakage additive noise for quantized sensor columns.

    Parameters
    ----------
    first_level, step, num_levels : scalar or sequence
        Quantizer of each column.
    epsilon : None, float or sequence
        Per-column bound on ``E[Z^2]``; ``None`` leaves a column unconstrained.
    max_outer_iter, max_inner_iter, tol, kkt_tol
        Forwarded to :class:`~privquant.solver.SolverOptions`.
    random_state : None, int or RandomState
        Seeds the noise drawn in :meth:`transform`.

    Attributes
    ----------
    specs_ : list of QuantizerSpec
    pmf_y_ : list of Pmf
        Measurement PMF per column used for the design.
    designs_ : list of NoiseDesign
    mi_bits_ : ndarray
        Leakage per column.
    total_mi_bits_ : float
        Leakage of all columns together (the per-column sum).
    """

    def __init__(
        self,
        first_level=0.0,
        step=1.0,
        num_levels=2,
        epsilon=None,
        max_outer_iter=200,
        max_inner_iter=20000,
        tol=1e-9,
        kkt_tol=1e-6,
        random_state=None,
    ):
        self.first_level = first_level
        self.step = step
        self.num_levels = num_levels
        self.epsilon = epsilon
        self.max_outer_iter = max_outer_iter
        self.max_inner_iter = max_inner_iter
        self.tol = tol
        self.kkt_tol = kkt_tol
        self.random_state = random_state

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        # transform draws fresh noise on every call
        tags.non_deterministic = True
        return tags

    def _options(self):
        return SolverOptions(
            max_outer_iterations=self.max_outer_iter,
            max_inner_iterations=self.max_inner_iter,
            objective_tolerance=self.tol,
            kkt_tolerance=self.kkt_tol,
        )

    def fit(self, X, y=None):
        """Estimate each column's quantized PMF from the rows of ``X`` and solve."""
        X = validate_data(self, X, dtype=float)
        specs = _build_specs(self.first_level, self.step, self.num_levels, X.shape[1])
        pmfs = [empirical_pmf(X[:, j], s) for j, s in enumerate(specs)]
        return self._fit_pmfs(pmfs, specs)

    def fit_models(self, models):
        """Design from exact sensor models (anything with a ``cdf``) instead of data."""
        specs = _build_specs(self.first_level, self.step, self.num_levels, len(models))
        return self._fit_pmfs([quantized_pmf(m, s) for m, s in zip(models, specs)], specs)

    def fit_pmfs(self, pmfs):
        """Design from known measurement PMFs, one per column."""
        specs = _build_specs(self.first_level, self.step, self.num_levels, len(pmfs))
        return self._fit_pmfs(list(pmfs), specs)

    def _fit_pmfs(self, pmfs, specs):
        opts = self._options()
        eps = _per_feature(self.epsilon, len(specs), "epsilon")
        designs = []
        for pmf, spec, e in zip(pmfs, specs, eps):
            if not isinstance(pmf, Pmf):
                raise DomainError("measurement PMFs must be Pmf instances")
            designs.append(solve(DesignProblem(pmf, spec, e), opts))
        self.n_features_in_ = len(specs)
        self.specs_ = specs
        self.pmf_y_ = pmfs
        self.designs_ = designs
        self.mi_bits_ = np.array([d.mi_bits for d in designs])
        self.total_mi_bits_ = decoupled_mi((p, d.pZ) for p, d in zip(pmfs, designs))
        return self

    @property
    def noise_pmfs_(self):
        check_is_fitted(self, "designs_")
        return [d.pZ for d in self.designs_]

    def sample_noise(self, n_samples, random_state=None):
        """Draw ``n_samples`` noise rows, one column per sensor."""
        check_is_fitted(self, "designs_")
        rng = check_random_state(self.random_state if random_state is None else random_state)
        cols = [rng.choice(d.pZ.support, size=n_samples, p=d.pZ.probs) for d in self.designs_]
        return np.column_stack(cols)

    def transform(self, X):
        """Quantize ``X`` and add freshly drawn design noise."""
        check_is_fitted(self, "designs_")
        X = validate_data(self, X, dtype=float, reset=False)
        yq = np.column_stack([quantize(X[:, j], s) for j, s in enumerate(self.specs_)])
        return yq + self.sample_noise(X.shape[0])
