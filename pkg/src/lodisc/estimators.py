"""scikit-learn style wrappers around the functional API.

``X`` is always a collection of :class:`~lodisc.fock.FockState` objects: a
``{label: state}`` mapping, a list, or a parsed :class:`~lodisc.documents.StateSet`.
Fitted attributes carry a trailing underscore, and ``get_params`` /
``set_params`` / ``clone`` work as for any estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .criteria import CONDITION_TOL, fixed_array_check
from .estimation import DEFAULT_RESTARTS, dephase, min_error_probability, optimize_min_error
from .feasibility import ACCEPT_TOL, conditional_search, find_tower_mode, partial_dephase
from .validation import check_states, check_unitary


class FixedArrayChecker(BaseEstimator):
    """Exact-discrimination test for one fixed interferometer."""

    def __init__(self, unitary=None, tol: float = CONDITION_TOL):
        self.unitary = unitary
        self.tol = tol

    def fit(self, X, y=None):
        labels, states = check_states(X, min_states=2)
        U = check_unitary(self.unitary if self.unitary is not None else np.eye(states[0].modes),
                          states[0].modes)
        self.labels_ = labels
        self.verdict_ = fixed_array_check(states, U, self.tol)
        self.passed_ = self.verdict_.passed
        return self


class TowerModeSearch(BaseEstimator, TransformerMixin):
    """Find an output mode whose detection keeps the states distinguishable.

    After fitting, :meth:`transform` splits a state set by photon count in
    the found mode (see :func:`~lodisc.feasibility.partial_dephase`).
    """

    def __init__(self, restarts: int = 100, accept_tol: float = ACCEPT_TOL, seed: int = 0,
                 signal_modes=None):
        self.restarts = restarts
        self.accept_tol = accept_tol
        self.seed = seed
        self.signal_modes = signal_modes

    def fit(self, X, y=None):
        labels, states = check_states(X)
        self.labels_ = labels
        self.verdict_ = find_tower_mode(states, self.restarts, self.accept_tol, self.seed,
                                        self.signal_modes)
        self.found_ = self.verdict_.found
        self.witness_ = self.verdict_.witness
        self.residual_ = self.verdict_.residual
        return self

    def transform(self, X):
        check_is_fitted(self, "verdict_")
        if not self.found_:
            raise ValueError("no tower mode was found; nothing to detect")
        labels, states = check_states(X)
        return partial_dephase(states, self.witness_, labels)


class ConditionalProtocolSearch(BaseEstimator):
    def __init__(self, depth_budget=None, restarts: int = 20, seed: int = 0):
        self.depth_budget = depth_budget
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y=None):
        labels, states = check_states(X)
        result = conditional_search(states, self.depth_budget, self.restarts, self.seed, labels)
        self.success_ = result.success
        self.tree_ = result.tree
        self.trace_ = result.trace
        return self


class Dephaser(BaseEstimator, TransformerMixin):
    """Fixed interferometer followed by photon counting."""

    def __init__(self, unitary=None):
        self.unitary = unitary

    def fit(self, X, y=None):
        _, states = check_states(X)
        U = self.unitary if self.unitary is not None else np.eye(states[0].modes)
        self.unitary_ = check_unitary(U, states[0].modes)
        return self

    def transform(self, X):
        check_is_fitted(self, "unitary_")
        labels, states = check_states(X)
        return dephase(states, self.unitary_, labels)


class MinErrorInterferometer(BaseEstimator, TransformerMixin):
    """Interferometer minimizing the equal-prior estimation error.

    ``score`` returns the success probability ``1 - P_err`` so that larger is
    better, as scikit-learn expects.
    """

    def __init__(self, restarts: int = DEFAULT_RESTARTS, seed: int = 0, priors=None):
        self.restarts = restarts
        self.seed = seed
        self.priors = priors

    def fit(self, X, y=None):
        labels, states = check_states(X)
        res = optimize_min_error(states, self.restarts, self.seed, self.priors)
        self.labels_ = labels
        self.unitary_ = res.unitary
        self.error_ = res.error
        self.trace_ = res.trace
        return self

    def transform(self, X):
        check_is_fitted(self, "unitary_")
        labels, states = check_states(X)
        return dephase(states, self.unitary_, labels)

    def score(self, X, y=None):
        return 1.0 - min_error_probability(self.transform(X))
