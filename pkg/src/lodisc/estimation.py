"""Photon-counting statistics and minimum-error state estimation.

Detection in the Fock basis turns each output state into a classical
distribution over detection patterns. For equiprobable inputs the best
guess from a pattern has error probability

    P_err = 1 - (1/K) * sum_patterns max_k P(pattern | k).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy.linalg import logm
from scipy.optimize import minimize

from .fock import FockError, FockState, Occupation, occupations
from .optics import (
    PassiveUnitary,
    apply_unitary,
    beam_splitter_network,
    hermitian_from_params,
    mode_pairings,
    sector_matrix,
)

logger = logging.getLogger(__name__)

PROB_TOL = 1e-9
DEFAULT_RESTARTS = 200


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Detection-pattern probabilities for each labelled input state."""

    per_state: Mapping[Hashable, Mapping[Occupation, float]]
    priors: Mapping[Hashable, float] | None = None

    def __post_init__(self):
        if not self.per_state:
            raise ValueError("distribution set is empty")
        clean = {}
        for lab, dist in self.per_state.items():
            d = {tuple(o): (0.0 if p < 0 else float(p)) for o, p in dist.items() if p >= -1e-12}
            total = sum(d.values())
            if abs(total - 1.0) > PROB_TOL:
                raise ValueError(f"distribution for {lab!r} sums to {total}")
            clean[lab] = d
        object.__setattr__(self, "per_state", clean)
        if self.priors is None:
            K = len(clean)
            object.__setattr__(self, "priors", {lab: 1.0 / K for lab in clean})

    @property
    def labels(self) -> list:
        return list(self.per_state)

    def patterns(self) -> list[Occupation]:
        return sorted({o for d in self.per_state.values() for o in d})

    def overlap(self, k: Hashable, l: Hashable) -> float:
        """Shared probability mass ``sum_i min(P(i|k), P(i|l))``."""
        pk, pl = self.per_state[k], self.per_state[l]
        return sum(min(p, pl[o]) for o, p in pk.items() if o in pl)


def dephase(states, U: PassiveUnitary, labels: Sequence[Hashable] | None = None) -> OutcomeDistribution:
    """Pattern distribution of each state after ``U`` and photon counting."""
    if isinstance(states, Mapping):
        labels, states = list(states.keys()), list(states.values())
    states = list(states)
    labels = list(range(len(states))) if labels is None else list(labels)
    per_state = {}
    for lab, st in zip(labels, states):
        if st.modes != U.dim:
            raise FockError(f"unitary acts on {U.dim} modes, state has {st.modes}")
        out = apply_unitary(U, st)
        nrm = out.norm() ** 2
        per_state[lab] = {o: abs(a) ** 2 / nrm for o, a in out.amplitudes.items()}
    return OutcomeDistribution(per_state)


def min_error_probability(dist: OutcomeDistribution) -> float:
    """``1 - sum_i max_k prior_k P(i|k)``; uniform priors give the 1/K form."""
    if not dist.per_state:
        raise ValueError("distribution set is empty")
    best: dict[Occupation, float] = {}
    for lab, d in dist.per_state.items():
        w = dist.priors[lab]
        for o, p in d.items():
            if w * p > best.get(o, 0.0):
                best[o] = w * p
    return 1.0 - math.fsum(best.values())


class _DephasedObjective:
    """Vectorized ``min_error_probability(dephase(states, exp(-iH)))``."""

    def __init__(self, states: Sequence[FockState], priors: Sequence[float]):
        self.N = states[0].modes
        self.priors = np.asarray(priors, dtype=float)
        sectors = sorted({n for s in states for n in s.photon_numbers()})
        self.sectors = []
        for n in sectors:
            occs = occupations(self.N, n)
            index = {o: k for k, o in enumerate(occs)}
            X = np.zeros((len(occs), len(states)), dtype=complex)
            for k, s in enumerate(states):
                for o, a in s.amplitudes.items():
                    if sum(o) == n:
                        X[index[o], k] = a
            self.sectors.append((n, X))
        self.norms = np.array([s.norm() ** 2 for s in states])

    def from_unitary(self, U: PassiveUnitary) -> float:
        total = 0.0
        for n, X in self.sectors:
            P = np.abs(sector_matrix(U, n) @ X) ** 2 / self.norms
            total += np.sum(np.max(P * self.priors, axis=1))
        return 1.0 - total

    def __call__(self, params) -> float:
        return self.from_unitary(unitary_from_params(params, self.N))


def unitary_from_params(params, N: int) -> PassiveUnitary:
    w, V = np.linalg.eigh(hermitian_from_params(params, N))
    return PassiveUnitary((V * np.exp(-1j * w)) @ V.conj().T)


@dataclass(eq=False)
class MinErrorResult:
    unitary: PassiveUnitary
    error: float
    trace: list = field(default_factory=list)
    best_random: float = math.nan


def _generator_params(U: PassiveUnitary) -> np.ndarray:
    """Inverse of :func:`optics.hermitian_from_params` applied to ``i log U``."""
    H = 1j * logm(U.matrix)
    H = (H + H.conj().T) / 2
    N = U.dim
    iu = np.triu_indices(N, 1)
    return np.concatenate([np.diag(H).real, H[iu].real, H[iu].imag])


def _structured_starts(N: int) -> list[tuple[str, np.ndarray]]:
    starts = [("identity", np.zeros(N * N))]
    if N % 2 == 0 and N > 1:
        for pairs in mode_pairings(N):
            U = beam_splitter_network(N, pairs)
            starts.append((f"bs{pairs}", _generator_params(U)))
    return starts


def optimize_min_error(
    states,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    priors: Sequence[float] | None = None,
    maxiter: int = 500,
) -> MinErrorResult:
    """Multistart search over interferometers ``exp(-iH)`` for the lowest error.

    Starts are the identity, every balanced beam-splitter network on a
    perfect matching of modes (even ``N``), then ``restarts`` random
    Hermitian generators. Each start is refined by L-BFGS-B on
    finite-difference gradients; the objective is only piecewise smooth, so
    the attained value (not stationarity) is the result.
    ``best_random`` reports the best value reached from random starts alone.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if isinstance(states, Mapping):
        states = list(states.values())
    states = list(states)
    if not states:
        raise ValueError("need at least one state")
    N = states[0].modes
    K = len(states)
    priors = np.full(K, 1.0 / K) if priors is None else np.asarray(priors, dtype=float)
    objective = _DephasedObjective(states, priors)
    rng = np.random.default_rng(seed)
    starts = _structured_starts(N)
    starts += [(f"random{r}", rng.normal(scale=math.pi, size=N * N)) for r in range(restarts)]
    best_val, best_x = math.inf, None
    best_random = math.inf
    trace = []
    for name, x0 in starts:
        res = minimize(objective, x0, method="L-BFGS-B", options={"maxiter": maxiter})
        val = float(res.fun)
        trace.append({"start": name, "value": val, "nfev": int(res.nfev)})
        if name.startswith("random"):
            best_random = min(best_random, val)
        if val < best_val:
            best_val, best_x = val, res.x
    U = unitary_from_params(best_x, N)
    return MinErrorResult(U, best_val, trace, best_random)
