"""Input checking shared by the estimators and the command line."""

from __future__ import annotations

from typing import Hashable, Mapping

import numpy as np

from .fock import FockError, FockState
from .optics import PassiveUnitary


def check_states(X, min_states: int = 1) -> tuple[list[Hashable], list[FockState]]:
    """Normalize a state collection into ``(labels, states)``.

    Accepts a mapping ``label -> FockState``, a sequence of states, or any
    object with ``labels`` and ``states`` attributes (a parsed document).
    """
    if hasattr(X, "labels") and hasattr(X, "states"):
        labels, states = list(X.labels), list(X.states)
    elif isinstance(X, Mapping):
        labels, states = list(X.keys()), list(X.values())
    elif isinstance(X, FockState):
        raise TypeError("expected a collection of states, got a single FockState")
    else:
        states = list(X)
        labels = list(range(len(states)))
    if len(states) < min_states:
        raise ValueError(f"need at least {min_states} state(s), got {len(states)}")
    for s in states:
        if not isinstance(s, FockState):
            raise TypeError(f"expected FockState, got {type(s).__name__}")
    if len({s.modes for s in states}) > 1:
        raise FockError("all states must have the same number of modes")
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be unique")
    return labels, states


def check_unitary(U, dim: int | None = None) -> PassiveUnitary:
    if not isinstance(U, PassiveUnitary):
        U = PassiveUnitary(np.asarray(U, dtype=complex))
    if dim is not None and U.dim != dim:
        raise FockError(f"unitary acts on {U.dim} modes, expected {dim}")
    return U


def check_mode_vector(nu, dim: int, normalize: bool = True) -> np.ndarray:
    nu = np.asarray(nu, dtype=complex).ravel()
    if nu.shape[0] != dim:
        raise FockError(f"mode vector has length {nu.shape[0]}, expected {dim}")
    nrm = np.linalg.norm(nu)
    if nrm <= 1e-10:
        raise ValueError("mode vector is zero")
    return nu / nrm if normalize else nu
