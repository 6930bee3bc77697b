"""Feasibility searches over output mode vectors.

:func:`find_tower_mode` looks for a mode ``c = sum_i nu_i a_i`` whose
single-mode tower ``<chi_k|(c^dag)^n c^n|chi_l> = 0`` holds for every pair
and order. Infeasibility is reported as graded evidence (restarts and the
smallest residual reached), never as proof.

:func:`conditional_search` builds adaptive protocols: detect a tower mode,
branch on the photon count, and recurse on the conditional states of the
remaining modes.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Hashable, Mapping, Sequence

import numpy as np
from scipy.optimize import least_squares

from .criteria import NonOrthogonalError, check_orthogonal
from .fock import DenseBasis, FockError, FockState, inner_product, tensor
from .optics import apply_unitary, extend_to_unitary

logger = logging.getLogger(__name__)

ACCEPT_TOL = 1e-10
REJECT_EVIDENCE = 1e-3
PRUNE_PROB = 1e-12
DISTINCT_FIDELITY = 0.99
ORTHOGONALITY_TOL = 1e-8

SOLUTION_FOUND = "solution_found"
NO_SOLUTION = "no_solution_evidence"


class TowerProblem:
    """Dense, vectorized tower residuals for one orthogonal state set.

    Residuals are ``Re`` and ``Im`` of ``<chi_k|(c^dag)^n c^n|chi_l>`` for
    ``k < l`` and ``n = 1..n_max``; derivatives are analytic.
    """

    def __init__(self, states: Sequence[FockState], signal_modes: Sequence[int] | None = None):
        if len({s.modes for s in states}) != 1:
            raise FockError("mode-count mismatch")
        self.modes = states[0].modes
        self.n_max = max(s.max_photons() for s in states)
        basis = DenseBasis(self.modes, max(s.cutoff for s in states))
        self.A = basis.annihilators()
        self.X = np.array([basis.vector(s) for s in states]).T  # (D, K)
        self.pairs = np.triu_indices(len(states), 1)
        if signal_modes is None:
            signal_modes = range(self.modes)
        mask = np.zeros(self.modes, dtype=bool)
        mask[list(signal_modes)] = True
        if not mask.any():
            raise ValueError("need at least one signal mode")
        self.signal_mask = mask

    @property
    def n_residuals(self) -> int:
        return 2 * self.n_max * len(self.pairs[0])

    def _powers(self, nu):
        c = np.tensordot(nu, self.A, axes=1)
        V = [self.X]
        for _ in range(self.n_max):
            V.append(c @ V[-1])
        return V

    def values(self, nu) -> np.ndarray:
        """Complex condition values, shape ``(n_max, n_pairs)``."""
        nu = np.asarray(nu, dtype=complex)
        V = self._powers(nu)
        k, l = self.pairs
        return np.array([(V[n].conj().T @ V[n])[k, l] for n in range(1, self.n_max + 1)])

    def objective(self, nu) -> float:
        return float(np.sum(np.abs(self.values(nu)) ** 2))

    def value_derivatives(self, nu):
        """Values and Wirtinger derivatives ``dg/dnu``, ``dg/dconj(nu)``."""
        nu = np.asarray(nu, dtype=complex)
        V = self._powers(nu)
        k, l = self.pairs
        vals, d_nu, d_conj = [], [], []
        for n in range(1, self.n_max + 1):
            Vn = V[n]
            W = n * np.einsum("iab,bk->iak", self.A, V[n - 1])
            vals.append((Vn.conj().T @ Vn)[k, l])
            d_nu.append(np.einsum("ak,ial->ikl", Vn.conj(), W)[:, k, l])
            d_conj.append(np.einsum("iak,al->ikl", W.conj(), Vn)[:, k, l])
        return np.array(vals), np.array(d_nu), np.array(d_conj)

    def residuals(self, nu) -> np.ndarray:
        g = self.values(nu).ravel()
        return np.concatenate([g.real, g.imag])

    def jacobian(self, nu) -> np.ndarray:
        """d(residuals)/d(Re nu, Im nu), shape ``(n_residuals, 2N)``."""
        _, d_nu, d_conj = self.value_derivatives(nu)
        # (n_max, N, P) -> (n_max * P, N)
        dn = np.moveaxis(d_nu, 1, 2).reshape(-1, self.modes)
        dc = np.moveaxis(d_conj, 1, 2).reshape(-1, self.modes)
        dx = dn + dc
        dy = 1j * (dn - dc)
        Jc = np.hstack([dx, dy])
        return np.vstack([Jc.real, Jc.imag])

    def gradient(self, nu) -> np.ndarray:
        """Gradient of :meth:`objective` with respect to ``(Re nu, Im nu)``."""
        return 2.0 * self.jacobian(nu).T @ self.residuals(nu)

    # -- parametrization: nu = z / |z_signal| ---------------------------------

    def _split(self, z):
        N = self.modes
        return z[:N] + 1j * z[N:]

    def project(self, z) -> np.ndarray:
        nu = self._split(z)
        return nu / np.linalg.norm(nu[self.signal_mask])

    def _proj_jac(self, z):
        N = self.modes
        mask2 = np.concatenate([self.signal_mask, self.signal_mask])
        s = np.linalg.norm(z[mask2])
        u = z / s
        us = np.where(mask2, u, 0.0)
        return (np.eye(2 * N) - np.outer(u, us)) / s

    def solve(self, z0, max_nfev: int = 2000):
        nr = self.n_residuals
        pad = max(0, 2 * self.modes - nr)

        def fun(z):
            r = self.residuals(self.project(z))
            return np.concatenate([r, np.zeros(pad)]) if pad else r

        def jac(z):
            J = self.jacobian(self.project(z)) @ self._proj_jac(z)
            return np.vstack([J, np.zeros((pad, J.shape[1]))]) if pad else J

        res = least_squares(
            fun, z0, jac=jac, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev
        )
        nu = self.project(res.x)
        grad = self._proj_jac(res.x).T @ self.gradient(nu)
        return nu, self.objective(nu), float(np.linalg.norm(grad))


@dataclass(frozen=True, eq=False)
class FeasibilityVerdict:
    status: str
    witness: np.ndarray | None
    residual: float
    restarts: int
    threshold: float
    best_point: np.ndarray | None = None
    gradient_norm: float = float("nan")
    solutions: tuple = ()

    @property
    def found(self) -> bool:
        return self.status == SOLUTION_FOUND


@dataclass(frozen=True, eq=False)
class OutcomeBranch:
    mode_vector: np.ndarray
    outcome: int
    probability_per_state: Mapping[Hashable, float]
    conditional_states: Mapping[Hashable, FockState]


def _structured_starts(N: int, signal: np.ndarray) -> list[np.ndarray]:
    starts = []
    for i in range(N):
        if signal[i]:
            v = np.zeros(N, dtype=complex)
            v[i] = 1.0
            starts.append(v)
    for i, j in itertools.combinations(range(N), 2):
        if not (signal[i] or signal[j]):
            continue
        for phase in (1, 1j, -1, -1j):
            v = np.zeros(N, dtype=complex)
            v[i] = 1 / math.sqrt(2)
            v[j] = phase / math.sqrt(2)
            starts.append(v)
    return starts


def _random_start(N: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return v / np.linalg.norm(v)


def _as_list(states) -> list[FockState]:
    states = list(states.values()) if isinstance(states, Mapping) else list(states)
    if not states:
        raise ValueError("need at least one state")
    return states


def tower_objective(states, nu) -> float:
    """Sum over pairs ``k < l`` and orders ``1..n_max`` of ``|<chi_k|(c^dag)^n c^n|chi_l>|^2``."""
    states = _as_list(states)
    nu = np.asarray(nu, dtype=complex).ravel()
    if nu.shape[0] != states[0].modes:
        raise FockError("mode vector length does not match the states")
    if len(states) < 2:
        return 0.0
    return TowerProblem(states).objective(nu)


def tower_gradient(states, nu) -> np.ndarray:
    """Analytic gradient of :func:`tower_objective` in ``(Re nu, Im nu)``."""
    states = _as_list(states)
    return TowerProblem(states).gradient(np.asarray(nu, dtype=complex).ravel())


def _search_tower(states, restarts, accept_tol, rng, signal_modes=None, max_solutions=None,
                  restrict=False):
    # ``restrict`` zeroes solution components outside the signal modes
    problem = TowerProblem(states, signal_modes)
    N = problem.modes
    starts = _structured_starts(N, problem.signal_mask)
    starts += [_random_start(N, rng) for _ in range(restarts)]
    best = (math.inf, None, math.nan)
    solutions: list[np.ndarray] = []
    for v in starts:
        v = v / np.linalg.norm(v[problem.signal_mask])
        nu, f, g = problem.solve(np.concatenate([v.real, v.imag]))
        if f < best[0]:
            best = (f, nu, g)
        if f <= accept_tol:
            unit = np.where(problem.signal_mask, nu, 0) if restrict else nu
            unit = unit / np.linalg.norm(unit)
            if all(abs(np.vdot(s, unit)) < DISTINCT_FIDELITY for s in solutions):
                solutions.append(unit)
                if max_solutions is not None and len(solutions) >= max_solutions:
                    break
    return best, solutions, len(starts)


def find_tower_mode(
    states,
    restarts: int = 100,
    accept_tol: float = ACCEPT_TOL,
    seed: int = 0,
    signal_modes: Sequence[int] | None = None,
) -> FeasibilityVerdict:
    """Multistart least-squares search for a mode satisfying the full tower.

    Starts are every standard basis vector, every two-mode uniform
    superposition with relative phase in {1, i, -1, -i}, and ``restarts``
    Gaussian random points. ``signal_modes`` restricts the normalization to a
    subset of modes, so that modes living only on auxiliary modes are not
    counted as solutions.
    """
    states = _as_list(states)
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    check_orthogonal(states)
    N = states[0].modes
    if len(states) < 2:
        e = np.zeros(N, dtype=complex)
        e[0] = 1.0
        return FeasibilityVerdict(SOLUTION_FOUND, e, 0.0, 0, accept_tol, e, 0.0, (e,))
    rng = np.random.default_rng(seed)
    (f, nu, g), solutions, nstarts = _search_tower(states, restarts, accept_tol, rng, signal_modes)
    best = nu / np.linalg.norm(nu)
    if f <= accept_tol:
        return FeasibilityVerdict(SOLUTION_FOUND, best, f, nstarts, accept_tol, nu, g, tuple(solutions))
    return FeasibilityVerdict(NO_SOLUTION, None, f, nstarts, accept_tol, nu, g)


def partial_dephase(states, nu, labels: Sequence[Hashable] | None = None) -> list[OutcomeBranch]:
    """Detect output mode ``nu`` and split every state by its photon count.

    The interferometer is :func:`optics.extend_to_unitary` of ``nu``, so the
    detected mode is output mode 0 and the conditional states live on the
    remaining ``N - 1`` output modes.
    """
    if isinstance(states, Mapping):
        labels, states = list(states.keys()), list(states.values())
    states = _as_list(states)
    labels = list(range(len(states))) if labels is None else list(labels)
    U = extend_to_unitary(nu)
    nu = U.row(0)
    slices: dict[int, dict[Hashable, dict]] = {}
    totals: dict[Hashable, float] = {}
    for lab, st in zip(labels, states):
        out = apply_unitary(U, st)
        totals[lab] = out.norm() ** 2
        for occ, amp in out.amplitudes.items():
            slices.setdefault(occ[0], {}).setdefault(lab, {})[occ[1:]] = amp
    branches = []
    for m in sorted(slices):
        probs, conds = {}, {}
        for lab in labels:
            amps = slices[m].get(lab, {})
            p = sum(abs(a) ** 2 for a in amps.values()) / totals[lab] if amps else 0.0
            probs[lab] = p
            if p > PRUNE_PROB:
                cut = max(sum(o) for o in amps)
                conds[lab] = FockState(len(nu) - 1, cut, amps).normalized()
        branches.append(OutcomeBranch(nu, m, probs, conds))
    return branches


def augment_with_ancilla(signal_states, aux: FockState) -> list[FockState]:
    return [tensor(s, aux) for s in _as_list(signal_states)]


# -- conditional dynamics -----------------------------------------------------


@dataclass(eq=False)
class ProtocolNode:
    """One round of an adaptive protocol.

    A leaf has no ``mode_vector``; ``identified`` is the single surviving
    label (or ``None`` if no candidate reaches this outcome).
    """

    candidates: list
    mode_vector: np.ndarray | None = None
    probabilities: dict = field(default_factory=dict)
    children: dict = field(default_factory=dict)
    identified: Hashable | None = None

    @property
    def is_leaf(self) -> bool:
        return self.mode_vector is None

    def depth(self) -> int:
        return 0 if self.is_leaf else 1 + max(c.depth() for c in self.children.values())

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            for m in sorted(self.children):
                yield from self.children[m].leaves()


@dataclass(eq=False)
class SearchResult:
    success: bool
    tree: ProtocolNode | None
    trace: list = field(default_factory=list)


def _pairwise_orthogonal(states: Sequence[FockState], tol: float) -> bool:
    return all(
        abs(inner_product(a, b)) <= tol for a, b in itertools.combinations(states, 2)
    )


def conditional_search(
    states,
    depth_budget: int | None = None,
    restarts: int = 20,
    seed: int = 0,
    labels: Sequence[Hashable] | None = None,
) -> SearchResult:
    """Depth-first search for an exact conditional-dynamics protocol.

    Every round may apply a fresh interferometer to the modes not yet
    measured. At each node up to ``restarts`` distinct tower solutions are
    tried in turn; a branch whose surviving conditional states are not
    orthogonal is a dead end. Tower solutions that leave every candidate in
    the zero-photon branch carry no information and are skipped.
    """
    if isinstance(states, Mapping):
        labels, states = list(states.keys()), list(states.values())
    states = _as_list(states)
    labels = list(range(len(states))) if labels is None else list(labels)
    if len(set(labels)) != len(labels):
        raise ValueError("labels must be unique")
    check_orthogonal(states)
    N = states[0].modes
    depth_budget = N if depth_budget is None else depth_budget
    if depth_budget > N:
        raise ValueError("depth budget cannot exceed the number of modes")
    rng = np.random.default_rng(seed)
    trace: list = []
    normed = {lab: s.normalized() for lab, s in zip(labels, states)}
    tree = _search_node(normed, depth_budget, restarts, rng, trace, ())
    return SearchResult(tree is not None, tree, trace)


def _search_node(states: dict, depth: int, restarts: int, rng, trace: list, path: tuple):
    labs = list(states)
    if len(labs) <= 1:
        return ProtocolNode(labs, identified=labs[0] if labs else None)
    vecs = list(states.values())
    N = vecs[0].modes
    if N == 0 or depth == 0:
        trace.append({"path": list(path), "reason": "no modes or depth left", "candidates": labs})
        return None
    if not _pairwise_orthogonal(vecs, ORTHOGONALITY_TOL):
        trace.append({"path": list(path), "reason": "conditional states not orthogonal", "candidates": labs})
        return None
    # modes no candidate occupies cannot carry information
    occupied = sorted({i for s in vecs for occ in s.amplitudes for i, n in enumerate(occ) if n})
    (best, _, _), solutions, _ = _search_tower(
        vecs, restarts, ACCEPT_TOL, rng, occupied, max_solutions=restarts, restrict=True
    )
    if not solutions:
        trace.append({
            "path": list(path), "reason": "no tower mode", "candidates": labs, "best_residual": best,
        })
        return None
    for idx, nu in enumerate(solutions):
        branches = partial_dephase(vecs, nu, labs)
        if len(branches) == 1 and branches[0].outcome == 0:
            continue
        children = {}
        probs = {}
        ok = True
        for br in branches:
            probs[br.outcome] = dict(br.probability_per_state)
            child = _search_node(
                dict(br.conditional_states), depth - 1, restarts, rng, trace,
                path + ((idx, br.outcome),),
            )
            if child is None:
                ok = False
                break
            children[br.outcome] = child
        if ok:
            return ProtocolNode(labs, branches[0].mode_vector, probs, children)
        logger.debug("backtracking at %s after solution %d", path, idx)
    trace.append({
        "path": list(path), "reason": "every tower solution leads to a dead end",
        "candidates": labs, "solutions_tried": len(solutions),
    })
    return None
