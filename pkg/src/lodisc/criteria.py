"""Exact-distinguishability conditions for linear optics with photon counting.

For output mode operators ``c_j = sum_i nu_i a_i`` the conditions are matrix
elements between pairs of input states that must vanish for every ``k != l``:

* number-ordered products ``<chi_k| c_j^dag c_j c_j'^dag c_j' ... |chi_l>``,
* normally ordered products ``<chi_k| c_j^dag c_j'^dag ... c_j c_j' ... |chi_l>``,
* the single-mode tower ``<chi_k| (c^dag)^n c^n |chi_l>``.

For bounded photon number the normally ordered hierarchy is finite: any
product with more annihilators than photons vanishes identically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import (
    FockError,
    FockState,
    apply_annihilation,
    apply_mode_annihilation,
    apply_mode_creation,
    inner_product,
)
from .optics import PassiveUnitary

CONDITION_TOL = 1e-9

NUMBER_ORDERED = "number-ordered"
NORMALLY_ORDERED = "normally-ordered"


class NonOrthogonalError(ValueError):
    """The input set violates the zeroth-order (orthogonality) condition."""


@dataclass(frozen=True)
class ConditionValue:
    pair: tuple[int, int]
    modes: tuple[tuple[complex, ...], ...]
    order: int
    value: complex
    indices: tuple[int, ...] | None = None


@dataclass(frozen=True, eq=False)
class FirstOrderForm:
    """``M[i, i'] = <chi_k| a_i^dag a_i' |chi_l>``; the condition is ``nu^dag M nu = 0``."""

    pair: tuple[int, int]
    matrix: np.ndarray

    def evaluate(self, nu) -> complex:
        nu = np.asarray(nu, dtype=complex)
        return complex(nu.conj() @ self.matrix @ nu)


@dataclass(frozen=True)
class Verdict:
    passed: bool
    witness: ConditionValue | None = None
    checked: int = 0
    max_violation: float = 0.0
    tol: float = CONDITION_TOL


def _same_modes(*states: FockState) -> int:
    modes = {s.modes for s in states}
    if len(modes) != 1:
        raise FockError(f"mode-count mismatch: {sorted(modes)}")
    return modes.pop()


def first_order_form(chi_k: FockState, chi_l: FockState, pair=(0, 1)) -> FirstOrderForm:
    N = _same_modes(chi_k, chi_l)
    lowered_k = [apply_annihilation(chi_k, i) for i in range(N)]
    lowered_l = [apply_annihilation(chi_l, i) for i in range(N)]
    M = np.array([[inner_product(a, b) for b in lowered_l] for a in lowered_k])
    return FirstOrderForm(tuple(pair), M)


def _power(state: FockState, nu, n: int) -> FockState:
    for _ in range(n):
        state = apply_mode_annihilation(state, nu)
    return state


def condcond_value(chi_k: FockState, chi_l: FockState, nu, n: int) -> complex:
    """``<chi_k| (c^dag)^n c^n |chi_l>`` for ``c = sum_i nu_i a_i``."""
    if n < 1:
        raise ValueError("order must be at least 1")
    N = _same_modes(chi_k, chi_l)
    if len(np.ravel(nu)) != N:
        raise FockError("mode vector length does not match the states")
    return inner_product(_power(chi_k, nu, n), _power(chi_l, nu, n))


def hierarchy_value(
    chi_k: FockState,
    chi_l: FockState,
    mode_tuple: Sequence,
    form: str = NORMALLY_ORDERED,
) -> complex:
    """Evaluate one hierarchy condition for the given output modes.

    ``number-ordered`` multiplies the number operators ``c_j^dag c_j`` in
    tuple order; ``normally-ordered`` puts every creator to the left.
    """
    if len(mode_tuple) == 0:
        raise ValueError("mode tuple must be nonempty")
    N = _same_modes(chi_k, chi_l)
    vecs = [np.asarray(v, dtype=complex).ravel() for v in mode_tuple]
    if any(v.shape[0] != N for v in vecs):
        raise FockError("mode vector length does not match the states")
    if form == NORMALLY_ORDERED:
        a, b = chi_k, chi_l
        for v in vecs:
            a = apply_mode_annihilation(a, v)
            b = apply_mode_annihilation(b, v)
        return inner_product(a, b)
    if form == NUMBER_ORDERED:
        b = chi_l
        for v in reversed(vecs):
            b = apply_mode_creation(apply_mode_annihilation(b, v), v)
        return inner_product(chi_k, b)
    raise ValueError(f"unknown form {form!r}")


def check_orthogonal(states: Sequence[FockState], tol: float = CONDITION_TOL) -> None:
    for k, l in itertools.combinations(range(len(states)), 2):
        ov = abs(inner_product(states[k], states[l]))
        if ov > tol:
            raise NonOrthogonalError(f"states {k} and {l} overlap: |<k|l>| = {ov:.3g}")


def fixed_array_check(
    states: Sequence[FockState],
    U: PassiveUnitary,
    tol: float = CONDITION_TOL,
) -> Verdict:
    """Decide exact discrimination by the fixed interferometer ``U``.

    Every multiset of output modes of size ``1..n_max`` is checked in the
    normally ordered form for every pair ``k < l`` (the ``(l, k)`` value is
    the conjugate). The first violation in enumeration order is returned as
    the witness.
    """
    N = _same_modes(*states)
    if U.dim != N:
        raise FockError(f"unitary acts on {U.dim} modes, states have {N}")
    check_orthogonal(states, tol)
    n_max = max(s.max_photons() for s in states)
    rows = [U.row(j) for j in range(N)]
    checked = 0
    worst = 0.0
    for size in range(1, n_max + 1):
        for combo in itertools.combinations_with_replacement(range(N), size):
            lowered = []
            for s in states:
                for j in combo:
                    s = apply_mode_annihilation(s, rows[j])
                lowered.append(s)
            for k, l in itertools.combinations(range(len(states)), 2):
                value = inner_product(lowered[k], lowered[l])
                checked += 1
                worst = max(worst, abs(value))
                if abs(value) > tol:
                    witness = ConditionValue(
                        (k, l), tuple(tuple(rows[j]) for j in combo), size, value, combo
                    )
                    return Verdict(False, witness, checked, worst, tol)
    return Verdict(True, None, checked, worst, tol)
