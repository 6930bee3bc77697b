"""Homodyne (quadrature) variant of the distinguishability conditions.

Quadratures use the half normalization ``x^(theta) = (a e^{-i theta} +
a^dag e^{i theta}) / 2``, so ``[x^(0), x^(pi/2)] = i/2``.

Sparse states never truncate: applying a quadrature raises the cutoff by
one. The dense helpers (:func:`quadrature_matrix`) do truncate, and are only
exact on the *interior* -- basis states with at most ``cutoff - 1`` photons.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import (
    DenseBasis,
    FockError,
    FockState,
    apply_annihilation,
    apply_creation,
    apply_mode_annihilation,
    apply_mode_creation,
    inner_product,
)
from .optics import PassiveUnitary, beam_splitter

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class QuadratureSpec:
    mode: int
    angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % TWO_PI)


def apply_quadrature(state: FockState, spec: QuadratureSpec) -> FockState:
    down = apply_annihilation(state, spec.mode).scaled(cmath.exp(-1j * spec.angle) / 2)
    up = apply_creation(state, spec.mode).scaled(cmath.exp(1j * spec.angle) / 2)
    return up + down


def apply_output_quadrature(state: FockState, U: PassiveUnitary, spec: QuadratureSpec) -> FockState:
    """Quadrature of output mode ``c_j = sum_i U[j, i] a_i``."""
    nu = U.row(spec.mode)
    down = apply_mode_annihilation(state, nu).scaled(cmath.exp(-1j * spec.angle) / 2)
    up = apply_mode_creation(state, nu).scaled(cmath.exp(1j * spec.angle) / 2)
    return up + down


def quadrature_condition(
    chi_k: FockState,
    chi_l: FockState,
    U: PassiveUnitary,
    specs: Sequence[QuadratureSpec],
) -> complex:
    """``<chi_k| x^c_{j1} x^c_{j2} ... |chi_l>`` in list order.

    Same-mode factors with different angles do not commute; the list order is
    taken literally.
    """
    if not specs:
        raise ValueError("need at least one quadrature")
    if not (chi_k.modes == chi_l.modes == U.dim):
        raise FockError("dimension mismatch between states and unitary")
    for s in specs:
        if not 0 <= s.mode < U.dim:
            raise IndexError(f"mode index {s.mode} out of range")
    out = chi_l
    for s in reversed(specs):
        out = apply_output_quadrature(out, U, s)
    return inner_product(chi_k, out)


def quadrature_matrix(cutoff: int, angle: float) -> np.ndarray:
    """Single-mode quadrature truncated to ``|0>..|cutoff>``."""
    n = np.arange(1, cutoff + 1)
    a = np.diag(np.sqrt(n), 1).astype(complex)
    return (a * cmath.exp(-1j * angle) + a.conj().T * cmath.exp(1j * angle)) / 2


def commutator_deviation(cutoff: int) -> float:
    """Max deviation of ``[x, p]`` from ``i/2`` on the truncation interior."""
    x = quadrature_matrix(cutoff, 0.0)
    p = quadrature_matrix(cutoff, math.pi / 2)
    comm = x @ p - p @ x
    inner = slice(0, cutoff)
    return float(np.max(np.abs(comm[inner, inner] - 0.5j * np.eye(cutoff))))


def hermiticity_deviation(cutoff: int, angle: float) -> float:
    x = quadrature_matrix(cutoff, angle)
    return float(np.max(np.abs(x - x.conj().T)))


def _x(state, mode):
    return apply_quadrature(state, QuadratureSpec(mode, 0.0))


def _p(state, mode):
    return apply_quadrature(state, QuadratureSpec(mode, math.pi / 2))


def _identity_deviation(cutoff: int, U: PassiveUnitary) -> float:
    """Compare both output quadratures with their input-mode expressions.

    ``x^c_1 = (x_1 - x_2)/sqrt2`` (angle 0 on output 1) and
    ``x^c_2 = (p_1 + p_2)/sqrt2`` (angle pi/2 on output 2), on every basis
    state of the interior.
    """
    r2 = 1 / math.sqrt(2)
    basis = DenseBasis(2, cutoff - 1)
    worst = 0.0
    for occ in basis.occupations:
        ket = FockState(2, sum(occ), {occ: 1.0})
        lhs1 = apply_output_quadrature(ket, U, QuadratureSpec(0, 0.0))
        rhs1 = (_x(ket, 0) - _x(ket, 1)).scaled(r2)
        lhs2 = apply_output_quadrature(ket, U, QuadratureSpec(1, math.pi / 2))
        rhs2 = (_p(ket, 0) + _p(ket, 1)).scaled(r2)
        for diff in (lhs1 - rhs1, lhs2 - rhs2):
            worst = max(worst, max((abs(a) for a in diff.amplitudes.values()), default=0.0))
    return worst


BS_PHASE_VARIANTS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)


def bs_quadrature_convention(cutoff: int, theta: float = math.pi / 4) -> tuple[float, float]:
    """Pick the beam-splitter phase realizing the quadrature identities.

    Returns ``(phase, deviation)`` for the best of the four phase variants
    of the 2x2 block.
    """
    if cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    scores = [
        (_identity_deviation(cutoff, beam_splitter(2, 0, 1, theta, phi)), phi)
        for phi in BS_PHASE_VARIANTS
    ]
    dev, phi = min(scores)
    return phi, dev


def bs_quadrature_identity_check(cutoff: int, theta: float = math.pi / 4) -> float:
    """Max deviation from the beam-splitter quadrature identities on the interior."""
    return bs_quadrature_convention(cutoff, theta)[1]
