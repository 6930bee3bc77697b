"""Catalogue of the photonic state sets used throughout the package.

Modes are zero-indexed here; the docstrings use the usual one-indexed
labels (mode 1 is index 0).
"""

from __future__ import annotations

import math

from .fock import FockState, basis_state, make_state

R2 = 1 / math.sqrt(2)


def _two_photon(modes: int, terms) -> FockState:
    """Sum of ``amp * a_i^dag a_j^dag |0>`` over ``(amp, i, j)``."""
    out = []
    for amp, i, j in terms:
        occ = [0] * modes
        occ[i] += 1
        occ[j] += 1
        # a_i^dag a_i^dag |0> = sqrt(2) |2>
        out.append((occ, amp * (math.sqrt(2) if i == j else 1.0)))
    return make_state(modes, out)


def bell_states() -> dict[str, FockState]:
    """Polarization Bell states: modes 1,2 carry photon A, modes 3,4 photon B."""
    return {
        "Psi+": _two_photon(4, [(R2, 0, 3), (R2, 1, 2)]),
        "Psi-": _two_photon(4, [(R2, 0, 3), (-R2, 1, 2)]),
        "Phi+": _two_photon(4, [(R2, 0, 2), (R2, 1, 3)]),
        "Phi-": _two_photon(4, [(R2, 0, 2), (-R2, 1, 3)]),
    }


def qutrit_states() -> dict[str, FockState]:
    """Nine two-qutrit product states encoded as two photons in six modes."""
    return {
        "s1": _two_photon(6, [(R2, 0, 3), (R2, 0, 4)]),
        "s2": _two_photon(6, [(R2, 0, 3), (-R2, 0, 4)]),
        "s3": _two_photon(6, [(R2, 2, 4), (R2, 2, 5)]),
        "s4": _two_photon(6, [(R2, 2, 4), (-R2, 2, 5)]),
        "s5": _two_photon(6, [(R2, 3, 1), (R2, 3, 2)]),
        "s6": _two_photon(6, [(R2, 3, 1), (-R2, 3, 2)]),
        "s7": _two_photon(6, [(R2, 5, 0), (R2, 5, 1)]),
        "s8": _two_photon(6, [(R2, 5, 0), (-R2, 5, 1)]),
        "s9": _two_photon(6, [(1.0, 1, 4)]),
    }


def pair_states(alpha: complex = R2, beta: complex = R2) -> dict[str, FockState]:
    """``alpha|20> + beta|11>`` and ``conj(beta)|20> - conj(alpha)|11>``."""
    nrm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    alpha, beta = alpha / nrm, beta / nrm
    return {
        "s+": make_state(2, [([2, 0], alpha), ([1, 1], beta)]),
        "s-": make_state(2, [([2, 0], beta.conjugate()), ([1, 1], -alpha.conjugate())]),
    }


def family_states(alpha: complex, beta: complex, gamma: complex, delta: complex) -> dict[str, FockState]:
    """Four orthogonal two-qubit states with tunable entanglement.

    ``(alpha, beta)`` weights the first pair, ``(gamma, delta)`` the second;
    each pair is normalized. A zero coefficient makes the pair separable.
    """
    n1 = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
    n2 = math.sqrt(abs(gamma) ** 2 + abs(delta) ** 2)
    alpha, beta, gamma, delta = alpha / n1, beta / n1, gamma / n2, delta / n2
    return {
        "s1": _two_photon(4, [(alpha, 0, 3), (beta, 1, 2)]),
        "s2": _two_photon(4, [(beta.conjugate(), 0, 3), (-alpha.conjugate(), 1, 2)]),
        "s3": _two_photon(4, [(gamma, 0, 2), (delta, 1, 3)]),
        "s4": _two_photon(4, [(delta.conjugate(), 0, 2), (-gamma.conjugate(), 1, 3)]),
    }


def number_states(*photons: int) -> dict[str, FockState]:
    """Single-mode number states ``|n>``."""
    return {f"n{n}": basis_state([n]) for n in photons}
