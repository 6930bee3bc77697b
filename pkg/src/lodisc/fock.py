"""Sparse multi-mode Fock states and ladder-operator actions.

A :class:`FockState` stores complex amplitudes keyed by occupation tuples.
States are immutable; every operation returns a new state and drops
amplitudes whose magnitude falls below :data:`DROP_TOL`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

DROP_TOL = 1e-14
NORM_TOL = 1e-10

Occupation = tuple[int, ...]


class FockError(ValueError):
    """Raised for malformed states or mismatched mode counts."""


def _clean(amplitudes: Mapping[Occupation, complex]) -> dict[Occupation, complex]:
    return {occ: complex(a) for occ, a in amplitudes.items() if abs(a) >= DROP_TOL}


@dataclass(frozen=True)
class FockState:
    """Pure state on ``modes`` bosonic modes with at most ``cutoff`` photons.

    The amplitude map may be empty, which represents the zero vector (the
    result of annihilating the vacuum, for instance).
    """

    modes: int
    cutoff: int
    amplitudes: Mapping[Occupation, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.modes < 0 or self.cutoff < 0:
            raise FockError("modes and cutoff must be non-negative")
        cleaned = _clean(self.amplitudes)
        for occ in cleaned:
            if len(occ) != self.modes:
                raise FockError(f"occupation {occ} does not have {self.modes} entries")
            if any(n < 0 for n in occ):
                raise FockError(f"negative photon count in {occ}")
            if sum(occ) > self.cutoff:
                raise FockError(f"occupation {occ} exceeds cutoff {self.cutoff}")
        object.__setattr__(self, "amplitudes", cleaned)

    def __len__(self):
        return len(self.amplitudes)

    def __iter__(self):
        return iter(sorted(self.amplitudes.items()))

    def __getitem__(self, occ: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    @property
    def is_zero(self) -> bool:
        return not self.amplitudes

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> "FockState":
        nrm = self.norm()
        if nrm == 0.0:
            raise FockError("cannot normalize the zero state")
        return self.scaled(1.0 / nrm)

    def scaled(self, factor: complex) -> "FockState":
        return FockState(
            self.modes, self.cutoff, {o: a * factor for o, a in self.amplitudes.items()}
        )

    def photon_numbers(self) -> set[int]:
        """Total-photon sectors with support."""
        return {sum(occ) for occ in self.amplitudes}

    def has_fixed_photon_number(self) -> bool:
        return len(self.photon_numbers()) <= 1

    def max_photons(self) -> int:
        return max(self.photon_numbers(), default=0)

    def to_dict(self) -> dict[Occupation, complex]:
        return dict(self.amplitudes)

    def __add__(self, other: "FockState") -> "FockState":
        _check_same_modes(self, other)
        out = dict(self.amplitudes)
        for occ, amp in other.amplitudes.items():
            out[occ] = out.get(occ, 0j) + amp
        return FockState(self.modes, max(self.cutoff, other.cutoff), out)

    def __sub__(self, other: "FockState") -> "FockState":
        return self + other.scaled(-1.0)

    def __repr__(self):
        terms = " + ".join(f"({a:.4g})|{''.join(map(str, o))}>" for o, a in self)
        return f"FockState(modes={self.modes}, cutoff={self.cutoff}, {terms or '0'})"


def _check_same_modes(a: FockState, b: FockState) -> None:
    if a.modes != b.modes:
        raise FockError(f"mode-count mismatch: {a.modes} vs {b.modes}")


def _check_mode(state: FockState, mode: int) -> None:
    if not 0 <= mode < state.modes:
        raise IndexError(f"mode index {mode} out of range for {state.modes} modes")


def zero_state(modes: int, cutoff: int = 0) -> FockState:
    return FockState(modes, cutoff, {})


def vacuum(modes: int) -> FockState:
    return FockState(modes, 0, {(0,) * modes: 1.0})


def basis_state(occupation: Sequence[int]) -> FockState:
    occ = tuple(int(n) for n in occupation)
    return FockState(len(occ), sum(occ), {occ: 1.0})


def make_state(modes: int, terms: Iterable[tuple[Sequence[int], complex]]) -> FockState:
    """Build a state from ``(occupation, amplitude)`` pairs.

    Duplicate occupations are summed. The cutoff is the largest total photon
    number among the terms. The result is not normalized.
    """
    if modes < 1:
        raise FockError("a state needs at least one mode")
    amplitudes: dict[Occupation, complex] = {}
    for occ, amp in terms:
        occ = tuple(int(n) for n in occ)
        if len(occ) != modes:
            raise FockError(f"occupation {occ} does not have {modes} entries")
        if any(n < 0 for n in occ):
            raise FockError(f"negative photon count in {occ}")
        amplitudes[occ] = amplitudes.get(occ, 0j) + complex(amp)
    amplitudes = _clean(amplitudes)
    if not amplitudes:
        raise FockError("state has no nonzero amplitude")
    return FockState(modes, max(sum(o) for o in amplitudes), amplitudes)


def inner_product(a: FockState, b: FockState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_same_modes(a, b)
    # sorted common support so that <a|b> and <b|a> are exact conjugates
    common = sorted(a.amplitudes.keys() & b.amplitudes.keys())
    return sum((a.amplitudes[o].conjugate() * b.amplitudes[o] for o in common), 0j)


def apply_annihilation(state: FockState, mode: int) -> FockState:
    _check_mode(state, mode)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        n = occ[mode]
        if n == 0:
            continue
        new = occ[:mode] + (n - 1,) + occ[mode + 1:]
        out[new] = out.get(new, 0j) + amp * math.sqrt(n)
    return FockState(state.modes, state.cutoff, out)


def apply_creation(state: FockState, mode: int) -> FockState:
    """a_mode^dagger; the cutoff grows by one."""
    _check_mode(state, mode)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        n = occ[mode]
        new = occ[:mode] + (n + 1,) + occ[mode + 1:]
        out[new] = out.get(new, 0j) + amp * math.sqrt(n + 1)
    return FockState(state.modes, state.cutoff + 1, out)


def _mode_vector(nu, modes: int) -> np.ndarray:
    nu = np.asarray(nu, dtype=complex).ravel()
    if nu.shape[0] != modes:
        raise FockError(f"mode vector has length {nu.shape[0]}, state has {modes} modes")
    return nu


def apply_mode_annihilation(state: FockState, nu) -> FockState:
    """c|state> with c = sum_i nu_i a_i."""
    nu = _mode_vector(nu, state.modes)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        for i, n in enumerate(occ):
            if n == 0 or nu[i] == 0:
                continue
            new = occ[:i] + (n - 1,) + occ[i + 1:]
            out[new] = out.get(new, 0j) + nu[i] * amp * math.sqrt(n)
    return FockState(state.modes, state.cutoff, out)


def apply_mode_creation(state: FockState, nu) -> FockState:
    """c^dagger|state> with c^dagger = sum_i conj(nu_i) a_i^dagger."""
    nu = _mode_vector(nu, state.modes)
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        for i, n in enumerate(occ):
            if nu[i] == 0:
                continue
            new = occ[:i] + (n + 1,) + occ[i + 1:]
            out[new] = out.get(new, 0j) + nu[i].conjugate() * amp * math.sqrt(n + 1)
    return FockState(state.modes, state.cutoff + 1, out)


def tensor(a: FockState, b: FockState) -> FockState:
    out = {
        oa + ob: xa * xb
        for oa, xa in a.amplitudes.items()
        for ob, xb in b.amplitudes.items()
    }
    return FockState(a.modes + b.modes, a.cutoff + b.cutoff, out)


def occupations(modes: int, photons: int) -> list[Occupation]:
    """All occupation tuples with exactly ``photons`` in ``modes`` modes, sorted."""
    if modes == 0:
        return [()] if photons == 0 else []
    out = []
    for bars in itertools.combinations(range(photons + modes - 1), modes - 1):
        prev = -1
        occ = []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(photons + modes - 1 - prev - 1)
        out.append(tuple(occ))
    return sorted(out)


def fock_basis(modes: int, cutoff: int) -> list[Occupation]:
    """Occupations with total photons <= cutoff, ordered by sector then lexicographically."""
    return [occ for n in range(cutoff + 1) for occ in occupations(modes, n)]


class DenseBasis:
    """Index map between occupation tuples and positions of a dense vector.

    Used where repeated evaluation makes a dense representation pay off
    (objective functions, truncated operator matrices).
    """

    def __init__(self, modes: int, cutoff: int):
        self.modes = modes
        self.cutoff = cutoff
        self.occupations = fock_basis(modes, cutoff)
        self.index = {occ: k for k, occ in enumerate(self.occupations)}

    def __len__(self):
        return len(self.occupations)

    def vector(self, state: FockState) -> np.ndarray:
        if state.modes != self.modes:
            raise FockError("mode-count mismatch")
        v = np.zeros(len(self), dtype=complex)
        for occ, amp in state.amplitudes.items():
            v[self.index[occ]] = amp
        return v

    def state(self, vector: np.ndarray, cutoff: int | None = None) -> FockState:
        amps = {self.occupations[k]: vector[k] for k in np.flatnonzero(np.abs(vector) >= DROP_TOL)}
        return FockState(self.modes, self.cutoff if cutoff is None else cutoff, amps)

    def annihilators(self) -> np.ndarray:
        """Truncated a_i matrices, shape (modes, dim, dim).

        Exact on every basis vector: a_i never leaves the truncated space.
        """
        dim = len(self)
        mats = np.zeros((self.modes, dim, dim), dtype=complex)
        for col, occ in enumerate(self.occupations):
            for i, n in enumerate(occ):
                if n:
                    row = self.index[occ[:i] + (n - 1,) + occ[i + 1:]]
                    mats[i, row, col] = math.sqrt(n)
        return mats
