"""Passive linear-optics unitaries and their action on Fock states.

Convention: a state written as ``P(a_1^dag, ..., a_N^dag)|0>`` is mapped to
``P(b_1^dag, ..., b_N^dag)|0>`` with ``b_i^dag = sum_j U[j, i] a_j^dag``.
A photon entering mode ``i`` therefore leaves with amplitude ``U[j, i]`` in
mode ``j``, and the Heisenberg-picture output mode operators are
``c_j = sum_i U[j, i] a_i`` (row ``j`` of ``U`` as a mode vector).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .fock import FockError, FockState, occupations

UNITARY_TOL = 1e-10
HERMITIAN_TOL = 1e-10
# sector-dense evaluation up to this photon number, polynomial expansion above
DENSE_SECTOR_MAX = 6


class NotUnitaryError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PassiveUnitary:
    """N x N interferometer matrix acting on mode operators."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotUnitaryError(f"expected a square matrix, got shape {m.shape}")
        dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])), initial=0.0)
        if dev > UNITARY_TOL:
            raise NotUnitaryError(f"matrix is not unitary (max deviation {dev:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def row(self, j: int) -> np.ndarray:
        """Mode vector of output mode ``j``."""
        return self.matrix[j].copy()

    def __matmul__(self, other: "PassiveUnitary") -> "PassiveUnitary":
        return PassiveUnitary(self.matrix @ other.matrix)

    def dagger(self) -> "PassiveUnitary":
        return PassiveUnitary(self.matrix.conj().T)

    def __eq__(self, other):
        return isinstance(other, PassiveUnitary) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    @classmethod
    def identity(cls, dim: int) -> "PassiveUnitary":
        return cls(np.eye(dim, dtype=complex))


def from_hermitian(H) -> PassiveUnitary:
    """U = exp(-iH) for a Hermitian mode-space generator H."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if np.max(np.abs(H - H.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("generator is not Hermitian")
    return PassiveUnitary(expm(-1j * H))


def hermitian_from_params(params, dim: int) -> np.ndarray:
    """Map ``dim**2`` reals onto a Hermitian matrix.

    The first ``dim`` entries fill the diagonal; the rest fill real and
    imaginary parts of the strict upper triangle.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (dim * dim,):
        raise ValueError(f"expected {dim * dim} parameters")
    H = np.diag(params[:dim]).astype(complex)
    iu = np.triu_indices(dim, 1)
    npairs = len(iu[0])
    H[iu] = params[dim:dim + npairs] + 1j * params[dim + npairs:]
    H[iu[1], iu[0]] = np.conj(H[iu])
    return H


def beam_splitter(N: int, i: int, j: int, theta: float, phi: float = 0.0) -> PassiveUnitary:
    """Identity except the (i, j) block ``[[cos, e^{i phi} sin], [-e^{-i phi} sin, cos]]``."""
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    if not (0 <= i < N and 0 <= j < N):
        raise IndexError("mode index out of range")
    m = np.eye(N, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    m[i, i] = c
    m[i, j] = np.exp(1j * phi) * s
    m[j, i] = -np.exp(-1j * phi) * s
    m[j, j] = c
    return PassiveUnitary(m)


def beam_splitter_network(N: int, pairs, theta: float = math.pi / 4, phi: float = 0.0) -> PassiveUnitary:
    """Product of beam splitters acting on disjoint mode pairs."""
    u = PassiveUnitary.identity(N)
    for i, j in pairs:
        u = beam_splitter(N, i, j, theta, phi) @ u
    return u


def extend_to_unitary(nu) -> PassiveUnitary:
    """Unitary whose first row is ``nu / |nu|``.

    Remaining rows come from Gram-Schmidt over the standard basis in index
    order; candidates that are (nearly) in the span of earlier rows are
    skipped.
    """
    nu = np.asarray(nu, dtype=complex).ravel()
    nrm = np.linalg.norm(nu)
    if nrm <= 1e-10:
        raise ValueError("cannot extend the zero vector")
    N = nu.shape[0]
    rows = [nu / nrm]
    for k in range(N):
        if len(rows) == N:
            break
        v = np.zeros(N, dtype=complex)
        v[k] = 1.0
        for _ in range(2):  # re-orthogonalize once for stability
            for r in rows:
                v = v - np.vdot(r, v) * r
        vn = np.linalg.norm(v)
        if vn < 1e-8:
            continue
        rows.append(v / vn)
    return PassiveUnitary(np.array(rows))


def permanent(m: np.ndarray) -> complex:
    """Permanent via Ryser's formula with Gray-code updates."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] + m[0, 1] * m[1, 0])
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    gray_prev = 0
    for k in range(1, 2 ** n):
        gray = k ^ (k >> 1)
        changed = gray ^ gray_prev
        col = changed.bit_length() - 1
        if gray & changed:
            row_sums += m[:, col]
        else:
            row_sums -= m[:, col]
        gray_prev = gray
        sign = -1 if bin(gray).count("1") % 2 else 1
        total += sign * np.prod(row_sums)
    return (-1) ** n * total


@lru_cache(maxsize=64)
def _sector_layout(modes: int, photons: int):
    occs = occupations(modes, photons)
    # each occupation as a sorted list of mode labels, one per photon
    labels = np.array(
        [[i for i, n in enumerate(o) for _ in range(n)] for o in occs], dtype=int
    ).reshape(len(occs), photons)
    norms = np.array([math.prod(math.factorial(n) for n in o) for o in occs], dtype=float)
    perms = np.array(list(itertools.permutations(range(photons))), dtype=int).reshape(-1, max(photons, 1))
    return occs, labels, np.sqrt(norms), perms


def sector_matrix(U: PassiveUnitary, photons: int) -> np.ndarray:
    """Matrix of the induced Fock-space unitary on one fixed-photon sector.

    ``S[m, n] = perm(U[rows(m), cols(n)]) / sqrt(m! n!)``, with rows and
    columns repeated by occupation; basis order is :func:`fock.occupations`.
    """
    if photons == 0:
        return np.ones((1, 1), dtype=complex)
    occs, labels, sq, perms = _sector_layout(U.dim, photons)
    u = U.matrix
    d = len(occs)
    out = np.zeros((d, d), dtype=complex)
    rows = labels[:, None, :]
    for p in perms:
        cols = labels[None, :, p]
        out += np.prod(u[rows, cols], axis=-1)
    return out / sq[:, None] / sq[None, :]


def _apply_dense(U: PassiveUnitary, state: FockState) -> dict:
    out: dict = {}
    by_sector: dict[int, dict] = {}
    for occ, amp in state.amplitudes.items():
        by_sector.setdefault(sum(occ), {})[occ] = amp
    for n, terms in by_sector.items():
        occs = occupations(U.dim, n)
        index = {o: k for k, o in enumerate(occs)}
        v = np.zeros(len(occs), dtype=complex)
        for occ, amp in terms.items():
            v[index[occ]] = amp
        w = sector_matrix(U, n) @ v
        for k in np.flatnonzero(w):
            out[occs[k]] = out.get(occs[k], 0j) + w[k]
    return out


def _apply_expansion(U: PassiveUnitary, state: FockState) -> dict:
    """Substitute b_i^dag = sum_j U[j,i] a_j^dag into each term's monomial."""
    u = U.matrix
    N = U.dim
    out: dict = {}
    for occ, amp in state.amplitudes.items():
        # monomial coefficients over output creation operators
        poly = {(0,) * N: amp / math.sqrt(math.prod(math.factorial(n) for n in occ))}
        for i, n in enumerate(occ):
            for _ in range(n):
                nxt: dict = {}
                for mono, c in poly.items():
                    for j in range(N):
                        if u[j, i] == 0:
                            continue
                        m = mono[:j] + (mono[j] + 1,) + mono[j + 1:]
                        nxt[m] = nxt.get(m, 0j) + c * u[j, i]
                poly = nxt
        for mono, c in poly.items():
            # (a^dag)^m |0> = sqrt(m!) |m>
            out[mono] = out.get(mono, 0j) + c * math.sqrt(math.prod(math.factorial(k) for k in mono))
    return out


def apply_unitary(U: PassiveUnitary, state: FockState, method: str = "auto") -> FockState:
    """Schrodinger-picture action of the interferometer on ``state``.

    ``method`` is ``"dense"`` (per-sector matrices), ``"expand"`` (term-wise
    polynomial substitution) or ``"auto"``.
    """
    if U.dim != state.modes:
        raise FockError(f"unitary acts on {U.dim} modes, state has {state.modes}")
    if method == "auto":
        method = "dense" if state.max_photons() <= DENSE_SECTOR_MAX else "expand"
    if method == "dense":
        out = _apply_dense(U, state)
    elif method == "expand":
        out = _apply_expansion(U, state)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FockState(state.modes, state.cutoff, out)


def haar_unitary(dim: int, rng: np.random.Generator) -> PassiveUnitary:
    """Haar-random unitary (QR of a complex Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return PassiveUnitary(q * (d / np.abs(d)))


def mode_pairings(N: int) -> list[list[tuple[int, int]]]:
    """All perfect matchings of ``range(N)`` (N even), in deterministic order."""
    def rec(rest):
        if not rest:
            yield []
            return
        first = rest[0]
        for k in range(1, len(rest)):
            pair = (first, rest[k])
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield [pair] + tail
    if N % 2:
        raise ValueError("mode pairing needs an even number of modes")
    return list(rec(list(range(N))))
