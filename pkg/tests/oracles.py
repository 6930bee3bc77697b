"""Brute-force reference computations, independent of the package internals.

Everything here works on dense vectors over an explicitly enumerated Fock
basis and only borrows the package's data containers for input/output.
"""

import itertools
import math

import numpy as np
from scipy.linalg import expm, logm


class Space:
    def __init__(self, modes, cutoff):
        self.modes = modes
        self.cutoff = cutoff
        self.occs = [o for o in itertools.product(range(cutoff + 1), repeat=modes) if sum(o) <= cutoff]
        self.index = {o: k for k, o in enumerate(self.occs)}
        self.dim = len(self.occs)

    def annihilator(self, i):
        a = np.zeros((self.dim, self.dim), dtype=complex)
        for col, o in enumerate(self.occs):
            if o[i]:
                lowered = list(o)
                lowered[i] -= 1
                a[self.index[tuple(lowered)], col] = math.sqrt(o[i])
        return a

    def creator(self, i):
        return self.annihilator(i).conj().T

    def vec(self, state):
        v = np.zeros(self.dim, dtype=complex)
        for o, amp in state.amplitudes.items():
            v[self.index[o]] = amp
        return v

    def amplitudes(self, v, tol=1e-13):
        return {self.occs[k]: v[k] for k in range(self.dim) if abs(v[k]) > tol}


def fock_unitary(H, space):
    """exp(-i sum_ij H_ij a_i^dag a_j) on a number-conserving truncated space."""
    G = sum(
        H[i, j] * space.creator(i) @ space.annihilator(j)
        for i in range(space.modes)
        for j in range(space.modes)
    )
    return expm(-1j * G)


def generator_of(U):
    H = 1j * logm(U)
    return (H + H.conj().T) / 2


def transformed_amplitudes(state, U):
    """Output amplitudes of ``state`` through interferometer ``U`` by dense exponentiation."""
    space = Space(state.modes, state.cutoff)
    V = fock_unitary(generator_of(np.asarray(getattr(U, "matrix", U))), space)
    return space.amplitudes(V @ space.vec(state))


def brute_permanent(m):
    n = m.shape[0]
    return sum(
        math.prod(m[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n))
    ) if n else 1.0


def pattern_distribution(state, U):
    amps = transformed_amplitudes(state, U)
    norm = sum(abs(a) ** 2 for a in amps.values())
    return {o: abs(a) ** 2 / norm for o, a in amps.items()}


def phase_averaged_overlap(state_k, state_l, U):
    """Tr(rho'_k rho'_l) by averaging |<chi_k| e^{i y.n} |chi_l>|^2 over a phase grid.

    The integrand is a trigonometric polynomial in y with frequencies bounded
    by the photon cutoff, so a uniform grid of 2*cutoff+1 points per mode
    integrates it exactly.
    """
    ak = transformed_amplitudes(state_k, U)
    al = transformed_amplitudes(state_l, U)
    cutoff = max(state_k.cutoff, state_l.cutoff)
    grid = 2 * np.pi * np.arange(2 * cutoff + 1) / (2 * cutoff + 1)
    occs = sorted(set(ak) | set(al))
    w = np.array([np.conj(ak.get(o, 0)) * al.get(o, 0) for o in occs])
    n = np.array(occs, dtype=float)
    total = 0.0
    for y in itertools.product(grid, repeat=state_k.modes):
        total += abs(np.sum(w * np.exp(1j * n @ np.array(y)))) ** 2
    return total / len(grid) ** state_k.modes


def dense_condition(space, state_k, state_l, ops):
    """<k| ops[0] ops[1] ... |l> with dense operator matrices."""
    v = space.vec(state_l)
    for op in reversed(ops):
        v = op @ v
    return np.vdot(space.vec(state_k), v)


def mode_op(space, nu):
    return sum(nu[i] * space.annihilator(i) for i in range(space.modes))


def random_state(rng, modes, photons, terms=None, sectors=None):
    """Random normalized sparse state with support in the given photon sectors."""
    from lodisc.fock import make_state, occupations

    sectors = [photons] if sectors is None else sectors
    pool = [o for n in sectors for o in occupations(modes, n)]
    k = len(pool) if terms is None else min(terms, len(pool))
    chosen = rng.choice(len(pool), size=k, replace=False)
    amps = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    amps /= np.linalg.norm(amps)
    return make_state(modes, [(pool[c], a) for c, a in zip(chosen, amps)])


def haar(rng, n):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def hermitian_form_parts(M):
    """Real and imaginary parts of nu^dag M nu as Hermitian forms."""
    M = np.asarray(M, dtype=complex)
    return (M + M.conj().T) / 2, (M - M.conj().T) / 2j


def in_real_span(target, forms, tol=1e-10):
    """Whether Hermitian form ``target`` is a real combination of ``forms``."""
    def flat(h):
        return np.concatenate([h.real.ravel(), h.imag.ravel()])

    A = np.array([flat(f) for f in forms]).T
    b = flat(target)
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return np.linalg.norm(A @ coef - b) < tol


def normal_ordered_op(space, vecs):
    """c_1^dag ... c_m^dag c_m ... c_1 as a dense matrix."""
    ops = [mode_op(space, v) for v in vecs]
    out = np.eye(space.dim, dtype=complex)
    for c in ops:
        out = out @ c.conj().T
    for c in reversed(ops):
        out = out @ c
    return out


def number_ordered_op(space, vecs):
    out = np.eye(space.dim, dtype=complex)
    for v in vecs:
        c = mode_op(space, v)
        out = out @ c.conj().T @ c
    return out


def lower_order_free_pair(rng, modes, photons, U, combo):
    """Random orthogonal pair (k, l) whose normally ordered values vanish on every
    proper sub-multiset of ``combo`` (rows of ``U``), built by Gram-Schmidt."""
    from lodisc.fock import make_state

    space = Space(modes, photons)
    k = random_state(rng, modes, 0, sectors=range(1, photons + 1))
    kv = space.vec(k)
    lv = space.vec(random_state(rng, modes, 0, sectors=range(1, photons + 1)))
    subs = {()}
    for r in range(1, len(combo)):
        subs |= set(itertools.combinations(combo, r))
    basis = []
    for sub in sorted(subs):
        w = normal_ordered_op(space, [U[j] for j in sub]) @ kv
        for b in basis:
            w = w - np.vdot(b, w) * b
        if np.linalg.norm(w) > 1e-9:
            basis.append(w / np.linalg.norm(w))
    for _ in range(2):
        for b in basis:
            lv = lv - np.vdot(b, lv) * b
    if np.linalg.norm(lv) < 1e-6:
        return None
    lv /= np.linalg.norm(lv)
    to_state = lambda v: make_state(modes, [(o, a) for o, a in space.amplitudes(v, 1e-15).items()])  # noqa: E731
    return space, to_state(kv), to_state(lv)
