"""Truncated-Fock-space oracle.

Dense-matrix ground truth for every closed-form quasiprobability path:
states are built explicitly in a truncated number basis and all correlators
are evaluated by trace. Nothing here is performance-tuned; the point is
independence from the analytic expressions in :mod:`phasebell.states`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

NEGLECTED_POPULATION_TOL = 1e-8
_MAX_DENSE_DIM = 4096


class FockCutoffError(ValueError):
    """Raised when a requested cutoff leaves too much population outside."""


def default_cutoff(spec) -> int:
    """Cutoff heuristic keeping neglected tails below ~1e-10 at desk scale."""
    from .states import GhzEcs, SinglePhotonW, SqueezedVacuum3

    if isinstance(spec, SinglePhotonW):
        return 5
    if isinstance(spec, SqueezedVacuum3):
        return max(20, math.ceil(10.0 * math.sinh(spec.r) ** 2 + 15.0))
    if isinstance(spec, GhzEcs):
        z = spec.zeta
        return max(20, math.ceil(z * z + 7.0 * z + 10.0))
    raise TypeError(f"not a state spec: {spec!r}")


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------


def displacement_matrix(a: complex, n_max: int) -> np.ndarray:
    """Weyl displacement operator D(a) on the basis {|0>, ..., |n_max>}.

    Built column by column from D(a)|n+1> = (a_dag - conj(a)) D(a)|n> / sqrt(n+1),
    starting from the exact coherent-state column, which is well conditioned
    near the truncation edge.
    """
    a = complex(a)
    dim = n_max + 1
    out = np.zeros((dim, dim), dtype=complex)
    col = np.empty(dim, dtype=complex)
    col[0] = math.exp(-0.5 * abs(a) ** 2)
    for m in range(1, dim):
        col[m] = col[m - 1] * a / math.sqrt(m)
    out[:, 0] = col
    sqrt_n = np.sqrt(np.arange(dim))
    for n in range(1, dim):
        prev = out[:, n - 1]
        raised = np.zeros(dim, dtype=complex)
        raised[1:] = sqrt_n[1:] * prev[:-1]
        out[:, n] = (raised - np.conj(a) * prev) / math.sqrt(n)
    return out


def _pi_diagonal(s: float, dim: int) -> np.ndarray:
    q = (s + 1.0) / (s - 1.0)
    return np.power(q, np.arange(dim), dtype=float)


def pi_operator(a: complex, s: float, n_max: int) -> np.ndarray:
    """Displaced weighted-number operator; its expectation is proportional
    to the s-ordered quasiprobability at phase-space point ``a``."""
    if s > 0.0:
        raise ValueError("s must be <= 0: the eigenvalues are unbounded for s > 0")
    d = displacement_matrix(a, n_max)
    return (d * _pi_diagonal(s, n_max + 1)) @ d.conj().T


def o_operator(a: complex, s: float, n_max: int) -> np.ndarray:
    """Dichotomic-bounded local observable with spectrum in [-1, 1]."""
    if s > 0.0:
        raise ValueError("s must be <= 0: the eigenvalues are unbounded for s > 0")
    pi_mat = pi_operator(a, s, n_max)
    eye = np.eye(n_max + 1)
    if s > -1.0:
        return (1.0 - s) * pi_mat + s * eye
    return 2.0 * pi_mat - eye


def eigenvalue_spectrum(s: float, n: int) -> float:
    """n-th measurement outcome of the local observable."""
    if s > 0.0:
        raise ValueError("s must be <= 0")
    if n < 0:
        raise ValueError("n must be >= 0")
    q = (s + 1.0) / (s - 1.0)
    if s > -1.0:
        return (1.0 - s) * q**n + s
    return 2.0 * q**n - 1.0


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass
class FockState:
    """Three-, two- or one-mode state in a truncated number basis.

    Pure states carry ``ket`` (shape ``(dim,) * modes``); mixed states carry
    ``rho`` (square matrix over the flattened product basis). Exactly one of
    the two is set.
    """

    n_max: int
    modes: int
    ket: np.ndarray | None = None
    rho: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def trace(self) -> float:
        if self.ket is not None:
            return float(np.vdot(self.ket, self.ket).real)
        return float(np.trace(self.rho).real)

    def rho_matrix(self) -> np.ndarray:
        if self.rho is not None:
            return self.rho
        total = self.dim**self.modes
        if total > _MAX_DENSE_DIM:
            raise MemoryError(
                f"dense density matrix of dimension {total} is above the desk-scale cap"
            )
        flat = self.ket.reshape(total)
        return np.outer(flat, flat.conj())


def coherent_ket(alpha: complex, n_max: int) -> np.ndarray:
    alpha = complex(alpha)
    dim = n_max + 1
    ket = np.empty(dim, dtype=complex)
    ket[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        ket[n] = ket[n - 1] * alpha / math.sqrt(n)
    return ket


def squeezed_ket(r: float, theta: float, n_max: int) -> np.ndarray:
    """Single-mode squeezed vacuum S(r e^{i theta})|0>; theta = 0 squeezes
    the real quadrature, theta = pi the imaginary one."""
    dim = n_max + 1
    ket = np.zeros(dim, dtype=complex)
    amp = 1.0 / math.sqrt(math.cosh(r))
    factor = -np.exp(1j * theta) * math.tanh(r)
    m = 0
    while 2 * m <= n_max:
        ket[2 * m] = amp
        amp = amp * factor * math.sqrt((2 * m + 1) / (2 * m + 2))
        m += 1
    return ket


def tritter_matrix() -> np.ndarray:
    """Orthogonal three-mode mixer sending input 0 to the symmetric output
    combination; determinant +1 so it exponentiates to a real rotation."""
    o = np.array(
        [
            [1.0 / math.sqrt(3.0), 2.0 / math.sqrt(6.0), 0.0],
            [1.0 / math.sqrt(3.0), -1.0 / math.sqrt(6.0), 1.0 / math.sqrt(2.0)],
            [1.0 / math.sqrt(3.0), -1.0 / math.sqrt(6.0), -1.0 / math.sqrt(2.0)],
        ]
    )
    if np.linalg.det(o) < 0:
        o[:, 2] *= -1.0
    return o


def apply_passive_interferometer(ket: np.ndarray, o_matrix: np.ndarray) -> np.ndarray:
    """Apply the Fock-space unitary of a real orthogonal mode mixer to a
    multi-mode ket, exactly per total-photon-number sector.

    The generator K = log(o_matrix) is lifted to sum_jk K_jk a_j^dag a_k,
    which conserves total photon number, so the unitary is evaluated as a
    block matrix exponential per sector. Sectors whose occupation patterns
    would exceed the per-mode cutoff are only approximately unitary.
    """
    modes = ket.ndim
    dim = ket.shape[0]
    kgen = scipy.linalg.logm(o_matrix)
    if np.max(np.abs(kgen.imag)) > 1e-12:
        raise ValueError("mixer must be a proper rotation (real log required)")
    kgen = kgen.real

    by_total: dict[int, list[tuple[int, ...]]] = {}
    for idx in np.ndindex(*ket.shape):
        by_total.setdefault(sum(idx), []).append(idx)

    out = np.zeros_like(ket)
    for total, members in by_total.items():
        pos = {m: i for i, m in enumerate(members)}
        size = len(members)
        gen = np.zeros((size, size), dtype=float)
        for col, occ in enumerate(members):
            for j in range(modes):
                for k in range(modes):
                    if kgen[j, k] == 0.0 or occ[k] == 0:
                        continue
                    target = list(occ)
                    target[k] -= 1
                    target[j] += 1
                    if target[j] >= dim:
                        continue
                    amp = kgen[j, k] * (
                        occ[k] if j == k else math.sqrt(occ[k] * (occ[j] + 1))
                    )
                    gen[pos[tuple(target)], col] += amp
        block = scipy.linalg.expm(gen)
        amps = np.array([ket[m] for m in members])
        new_amps = block @ amps
        for i, m in enumerate(members):
            out[m] = new_amps[i]
    return out


def _squeezed_triple_ket(r: float, n_max: int) -> np.ndarray:
    """Symmetric three-mode squeezed vacuum via its pair-creation normal
    form exp(a_dag^T M a_dag / 2)|000> with M = tanh(r) (2J/3 - I).

    This is the state produced by feeding one imaginary-quadrature-squeezed
    and two real-quadrature-squeezed vacua (equal degree r) into the
    symmetric orthogonal tritter; the series gives exact amplitudes for all
    indices inside the cutoff because pair creation only raises photon
    numbers.
    """
    t = math.tanh(r)
    m_mat = t * (2.0 * np.ones((3, 3)) / 3.0 - np.eye(3))
    dim = n_max + 1
    term = np.zeros((dim, dim, dim), dtype=complex)
    term[0, 0, 0] = 1.0
    ket = term.copy()
    sqrt_n = np.sqrt(np.arange(dim + 1))

    def raise_pair(v: np.ndarray, j: int, k: int) -> np.ndarray:
        out = np.zeros_like(v)
        if j == k:
            sl_src = [slice(None)] * 3
            sl_dst = [slice(None)] * 3
            sl_src[j] = slice(0, dim - 2)
            sl_dst[j] = slice(2, dim)
            factors = sqrt_n[1:dim - 1] * sqrt_n[2:dim]
            shape = [1, 1, 1]
            shape[j] = dim - 2
            out[tuple(sl_dst)] = v[tuple(sl_src)] * factors.reshape(shape)
            return out
        sl_src = [slice(None)] * 3
        sl_dst = [slice(None)] * 3
        sl_src[j] = slice(0, dim - 1)
        sl_dst[j] = slice(1, dim)
        sl_src[k] = slice(0, dim - 1)
        sl_dst[k] = slice(1, dim)
        shape_j = [1, 1, 1]
        shape_j[j] = dim - 1
        shape_k = [1, 1, 1]
        shape_k[k] = dim - 1
        out[tuple(sl_dst)] = (
            v[tuple(sl_src)]
            * sqrt_n[1:dim].reshape(shape_j)
            * sqrt_n[1:dim].reshape(shape_k)
        )
        return out

    order = 1
    while True:
        nxt = np.zeros_like(term)
        for j in range(3):
            for k in range(3):
                if m_mat[j, k] != 0.0:
                    nxt += m_mat[j, k] * raise_pair(term, j, k)
        term = nxt / (2.0 * order)
        norm = np.linalg.norm(term)
        if norm == 0.0 or norm < 1e-18 * np.linalg.norm(ket):
            break
        ket += term
        order += 1
        if order > 4 * dim:
            break
    return ket


def build_state(spec, n_max: int | None = None) -> FockState:
    """Normalized three-mode state of the given family in the truncated basis.

    Raises :class:`FockCutoffError` when the neglected population exceeds
    ``NEGLECTED_POPULATION_TOL``.
    """
    from .states import GhzEcs, SinglePhotonW, SqueezedVacuum3

    if n_max is None:
        n_max = default_cutoff(spec)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = n_max + 1

    if isinstance(spec, SinglePhotonW):
        ket = np.zeros((dim, dim, dim), dtype=complex)
        c_bc = math.sqrt((1.0 - spec.p / 3.0) / 2.0)
        ket[1, 0, 0] = math.sqrt(spec.p / 3.0)
        ket[0, 1, 0] = c_bc
        ket[0, 0, 1] = c_bc
        return FockState(n_max=n_max, modes=3, ket=ket)

    if isinstance(spec, GhzEcs):
        plus = coherent_ket(spec.zeta, n_max)
        minus = coherent_ket(-spec.zeta, n_max)
        ket = (
            np.einsum("a,b,c->abc", plus, plus, plus)
            - np.einsum("a,b,c->abc", minus, minus, minus)
        )
        exact_sq = 2.0 - 2.0 * math.exp(-6.0 * spec.zeta**2)
        got_sq = float(np.vdot(ket, ket).real)
        neglected = 1.0 - got_sq / exact_sq
        if neglected > NEGLECTED_POPULATION_TOL:
            raise FockCutoffError(
                f"cutoff {n_max} leaves population {neglected:.2e} outside the basis"
            )
        return FockState(n_max=n_max, modes=3, ket=ket / math.sqrt(got_sq))

    if isinstance(spec, SqueezedVacuum3):
        ket = _squeezed_triple_ket(spec.r, n_max)
        t = math.tanh(spec.r)
        exact_sq = (1.0 - t * t) ** -1.5
        got_sq = float(np.vdot(ket, ket).real)
        neglected = 1.0 - got_sq / exact_sq
        if neglected > NEGLECTED_POPULATION_TOL:
            raise FockCutoffError(
                f"cutoff {n_max} leaves population {neglected:.2e} outside the basis"
            )
        return FockState(n_max=n_max, modes=3, ket=ket / math.sqrt(got_sq))

    raise TypeError(f"not a state spec: {spec!r}")


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------


def correlator(state: FockState, *ops: np.ndarray) -> float:
    """Tr[rho (op_1 x ... x op_k)] for one operator per mode."""
    if len(ops) != state.modes:
        raise ValueError(f"need {state.modes} operators, got {len(ops)}")
    dim = state.dim
    for op in ops:
        if op.shape != (dim, dim):
            raise ValueError(f"operator shape {op.shape} does not match dim {dim}")
    if state.ket is not None:
        vec = state.ket
        for axis, op in enumerate(ops):
            vec = np.moveaxis(np.tensordot(op, vec, axes=([1], [axis])), 0, axis)
        return complex(np.vdot(state.ket, vec)).real
    big = ops[0]
    for op in ops[1:]:
        big = np.kron(big, op)
    return complex(np.trace(state.rho @ big)).real


def partial_trace(state: FockState, mode: int) -> FockState:
    """Trace out one mode; the result is carried as a density matrix."""
    if not 0 <= mode < state.modes:
        raise ValueError(f"mode {mode} out of range for {state.modes} modes")
    dim = state.dim
    keep = [m for m in range(state.modes) if m != mode]
    if state.ket is not None:
        psi = np.moveaxis(state.ket, mode, -1)
        flat = psi.reshape(dim ** len(keep), dim)
        rho = flat @ flat.conj().T
        return FockState(n_max=state.n_max, modes=len(keep), rho=rho)
    shape = (dim,) * (2 * state.modes)
    rho_t = state.rho.reshape(shape)
    rho_t = np.trace(rho_t, axis1=mode, axis2=state.modes + mode)
    side = dim ** len(keep)
    return FockState(n_max=state.n_max, modes=len(keep), rho=rho_t.reshape(side, side))


def _displaced_weights(state: FockState, points, s: float) -> float:
    """<psi| prod_j Pi(point_j; s) |psi> via displaced diagonal weights."""
    dim = state.dim
    q = (s + 1.0) / (s - 1.0)
    weights = np.power(q, np.arange(dim), dtype=float)
    vec = state.ket
    for axis, a in enumerate(points):
        d_dag = displacement_matrix(a, state.n_max).conj().T
        vec = np.moveaxis(np.tensordot(d_dag, vec, axes=([1], [axis])), 0, axis)
    probs = np.abs(vec) ** 2
    for axis in range(state.modes):
        shape = [1] * state.modes
        shape[axis] = dim
        probs = probs * weights.reshape(shape)
    return float(np.sum(probs))


def w3_trace(state: FockState, point, s: float) -> float:
    """Oracle value of the three-mode quasiprobability by trace."""
    if s > 0.0:
        raise ValueError("s must be <= 0")
    pts = _as_points(point, 3)
    pref = (2.0 / (math.pi * (1.0 - s))) ** 3
    if state.ket is not None:
        return pref * _displaced_weights(state, pts, s)
    ops = [pi_operator(a, s, state.n_max) for a in pts]
    return pref * correlator(state, *ops)


def w2_trace(state: FockState, point, s: float) -> float:
    """Oracle value of a two-mode quasiprobability (state must be 2-mode)."""
    if state.modes != 2:
        raise ValueError("w2_trace needs a two-mode state")
    pts = _as_points(point, 2)
    pref = (2.0 / (math.pi * (1.0 - s))) ** 2
    ops = [pi_operator(a, s, state.n_max) for a in pts]
    return pref * correlator(state, *ops)


def w1_trace(state: FockState, a: complex, s: float) -> float:
    if state.modes != 1:
        raise ValueError("w1_trace needs a one-mode state")
    pref = 2.0 / (math.pi * (1.0 - s))
    return pref * correlator(state, pi_operator(a, s, state.n_max))


def _as_points(point, k: int):
    if hasattr(point, "coords"):
        c = point.coords()
        return [complex(c[2 * i], c[2 * i + 1]) for i in range(k)]
    pts = [complex(z) for z in point]
    if len(pts) != k:
        raise ValueError(f"expected {k} phase-space points, got {len(pts)}")
    return pts


# ---------------------------------------------------------------------------
# Detector-loss model
# ---------------------------------------------------------------------------


def binomial_loss_kraus(eta: float, n_max: int) -> list[np.ndarray]:
    """Kraus operators of the pure-loss channel with transmittance ``eta``."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    dim = n_max + 1
    ops = []
    for k in range(dim):
        vals = np.array(
            [
                math.sqrt(math.comb(i + k, k) * eta**i * (1.0 - eta) ** k)
                for i in range(dim - k)
            ]
        )
        ops.append(np.diag(vals, k).astype(complex))
    return ops


def lossy_observable(op: np.ndarray, eta: float) -> np.ndarray:
    """Heisenberg-picture observable seen through a lossy detector,
    sum_k K_k^dag op K_k."""
    n_max = op.shape[0] - 1
    out = np.zeros_like(op)
    for k_op in binomial_loss_kraus(eta, n_max):
        out += k_op.conj().T @ op @ k_op
    return out
