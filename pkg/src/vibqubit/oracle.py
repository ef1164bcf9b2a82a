"""Brute-force ground truth: truncated Hamiltonians evolved by matrix exponential.

Everything here deliberately avoids the closed-form coefficient algebra of
:mod:`vibqubit.dynamics`.  The Hamiltonian is assembled from ladder-operator
matrix elements, states are propagated either by a generic sparse matrix
exponential or by exact rotation of the two-level blocks the Hamiltonian
decomposes into, and reduced densities come from explicit partial traces.
Agreement of the two propagators, and of this module with the analytic one,
is what the verification suite is built on.

Truncation convention: callers that want boundary leakage represented
(rather than clipped) should allocate one extra Fock level beyond the grid
their coherent weights populate; :func:`two_subsystem_oracle` does this
internally.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import expm_multiply

from .composite import BellSpec, TwoQubitDensity
from .dynamics import ModeParams, QubitAmplitudes
from .errors import ParameterError, ResourceError
from .fock import CoherentAmplitudes, coherent_amplitudes

_STATE_NORM_TOL = 1e-12
_PROPAGATOR_MATCH_TOL = 1e-10
#: upper bound on transient allocations of the two-subsystem oracle,
#: as a multiple of one joint state vector
_JOINT_WORKSPACE_FACTOR = 4
DEFAULT_MEMORY_BUDGET = 4 << 30


@dataclass(frozen=True)
class TruncatedOperator:
    """Sparse Hermitian Hamiltonian on qubit (x) mode-a (x) mode-b.

    Basis ordering: qubit index slowest (0 = excited, 1 = ground), then
    mode-a, then mode-b; see :func:`basis_index`.  ``rate`` is the sideband
    coupling ``eta * kappa``; the level counts are kept so the closed-form
    block propagator knows the pairing structure.
    """

    dimension: int
    matrix: csr_matrix
    n_max_a: int
    n_max_b: int
    rate: float


def basis_index(q: int, m: int, n: int, n_max_a: int, n_max_b: int) -> int:
    """Flat index of ``|q, m, n>`` (q = 0 for excited, 1 for ground)."""
    if q not in (0, 1) or not (0 <= m <= n_max_a) or not (0 <= n <= n_max_b):
        raise ParameterError(f"basis labels ({q}, {m}, {n}) outside the truncated space")
    n_b = n_max_b + 1
    return (q * (n_max_a + 1) + m) * n_b + n


def build_red_sideband(p: ModeParams, n_max_a: int, n_max_b: int) -> TruncatedOperator:
    """Assemble ``H / hbar = eta*kappa*(sigma+ a b + sigma- a^dag b^dag)``.

    Ladder elements ``a |m> = sqrt(m) |m-1>`` on each truncated mode give
    the selection rule ``|e, m, n> <-> |g, m+1, n+1>`` with coupling
    ``eta*kappa*sqrt((m+1)(n+1))``; every other element vanishes.  Both
    triangles are emitted so the matrix is Hermitian by construction.
    """
    if n_max_a < 4 or n_max_b < 4:
        raise ParameterError("truncation must keep at least levels 0..4 in each mode")
    rate = p.rabi_rate
    rows, cols, vals = [], [], []
    for m in range(n_max_a):
        for n in range(n_max_b):
            i = basis_index(0, m, n, n_max_a, n_max_b)
            j = basis_index(1, m + 1, n + 1, n_max_a, n_max_b)
            g = rate * math.sqrt((m + 1.0) * (n + 1.0))
            rows += [i, j]
            cols += [j, i]
            vals += [g, g]
    dim = 2 * (n_max_a + 1) * (n_max_b + 1)
    matrix = csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
    )
    return TruncatedOperator(
        dimension=dim, matrix=matrix, n_max_a=n_max_a, n_max_b=n_max_b, rate=rate
    )


def build_jaynes_cummings(coupling: float, n_max: int) -> csr_matrix:
    """Resonant single-mode Hamiltonian ``g (sigma+ b + sigma- b^dag)``.

    Basis: qubit slowest (0 = excited), then the mode index, dimension
    ``2 (n_max + 1)``.  Used as the independent route for the
    stationary-qubit baseline.
    """
    levels = n_max + 1
    rows, cols, vals = [], [], []
    for n in range(n_max):
        i = n  # |e, n>
        j = levels + n + 1  # |g, n+1>
        g = coupling * math.sqrt(n + 1.0)
        rows += [i, j]
        cols += [j, i]
        vals += [g, g]
    return csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(2 * levels, 2 * levels))


def coherent_product_state(
    q0: QubitAmplitudes,
    wa: CoherentAmplitudes,
    wb: CoherentAmplitudes,
    n_max_a: int | None = None,
    n_max_b: int | None = None,
    normalize: bool = True,
) -> np.ndarray:
    """State vector of ``(c_e |e> + c_g |g>) (x) |alpha> (x) |beta>``.

    The target space may allocate more levels than the weights populate
    (the extras start empty).  By default the truncated product is
    renormalized to unit norm so it satisfies the propagator contract; pass
    ``normalize=False`` to keep the raw truncation deficit.
    """
    n_max_a = wa.n_max if n_max_a is None else n_max_a
    n_max_b = wb.n_max if n_max_b is None else n_max_b
    if n_max_a < wa.n_max or n_max_b < wb.n_max:
        raise ParameterError("target space is smaller than the populated weight grids")
    grid = np.zeros((n_max_a + 1, n_max_b + 1))
    grid[: wa.n_max + 1, : wb.n_max + 1] = np.outer(wa.weights, wb.weights)
    psi = np.concatenate([q0.c_e * grid.reshape(-1), q0.c_g * grid.reshape(-1)])
    if normalize:
        psi /= np.linalg.norm(psi)
    return psi


def _propagate_expm(matrix: csr_matrix, state0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Rows of ``exp(-i H t_k) state0`` via scaling-and-squaring Taylor steps."""
    times = np.asarray(times, dtype=float)
    generator = (-1j) * matrix
    if times.size == 1:
        t = float(times[0])
        if t == 0.0:
            return state0[None, :].copy()
        return expm_multiply(generator * t, state0)[None, :]
    steps = np.diff(times)
    if np.allclose(steps, steps[0], rtol=1e-12, atol=0.0):
        return expm_multiply(
            generator,
            state0,
            start=float(times[0]),
            stop=float(times[-1]),
            num=times.size,
            endpoint=True,
        )
    return np.stack([_propagate_expm(matrix, state0, np.array([t]))[0] for t in times])


def _propagate_blocks(op: TruncatedOperator, state0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Exact per-block rotation of the pairs ``|e, m, n> <-> |g, m+1, n+1>``.

    States outside any pair (ground components touching an empty mode,
    excited components at the truncation boundary) are stationary under the
    truncated Hamiltonian and pass through unchanged.
    """
    n_a, n_b = op.n_max_a + 1, op.n_max_b + 1
    freq = op.rate * np.sqrt(
        np.outer(np.arange(1, n_a, dtype=float), np.arange(1, n_b, dtype=float))
    )
    out = np.empty((len(times), op.dimension), dtype=complex)
    for k, t in enumerate(np.asarray(times, dtype=float)):
        psi = state0.astype(complex).reshape(2, n_a, n_b).copy()
        theta = freq * t
        cos_t, sin_t = np.cos(theta), np.sin(theta)
        e_blk = psi[0, : n_a - 1, : n_b - 1].copy()
        g_blk = psi[1, 1:, 1:].copy()
        psi[0, : n_a - 1, : n_b - 1] = cos_t * e_blk - 1j * sin_t * g_blk
        psi[1, 1:, 1:] = -1j * sin_t * e_blk + cos_t * g_blk
        out[k] = psi.reshape(-1)
    return out


def evolve_exact(
    state0: np.ndarray, h: TruncatedOperator, t: float, method: str = "expm"
) -> np.ndarray:
    """Propagate a normalized state vector to time ``t``.

    ``method`` selects the generic sparse matrix exponential ("expm"), the
    closed-form block rotation ("block"), or "both", which runs the two and
    raises if they disagree beyond 1e-10 (returning the expm result).
    """
    return evolve_exact_series(state0, h, np.array([float(t)]), method=method)[0]


def evolve_exact_series(
    state0: np.ndarray, h: TruncatedOperator, times: np.ndarray, method: str = "expm"
) -> np.ndarray:
    """Propagate to every time in ``times``; returns shape (len(times), dim).

    Uniform grids are handed to the batched matrix-exponential stepper in
    one call, which reuses the operator-norm bookkeeping across steps.
    """
    state0 = np.asarray(state0, dtype=complex)
    if state0.shape != (h.dimension,):
        raise ParameterError(
            f"state has dimension {state0.shape}, operator expects ({h.dimension},)"
        )
    if abs(np.linalg.norm(state0) - 1.0) > _STATE_NORM_TOL:
        raise ParameterError("initial state is not normalized within 1e-12")
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(times < 0):
        raise ParameterError("times must be non-empty and >= 0")

    if method == "expm":
        return _propagate_expm(h.matrix, state0, times)
    if method == "block":
        return _propagate_blocks(h, state0, times)
    if method == "both":
        via_expm = _propagate_expm(h.matrix, state0, times)
        via_blocks = _propagate_blocks(h, state0, times)
        worst = float(np.max(np.abs(via_expm - via_blocks)))
        if worst > _PROPAGATOR_MATCH_TOL:
            raise RuntimeError(
                f"propagators disagree by {worst:.3e} (tolerance {_PROPAGATOR_MATCH_TOL})"
            )
        return via_expm
    raise ParameterError(f"unknown propagator method {method!r}")


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Squared overlap ``|<u|v>|^2 / (|u|^2 |v|^2)``; insensitive to phase and scale."""
    u = np.asarray(u).reshape(-1)
    v = np.asarray(v).reshape(-1)
    if u.shape != v.shape:
        raise ParameterError(f"dimension mismatch: {u.shape} vs {v.shape}")
    uu = float(np.real(np.vdot(u, u)))
    vv = float(np.real(np.vdot(v, v)))
    if uu == 0.0 or vv == 0.0:
        raise ParameterError("fidelity of a zero vector is undefined")
    return float(abs(np.vdot(u, v)) ** 2 / (uu * vv))


def two_subsystem_oracle(
    spec: BellSpec,
    p: ModeParams,
    n_max: int,
    t: float,
    method: str = "expm",
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> TwoQubitDensity:
    """Evolve two identical subsystems jointly and trace out all four modes.

    Builds the global pure state (Bell-weighted superposition of the two
    qubit branches, each tensored with coherent modes truncated at
    ``n_max``), evolves each subsystem factor with its own matrix
    exponential (the subsystem Hamiltonians commute), forms the joint
    vector, and partial-traces the four modes away.  One extra Fock level
    per mode keeps boundary leakage inside the space.

    Raises
    ------
    ResourceError
        If the joint state vector (with workspace) would exceed
        ``memory_budget`` bytes; the required size is reported.
    """
    n_levels_max = n_max + 1  # one extra level beyond the populated grid
    dim_sub = 2 * (n_levels_max + 1) ** 2
    required = 16 * dim_sub * dim_sub * _JOINT_WORKSPACE_FACTOR
    if required > memory_budget:
        raise ResourceError(
            f"joint state of two subsystems needs ~{required} bytes "
            f"(budget {memory_budget})",
            required_bytes=required,
            budget_bytes=memory_budget,
        )

    wa = coherent_amplitudes(p.alpha_mag, n_max)
    wb = coherent_amplitudes(p.beta_mag, n_max)
    h = build_red_sideband(p, n_levels_max, n_levels_max)
    phi = {}
    for label, q0 in (("e", QubitAmplitudes(1.0, 0.0)), ("g", QubitAmplitudes(0.0, 1.0))):
        psi0 = coherent_product_state(q0, wa, wb, n_levels_max, n_levels_max)
        phi[label] = evolve_exact(psi0, h, t, method=method)

    if spec.kind == "phi":
        joint = spec.mu * np.kron(phi["e"], phi["g"]) + spec.upsilon * np.kron(phi["g"], phi["e"])
    else:
        joint = spec.mu * np.kron(phi["e"], phi["e"]) + spec.upsilon * np.kron(phi["g"], phi["g"])

    n_lv = n_levels_max + 1
    blocks = joint.reshape(2, n_lv, n_lv, 2, n_lv, n_lv)
    qubits_first = blocks.transpose(0, 3, 1, 2, 4, 5).reshape(4, -1)
    rho = qubits_first @ qubits_first.conj().T
    return TwoQubitDensity(matrix=rho, time=float(t))
