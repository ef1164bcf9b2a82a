"""Scalar observables: l1 coherence and photon-phonon correlation moments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import GlobalState
from .errors import ParameterError

_HERMITIAN_TOL = 1e-9
#: below this product of mean occupations the normalized second-order
#: coherence has no meaningful value
G2_DENOMINATOR_FLOOR = 1e-15


@dataclass(frozen=True)
class CorrelationSample:
    """Mode occupation moments of one state, plus derived correlations.

    ``cross_corr`` is ``<n_a n_b> - <n_a><n_b>``: positive when the
    vibrational and cavity modes are correlated, negative when
    anti-correlated.  ``g2`` is the normalized intermode second-order
    coherence ``<n_a n_b> / (<n_a><n_b>)``, ``None`` whenever the
    denominator vanishes.
    """

    time: float
    n_a_mean: float
    n_b_mean: float
    joint_mean: float
    cross_corr: float
    g2: float | None


def l1_coherence(rho: np.ndarray) -> float:
    """Sum of the moduli of all off-diagonal density-matrix elements.

    Works on any square Hermitian matrix (used here on 2x2 single-qubit and
    4x4 two-qubit densities).  For a qubit this equals ``2 |rho_eg|``.

    Raises
    ------
    ParameterError
        If the input is not square or not Hermitian within 1e-9.
    """
    rho = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > _HERMITIAN_TOL:
        raise ParameterError("matrix is not Hermitian within 1e-9")
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def mode_moments(s: GlobalState) -> CorrelationSample:
    """Occupation moments of both modes evaluated on the pure global state.

    Because the two number operators act on distinct modes and the state is
    pure, ``<n_a n_b>`` is a plain weighted sum over the coefficient grids;
    no mode density matrix is ever required.
    """
    prob = np.abs(s.e_branch) ** 2 + np.abs(s.g_branch) ** 2
    total = float(np.sum(prob))
    if total <= 0.0:
        raise ParameterError("cannot take moments of a zero state")
    # normalize by <psi|psi>: truncation leaves the norm slightly below 1,
    # and raw sums would leak that tail into the cross correlation
    prob = prob / total
    m = np.arange(prob.shape[0], dtype=float)[:, None]
    n = np.arange(prob.shape[1], dtype=float)[None, :]
    n_a = float(np.sum(m * prob))
    n_b = float(np.sum(n * prob))
    joint = float(np.sum(m * n * prob))
    denom = n_a * n_b
    g2 = joint / denom if denom > G2_DENOMINATOR_FLOOR else None
    return CorrelationSample(
        time=s.time,
        n_a_mean=n_a,
        n_b_mean=n_b,
        joint_mean=joint,
        cross_corr=joint - denom,
        g2=g2,
    )
