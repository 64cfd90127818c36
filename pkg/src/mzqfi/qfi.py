"""Quantum Fisher information of e^{i theta G} families by spectral decomposition.

For rho = sum_j p_j |phi_j><phi_j| and a Hermitian generator G,

    F = 4 sum_{j in supp} p_j <phi_j|G^2|phi_j>
        - sum_{j,k in supp} 8 p_j p_k / (p_j + p_k) |<phi_j|G|phi_k>|^2,

which reduces to 4 Var(G) on pure states. The symmetric logarithmic
derivative in the eigenbasis is L_jk = 2 i (p_j - p_k) G_jk / (p_j + p_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import TwoModeOperator, TwoModeState

SUPPORT_REL_CUTOFF = 1e-12
PAIR_CUTOFF = 1e-12
PSD_REJECT = -1e-8
_HERM_TOL = 1e-10


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending, clipped at 0) and eigenvectors of a density matrix."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    support_rank: int


@dataclass(frozen=True)
class QfiResult:
    value: float
    term1: float
    term2: float
    support_rank: int
    support_cutoff: float


def _as_matrix(gen: TwoModeOperator | np.ndarray) -> np.ndarray:
    mat = gen.matrix if isinstance(gen, TwoModeOperator) else np.asarray(gen, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(mat))))
    if np.max(np.abs(mat - mat.conj().T)) > _HERM_TOL * scale:
        raise ValueError("generator must be Hermitian")
    return mat


def _as_density(state: TwoModeState | np.ndarray) -> np.ndarray:
    if isinstance(state, TwoModeState):
        return state.density()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr


def spectral(rho: np.ndarray, support_rel: float = SUPPORT_REL_CUTOFF) -> SpectralDecomposition:
    """Descending eigensystem of rho; rejects PSD violations beyond -1e-8."""
    w, v = np.linalg.eigh(rho)
    if w[0] < PSD_REJECT * max(1.0, float(w[-1])):
        raise ValueError(f"density matrix eigenvalue {w[0]:.3e} below PSD tolerance")
    order = np.argsort(w)[::-1]
    w = np.clip(w[order], 0.0, None)
    v = v[:, order]
    rank = int(np.count_nonzero(w >= support_rel * w[0])) if w[0] > 0 else 0
    return SpectralDecomposition(w, v, rank)


def qfi_pure(state: TwoModeState | np.ndarray, gen: TwoModeOperator | np.ndarray) -> QfiResult:
    """F = 4 (<G^2> - <G>^2) for a pure state."""
    g = _as_matrix(gen)
    if isinstance(state, TwoModeState):
        if state.kind != "pure":
            raise ValueError("qfi_pure needs a pure state")
        psi = state.data
    else:
        psi = np.asarray(state, dtype=complex)
    gp = g @ psi
    term1 = 4.0 * float(np.real(np.vdot(gp, gp)))
    mean = float(np.real(np.vdot(psi, gp)))
    term2 = 4.0 * mean * mean
    return QfiResult(term1 - term2, term1, term2, 1, 0.0)


def qfi_mixed(
    state: TwoModeState | np.ndarray,
    gen: TwoModeOperator | np.ndarray,
    support_rel: float = SUPPORT_REL_CUTOFF,
    pair_cutoff: float = PAIR_CUTOFF,
) -> QfiResult:
    """Spectral-formula QFI for an arbitrary (possibly mixed) state."""
    g = _as_matrix(gen)
    rho = _as_density(state)
    dec = spectral(rho, support_rel)
    m = dec.support_rank
    if m == 0:
        raise ValueError("state has empty support")
    p = dec.eigenvalues[:m]
    v = dec.eigenvectors[:, :m]
    gv = g @ v
    term1 = 4.0 * float(np.dot(p, np.real(np.einsum("ij,ij->j", gv.conj(), gv))))
    gmat = v.conj().T @ gv
    psum = p[:, None] + p[None, :]
    weights = np.where(psum >= pair_cutoff, 8.0 * p[:, None] * p[None, :] / np.where(psum > 0, psum, 1.0), 0.0)
    term2 = float(np.sum(weights * np.abs(gmat) ** 2))
    cutoff = support_rel * float(dec.eigenvalues[0])
    return QfiResult(term1 - term2, term1, term2, m, cutoff)


def sld(
    state: TwoModeState | np.ndarray,
    gen: TwoModeOperator | np.ndarray,
    support_rel: float = SUPPORT_REL_CUTOFF,
    pair_cutoff: float = PAIR_CUTOFF,
) -> np.ndarray:
    """Symmetric logarithmic derivative for d rho/d theta = i [rho, G].

    Built over every eigenvector pair with p_j + p_k above the cutoff, so
    Tr(rho L) = 0 and Tr(rho L^2) reproduces qfi_mixed exactly.
    """
    g = _as_matrix(gen)
    rho = _as_density(state)
    dec = spectral(rho, support_rel)
    p = dec.eigenvalues
    v = dec.eigenvectors
    gmat = v.conj().T @ g @ v
    psum = p[:, None] + p[None, :]
    pdiff = p[:, None] - p[None, :]
    coeff = np.where(psum >= pair_cutoff, 2.0 * pdiff / np.where(psum > 0, psum, 1.0), 0.0)
    l_eig = 1j * coeff * gmat
    return v @ l_eig @ v.conj().T
