"""Mach-Zehnder phase evolution on the truncated two-mode space.

The balanced interferometer (50:50 splitters, tau = pi/2) imprints the phase
through exp(-i theta Jy); an unbalanced splitter pair tilts the generator to
G(tau) = Jz cos(tau) - Jy sin(tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import TwoModeOperator, TwoModeState, schwinger

TAU_BALANCED = math.pi / 2


@dataclass(frozen=True)
class InterferometerSpec:
    """Splitter angle tau (normalized into [0, 2pi)) and accumulated phase theta."""

    tau: float = TAU_BALANCED
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.tau) and math.isfinite(self.theta)):
            raise ValueError("tau and theta must be finite")
        object.__setattr__(self, "tau", self.tau % (2.0 * math.pi))


def mz_generator(spec: InterferometerSpec, dims: tuple[int, int]) -> TwoModeOperator:
    """Phase generator G = Jz cos(tau) - Jy sin(tau); tau = pi/2 gives -Jy."""
    _, jy, jz = schwinger(*dims)
    mat = math.cos(spec.tau) * jz.matrix - math.sin(spec.tau) * jy.matrix
    return TwoModeOperator(mat, dims, f"jz*cos({spec.tau:.6g})-jy*sin({spec.tau:.6g})")


def expi_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(i t H) for Hermitian H via eigendecomposition (exactly unitary spectrum)."""
    w, q = np.linalg.eigh(h)
    return (q * np.exp(1j * t * w)) @ q.conj().T


def evolve(state: TwoModeState, spec: InterferometerSpec) -> TwoModeState:
    """Apply exp(i theta G(tau)) to a pure or mixed two-mode state."""
    gen = mz_generator(spec, state.dims)
    u = expi_hermitian(gen.matrix, spec.theta)
    if state.kind == "pure":
        return TwoModeState(u @ state.data, state.dims)
    return TwoModeState(u @ state.data @ u.conj().T, state.dims)
