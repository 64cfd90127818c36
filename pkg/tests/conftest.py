import numpy as np

from mzqfi import fock


def interior_mode_state(rng, dim: int, support: int) -> fock.ModeState:
    """Random pure state with exact zeros above the given photon number."""
    v = np.zeros(dim, dtype=complex)
    v[: support + 1] = rng.normal(size=support + 1) + 1j * rng.normal(size=support + 1)
    return fock.mode_state(v)


def interior_parity_state(rng, dim: int, support: int, parity: str) -> fock.ModeState:
    v = np.zeros(dim, dtype=complex)
    start = 0 if parity == "even" else 1
    idx = np.arange(start, support + 1, 2)
    v[idx] = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    return fock.mode_state(v)


def interior_rank3(rng, dim: int, support: int) -> np.ndarray:
    """Rank-3 density matrix supported on the first support+1 levels."""
    m = np.zeros((dim, 3), dtype=complex)
    m[: support + 1] = rng.normal(size=(support + 1, 3)) + 1j * rng.normal(size=(support + 1, 3))
    q, _ = np.linalg.qr(m)
    p = np.array([0.5, 0.3, 0.2])
    return (q * p) @ q.conj().T
