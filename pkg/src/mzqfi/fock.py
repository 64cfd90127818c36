"""Truncated Fock-space states and operators for two bosonic modes.

Joint basis convention: index k = n_A * dim_B + n_B, so numpy.kron(A, B)
acts as A ⊗ B and mode A is the slow index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Max allowed |c|^2 mass on the top two levels of a library-built state.
LEAKAGE_THRESHOLD = 1e-8
NORM_TOL = 1e-10
DENSITY_TOL = 1e-10
_SQUEEZED_TAIL_TARGET = 1e-11
_MAX_AUTO_DIM = 4096


class TruncationError(ValueError):
    """A state does not fit (or converge within) the requested Fock cutoff."""


def auto_dim(nbar: float) -> int:
    """Cutoff heuristic for Poisson-tailed states with mean photon number nbar."""
    return math.ceil(nbar + 8.0 * math.sqrt(nbar + 1.0) + 10.0)


@dataclass(frozen=True)
class ModeState:
    """Pure single-mode state as Fock amplitudes c_0 .. c_{dim-1}, unit norm."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("amplitudes must form a nonempty 1-D array")
        if not np.all(np.isfinite(amps.view(float))):
            raise ValueError("non-finite amplitude")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def density(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())


@dataclass(frozen=True)
class ModeMoments:
    nbar: float
    a2: complex
    var_n: float


@dataclass(frozen=True)
class TwoModeOperator:
    """Dense Hermitian-or-not operator on the joint truncated space."""

    matrix: np.ndarray
    dims: tuple[int, int]
    label: str = ""

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        d = self.dims[0] * self.dims[1]
        if mat.shape != (d, d):
            raise ValueError(f"operator shape {mat.shape} does not match dims {self.dims}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


@dataclass(frozen=True)
class TwoModeState:
    """Pure vector or density matrix on the joint space, basis k = n_A*dim_B + n_B."""

    data: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        d = self.dims[0] * self.dims[1]
        if data.ndim == 1:
            if data.size != d:
                raise ValueError(f"vector length {data.size} does not match dims {self.dims}")
            nrm = float(np.linalg.norm(data))
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"state not normalized: |norm - 1| = {abs(nrm - 1.0):.3e}")
        elif data.ndim == 2:
            if data.shape != (d, d):
                raise ValueError(f"matrix shape {data.shape} does not match dims {self.dims}")
            if np.max(np.abs(data - data.conj().T)) > DENSITY_TOL:
                raise ValueError("density matrix not Hermitian within tolerance")
            tr = complex(np.trace(data))
            if abs(tr - 1.0) > DENSITY_TOL:
                raise ValueError(f"density matrix trace {tr:.12f} != 1")
            wmin = float(np.linalg.eigvalsh(data)[0])
            if wmin < -DENSITY_TOL:
                raise ValueError(f"density matrix has eigenvalue {wmin:.3e} < -{DENSITY_TOL}")
        else:
            raise ValueError("state data must be a vector or a square matrix")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def kind(self) -> str:
        return "pure" if self.data.ndim == 1 else "density"

    def density(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return np.asarray(self.data)


# ---------------------------------------------------------------------------
# single-mode constructors


def _leakage_gate(ideal_amps: np.ndarray, what: str) -> None:
    # checked on the infinite-space-normalized amplitudes, before renormalization
    leak = abs(ideal_amps[-1]) ** 2
    if ideal_amps.size >= 2:
        leak += abs(ideal_amps[-2]) ** 2
    if leak >= LEAKAGE_THRESHOLD:
        raise TruncationError(
            f"{what}: top-two occupation {leak:.3e} exceeds {LEAKAGE_THRESHOLD:.0e}, "
            "increase dim"
        )


def _finish(ideal_amps: np.ndarray, what: str) -> ModeState:
    _leakage_gate(ideal_amps, what)
    return ModeState(ideal_amps / np.linalg.norm(ideal_amps))


def _coherent_amps(alpha: complex, dim: int) -> np.ndarray:
    c = np.zeros(dim, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


def coherent(alpha: complex, dim: int | None = None) -> ModeState:
    """Coherent state |alpha>, c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!)."""
    if dim is None:
        dim = auto_dim(abs(alpha) ** 2)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _finish(_coherent_amps(alpha, dim), f"coherent({alpha})")


def _cat_amps(alpha: complex, dim: int, sign: int) -> np.ndarray:
    x = abs(alpha) ** 2
    if sign > 0:
        nsq = 1.0 / (2.0 + 2.0 * math.exp(-2.0 * x))
    else:
        nsq = 1.0 / (2.0 - 2.0 * math.exp(-2.0 * x))
    c = _coherent_amps(alpha, dim)
    out = np.zeros(dim, dtype=complex)
    start = 0 if sign > 0 else 1
    out[start::2] = 2.0 * math.sqrt(nsq) * c[start::2]
    return out


def even_cat(alpha: complex, dim: int | None = None) -> ModeState:
    """Even cat N(|alpha> + |-alpha>); odd Fock levels are exactly zero.

    Eigenstate of b^2 with eigenvalue alpha^2; mean photon number
    |alpha|^2 tanh|alpha|^2. alpha = 0 degenerates to vacuum.
    """
    if dim is None:
        dim = auto_dim(abs(alpha) ** 2)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return _finish(_cat_amps(alpha, dim, +1), f"even_cat({alpha})")


def odd_cat(alpha: complex, dim: int | None = None) -> ModeState:
    """Odd cat N(|alpha> - |-alpha>); even Fock levels are exactly zero.

    Undefined at alpha = 0 (the superposition vanishes). Mean photon number
    |alpha|^2 coth|alpha|^2.
    """
    if abs(alpha) == 0:
        raise ValueError("odd cat is undefined at alpha = 0")
    if dim is None:
        dim = auto_dim(abs(alpha) ** 2)
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return _finish(_cat_amps(alpha, dim, -1), f"odd_cat({alpha})")


def _squeezed_auto_dim(r: float) -> int:
    # geometric tails: walk |c_{2m}|^2 until the top-two ideal mass clears
    # a target below the leakage gate, so dim-doubling drift stays < 1e-8
    c_prev = 1.0 / math.sqrt(math.cosh(r))
    p_prev = c_prev * c_prev
    t = math.tanh(r)
    m = 1
    while True:
        c_cur = c_prev * t * math.sqrt((2 * m - 1) / (2 * m))
        p_cur = c_cur * c_cur
        if p_cur + p_prev < _SQUEEZED_TAIL_TARGET:
            return 2 * m + 1
        if 2 * m + 1 > _MAX_AUTO_DIM:
            raise TruncationError(f"squeezed_vacuum(r={r}): no convergence below dim {_MAX_AUTO_DIM}")
        c_prev, p_prev = c_cur, p_cur
        m += 1


def squeezed_vacuum(xi: complex, dim: int | None = None) -> ModeState:
    """Squeezed vacuum S(xi)|0>, xi = r e^{i phi}.

    c_{2m} = (-e^{i phi} tanh r)^m sqrt((2m)!)/(2^m m!) / sqrt(cosh r),
    odd levels exactly zero. Mean photon number sinh^2 r,
    <b^2> = -e^{i phi} sinh r cosh r.
    """
    r = abs(xi)
    if dim is None:
        dim = 8 if r == 0 else _squeezed_auto_dim(r)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    c = np.zeros(dim, dtype=complex)
    if r == 0:
        c[0] = 1.0
        return ModeState(c)
    phase = xi / r
    c[0] = 1.0 / math.sqrt(math.cosh(r))
    m = 1
    while 2 * m < dim:
        c[2 * m] = c[2 * m - 2] * (-phase * math.tanh(r)) * math.sqrt((2 * m - 1) / (2 * m))
        m += 1
    return _finish(c, f"squeezed_vacuum({xi})")


def fock_state(n: int, dim: int | None = None) -> ModeState:
    """Number state |n>; needs n < dim - 1 so one ladder step stays representable."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    n = int(n)
    if dim is None:
        dim = n + 4
    if n >= dim - 1:
        raise ValueError(f"fock_state({n}) does not fit dim {dim} (need n < dim - 1)")
    c = np.zeros(dim, dtype=complex)
    c[n] = 1.0
    return ModeState(c)


def mode_state(amps) -> ModeState:
    """Raw-amplitude constructor; normalizes but applies no leakage gate."""
    a = np.asarray(amps, dtype=complex)
    nrm = float(np.linalg.norm(a))
    if nrm == 0:
        raise ValueError("zero vector")
    return ModeState(a / nrm)


def parity_of(state: ModeState, tol: float = 0.0) -> str | None:
    """'even' / 'odd' when support sits on one photon-number parity, else None."""
    occ = np.abs(state.amps) > tol
    idx = np.nonzero(occ)[0]
    if idx.size == 0:
        return None
    if np.all(idx % 2 == 0):
        return "even"
    if np.all(idx % 2 == 1):
        return "odd"
    return None


# ---------------------------------------------------------------------------
# operators


def destroy(dim: int) -> np.ndarray:
    """Annihilation operator, a|n> = sqrt(n)|n-1>."""
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = math.sqrt(n)
    return a


def create(dim: int) -> np.ndarray:
    return destroy(dim).conj().T


def number_op(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = destroy(dim)
    return a, a.conj().T


def schwinger(dim_a: int, dim_b: int) -> tuple[TwoModeOperator, TwoModeOperator, TwoModeOperator]:
    """Schwinger pseudo-spin (Jx, Jy, Jz) on the joint truncated space.

    Jx = (a†b + ab†)/2, Jy = (a†b - ab†)/2i, Jz = (a†a - b†b)/2. The su(2)
    commutators hold exactly on columns whose photon numbers stay two levels
    below each cutoff.
    """
    kp = np.kron(create(dim_a), destroy(dim_b))  # a†b
    km = kp.conj().T
    jx = 0.5 * (kp + km)
    jy = (kp - km) / 2j
    jz = 0.5 * (np.kron(number_op(dim_a), np.eye(dim_b)) - np.kron(np.eye(dim_a), number_op(dim_b)))
    dims = (dim_a, dim_b)
    return (
        TwoModeOperator(jx, dims, "jx"),
        TwoModeOperator(jy, dims, "jy"),
        TwoModeOperator(jz, dims, "jz"),
    )


# ---------------------------------------------------------------------------
# composition, reduction, expectations


def tensor(state_a: ModeState | np.ndarray, state_b: ModeState | np.ndarray) -> TwoModeState:
    """A ⊗ B. ModeState inputs give a pure product; any density input gives a density."""
    if isinstance(state_a, ModeState) and isinstance(state_b, ModeState):
        return TwoModeState(np.kron(state_a.amps, state_b.amps), (state_a.dim, state_b.dim))
    rho_a = state_a.density() if isinstance(state_a, ModeState) else np.asarray(state_a, dtype=complex)
    rho_b = state_b.density() if isinstance(state_b, ModeState) else np.asarray(state_b, dtype=complex)
    for name, rho in (("A", rho_a), ("B", rho_b)):
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"mode {name}: density matrix must be square")
    return TwoModeState(np.kron(rho_a, rho_b), (rho_a.shape[0], rho_b.shape[0]))


def partial_trace(state: TwoModeState, keep: str) -> np.ndarray:
    """Reduced single-mode density matrix, keep = 'A' or 'B'."""
    da, db = state.dims
    if state.kind == "pure":
        psi = state.data.reshape(da, db)
        if keep == "A":
            return psi @ psi.conj().T
        if keep == "B":
            return psi.T @ psi.conj()
    else:
        rho = state.data.reshape(da, db, da, db)
        if keep == "A":
            return np.einsum("ijkj->ik", rho)
        if keep == "B":
            return np.einsum("ijil->jl", rho)
    raise ValueError("keep must be 'A' or 'B'")


def expect(op: TwoModeOperator | np.ndarray, state: TwoModeState | ModeState) -> complex:
    """<O> for a pure vector or a density matrix."""
    mat = op.matrix if isinstance(op, TwoModeOperator) else np.asarray(op, dtype=complex)
    if isinstance(state, ModeState):
        vec = state.amps
    elif state.kind == "pure":
        vec = state.data
    else:
        if mat.shape[0] != state.data.shape[0]:
            raise ValueError("operator/state dimension mismatch")
        return complex(np.einsum("ij,ji->", mat, state.data))
    if mat.shape[0] != vec.size:
        raise ValueError("operator/state dimension mismatch")
    return complex(np.vdot(vec, mat @ vec))


def mode_moments(state: ModeState | np.ndarray) -> ModeMoments:
    """nbar = <n>, a2 = <a^2> and Var(n) of a single-mode state (pure or density)."""
    if isinstance(state, ModeState):
        p = np.abs(state.amps) ** 2
        n = np.arange(state.dim)
        nbar = float(np.dot(n, p))
        var_n = float(np.dot(n * n, p)) - nbar * nbar
        c = state.amps
        m = np.arange(2, state.dim)
        a2 = complex(np.sum(c[:-2].conj() * np.sqrt(m * (m - 1.0)) * c[2:])) if state.dim > 2 else 0j
        return ModeMoments(nbar, a2, var_n)
    rho = np.asarray(state, dtype=complex)
    dim = rho.shape[0]
    n = np.arange(dim)
    diag = np.real(np.diag(rho))
    nbar = float(np.dot(n, diag))
    var_n = float(np.dot(n * n, diag)) - nbar * nbar
    a2_mat = destroy(dim) @ destroy(dim)
    a2 = complex(np.einsum("ij,ji->", a2_mat, rho))
    return ModeMoments(nbar, a2, var_n)
