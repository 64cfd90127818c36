"""Closed-form QFI expressions and the phase-matching condition.

All functions take scalar moments, never states: port A is arbitrary with
mean photon number nbar_a and second moment a2 = <a^2>, port B carries a
fixed photon-number parity (even or odd), which is what removes the odd
moments and leaves

    F = 2 nbar_a nbar_b + nbar_a + nbar_b - 2 Re(conj(a2) b2).

F is maximized when Arg(a2) - Arg(b2) = pi (the phase-matching condition),
giving F_m = 2 nbar_a nbar_b + nbar_a + nbar_b + 2 |a2||b2|.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

PMC_TOL = 1e-9


@dataclass(frozen=True)
class AnalyticInputs:
    """Scalar moments feeding the closed forms; variances only for unbalanced use."""

    nbar_a: float
    nbar_b: float
    a2: complex
    b2: complex
    var_na: float | None = None
    var_nb: float | None = None

    def __post_init__(self):
        if self.nbar_a < 0 or self.nbar_b < 0:
            raise ValueError("mean photon numbers must be nonnegative")
        for label, nbar, m2 in (("a2", self.nbar_a, self.a2), ("b2", self.nbar_b, self.b2)):
            if abs(m2) > math.sqrt(nbar * (nbar + 1.0)) + 1e-6:
                warnings.warn(f"|{label}| = {abs(m2):.6g} exceeds sqrt(nbar(nbar+1)) sanity bound")


def wrap_angle(delta: float) -> float:
    """Map an angle difference into (-pi, pi]."""
    w = math.remainder(delta, 2.0 * math.pi)
    return math.pi if w == -math.pi else w


@dataclass(frozen=True)
class PhaseMatchCheck:
    residual: float | None   # distance of Arg(a2) - Arg(b2) from +-pi, in [0, pi]
    satisfied: bool
    vacuous: bool


def phase_match_check(a2: complex, b2: complex, tol: float = PMC_TOL) -> PhaseMatchCheck:
    """Phase-matching verdict; vacuous when either second moment vanishes."""
    if abs(a2) == 0 or abs(b2) == 0:
        return PhaseMatchCheck(None, True, True)
    delta = math.atan2(a2.imag, a2.real) - math.atan2(b2.imag, b2.real)
    residual = math.pi - abs(wrap_angle(delta))
    return PhaseMatchCheck(residual, residual <= tol, False)


def qfi_even_odd(inp: AnalyticInputs) -> float:
    """QFI of a balanced interferometer, arbitrary port A x definite-parity port B."""
    cross = (inp.a2.conjugate() * inp.b2).real
    return 2.0 * inp.nbar_a * inp.nbar_b + inp.nbar_a + inp.nbar_b - 2.0 * cross


def qfi_phase_matched(inp: AnalyticInputs) -> float:
    """Maximum of qfi_even_odd over the relative phase of the second moments."""
    return 2.0 * inp.nbar_a * inp.nbar_b + inp.nbar_a + inp.nbar_b + 2.0 * abs(inp.a2) * abs(inp.b2)


# ---------------------------------------------------------------------------
# unbalanced interferometer


def jz_variance_product(var_na: float, var_nb: float) -> float:
    """Var(Jz) of a product state, (Var(n_A) + Var(n_B)) / 4."""
    return 0.25 * (var_na + var_nb)


def qfi_unbalanced(tau: float, var_jz: float, var_jy: float) -> float:
    """F = 4 cos^2(tau) Var(Jz) + 4 sin^2(tau) Var(Jy) for parity-definite port B."""
    c, s = math.cos(tau), math.sin(tau)
    return 4.0 * c * c * var_jz + 4.0 * s * s * var_jy


# ---------------------------------------------------------------------------
# closed-form moments of the library state families


def coherent_moments(beta: complex) -> tuple[float, complex]:
    return abs(beta) ** 2, beta * beta


def even_cat_moments(alpha: complex) -> tuple[float, complex]:
    # eigenstate of b^2: <b^2> = alpha^2 exactly, nbar = |alpha|^2 tanh|alpha|^2
    x = abs(alpha) ** 2
    return x * math.tanh(x), alpha * alpha


def odd_cat_moments(alpha: complex) -> tuple[float, complex]:
    x = abs(alpha) ** 2
    if x == 0:
        raise ValueError("odd cat is undefined at alpha = 0")
    return x / math.tanh(x), alpha * alpha


def squeezed_moments(xi: complex) -> tuple[float, complex]:
    r = abs(xi)
    if r == 0:
        return 0.0, 0j
    phase = xi / r
    return math.sinh(r) ** 2, -phase * math.sinh(r) * math.cosh(r)


def fock_moments(n: int) -> tuple[float, complex]:
    return float(n), 0j


# ---------------------------------------------------------------------------
# worked examples: matched QFI in terms of mean photon numbers


def cat_coherent_matched_qfi(nbar_a: float, nbar_b: float) -> float:
    """Coherent x even-cat matched QFI in the large-cat limit (tanh -> 1):
    F_m = 4 nbar_a nbar_b + nbar_a + nbar_b, bounded by N^2 + N with equality
    at nbar_a = nbar_b."""
    return 4.0 * nbar_a * nbar_b + nbar_a + nbar_b


def squeezed_coherent_matched_qfi(nbar_a: float, nbar_b: float) -> float:
    """Coherent x squeezed-vacuum matched QFI,
    F_m = 2 nbar_a nbar_b + nbar_a + nbar_b + 2 nbar_a sqrt(nbar_b^2 + nbar_b)."""
    return (
        2.0 * nbar_a * nbar_b
        + nbar_a
        + nbar_b
        + 2.0 * nbar_a * math.sqrt(nbar_b * nbar_b + nbar_b)
    )


def squeezed_super_heisenberg_span(n_total: float, points: int = 100001) -> float:
    """Length (in photons) of the nbar_a segment with F_m > N^2 at fixed total N."""
    na = np.linspace(0.0, n_total, points)
    nb = n_total - na
    f = 2.0 * na * nb + n_total + 2.0 * na * np.sqrt(nb * nb + nb)
    frac = np.count_nonzero(f > n_total * n_total) / points
    return float(frac * n_total)


# ---------------------------------------------------------------------------
# photon losses for the coherent x even-cat pair


@dataclass(frozen=True)
class LossParams:
    """Coherent |i alpha e^{i phi}> in port A, even cat (amplitude alpha) in port B,
    equal transmission T on both arms before the interferometer."""

    alpha: complex
    phi: float
    transmission: float

    def __post_init__(self):
        if not 0.0 <= self.transmission <= 1.0:
            raise ValueError("transmission must lie in [0, 1]")

    @property
    def reflection(self) -> float:
        return 1.0 - self.transmission

    @property
    def x(self) -> float:
        return abs(self.alpha) ** 2


def _cat_norm_sq(x: float) -> float:
    return 1.0 / (2.0 + 2.0 * math.exp(-2.0 * x))


def lossy_qfi_closed_form(p: LossParams) -> float:
    """Exact lossy QFI of the matched-magnitude coherent x even-cat pair.

    Survival amplitudes p_r = e^{-2|alpha|^2 R}, p_t = e^{-2|alpha|^2 T}
    control how much cat coherence outlives the loss.
    """
    x, t = p.x, p.transmission
    r = p.reflection
    n2 = _cat_norm_sq(x)
    pr = math.exp(-2.0 * x * r)
    pt = math.exp(-2.0 * x * t)
    surv = 1.0 - pr * pr
    g = 1.0 - 4.0 * n2 * n2 * surv
    c, s = math.cos(p.phi), math.sin(p.phi)
    return (
        4.0 * t * x * (n2 + t * x * (2.0 * n2 - 1.0))
        + 4.0 * t * t * x * x * g * c * c
        - 16.0 * t * t * n2 * n2 * x * x * surv * pt * pt * s * s
    )


def lossy_qfi_matched(p: LossParams) -> float:
    """Closed form at the matched phase (phi = 0):
    F = T N + 2 T^2 N nbar_a [1 - 2 N_cat^2 (1 - p_r^2)], N the input total."""
    x, t = p.x, p.transmission
    n2 = _cat_norm_sq(x)
    pr = math.exp(-2.0 * x * p.reflection)
    n_total = 4.0 * n2 * x  # = x (1 + tanh x), exact
    return t * n_total + 2.0 * t * t * n_total * x * (1.0 - 2.0 * n2 * (1.0 - pr * pr))


def lossy_qfi_small_loss(nbar_a: float, n_total: float, reflection: float) -> float:
    """First order in R: F = N + 2 N nbar_a - [1 + 4 nbar_a (N + 1)] N R."""
    return (
        n_total
        + 2.0 * n_total * nbar_a
        - (1.0 + 4.0 * nbar_a * (n_total + 1.0)) * n_total * reflection
    )


def critical_reflection(nbar_a: float, n_total: float) -> float:
    """Reflection where the small-loss QFI crosses shot noise N;
    tends to 1/(2N) for large N at fixed nbar_a/N."""
    return 2.0 * nbar_a / (1.0 + 4.0 * nbar_a * (n_total + 1.0))
