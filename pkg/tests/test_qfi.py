import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import interior_mode_state, interior_rank3
from mzqfi import fock, qfi
from mzqfi.interferometer import InterferometerSpec, mz_generator
from mzqfi.qfi import qfi_mixed, qfi_pure, sld, spectral


def reference_qfi(rho, g, pair_cutoff=1e-12):
    """Independent oracle: F = 2 sum_{jk} (p_j - p_k)^2 / (p_j + p_k) |G_jk|^2."""
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, 0.0, None)
    gmat = v.conj().T @ g @ v
    total = 0.0
    for j in range(len(w)):
        for k in range(len(w)):
            s = w[j] + w[k]
            if s < pair_cutoff:
                continue
            total += 2.0 * (w[j] - w[k]) ** 2 / s * abs(gmat[j, k]) ** 2
    return total


def balanced_gen(dims):
    return mz_generator(InterferometerSpec(), dims)


def test_pure_known_value():
    # coherent(2i) x fock(3): 2*4*3 + 4 + 3 = 31
    st = fock.tensor(fock.coherent(2j), fock.fock_state(3))
    res = qfi_pure(st, balanced_gen(st.dims))
    assert abs(res.value - 31.0) / 31.0 < 1e-9


def test_pure_is_four_variance():
    rng = np.random.default_rng(21)
    st = fock.tensor(interior_mode_state(rng, 8, 5), interior_mode_state(rng, 8, 5))
    g = balanced_gen(st.dims).matrix
    psi = st.data
    var = np.real(np.vdot(psi, g @ g @ psi)) - np.real(np.vdot(psi, g @ psi)) ** 2
    res = qfi_pure(st, g)
    assert abs(res.value - 4.0 * var) < 1e-10


def test_mixed_reduces_to_pure_on_rank_one():
    rng = np.random.default_rng(22)
    st = fock.tensor(interior_mode_state(rng, 7, 4), interior_mode_state(rng, 7, 4))
    g = balanced_gen(st.dims)
    dense = fock.TwoModeState(st.density(), st.dims)
    v_pure = qfi_pure(st, g).value
    res = qfi_mixed(dense, g)
    assert res.support_rank == 1
    assert abs(res.value - v_pure) < 1e-8 * max(1.0, v_pure)


def test_mixed_accepts_pure_state_directly():
    rng = np.random.default_rng(23)
    st = fock.tensor(interior_mode_state(rng, 6, 4), interior_mode_state(rng, 6, 4))
    g = balanced_gen(st.dims)
    assert abs(qfi_mixed(st, g).value - qfi_pure(st, g).value) < 1e-9


def test_maximally_mixed_has_zero_qfi():
    d = 5
    rho = np.eye(d * d, dtype=complex) / (d * d)
    g = balanced_gen((d, d))
    res = qfi_mixed(rho, g)
    assert abs(res.value) < 1e-10
    assert res.support_rank == d * d


def test_term_decomposition():
    rng = np.random.default_rng(24)
    rho_a = interior_rank3(rng, 6, 4)
    st = fock.tensor(rho_a, interior_mode_state(rng, 6, 4))
    res = qfi_mixed(st, balanced_gen(st.dims))
    assert abs(res.value - (res.term1 - res.term2)) < 1e-12
    assert res.term1 >= 0 and res.term2 >= 0
    assert res.support_rank == 3


def test_against_reference_formula():
    rng = np.random.default_rng(25)
    for _ in range(5):
        rho_a = interior_rank3(rng, 6, 4)
        st = fock.tensor(rho_a, interior_mode_state(rng, 6, 4))
        g = balanced_gen(st.dims)
        got = qfi_mixed(st, g).value
        want = reference_qfi(st.data, g.matrix)
        assert abs(got - want) < 1e-8 * max(1.0, want)


def test_sld_identities():
    rng = np.random.default_rng(26)
    rho_a = interior_rank3(rng, 6, 4)
    st = fock.tensor(rho_a, interior_mode_state(rng, 6, 4))
    g = balanced_gen(st.dims)
    rho = st.data
    ell = sld(st, g)
    assert np.max(np.abs(ell - ell.conj().T)) < 1e-10
    # d rho / d theta = i [rho, G] = (rho L + L rho) / 2
    drho = 1j * (rho @ g.matrix - g.matrix @ rho)
    assert np.max(np.abs((rho @ ell + ell @ rho) / 2 - drho)) < 1e-8
    assert abs(np.trace(rho @ ell)) < 1e-10
    f_from_sld = float(np.real(np.trace(rho @ ell @ ell)))
    assert abs(f_from_sld - qfi_mixed(st, g).value) < 1e-8


def test_sld_pure_state():
    rng = np.random.default_rng(27)
    st = fock.tensor(interior_mode_state(rng, 6, 4), interior_mode_state(rng, 6, 4))
    g = balanced_gen(st.dims)
    rho = st.density()
    ell = sld(st, g)
    want = 2j * (rho @ g.matrix - g.matrix @ rho)
    assert np.max(np.abs(ell - want)) < 1e-8


def test_spectral_ordering_and_rank():
    rng = np.random.default_rng(28)
    rho = interior_rank3(rng, 8, 5)
    dec = spectral(rho)
    assert np.all(np.diff(dec.eigenvalues) <= 1e-15)
    assert np.all(dec.eigenvalues >= 0)
    assert dec.support_rank == 3
    assert_allclose(dec.eigenvalues[:3], [0.5, 0.3, 0.2], atol=1e-10)


def test_support_cutoff_drops_negligible_weight():
    eps = 1e-15
    rho = np.diag([1.0 - eps, eps, 0.0, 0.0]).astype(complex)
    dec = spectral(rho)
    assert dec.support_rank == 1


def test_non_hermitian_generator_rejected():
    st = fock.tensor(fock.fock_state(0, 3), fock.fock_state(0, 3))
    bad = np.zeros((9, 9), dtype=complex)
    bad[0, 1] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        qfi_mixed(st, bad)
    with pytest.raises(ValueError, match="Hermitian"):
        qfi_pure(st, bad)


def test_psd_violation_rejected():
    rho = np.diag([0.7, 0.5, -0.2]).astype(complex)
    g = np.diag([0.0, 1.0, 2.0]).astype(complex)
    with pytest.raises(ValueError, match="PSD"):
        qfi_mixed(rho, g)


def test_qfi_pure_rejects_density_state():
    rng = np.random.default_rng(29)
    rho_a = interior_rank3(rng, 5, 3)
    st = fock.tensor(rho_a, interior_mode_state(rng, 5, 3))
    with pytest.raises(ValueError, match="pure"):
        qfi_pure(st, balanced_gen(st.dims))


def test_classical_mixture_below_average():
    # convexity: QFI of a mixture never exceeds the average of the components
    rng = np.random.default_rng(30)
    a1 = interior_mode_state(rng, 7, 4)
    a2 = interior_mode_state(rng, 7, 4)
    b = interior_mode_state(rng, 7, 4)
    g = balanced_gen((7, 7))
    rho = 0.6 * fock.tensor(a1, b).density() + 0.4 * fock.tensor(a2, b).density()
    mixed_val = qfi_mixed(rho, g).value
    avg = 0.6 * qfi_pure(fock.tensor(a1, b), g).value + 0.4 * qfi_pure(fock.tensor(a2, b), g).value
    assert mixed_val <= avg + 1e-9


def test_qfi_invariant_under_global_phase_of_generator_shift():
    # adding c * identity to G leaves the QFI unchanged
    rng = np.random.default_rng(31)
    rho_a = interior_rank3(rng, 6, 4)
    st = fock.tensor(rho_a, interior_mode_state(rng, 6, 4))
    g = balanced_gen(st.dims).matrix
    base = qfi_mixed(st, g).value
    shifted = qfi_mixed(st, g + 2.5 * np.eye(g.shape[0])).value
    assert abs(base - shifted) < 1e-8 * max(1.0, base)
