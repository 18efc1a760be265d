import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from whithamstab import DimensionError, DomainError, WaveParams, alpha, solve_wave
from whithamstab.bloch import (
    KreinSign,
    assemble_bloch,
    eigenpairs,
    growth_scan,
    krein_form,
    krein_signature,
    omega,
    overall_growth,
    spectrum,
)

from conftest import cached_wave


def zero_wave(W, kappa=1.0):
    return solve_wave(W, WaveParams(kappa, 0.0, 0.0), modes=16)


def matched_error(x, y):
    cost = np.abs(np.subtract.outer(x, y))
    r, c = linear_sum_assignment(cost)
    return cost[r, c].max()


def test_omega_values(W):
    for n in (-1, 0, 1):
        assert omega(W, 1.0, n) == 0.0
    assert omega(W, 1.0, 2) == pytest.approx(2 * (alpha(W, 1.0) - alpha(W, 2.0)))
    assert omega(W, 1.0, 2) > 0
    assert omega(W, 1.0, 3) > omega(W, 1.0, 2)
    val = omega(W, 1.0, 1, 0.5)
    assert val == pytest.approx(1.5 * (alpha(W, 1.0) - alpha(W, 1.5)), rel=1e-15)
    assert val == pytest.approx(0.1438, abs=1e-4)
    np.testing.assert_allclose(omega(W, 1.0, np.arange(-3, 4), 0.2),
                               [omega(W, 1.0, n, 0.2) for n in range(-3, 4)])


def test_zero_wave_matrix_is_diagonal(W):
    bm = assemble_bloch(W, zero_wave(W), 0.3, 16)
    expected = 1j * omega(W, 1.0, bm.modes, 0.3)
    np.testing.assert_allclose(np.diag(bm.L), expected, atol=1e-15)
    off = bm.L - np.diag(np.diag(bm.L))
    assert np.all(off == 0)


@pytest.mark.parametrize("tau", [0.0, 0.1, 0.3, 0.5, -0.2])
def test_zero_wave_spectrum(W, tau):
    s = spectrum(assemble_bloch(W, zero_wave(W), tau, 32))
    assert matched_error(s.eigenvalues, 1j * omega(W, 1.0, np.arange(-32, 33), tau)) <= 1e-10
    assert s.max_growth <= 1e-10


@pytest.mark.parametrize("kappa,a,tau", [(1.0, 0.02, 0.0), (2.0, 0.04, 0.05), (0.5, 0.02, 0.3)])
def test_factorization_and_symmetry(kappa, a, tau, W):
    bm = assemble_bloch(W, cached_wave(kappa, a), tau, 40)
    assert np.max(np.abs(bm.L - bm.D[:, None] * bm.Hsym)) <= 1e-13
    np.testing.assert_array_equal(bm.Hsym, bm.Hsym.T)
    assert np.isrealobj(bm.Hsym)
    assert spectrum(bm).symmetry_defect <= 1e-8


def test_spectrum_sorted_by_modulus(W):
    s = spectrum(assemble_bloch(W, cached_wave(1.0, 0.02), 0.1, 32))
    assert np.all(np.diff(np.abs(s.eigenvalues)) >= -1e-12)
    np.testing.assert_array_equal(s.near_origin, s.eigenvalues[:3])


@pytest.mark.parametrize("kappa,tau", [(1.0, 0.05), (2.0, 0.03), (0.5, 0.2)])
def test_truncation_convergence(W, kappa, tau):
    wave = cached_wave(kappa, 0.05)
    e32 = spectrum(assemble_bloch(W, wave, tau, 32)).near_origin
    e64 = spectrum(assemble_bloch(W, wave, tau, 64)).near_origin
    assert matched_error(e32, e64) <= 1e-8


def test_perturbation_is_order_a(W):
    tau = 0.2
    bm0 = assemble_bloch(W, zero_wave(W), tau, 32)
    base = np.diag(bm0.L)

    def hausdorff(x, y):
        d = np.abs(np.subtract.outer(x, y))
        return max(d.min(axis=1).max(), d.min(axis=0).max())

    h, bounds = [], []
    for a in (0.02, 0.01):
        bm = assemble_bloch(W, cached_wave(1.0, a), tau, 32)
        h.append(hausdorff(spectrum(bm).eigenvalues, base))
        bounds.append(np.linalg.norm(bm.L - bm0.L, 2))
    # Bauer-Fike with a diagonal (normal) reference matrix
    assert h[0] <= bounds[0] and h[1] <= bounds[1]
    assert bounds[0] / bounds[1] == pytest.approx(2.0, rel=0.05)
    # the shift is at least first order; the diagonal is only touched at O(a^2)
    assert h[0] / h[1] >= 1.9


def test_dimension_and_domain_errors(W):
    wave = cached_wave(1.0, 0.02)
    with pytest.raises(DimensionError):
        assemble_bloch(W, wave, 0.0, 8)
    with pytest.raises(DomainError):
        assemble_bloch(W, wave, 0.7, 32)
    with pytest.raises(DomainError):
        growth_scan(W, wave, [-0.1], N=32)


def test_krein_zero_wave_positive(W):
    bm = assemble_bloch(W, zero_wave(W), 0.3, 16)
    mu, _ = eigenpairs(bm)
    target = 1j * omega(W, 1.0, 2, 0.3)
    idx = int(np.argmin(np.abs(mu - target)))
    assert krein_signature(bm, idx) is KreinSign.POSITIVE


def test_krein_lower_bound(W):
    bm = assemble_bloch(W, zero_wave(W), 0.3, 16)
    mu, _ = eigenpairs(bm)
    bound = alpha(W, 1.0) - alpha(W, 1.5) - 1e-10
    for n in range(-16, 17):
        if abs(n) < 2:
            continue
        idx = int(np.argmin(np.abs(mu - 1j * omega(W, 1.0, n, 0.3))))
        assert krein_form(bm, idx) >= bound


def test_krein_near_origin_contract(W):
    bm = assemble_bloch(W, cached_wave(1.0, 0.02), 0.3, 32)
    signs = [krein_signature(bm, i) for i in range(3)]
    assert all(isinstance(s, KreinSign) for s in signs)


def test_krein_rejects_unstable_eigenvalue(W):
    bm = assemble_bloch(W, cached_wave(2.0, 0.02), 0.04, 32)
    mu, _ = eigenpairs(bm)
    idx = int(np.argmax(mu.real))
    assert mu[idx].real > 1e-6
    with pytest.raises(DomainError):
        krein_signature(bm, idx)


def test_krein_rejects_multiple_eigenvalue(W):
    # tau = 0: 0 is a triple eigenvalue of the zero-wave matrix
    bm = assemble_bloch(W, zero_wave(W), 0.0, 8)
    with pytest.raises(DomainError):
        krein_signature(bm, 0)


def test_zero_wave_growth(W):
    slices = growth_scan(W, zero_wave(W), np.linspace(0, 0.5, 11), N=16)
    assert abs(overall_growth(slices)) <= 1e-10


def test_unstable_side_growth_is_long_wave(W):
    wave = cached_wave(2.0, 0.02)
    taus = np.linspace(0, 0.25, 101)
    slices = growth_scan(W, wave, taus, N=64, workers=4)
    growth = np.array([s.max_growth for s in slices])
    assert growth.max() > 1e-5
    assert taus[np.argmax(growth)] < 0.1
    assert np.all(growth[taus >= 0.2] <= 1e-6)
    short = growth_scan(W, wave, np.linspace(0.2, 0.5, 31), N=64)
    assert overall_growth(short) <= 1e-6


def test_threads_do_not_change_results(W):
    wave = cached_wave(1.5, 0.02)
    taus = np.linspace(0, 0.1, 9)
    serial = growth_scan(W, wave, taus, N=32)
    pooled = growth_scan(W, wave, taus, N=32, workers=3)
    for s, p in zip(serial, pooled):
        assert s.tau == p.tau
        np.testing.assert_array_equal(s.eigenvalues, p.eigenvalues)


def test_empty_scan_is_nan(W):
    assert np.isnan(overall_growth([]))
