"""End-to-end acceptance checks; each one reports a PASS/FAIL line in the summary."""

import time

import numpy as np
from scipy.optimize import linear_sum_assignment

from whithamstab import alpha, fkdv, lambda_index, scan_sign_changes
from whithamstab.bloch import assemble_bloch, eigenpairs, growth_scan, krein_form, omega, spectrum
from whithamstab.cli import main
from whithamstab.indices import gamma_curve, gamma_ilw, lambda_fkdv, lambda_ilw
from whithamstab.reduction import (
    basis,
    delta_tau0,
    pencil_closed_form,
    pencil_eigenvalues,
    pencil_numeric,
)
from whithamstab.stokes import WaveParams, asymptotic_wave, l2_distance, solve_wave

from conftest import cached_wave, record


def matched_error(x, y):
    cost = np.abs(np.subtract.outer(x, y))
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def test_criterion_01_critical_wavenumber(capsys):
    t0 = time.perf_counter()
    code = main(["critical", "--symbol", "whitham"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    root = float(body[1].split(",")[0])
    ok = code == 0 and len(body) == 2 and 1.145 <= root <= 1.147 and elapsed < 1.0
    record(1, ok, f"z_c={root:.10f} in {elapsed:.3f}s")
    assert ok


def test_criterion_02_asymptotic_limits(W):
    small = float(gamma_curve(W, 1e-3)) / 1e-6
    large = float(gamma_curve(W, 1e4))
    ok = 0.45 <= small <= 0.55 and -1.02 <= large <= -0.97
    record(2, ok, f"Gamma(1e-3)/1e-6={small:.6f}, Gamma(1e4)={large:.6f}")
    assert ok


def test_criterion_03_sign_pattern(W):
    left = gamma_curve(W, np.linspace(0.05, 1.14, 100))
    right = gamma_curve(W, np.linspace(1.16, 50, 100))
    brackets = scan_sign_changes(lambda k: gamma_curve(W, k), 0.01, 50, 5000, vectorized=True)
    ok = bool(np.all(left > 0) and np.all(right < 0) and len(brackets) == 1)
    record(3, ok, f"min left={left.min():.3g}, max right={right.max():.3g}, switches={len(brackets)}")
    assert ok


def test_criterion_04_fkdv():
    neg = [lambda_fkdv(s, 1.0) for s in (0.6, 0.9)]
    zero = lambda_fkdv(1.0, 1.0)
    pos = [lambda_fkdv(s, 1.0) for s in (1.5, 2.0)]
    worst = 0.0
    for s in (0.6, 0.9, 1.5, 2.0, 2.7):
        for k in (0.3, 1.0, 2.5):
            closed = lambda_fkdv(s, k)
            worst = max(worst, abs(lambda_index(fkdv(s), k) - closed) / abs(closed))
    hand = lambda_fkdv(2.0, 1.0)
    ok = all(v < 0 for v in neg) and abs(zero) <= 1e-14 and all(v > 0 for v in pos) \
        and worst <= 1e-10 and hand == 324.0
    record(4, ok, f"signs ok={all(v < 0 for v in neg) and all(v > 0 for v in pos)}, "
                  f"sigma=1 -> {zero:.1e}, generic rel err {worst:.1e}, Lambda(1;2)={hand:g}")
    assert ok


def test_criterion_05_ilw():
    z = np.linspace(0, 20, 1002)[1:-1]
    positive = all(gamma_ilw(x) > 0 for x in z)
    agree = all(
        np.sign(lambda_ilw(H, k)) == np.sign(gamma_ilw(k * H))
        for H in np.geomspace(0.1, 10, 10)
        for k in np.geomspace(0.1, 10, 10)
    )
    law = gamma_ilw(1e-2) / 1e-8
    ok = positive and agree and abs(law - 2.0) / 2.0 <= 1e-3
    record(5, ok, f"Gamma_ILW>0 on grid={positive}, sign agreement={agree}, Gamma_ILW(z)/z^4={law:.8f}")
    assert ok


def test_criterion_06_stokes_order(W):
    t0 = time.perf_counter()
    amps = np.array([0.04, 0.02, 0.01])
    dist = [
        l2_distance(solve_wave(W, WaveParams(1.0, a, 0.0), modes=64),
                    asymptotic_wave(W, WaveParams(1.0, a, 0.0)))
        for a in amps
    ]
    slope = float(np.polyfit(np.log(amps), np.log(dist), 1)[0])
    elapsed = time.perf_counter() - t0
    ok = slope >= 2.7 and elapsed < 10
    record(6, ok, f"log-log slope {slope:.3f} in {elapsed:.2f}s")
    assert ok


def test_criterion_07_unperturbed_exactness(W):
    zero = solve_wave(W, WaveParams(1.0, 0.0, 0.0), modes=32)
    worst = 0.0
    for tau in (0.0, 0.1, 0.3, 0.5):
        mu = spectrum(assemble_bloch(W, zero, tau, 32)).eigenvalues
        worst = max(worst, matched_error(mu, 1j * omega(W, 1.0, np.arange(-32, 33), tau)))
    ok = worst <= 1e-10
    record(7, ok, f"max |mu - i omega| = {worst:.2e}")
    assert ok


def test_criterion_08_kernel_structure(W):
    res = {}
    for a in (0.02, 0.01):
        bm = assemble_bloch(W, cached_wave(1.0, a), 0.0, 32)
        P = basis(W, 1.0, a).embed(32)
        L1, L2, L3 = (bm.L @ P[i] for i in range(3))
        res[a] = (np.linalg.norm(L1), np.linalg.norm(L2), np.linalg.norm(L3 + 2 * a * P[1]),
                  np.linalg.norm(L3 - 2 * a * P[1]))
    ratios = [res[0.02][i] / res[0.01][i] for i in range(4)]
    C = max(res[0.02][0], res[0.02][1]) / 0.02**2
    kernel_ok = all(3.5 <= r <= 4.5 for r in ratios[:2])
    # literal claim: L phi3 + 2a phi2 = O(a^2)
    lemma_ok = 3.5 <= ratios[2]
    ok = kernel_ok and lemma_ok
    record(8, ok, f"|L phi1|,|L phi2| ratios {ratios[0]:.2f},{ratios[1]:.2f} (C={C:.1f}); "
                  f"|L phi3 + 2a phi2| ratio {ratios[2]:.2f} ({res[0.02][2]:.3g} at a=0.02), "
                  f"opposite sign |L phi3 - 2a phi2| ratio {ratios[3]:.2f}")
    assert kernel_ok, "L phi1, L phi2 not O(a^2)"
    assert lemma_ok, "L phi3 = -2a phi2 + O(a^2) does not hold; residual is O(a)"


def test_criterion_09_oracle_equivalence(W):
    levels = [(0.05, 0.02), (0.025, 0.01), (0.0125, 0.005)]
    eig_err, b_err = [], []
    for kappa in (1.0, 2.0, 0.5):
        e_row, b_row = [], []
        for tau, a in levels:
            wave = cached_wave(kappa, a)
            near = spectrum(assemble_bloch(W, wave, tau, 64)).near_origin
            closed = pencil_closed_form(W, kappa, tau, a)
            e_row.append(matched_error(pencil_eigenvalues(closed), near))
            b_row.append(float(np.max(np.abs(pencil_numeric(W, wave, tau, N=64).B - closed.B))))
        eig_err.append(e_row)
        b_err.append(b_row)
    eig_ratio = np.array(eig_err)[:, :-1] / np.array(eig_err)[:, 1:]
    b_ratio = np.array(b_err)[:, :-1] / np.array(b_err)[:, 1:]
    ok = bool(np.all(eig_ratio >= 3.6) and np.all(b_ratio >= 3.6))
    record(9, ok, f"eigenvalue ratios min {eig_ratio.min():.2f}, B ratios min {b_ratio.min():.2f} "
                  f"(errors at kappa=1: {', '.join(f'{e:.2e}' for e in eig_err[0])})")
    assert ok


def test_criterion_10_verdict_agreement(W):
    t0 = time.perf_counter()
    small = np.linspace(0.001, 0.099, 99)
    full = np.linspace(0.0, 0.5, 201)
    unstable = {}
    for kappa in (2.0, 1.5):
        slices = growth_scan(W, cached_wave(kappa, 0.02), small, N=64, workers=4)
        unstable[kappa] = max(s.max_growth for s in slices)
    stable = {}
    for kappa in (0.5, 1.0):
        slices = growth_scan(W, cached_wave(kappa, 0.02), full, N=64, workers=4)
        stable[kappa] = max(s.near_origin_growth for s in slices)
    elapsed = time.perf_counter() - t0
    ok = all(g > 0 for g in unstable.values()) and all(g <= 1e-6 for g in stable.values()) \
        and elapsed < 120
    record(10, ok, "growth " + ", ".join(f"k={k:g}: {g:.3e}" for k, g in {**unstable, **stable}.items())
           + f" in {elapsed:.1f}s")
    assert ok


def test_criterion_11_krein_positivity(W):
    zero = solve_wave(W, WaveParams(1.0, 0.0, 0.0), modes=32)
    bm = assemble_bloch(W, zero, 0.3, 32)
    mu, _ = eigenpairs(bm)
    bound = alpha(W, 1.0) - alpha(W, 1.5) - 1e-10
    forms = []
    for n in range(-32, 33):
        if abs(n) >= 2:
            forms.append(krein_form(bm, int(np.argmin(np.abs(mu - 1j * omega(W, 1.0, n, 0.3))))))
    ok = min(forms) >= bound
    record(11, ok, f"min form {min(forms):.6f} vs bound {bound + 1e-10:.6f}")
    assert ok


def test_criterion_12_delta_product(W):
    worst = 0.0
    for kappa in (0.5, 1.0, 2.0):
        for tau in (0.05, 0.2, 0.5):
            det_route = pencil_closed_form(W, kappa, tau, 0.0).discriminant
            prod = delta_tau0(W, kappa, tau)
            worst = max(worst, abs(det_route - prod) / abs(prod))
    ok = worst <= 1e-12
    record(12, ok, f"max relative gap {worst:.2e}")
    assert ok

