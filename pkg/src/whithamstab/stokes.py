"""Small-amplitude 2*pi-periodic traveling waves.

Profiles are even cosine series ``w(z) = sum_n w_hat[n] cos(n z)`` solving

    M_k w - c w + w^2 = (1 - c)^2 b,

where ``M_k`` multiplies ``cos(n z)`` by ``alpha(k n)``. The amplitude
parameter ``a`` is pinned by fixing the ``cos z`` coefficient to ``a``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .dispersion import DispersionSymbol, alpha
from .errors import ConvergenceError, DomainError, ResonanceError

__all__ = [
    "WaveParams",
    "TravelingWave",
    "AMPLITUDE_CAP",
    "check_resonance",
    "asymptotic_wave",
    "solve_wave",
    "galilean_shift",
    "evaluate_wave",
    "wave_residual",
    "residual_coefficients",
    "l2_distance",
    "cos_to_exp",
    "cos_product",
]

log = logging.getLogger(__name__)

AMPLITUDE_CAP = 0.2
AMPLITUDE_WARN = 0.05
MAX_NEWTON = 50
MAX_MODES = 1024
TAIL_TOL = 1e-12


@dataclass(frozen=True)
class WaveParams:
    kappa: float
    a: float = 0.0
    b: float = 0.0
    cap: float = AMPLITUDE_CAP

    def __post_init__(self):
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise DomainError(f"kappa must be positive, got {self.kappa}")
        for name in ("a", "b"):
            value = getattr(self, name)
            if not math.isfinite(value) or abs(value) > self.cap:
                raise DomainError(f"|{name}|={abs(value):g} exceeds the smallness cap {self.cap:g}")
            if abs(value) > AMPLITUDE_WARN:
                warnings.warn(
                    f"|{name}|={abs(value):g} > {AMPLITUDE_WARN}: outside the small-amplitude regime",
                    stacklevel=3,
                )


@dataclass(frozen=True)
class TravelingWave:
    kappa: float
    cos_coeffs: np.ndarray
    speed: float
    params: WaveParams
    residual_norm: float
    symbol: Optional[DispersionSymbol] = None
    iterations: int = 0

    @property
    def modes(self) -> int:
        """Highest cosine mode N carried by the profile."""
        return len(self.cos_coeffs) - 1

    def __call__(self, z):
        return evaluate_wave(self, z)


def cos_to_exp(cos_coeffs) -> np.ndarray:
    """Cosine coefficients (0..N) to exponential ones (modes -N..N)."""
    c = np.asarray(cos_coeffs, dtype=float)
    half = 0.5 * c[1:]
    return np.concatenate([half[::-1], c[:1], half])


def _exp_to_cos(e) -> np.ndarray:
    m = len(e) // 2
    out = np.empty(m + 1)
    out[0] = e[m]
    out[1:] = e[m + 1:] + e[m - 1::-1]
    return out


def cos_product(c1, c2) -> np.ndarray:
    """Cosine coefficients of the product of two cosine series (no truncation)."""
    return _exp_to_cos(np.convolve(cos_to_exp(c1), cos_to_exp(c2)))


def check_resonance(sym: DispersionSymbol, kappa: float, n_max: int, tol: float = 1e-8):
    """Raise if ``alpha(k) - alpha(n k)`` nearly vanishes for some 2 <= n <= n_max."""
    n = np.arange(2, max(n_max, 2) + 1)
    gaps = np.abs(alpha(sym, kappa) - alpha(sym, kappa * n))
    i = int(np.argmin(gaps))
    if gaps[i] <= tol:
        raise ResonanceError(
            f"harmonic resonance at kappa={kappa:.17g}: |alpha(k)-alpha({n[i]}k)|={gaps[i]:.3g}"
        )


def residual_coefficients(sym: DispersionSymbol, coeffs, speed: float, kappa: float, b: float):
    """Cosine coefficients (0..2N) of M_k w - c w + w^2 - (1-c)^2 b."""
    w = np.asarray(coeffs, dtype=float)
    n = np.arange(len(w))
    out = cos_product(w, w)
    out[: len(w)] += (alpha(sym, kappa * n) - speed) * w
    out[0] -= (1.0 - speed) ** 2 * b
    return out


def _l2_norm_cos(c) -> float:
    # normalized L^2_{2pi}: <cos nz, cos nz> = 1/2 for n >= 1
    c = np.asarray(c)
    return float(np.sqrt(c[0] ** 2 + 0.5 * np.sum(c[1:] ** 2)))


def l2_distance(w1: TravelingWave, w2: TravelingWave) -> float:
    """Normalized L^2_{2pi} distance between two profiles."""
    n = max(len(w1.cos_coeffs), len(w2.cos_coeffs))
    d = np.zeros(n)
    d[: len(w1.cos_coeffs)] += w1.cos_coeffs
    d[: len(w2.cos_coeffs)] -= w2.cos_coeffs
    return _l2_norm_cos(d)


def wave_residual(sym: DispersionSymbol, wave: TravelingWave) -> float:
    """L^2_{2pi} norm of the traveling-wave equation residual.

    The quadratic term is formed by exact convolution, so modes up to 2N
    are included.
    """
    r = residual_coefficients(sym, wave.cos_coeffs, wave.speed, wave.kappa, wave.params.b)
    return _l2_norm_cos(r)


def evaluate_wave(wave: TravelingWave, z):
    """Pointwise value of the cosine series."""
    z = np.asarray(z, dtype=float)
    n = np.arange(len(wave.cos_coeffs))
    out = np.cos(np.multiply.outer(z, n)) @ wave.cos_coeffs
    return float(out) if out.ndim == 0 else out


def _background(alpha_k: float, b: float):
    """Second-order constant state and speed at the bifurcation point."""
    beta = 1.0 - alpha_k
    w0 = b * beta - 3.0 * b**2 * beta
    c0 = alpha_k + 2.0 * b * beta - 6.0 * b**2 * beta
    return w0, c0


def asymptotic_wave(sym: DispersionSymbol, p: WaveParams, modes: int = 2) -> TravelingWave:
    """Second-order Stokes expansion of the wave and its speed."""
    k, a, b = p.kappa, p.a, p.b
    a1 = alpha(sym, k)
    a2 = alpha(sym, 2.0 * k)
    if abs(a1 - a2) < 1e-12:
        raise ResonanceError(f"second-harmonic resonance at kappa={k:.17g}")
    if abs(a1 - 1.0) < 1e-12:
        raise ResonanceError(f"alpha(kappa) = 1 at kappa={k:.17g}")
    w0, c0 = _background(a1, b)
    coeffs = np.zeros(max(modes, 2) + 1)
    coeffs[0] = w0 + 0.5 * a**2 / (a1 - 1.0)
    coeffs[1] = a
    coeffs[2] = 0.5 * a**2 / (a1 - a2)
    speed = c0 + a**2 * (1.0 / (a1 - 1.0) + 0.5 / (a1 - a2))
    res = _l2_norm_cos(residual_coefficients(sym, coeffs, speed, k, b))
    return TravelingWave(k, coeffs, float(speed), p, res, sym, 0)


def _constant_state(sym, p: WaveParams, modes: int) -> TravelingWave:
    # a = 0: w = v constant with c = alpha(k) + 2v, the point where cos z
    # enters the kernel; v(1 - c + v) = (1 - c)^2 b closes the system
    beta = 1.0 - alpha(sym, p.kappa)
    v = 0.5 * beta * (1.0 - 1.0 / math.sqrt(1.0 + 4.0 * p.b))
    coeffs = np.zeros(modes + 1)
    coeffs[0] = v
    speed = alpha(sym, p.kappa) + 2.0 * v
    res = _l2_norm_cos(residual_coefficients(sym, coeffs, speed, p.kappa, p.b))
    return TravelingWave(p.kappa, coeffs, speed, p, res, sym, 0)


def _newton(sym, p: WaveParams, modes: int, tol: float) -> TravelingWave:
    k, a, b = p.kappa, p.a, p.b
    guess = asymptotic_wave(sym, p, modes)
    x = np.concatenate([guess.cos_coeffs, [guess.speed]])
    n = np.arange(modes + 1)
    symbol_diag = alpha(sym, k * n)
    unit = np.eye(modes + 1)

    def full_residual(x):
        return residual_coefficients(sym, x[:-1], x[-1], k, b)

    # iterate on the Galerkin projection; modes above N are truncation error
    r = full_residual(x)
    res = _l2_norm_cos(r[: modes + 1])
    it = 0
    while res > tol:
        if it >= MAX_NEWTON:
            raise ConvergenceError(
                f"Newton did not converge in {MAX_NEWTON} iterations (residual {res:.3g})", res
            )
        w, c = x[:-1], x[-1]
        jac = np.zeros((modes + 2, modes + 2))
        for j in range(modes + 1):
            jac[: modes + 1, j] = 2.0 * cos_product(w, unit[j])[: modes + 1]
        jac[n, n] += symbol_diag - c
        jac[: modes + 1, -1] = -w
        jac[0, -1] += 2.0 * (1.0 - c) * b
        jac[-1, 1] = 1.0
        rhs = np.concatenate([r[: modes + 1], [w[1] - a]])
        try:
            step = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            raise ResonanceError(f"singular Newton Jacobian at kappa={k:.17g}, a={a:g}") from None
        if not np.all(np.isfinite(step)):
            raise ResonanceError(f"degenerate Newton Jacobian at kappa={k:.17g}, a={a:g}")
        x = x - step
        it += 1
        r = full_residual(x)
        res = _l2_norm_cos(r[: modes + 1])
    return TravelingWave(k, x[:-1].copy(), float(x[-1]), p, _l2_norm_cos(r), sym, it)


def solve_wave(
    sym: DispersionSymbol,
    p: WaveParams,
    modes: int = 64,
    tol: float = 1e-12,
    auto_refine: bool = True,
) -> TravelingWave:
    """Newton-Galerkin solve on cosine modes 0..N, starting from the Stokes expansion.

    Unknowns are the N+1 coefficients and the speed; equations are the N+1
    cosine projections plus ``w_hat[1] = a``. ``b`` is held fixed.

    If the last coefficient has not decayed below 1e-12 the solve is repeated
    with twice as many modes (``auto_refine``), up to 1024.
    """
    if modes < 8:
        raise DomainError(f"need at least 8 modes, got {modes}")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    check_resonance(sym, p.kappa, modes)
    if p.a == 0.0:
        return _constant_state(sym, p, modes)
    while True:
        wave = _newton(sym, p, modes, tol)
        tail = abs(wave.cos_coeffs[-1])
        resolved = tail < TAIL_TOL and wave.residual_norm <= tol
        if resolved or not auto_refine or modes >= MAX_MODES:
            if wave.residual_norm > tol:
                raise ConvergenceError(
                    f"residual {wave.residual_norm:.3g} above tolerance at N={modes}",
                    wave.residual_norm,
                )
            return wave
        log.warning("last coefficient %.3g at N=%d; doubling the truncation", tail, modes)
        modes *= 2
        check_resonance(sym, p.kappa, modes)


def galilean_shift(wave: TravelingWave, v: float) -> TravelingWave:
    """Apply w -> w + v, c -> c + 2v.

    The right-hand side (1-c)^2 b becomes (1-c)^2 b + (1-c) v - v^2 (old c),
    which fixes the new b.
    """
    if v == 0.0:
        return wave
    c_old = wave.speed
    c_new = c_old + 2.0 * v
    if abs(1.0 - c_new) < 1e-14:
        raise DomainError("shifted speed equals 1; b is undefined")
    rhs = (1.0 - c_old) ** 2 * wave.params.b + (1.0 - c_old) * v - v**2
    b_new = rhs / (1.0 - c_new) ** 2
    coeffs = wave.cos_coeffs.copy()
    coeffs[0] += v
    with warnings.catch_warnings():
        # b_new is derived, not a user choice
        warnings.simplefilter("ignore")
        params = WaveParams(wave.kappa, wave.params.a, b_new, cap=max(wave.params.cap, abs(b_new)))
    shifted = replace(wave, cos_coeffs=coeffs, speed=c_new, params=params)
    if wave.symbol is not None:
        shifted = replace(shifted, residual_norm=wave_residual(wave.symbol, shifted))
    return shifted
