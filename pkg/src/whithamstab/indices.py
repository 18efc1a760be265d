"""Closed-form modulational instability indices and the stability verdict."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionSymbol, SymbolKind, alpha, alpha_d1, alpha_d2
from .errors import DomainError, ResonanceError

__all__ = [
    "Classification",
    "StabilityVerdict",
    "TOL_ZERO",
    "gamma_index",
    "gamma_curve",
    "lambda_index",
    "lambda_curve",
    "lambda_scale",
    "lambda_fkdv",
    "lambda_ilw",
    "gamma_ilw",
    "classify",
]

TOL_ZERO = 1e-10
RESONANCE_TOL = 1e-12

# lambda_ilw switches to exponentially scaled arithmetic above this kappa*H
_ILW_SCALED = 20.0
# below this argument the ILW closed forms cancel catastrophically; use series
_ILW_SERIES = 1.0

# Taylor coefficients of u^4, u^6, ... for 1 - 2u^2 - cosh 2u + 2u sinh 2u
_GAMMA_ILW_SERIES = np.array([
    2, 4 / 9, 2 / 45, 4 / 1575, 4 / 42525, 8 / 3274425, 2 / 42567525,
    4 / 5746615875, 4 / 488462349375, 8 / 102088631019375, 4 / 6431583754220625,
    8 / 1923043542511966875, 8 / 336532619939594203125,
])
# ... and for (4u^2 - 1) cosh u + cosh 3u - 8u sinh u
_NUM_ILW_SERIES = np.array([
    4, 10 / 9, 1 / 6, 103 / 6300, 1511 / 1360800, 3833 / 69854400,
    112103 / 54486432000, 178043 / 2942267328000, 127441 / 88921857024000,
    65377211 / 2341668182870016000, 27409699 / 60214324702371840000,
    2647776907 / 420095272006880870400000, 15886661429 / 211728017091467958681600000,
])


def _quartic_series(coeffs, u):
    u2 = u * u
    return u2 * u2 * np.polyval(coeffs[::-1], u2)


class Classification(enum.Enum):
    MODULATIONALLY_UNSTABLE = "ModulationallyUnstable"
    SPECTRALLY_STABLE = "SpectrallyStable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class StabilityVerdict:
    kappa: float
    gamma: float
    lambda_: float
    classification: Classification
    notes: str = ""


def _check_kappa(kappa):
    if not (math.isfinite(kappa) and kappa > 0):
        raise DomainError(f"wavenumber must be positive and finite, got kappa={kappa}")


def gamma_index(sym: DispersionSymbol, kappa: float) -> float:
    """3 alpha(k) - 2 alpha(2k) - 1 + k alpha'(k)."""
    _check_kappa(kappa)
    return math.fsum((
        3.0 * alpha(sym, kappa),
        -2.0 * alpha(sym, 2.0 * kappa),
        -1.0,
        kappa * alpha_d1(sym, kappa),
    ))


def gamma_curve(sym: DispersionSymbol, kappas) -> np.ndarray:
    """Vectorized Gamma over an array of wavenumbers."""
    k = np.asarray(kappas, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k <= 0):
        raise DomainError("wavenumbers must be positive and finite")
    return 3.0 * alpha(sym, k) - 2.0 * alpha(sym, 2.0 * k) - 1.0 + k * alpha_d1(sym, k)


def _lambda_factors(sym, kappa):
    _check_kappa(kappa)
    a1 = alpha(sym, kappa)
    a2 = alpha(sym, 2.0 * kappa)
    d1 = alpha_d1(sym, kappa)
    d2 = alpha_d2(sym, kappa)
    gap = a1 - a2
    if abs(gap) < RESONANCE_TOL:
        raise ResonanceError(
            f"second-harmonic resonance at kappa={kappa:.17g}: alpha(k)-alpha(2k)={gap:.3g}"
        )
    curv = 2.0 * kappa * d1 + kappa**2 * d2
    slope = a1 - 1.0 + kappa * d1
    gamma_terms = (3.0 * a1, -2.0 * a2, -1.0, kappa * d1)
    return curv, slope, gamma_terms, gap


def lambda_index(sym: DispersionSymbol, kappa: float) -> float:
    """The discriminant coefficient Lambda(kappa) for a general symbol."""
    curv, slope, terms, gap = _lambda_factors(sym, kappa)
    return 2.0 * curv * slope**3 * math.fsum(terms) / gap


def lambda_curve(sym: DispersionSymbol, kappas) -> np.ndarray:
    """Vectorized Lambda; raises on a resonant grid point."""
    k = np.asarray(kappas, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k <= 0):
        raise DomainError("wavenumbers must be positive and finite")
    a1 = alpha(sym, k)
    a2 = alpha(sym, 2.0 * k)
    d1 = alpha_d1(sym, k)
    d2 = alpha_d2(sym, k)
    gap = a1 - a2
    bad = np.abs(gap) < RESONANCE_TOL
    if np.any(bad):
        at = float(np.atleast_1d(k)[np.atleast_1d(bad)][0])
        raise ResonanceError(f"second-harmonic resonance at kappa={at:.17g}")
    gam = 3.0 * a1 - 2.0 * a2 - 1.0 + k * d1
    return 2.0 * (2.0 * k * d1 + k**2 * d2) * (a1 - 1.0 + k * d1) ** 3 * gam / gap


def lambda_scale(sym: DispersionSymbol, kappa: float) -> float:
    """Magnitude Lambda would have if the terms of Gamma did not cancel.

    Used as the reference scale for deciding that Lambda is zero.
    """
    curv, slope, terms, gap = _lambda_factors(sym, kappa)
    return abs(2.0 * curv * slope**3 * sum(abs(t) for t in terms) / gap)


def lambda_fkdv(sigma: float, kappa: float) -> float:
    """Lambda for alpha = 1 - |xi|^sigma."""
    if not sigma > 0.5:
        raise DomainError(f"fKdV exponent must satisfy sigma > 1/2, got {sigma}")
    _check_kappa(kappa)
    return (
        2.0
        * kappa ** (4.0 * sigma)
        * sigma
        * (1.0 + sigma) ** 4
        * (2.0 ** (sigma + 1.0) - 3.0 - sigma)
        / (2.0**sigma - 1.0)
    )


def gamma_ilw(z):
    """1 - 2z^2 - cosh(2z) + 2z sinh(2z); vectorized."""
    z = np.asarray(z, dtype=float)
    az = np.abs(z)
    out = np.empty_like(az)
    tiny = az < _ILW_SERIES
    huge = az > 300.0
    mid = ~(tiny | huge)
    out[tiny] = _quartic_series(_GAMMA_ILW_SERIES, az[tiny])
    zm = az[mid]
    out[mid] = 1.0 - 2.0 * zm**2 - np.cosh(2.0 * zm) + 2.0 * zm * np.sinh(2.0 * zm)
    # cosh/sinh overflow: leading behaviour e^{2z}(z - 1/2)
    with np.errstate(over="ignore"):
        out[huge] = np.exp(2.0 * az[huge]) * (az[huge] - 0.5)
    return float(out) if out.ndim == 0 else out


def lambda_ilw(depth: float, kappa: float) -> float:
    """Lambda for the intermediate long-wave symbol, written in kappa*H."""
    if not (math.isfinite(depth) and depth > 0):
        raise DomainError(f"ILW depth must satisfy H > 0, got {depth}")
    _check_kappa(kappa)
    u = kappa * depth
    if u < _ILW_SERIES:
        num = float(_quartic_series(_NUM_ILW_SERIES, u))
        return num**2 / (32.0 * depth**4 * math.sinh(u) ** 12) * gamma_ilw(u) ** 3
    if u <= _ILW_SCALED:
        num = (-1.0 + 4.0 * u**2) * math.cosh(u) + math.cosh(3.0 * u) - 8.0 * u * math.sinh(u)
        return num**2 / (32.0 * depth**4 * math.sinh(u) ** 12) * gamma_ilw(u) ** 3
    # every hyperbolic factor divided by its leading exponential; the
    # exponentials cancel identically between numerator and denominator
    q = math.exp(-2.0 * u)
    num = (
        0.5 * (4.0 * u**2 - 1.0) * (q + q * q)
        + 0.5 * (1.0 + q**3)
        - 4.0 * u * (q - q * q)
    )
    sinh_scaled = 0.5 * (1.0 - q)
    gam = q * (1.0 - 2.0 * u**2) - 0.5 * (1.0 + q * q) + u * (1.0 - q * q)
    return num**2 / (32.0 * depth**4 * sinh_scaled**12) * gam**3


def classify(sym: DispersionSymbol, kappa: float, tol_zero: float = TOL_ZERO) -> StabilityVerdict:
    """Verdict from the sign of Lambda.

    Lambda counts as zero when ``|Lambda| <= tol_zero * lambda_scale``, i.e.
    when the terms of Gamma cancel to within ``tol_zero`` of their size.
    """
    lam = lambda_index(sym, kappa)
    gam = gamma_index(sym, kappa)
    scale = lambda_scale(sym, kappa)
    band = tol_zero * scale
    if lam < -band:
        cls = Classification.MODULATIONALLY_UNSTABLE
        notes = "Lambda < 0: unstable to long-wavelength perturbations"
    elif lam > band:
        cls = Classification.SPECTRALLY_STABLE
        notes = "Lambda > 0: spectrally stable near the origin"
    else:
        cls = Classification.INCONCLUSIVE
        notes = f"|Lambda| <= {band:.3g}: index vanishes"
    if sym.kind is SymbolKind.WHITHAM and abs(gam) > tol_zero and abs(lam) > band:
        if np.sign(gam) != np.sign(lam):
            notes += "; sign(Gamma) != sign(Lambda)"
    return StabilityVerdict(kappa, gam, lam, cls, notes)
