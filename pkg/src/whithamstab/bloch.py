"""Bloch operators of the linearization about a traveling wave (Hill's method).

The perturbation equation ``mu v = d_z(-M_k + c - 2w) v`` is conjugated by
``e^{i tau z}`` and truncated to exponential modes ``-N..N``. Index ``j`` of a
coefficient vector corresponds to mode ``m = j - N``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.linalg

from .dispersion import DispersionSymbol, alpha
from .errors import DimensionError, DomainError, NumericalError
from .stokes import TravelingWave, cos_to_exp

__all__ = [
    "BlochMatrix",
    "SpectrumSlice",
    "KreinSign",
    "omega",
    "effective_modes",
    "assemble_bloch",
    "spectrum",
    "eigenpairs",
    "krein_form",
    "krein_signature",
    "origin_window",
    "growth_scan",
    "overall_growth",
    "IMAG_TOL",
]

IMAG_TOL = 1e-8
KREIN_ZERO = 1e-10
COEFF_TOL = 1e-8


class KreinSign(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    ZERO = "Zero"


@dataclass(frozen=True)
class BlochMatrix:
    tau: float
    N: int
    L: np.ndarray
    Hsym: np.ndarray
    wave: TravelingWave

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.N, self.N + 1)

    @property
    def D(self) -> np.ndarray:
        """Diagonal of the derivative factor, i(m + tau)."""
        return 1j * (self.modes + self.tau)


@dataclass(frozen=True)
class SpectrumSlice:
    tau: float
    eigenvalues: np.ndarray
    max_growth: float
    near_origin: np.ndarray
    symmetry_defect: float
    near_origin_growth: float


def omega(sym: DispersionSymbol, kappa: float, n, tau: float = 0.0):
    """(n + tau)(alpha(k) - alpha(k(n + tau))); vectorized in n."""
    s = np.asarray(n, dtype=float) + tau
    out = s * (alpha(sym, kappa) - alpha(sym, kappa * s))
    return float(out) if np.ndim(out) == 0 else out


def effective_modes(wave: TravelingWave, tol: float = COEFF_TOL) -> int:
    """Number of cosine coefficients up to the last one with magnitude above ``tol``.

    Smaller coefficients move the near-origin eigenvalues by less than the
    1e-8 resolution the spectra are checked at.
    """
    big = np.nonzero(np.abs(wave.cos_coeffs) > tol)[0]
    return int(big[-1]) + 1 if big.size else 1


def assemble_bloch(sym: DispersionSymbol, wave: TravelingWave, tau: float, N: int) -> BlochMatrix:
    """Dense Fourier truncation of L_tau on modes -N..N."""
    if not -0.5 <= tau <= 0.5:
        raise DomainError(f"Floquet exponent must lie in [-1/2, 1/2], got {tau}")
    need = 2 * effective_modes(wave)
    if N < need:
        raise DimensionError(f"truncation N={N} too small for this profile; need N >= {need}")
    m = np.arange(-N, N + 1)
    # Toeplitz multiplication by w in the exponential basis
    w_exp = np.zeros(2 * N + 1)
    k = min(len(wave.cos_coeffs) - 1, 2 * N)
    w_exp[: k + 1] = cos_to_exp(wave.cos_coeffs[: k + 1])[k:]
    mult = w_exp[np.abs(np.subtract.outer(m, m))]
    H = -2.0 * mult
    H[np.diag_indices_from(H)] += wave.speed - alpha(sym, wave.kappa * (m + tau))
    L = (1j * (m + tau))[:, None] * H
    return BlochMatrix(float(tau), int(N), L, H, wave)


def origin_window(tau: float, a: float) -> float:
    """Radius of the disc whose eigenvalues are attributed to sigma_1."""
    return 10.0 * abs(tau) * (1.0 + abs(a))


def _order(mu):
    # by modulus, then imaginary and real part, so ties sort reproducibly
    return np.lexsort((np.round(mu.real, 14), np.round(mu.imag, 14), np.round(np.abs(mu), 12)))


def _symmetry_defect(mu) -> float:
    reflected = -np.conj(mu)
    return float(np.max(np.min(np.abs(mu[:, None] - reflected[None, :]), axis=1)))


def spectrum(bm: BlochMatrix) -> SpectrumSlice:
    try:
        mu = scipy.linalg.eigvals(bm.L, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed at tau={bm.tau}: {exc}") from None
    mu = mu[_order(mu)]
    near = mu[:3]
    r = origin_window(bm.tau, bm.wave.params.a)
    inside = mu[np.abs(mu) < r]
    if bm.tau == 0.0 or inside.size < 3:
        inside = near
    return SpectrumSlice(
        tau=bm.tau,
        eigenvalues=mu,
        max_growth=float(np.max(mu.real)),
        near_origin=near,
        symmetry_defect=_symmetry_defect(mu),
        near_origin_growth=float(np.max(inside.real)),
    )


def eigenpairs(bm: BlochMatrix):
    """Eigenvalues (in ``spectrum`` order) and unit-norm eigenvectors as columns."""
    try:
        mu, vec = scipy.linalg.eig(bm.L)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed at tau={bm.tau}: {exc}") from None
    idx = _order(mu)
    vec = vec[:, idx]
    return mu[idx], vec / np.linalg.norm(vec, axis=0)


def krein_form(bm: BlochMatrix, idx: int) -> float:
    """<phi, Hsym phi> for the unit eigenvector of eigenvalue ``idx``."""
    mu, vec = eigenpairs(bm)
    return _form(bm, mu, vec, idx)


def _form(bm, mu, vec, idx):
    if abs(mu[idx].real) > IMAG_TOL:
        raise DomainError(
            f"Krein signature needs a purely imaginary eigenvalue; got {mu[idx]:.6g}"
        )
    others = np.delete(mu, idx)
    if np.min(np.abs(others - mu[idx])) <= IMAG_TOL * max(1.0, abs(mu[idx])):
        raise DomainError(f"eigenvalue {mu[idx]:.6g} is not simple")
    phi = vec[:, idx]
    return float(np.real(np.vdot(phi, bm.Hsym @ phi)))


def krein_signature(bm: BlochMatrix, idx: int) -> KreinSign:
    q = krein_form(bm, idx)
    if abs(q) < KREIN_ZERO:
        return KreinSign.ZERO
    return KreinSign.POSITIVE if q > 0 else KreinSign.NEGATIVE


def growth_scan(
    sym: DispersionSymbol,
    wave: TravelingWave,
    tau_grid: Sequence[float],
    N: int = 64,
    workers: int = 1,
) -> List[SpectrumSlice]:
    """One spectrum slice per Floquet exponent, in grid order.

    Slices share nothing mutable, so ``workers > 1`` evaluates them on a
    thread pool (LAPACK releases the GIL).
    """
    taus = [float(t) for t in tau_grid]
    for t in taus:
        if not 0.0 <= t <= 0.5:
            raise DomainError(f"scan exponents must lie in [0, 1/2], got {t}")

    def one(t):
        return spectrum(assemble_bloch(sym, wave, t, N))

    if workers <= 1:
        return [one(t) for t in taus]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, taus))


def overall_growth(slices: Sequence[SpectrumSlice], near_origin: bool = False) -> float:
    if not slices:
        return math.nan
    key = "near_origin_growth" if near_origin else "max_growth"
    return max(getattr(s, key) for s in slices)
