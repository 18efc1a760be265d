"""The 3x3 reduced eigenvalue pencil near the origin.

``L_{tau,a}`` is projected onto the generalized kernel basis ``phi_1`` (even),
``phi_2`` (odd), ``phi_3 = 1``, giving ``B`` and ``I_a`` with

    B[j, k] = <L phi_k, phi_j> / <phi_j, phi_j>,
    I[j, k] = <phi_k, phi_j> / <phi_j, phi_j>,

where ``<f, g> = (1/2pi) int f conj(g)``. Near-origin eigenvalues of the Bloch
operator are approximated by the roots of ``det(B - mu I) = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg

from .bloch import BlochMatrix, assemble_bloch, omega
from .dispersion import DispersionSymbol, alpha, alpha_d1, alpha_d2
from .errors import DomainError, ResonanceError
from .indices import lambda_index
from .stokes import TravelingWave

__all__ = [
    "BasisTriple",
    "ReducedPencil",
    "RootKind",
    "basis",
    "kernel_basis",
    "pencil_closed_form",
    "pencil_numeric",
    "pencil_eigenvalues",
    "char_poly",
    "rescaled",
    "discriminant",
    "discriminant_expansion",
    "delta_tau0",
    "root_classification",
    "operator_actions",
    "ImageTerm",
]

RESONANCE_TOL = 1e-12
REAL_TOL = 1e-10
TIE_BAND = 1e-12


class RootKind(enum.Enum):
    THREE_REAL = "ThreeReal"
    COMPLEX_PAIR = "ComplexPair"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class BasisTriple:
    """Exponential-mode coefficient vectors on modes -K..K."""

    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray

    @property
    def K(self) -> int:
        return (len(self.phi1) - 1) // 2

    def embed(self, N: int) -> np.ndarray:
        """3 x (2N+1) array of the basis padded (or cut) to modes -N..N."""
        K = self.K
        out = np.zeros((3, 2 * N + 1), dtype=complex)
        r = min(K, N)
        for row, v in enumerate((self.phi1, self.phi2, self.phi3)):
            out[row, N - r: N + r + 1] = v[K - r: K + r + 1]
        return out


@dataclass(frozen=True)
class ReducedPencil:
    tau: float
    a: float
    B: np.ndarray
    Imat: np.ndarray
    c_poly: Tuple[float, float, float, float]
    d_coeffs: Tuple[float, float, float, float]
    discriminant: float
    imag_residues: Tuple[float, float, float, float]
    kappa: float = math.nan


def _gap(sym, kappa):
    D = alpha(sym, kappa) - alpha(sym, 2.0 * kappa)
    if abs(D) < RESONANCE_TOL:
        raise ResonanceError(f"second-harmonic resonance at kappa={kappa:.17g}")
    return D


def basis(sym: DispersionSymbol, kappa: float, a: float) -> BasisTriple:
    """First-order (in a) generalized kernel functions of L_{0,a}."""
    s = a / _gap(sym, kappa)
    phi1 = np.array([s / 2, 0.5, -s / 2, 0.5, s / 2], dtype=complex)
    phi2 = np.array([0.5j * s, 0.5j, 0.0, -0.5j, -0.5j * s], dtype=complex)
    phi3 = np.array([0, 0, 1, 0, 0], dtype=complex)
    return BasisTriple(phi1, phi2, phi3)


def kernel_basis(bm: BlochMatrix) -> BasisTriple:
    """Basis with phi_1, phi_2 taken from the computed kernel of L_{0,a}.

    phi_2 = -w'/a (translation mode); phi_1 is the even null vector found by
    SVD, scaled to carry cos z with unit weight.
    """
    if bm.tau != 0.0:
        raise DomainError("kernel basis needs the tau = 0 Bloch matrix")
    a = bm.wave.params.a
    if a == 0.0:
        raise DomainError("kernel basis is degenerate at zero amplitude")
    N = bm.N
    m = np.arange(-N, N + 1)
    c = np.zeros(N + 1)
    k = min(len(bm.wave.cos_coeffs), N + 1)
    c[:k] = bm.wave.cos_coeffs[:k]
    w_exp = np.concatenate([0.5 * c[1:][::-1], c[:1], 0.5 * c[1:]])
    phi2 = -(1j * m * w_exp) / a
    # even subspace: columns e_0 and e_k + e_{-k}
    even = np.zeros((2 * N + 1, N + 1))
    even[N, 0] = 1.0
    for j in range(1, N + 1):
        even[N + j, j] = even[N - j, j] = 1.0
    _, _, vh = np.linalg.svd(bm.L @ even)
    v = vh[-1].conj()
    v = v / v[1]
    phi1 = 0.5 * (even @ v)
    phi3 = np.zeros(2 * N + 1, dtype=complex)
    phi3[N] = 1.0
    return BasisTriple(phi1.astype(complex), phi2.astype(complex), phi3)


def char_poly(B, Imat):
    """Complex coefficients (p3, p2, p1, p0) of det(B - mu I) = sum p_k mu^k."""
    B = np.asarray(B, dtype=complex)
    Im = np.asarray(Imat, dtype=complex)

    def mixed(cols_from_I):
        M = B.copy()
        for j in cols_from_I:
            M[:, j] = Im[:, j]
        return np.linalg.det(M)

    p3 = -mixed((0, 1, 2))
    p2 = mixed((0, 1)) + mixed((0, 2)) + mixed((1, 2))
    p1 = -(mixed((0,)) + mixed((1,)) + mixed((2,)))
    p0 = np.linalg.det(B)
    return p3, p2, p1, p0


def _split(p):
    """det = c3 mu^3 + i c2 mu^2 + c1 mu + i c0: real c_j and discarded parts."""
    p3, p2, p1, p0 = p
    c = (p3.real, p2.imag, p1.real, p0.imag)
    res = (p3.imag, p2.real, p1.imag, p0.real)
    return tuple(float(x) for x in c), tuple(float(x) for x in res)


def rescaled(c_poly, tau: float):
    """d_j = c_j / tau^(3-j)."""
    c3, c2, c1, c0 = c_poly
    return (c3, c2 / tau, c1 / tau**2, c0 / tau**3)


def _disc_terms(d):
    d3, d2, d1, d0 = d
    return (
        18.0 * d3 * d2 * d1 * d0,
        d2**2 * d1**2,
        4.0 * d2**3 * d0,
        4.0 * d3 * d1**3,
        -27.0 * d3**2 * d0**2,
    )


def discriminant(d) -> float:
    return math.fsum(_disc_terms(d))


def _closed_blocks(sym, kappa, a):
    """Taylor blocks B = B0 + tau B1 + tau^2 B2 and the O(a) Gram matrix I_a."""
    D = _gap(sym, kappa)
    a1 = alpha(sym, kappa)
    d1 = alpha_d1(sym, kappa)
    d2 = alpha_d2(sym, kappa)
    B0 = np.zeros((3, 3), dtype=complex)
    B0[1, 2] = 2.0 * a
    couple = a * (1.0 + 0.5 * (a1 - 1.0) / D)
    B1 = np.diag([-1j * kappa * d1, -1j * kappa * d1, 1j * (a1 - 1.0)]).astype(complex)
    B1[0, 2] += -2j * couple
    B1[2, 0] += -1j * couple
    curv = kappa * d1 + 0.5 * kappa**2 * d2
    B2 = np.zeros((3, 3), dtype=complex)
    B2[0, 1] = -curv
    B2[1, 0] = curv
    Imat = np.eye(3)
    Imat[0, 2] -= a / D
    Imat[2, 0] -= 0.5 * a / D
    return B0, B1, B2, Imat


def _limit_d(B0, B1, B2, Imat):
    """d_j at tau = 0 from the tau^3 coefficient of det(B + i tau lam I)."""
    def tau3(lam):
        cols = [
            (B0[:, j], B1[:, j] + 1j * lam * Imat[:, j], B2[:, j]) for j in range(3)
        ]
        total = 0.0
        for p in range(3):
            for q in range(3):
                r = 3 - p - q
                if 0 <= r <= 2:
                    total += np.linalg.det(np.column_stack([cols[0][p], cols[1][q], cols[2][r]]))
        return total

    lams = np.array([0.0, 1.0, -1.0, 2.0])
    vals = np.array([tau3(l) for l in lams]) / 1j
    # vals = d3 l^3 - d2 l^2 - d1 l + d0
    coef = np.linalg.solve(np.vander(lams, 4), vals.real)
    return (float(coef[0]), float(-coef[1]), float(-coef[2]), float(coef[3]))


def _make(tau, a, kappa, B, Imat, limit=None) -> ReducedPencil:
    c, res = _split(char_poly(B, Imat))
    d = limit if tau == 0.0 else rescaled(c, tau)
    disc = discriminant(d) if d is not None else math.nan
    return ReducedPencil(float(tau), float(a), B, Imat, c, d, disc, res, float(kappa))


def pencil_closed_form(sym: DispersionSymbol, kappa: float, tau: float, a: float) -> ReducedPencil:
    """B_{tau,a} and I_a to first order in a.

    The a = 0 part is the exact block built from omega_{-1}, omega_0, omega_1;
    the O(a) blocks are added on top. At tau = 0 the d_j are the limits taken
    on the tau-polynomial form of B.
    """
    if abs(a) > 0.2:
        raise DomainError(f"|a|={abs(a):g} exceeds the smallness cap 0.2")
    if abs(tau) > 0.5:
        raise DomainError(f"Floquet exponent must lie in [-1/2, 1/2], got {tau}")
    B0, B1, B2, Imat = _closed_blocks(sym, kappa, a)
    w_m, w_0, w_p = omega(sym, kappa, np.array([-1, 0, 1]), tau)
    exact = np.zeros((3, 3), dtype=complex)
    exact[0, 0] = exact[1, 1] = 0.5j * (w_p + w_m)
    exact[0, 1] = 0.5 * (w_p - w_m)
    exact[1, 0] = -0.5 * (w_p - w_m)
    exact[2, 2] = 1j * w_0
    B = exact + B0 + tau * (B1 - _closed_blocks(sym, kappa, 0.0)[1])
    limit = _limit_d(B0, B1, B2, Imat) if tau == 0.0 else None
    return _make(tau, a, kappa, B, Imat, limit)


def pencil_numeric(
    sym: DispersionSymbol,
    wave: TravelingWave,
    tau: float,
    N: int = 64,
    phis: Optional[BasisTriple] = None,
) -> ReducedPencil:
    """B and I from inner products against the full Bloch matrix."""
    bm = assemble_bloch(sym, wave, tau, N)
    if phis is None:
        phis = basis(sym, wave.kappa, wave.params.a)
    P = phis.embed(N)
    LP = P @ bm.L.T  # rows: L phi_k
    norms = np.einsum("ij,ij->i", P.conj(), P).real
    B = (P.conj() @ LP.T) / norms[:, None]
    Imat = ((P.conj() @ P.T) / norms[:, None]).real
    limit = None
    if tau == 0.0:
        # tau derivatives of L are not available from one matrix; use the
        # closed-form limit for the rescaled coefficients
        limit = _limit_d(*_closed_blocks(sym, wave.kappa, wave.params.a))
    return _make(tau, wave.params.a, wave.kappa, B, Imat, limit)


def pencil_eigenvalues(p: ReducedPencil) -> np.ndarray:
    """Roots of det(B - mu I) = 0, sorted by imaginary part."""
    mu = scipy.linalg.eigvals(p.B, p.Imat)
    return mu[np.argsort(mu.imag, kind="stable")]


def delta_tau0(sym: DispersionSymbol, kappa: float, tau: float) -> float:
    """Zero-amplitude discriminant as a product of eigenvalue gaps."""
    if tau == 0.0:
        return 0.0
    w_m, w_0, w_p = omega(sym, kappa, np.array([-1, 0, 1]), tau)
    return float(((w_0 - w_p) * (w_0 - w_m) * (w_p - w_m)) ** 2 / tau**6)


def discriminant_expansion(sym: DispersionSymbol, kappa: float, tau: float, a: float):
    """(Delta_{tau,0}, Lambda a^2, Delta_{tau,a} from the closed-form pencil)."""
    full = pencil_closed_form(sym, kappa, tau, a).discriminant
    return delta_tau0(sym, kappa, tau), lambda_index(sym, kappa) * a**2, full


def root_classification(p: ReducedPencil) -> RootKind:
    """Sign of the discriminant, cross-checked by rooting the rescaled cubic."""
    d = p.d_coeffs
    terms = _disc_terms(d)
    scale = sum(abs(t) for t in terms)
    disc = math.fsum(terms)
    if not math.isfinite(disc) or abs(disc) <= TIE_BAND * scale:
        return RootKind.DEGENERATE
    kind = RootKind.THREE_REAL if disc > 0 else RootKind.COMPLEX_PAIR
    d3, d2, d1, d0 = d
    roots = np.roots([d3, -d2, -d1, d0])
    if len(roots) != 3:
        return RootKind.DEGENERATE
    size = max(1.0, float(np.max(np.abs(roots))))
    # a near double root carries sqrt(eps)-sized spurious imaginary parts
    complex_roots = np.max(np.abs(roots.imag)) > 1e-7 * size
    if complex_roots != (kind is RootKind.COMPLEX_PAIR):
        return RootKind.DEGENERATE
    return kind


@dataclass(frozen=True)
class ImageTerm:
    """``cos * cos(nz) + sin * sin(nz)``."""

    harmonic: int
    cos: complex
    sin: complex


_FUNCS = {"1": (0, "cos"), "cos z": (1, "cos"), "sin z": (1, "sin"),
          "cos 2z": (2, "cos"), "sin 2z": (2, "sin")}


def _omega_taylor(sym, kappa, n):
    """omega_{n,tau} and its first two tau-derivatives at tau = 0."""
    x = kappa * n
    a1 = alpha(sym, kappa)
    w0 = n * (a1 - alpha(sym, x))
    w1 = a1 - alpha(sym, x) - n * kappa * alpha_d1(sym, x)
    w2 = -2.0 * kappa * alpha_d1(sym, x) - n * kappa**2 * alpha_d2(sym, x)
    return w0, w1, w2


def operator_actions(sym: DispersionSymbol, kappa: float) -> Dict[Tuple[str, str], ImageTerm]:
    """Images of 1, cos z, sin z, cos 2z, sin 2z under M_0, M_1, M_2.

    ``L_{tau,0} = M_0 + i tau M_1 - tau^2/2 M_2 + O(tau^3)``, so on e^{inz}
    the three act by i omega_n, omega_n' and -i omega_n'' (tau-derivatives at 0).
    """
    table = {}
    for fname, (n, kind) in _FUNCS.items():
        wp = _omega_taylor(sym, kappa, n)
        wm = _omega_taylor(sym, kappa, -n)
        for op, f_p, f_m in (
            ("M0", 1j * wp[0], 1j * wm[0]),
            ("M1", wp[1] + 0j, wm[1] + 0j),
            ("M2", -1j * wp[2], -1j * wm[2]),
        ):
            if n == 0:
                table[(op, fname)] = ImageTerm(0, f_p, 0j)
                continue
            even, odd = 0.5 * (f_p + f_m), 0.5j * (f_p - f_m)
            if kind == "cos":
                table[(op, fname)] = ImageTerm(n, even, odd)
            else:
                table[(op, fname)] = ImageTerm(n, -odd, even)
    return table
