"""Dispersion symbols alpha(xi) of Whitham-type equations.

All symbols are normalized so that alpha(0) = 1. Evaluation accepts scalars
or numpy arrays; scalars come back as Python floats.

Removable singularities at xi = 0 (Whitham, ILW) are handled with even
Taylor series below a small switchover radius.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "SymbolKind",
    "DispersionSymbol",
    "whitham",
    "fkdv",
    "ilw",
    "kdv",
    "bbm",
    "custom_symbol",
    "parse_symbol",
    "alpha",
    "alpha_d1",
    "alpha_d2",
]


class SymbolKind(enum.Enum):
    WHITHAM = "whitham"
    FKDV = "fkdv"
    ILW = "ilw"
    KDV = "kdv"
    BBM = "bbm"
    CUSTOM = "custom"


@dataclass(frozen=True)
class DispersionSymbol:
    """A registered phase-speed symbol.

    ``param`` is the fKdV exponent sigma or the ILW depth H; it is ``None``
    for the parameter-free symbols.
    """

    kind: SymbolKind
    param: Optional[float] = None
    name: str = ""
    funcs: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind is SymbolKind.FKDV:
            if self.param is None or not math.isfinite(self.param) or self.param <= 0.5:
                raise DomainError(f"fKdV exponent must satisfy sigma > 1/2, got {self.param}")
        elif self.kind is SymbolKind.ILW:
            if self.param is None or not math.isfinite(self.param) or self.param <= 0:
                raise DomainError(f"ILW depth must satisfy H > 0, got {self.param}")
        elif self.kind is SymbolKind.CUSTOM:
            if self.funcs is None or len(self.funcs) != 3:
                raise DomainError("custom symbol needs (alpha, alpha_d1, alpha_d2)")
        if not self.name:
            object.__setattr__(self, "name", _default_name(self.kind, self.param))

    @property
    def spec(self) -> str:
        """The command-line spelling of this symbol."""
        if self.kind in (SymbolKind.FKDV, SymbolKind.ILW):
            return f"{self.kind.value}:{self.param:g}"
        return self.kind.value if self.kind is not SymbolKind.CUSTOM else self.name

    def __call__(self, xi):
        return alpha(self, xi)


def _default_name(kind, param):
    if kind is SymbolKind.FKDV:
        return f"fKdV(sigma={param:g})"
    if kind is SymbolKind.ILW:
        return f"ILW(H={param:g})"
    return {
        SymbolKind.WHITHAM: "Whitham",
        SymbolKind.KDV: "KdV",
        SymbolKind.BBM: "BBM",
        SymbolKind.CUSTOM: "custom",
    }[kind]


def whitham() -> DispersionSymbol:
    return DispersionSymbol(SymbolKind.WHITHAM)


def fkdv(sigma: float) -> DispersionSymbol:
    return DispersionSymbol(SymbolKind.FKDV, float(sigma))


def ilw(depth: float) -> DispersionSymbol:
    return DispersionSymbol(SymbolKind.ILW, float(depth))


def kdv() -> DispersionSymbol:
    return DispersionSymbol(SymbolKind.KDV)


def bbm() -> DispersionSymbol:
    return DispersionSymbol(SymbolKind.BBM)


def custom_symbol(
    alpha_fn: Callable, d1_fn: Callable, d2_fn: Callable, name: str = "custom"
) -> DispersionSymbol:
    """Programmatic symbol from three vectorized callables.

    Not reachable from the command line; used to exercise resonance paths.
    """
    return DispersionSymbol(SymbolKind.CUSTOM, None, name, (alpha_fn, d1_fn, d2_fn))


def parse_symbol(text: str) -> DispersionSymbol:
    """Parse ``whitham``, ``fkdv:<sigma>``, ``ilw:<H>``, ``kdv`` or ``bbm``."""
    raw = text.strip().lower()
    head, _, arg = raw.partition(":")
    if head in ("whitham", "kdv", "bbm"):
        if arg:
            raise DomainError(f"symbol '{head}' takes no parameter: {text!r}")
        return {"whitham": whitham, "kdv": kdv, "bbm": bbm}[head]()
    if head in ("fkdv", "ilw"):
        if not arg:
            raise DomainError(f"symbol '{head}' needs a parameter, e.g. {head}:1.5")
        try:
            value = float(arg)
        except ValueError:
            raise DomainError(f"bad parameter in symbol {text!r}") from None
        return fkdv(value) if head == "fkdv" else ilw(value)
    raise DomainError(f"unknown symbol {text!r}")


# Taylor coefficients (in x^2) of sqrt(tanh x / x).
_WHITHAM_SERIES = np.array([
    1.0,
    -1.0 / 6.0,
    19.0 / 360.0,
    -55.0 / 3024.0,
    11813.0 / 1814400.0,
    -2117.0 / 887040.0,
    64604977.0 / 72648576000.0,
    -263101079.0 / 784604620800.0,
    1768132943.0 / 13857951744000.0,
    -9606907803497.0 / 196503623737344000.0,
    158812278992229461.0 / 8430005458332057600000.0,
    -9112944418860287.0 / 1249560422395084800000.0,
    2117852079027536379043.0 / 747275354440475148288000000.0,
    -27841657661565660151.0 / 25197383852207757066240000.0,
])

# Taylor coefficients (in u^2) of u coth u.
_UCOTHU_SERIES = np.array([
    1.0,
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
    -3617.0 / 162820783125.0,
    87734.0 / 38979295480125.0,
    -349222.0 / 1531329465290625.0,
])

# alpha itself switches to a 4-term series below this radius
_VALUE_SWITCH = 1e-2
# derivatives use the long series below this radius (cancellation in the
# closed forms grows like 1/x^2 as x -> 0)
_DERIV_SWITCH = 0.3


def _even_series(coeffs, x, order):
    """Evaluate d^order/dx^order of sum_k coeffs[k] x^(2k)."""
    x2 = x * x
    out = np.zeros_like(x)
    for k in range(len(coeffs) - 1, -1, -1):
        p = 2 * k
        if p < order:
            continue
        fac = math.prod(range(p - order + 1, p + 1)) if order else 1
        out = out + fac * coeffs[k] * x ** (p - order)
    return out


def _prepare(xi):
    arr = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"dispersion symbol evaluated at non-finite argument {xi!r}")
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return float(out) if scalar else out


def _sech2(x):
    # x >= 0; 4q/(1+q)^2 with q = exp(-2x) never overflows
    q = np.exp(-2.0 * x)
    return 4.0 * q / (1.0 + q) ** 2


def _whitham(x, order):
    """Derivative of order 0..2 at x >= 0 (caller restores parity)."""
    out = np.empty_like(x)
    switch = _VALUE_SWITCH if order == 0 else _DERIV_SWITCH
    small = x < switch
    if order == 0:
        xs = x[small]
        out[small] = _even_series(_WHITHAM_SERIES[:4], xs, 0)
    else:
        out[small] = _even_series(_WHITHAM_SERIES, x[small], order)
    big = ~small
    xb = x[big]
    if xb.size:
        th = np.tanh(xb)
        g = th / xb
        a = np.sqrt(g)
        if order == 0:
            out[big] = a
        else:
            s2 = _sech2(xb)
            g1 = (xb * s2 - th) / xb**2
            if order == 1:
                out[big] = g1 / (2.0 * a)
            else:
                g2 = 2.0 * th / xb**3 - 2.0 * s2 / xb**2 - 2.0 * s2 * th / xb
                out[big] = g2 / (2.0 * a) - g1**2 / (4.0 * a**3)
    return out


def _ilw(x, depth, order):
    """ILW symbol 1 + 1/H - xi coth(xi H) and derivatives at x >= 0."""
    u = x * depth
    out = np.empty_like(x)
    switch = _VALUE_SWITCH if order == 0 else _DERIV_SWITCH
    small = u < switch
    big = ~small
    us = u[small]
    ub = u[big]
    q = np.exp(-2.0 * ub)
    coth = (1.0 + q) / (1.0 - q)
    if order == 0:
        ucoth_s = _even_series(_UCOTHU_SERIES[:4], us, 0)
        out[small] = 1.0 + (1.0 - ucoth_s) / depth
        out[big] = 1.0 + (1.0 - ub * coth) / depth
        return out
    csch2 = 4.0 * q / (1.0 - q) ** 2
    if order == 1:
        # d/dxi = H d/du; alpha' = -(u coth u)'
        out[small] = -_even_series(_UCOTHU_SERIES, us, 1)
        out[big] = -(coth - ub * csch2)
    else:
        out[small] = -depth * _even_series(_UCOTHU_SERIES, us, 2)
        out[big] = -depth * 2.0 * csch2 * (ub * coth - 1.0)
    return out


def _fkdv(x, sigma, order):
    if order == 0:
        return 1.0 - x**sigma
    zero = x == 0
    if np.any(zero):
        if order == 1 and sigma <= 1:
            raise DomainError(f"fKdV symbol with sigma={sigma} is not differentiable at 0")
        if order == 2 and sigma < 2:
            raise DomainError(
                f"fKdV symbol with sigma={sigma} is not twice differentiable at 0"
            )
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if order == 1:
            out = -sigma * x ** (sigma - 1.0)
        else:
            out = -sigma * (sigma - 1.0) * x ** (sigma - 2.0)
    if np.any(zero):
        # limits for the admissible exponents
        if order == 2 and sigma == 2:
            out = np.where(zero, -2.0, out)
        else:
            out = np.where(zero, 0.0, out)
    return out


def _kdv(x, order):
    return [1.0 - x**2 / 6.0, -x / 3.0, np.full_like(x, -1.0 / 3.0)][order]


def _bbm(x, order):
    q = 1.0 + x**2 / 6.0
    if order == 0:
        return 1.0 / q
    if order == 1:
        return -(x / 3.0) / q**2
    return -1.0 / (3.0 * q**2) + 2.0 * x**2 / (9.0 * q**3)


def _evaluate(sym: DispersionSymbol, xi, order: int):
    arr, scalar = _prepare(xi)
    if sym.kind is SymbolKind.CUSTOM:
        out = np.asarray(sym.funcs[order](arr), dtype=float)
        return _finish(out, scalar)
    x = np.abs(np.atleast_1d(arr))
    kind = sym.kind
    if kind is SymbolKind.WHITHAM:
        out = _whitham(x, order)
    elif kind is SymbolKind.ILW:
        out = _ilw(x, sym.param, order)
    elif kind is SymbolKind.FKDV:
        out = _fkdv(x, sym.param, order)
    elif kind is SymbolKind.KDV:
        out = _kdv(x, order)
    else:
        out = _bbm(x, order)
    if order == 1:
        out = out * np.sign(np.atleast_1d(arr))
    out = out.reshape(arr.shape)
    return _finish(out, scalar)


def alpha(sym: DispersionSymbol, xi):
    """Phase speed alpha(xi); even in xi."""
    return _evaluate(sym, xi, 0)


def alpha_d1(sym: DispersionSymbol, xi):
    """First derivative alpha'(xi); odd in xi."""
    return _evaluate(sym, xi, 1)


def alpha_d2(sym: DispersionSymbol, xi):
    """Second derivative alpha''(xi); even in xi."""
    return _evaluate(sym, xi, 2)
