"""Critical wavenumbers: sign-change scans and bracketed root refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import BracketError, DomainError

__all__ = ["RootResult", "find_root", "scan_sign_changes", "DEFAULT_INTERVAL"]

DEFAULT_INTERVAL = (0.01, 50.0)
MAX_ITER = 200


@dataclass(frozen=True)
class RootResult:
    root: float
    bracket: Tuple[float, float]
    residual: float
    iterations: int
    transversal: bool


def _value(f, x):
    fx = float(f(x))
    if not math.isfinite(fx):
        raise DomainError(f"index function is not finite at {x!r}: {fx}")
    return fx


def find_root(
    f: Callable[[float], float], lo: float, hi: float, rtol: float = 1e-12
) -> RootResult:
    """Refine a sign change of ``f`` on ``[lo, hi]``.

    Secant steps on the two most recent iterates, safeguarded by the
    bracket: a step landing outside the bracket, or an iteration that fails
    to halve the bracket, triggers a bisection step.

    Returns the final bracket, which still straddles the sign change.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got ({lo}, {hi})")
    flo = _value(f, lo)
    fhi = _value(f, hi)
    if flo == 0.0:
        return RootResult(lo, (lo, hi), 0.0, 0, fhi != 0.0)
    if fhi == 0.0:
        return RootResult(hi, (lo, hi), 0.0, 0, True)
    if flo * fhi > 0:
        raise BracketError(
            f"no sign change on [{lo:.6g}, {hi:.6g}]: f(lo)={flo:.3g}, f(hi)={fhi:.3g}"
        )

    a, fa, b, fb = lo, flo, hi, fhi
    prev_x, prev_f = a, fa
    cur_x, cur_f = b, fb
    force_bisect = False
    width = b - a
    best_x, best_f = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    for it in range(1, MAX_ITER + 1):
        x = None
        if not force_bisect and cur_f != prev_f:
            x = cur_x - cur_f * (cur_x - prev_x) / (cur_f - prev_f)
            if not (a < x < b):
                x = None
        if x is None:
            x = 0.5 * (a + b)
        fx = _value(f, x)
        prev_x, prev_f, cur_x, cur_f = cur_x, cur_f, x, fx
        if abs(fx) < abs(best_f):
            best_x, best_f = x, fx
        if fx == 0.0:
            return RootResult(x, (a, b), 0.0, it, True)
        if (fx < 0) == (fa < 0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        new_width = b - a
        force_bisect = new_width > 0.5 * width
        width = new_width
        if width <= rtol * max(abs(best_x), 1e-300):
            return RootResult(best_x, (a, b), best_f, it, True)
    # bracket halves at least every other step, so this is unreachable for
    # any rtol above machine precision
    return RootResult(best_x, (a, b), best_f, MAX_ITER, True)


def scan_sign_changes(
    f: Callable,
    lo: float,
    hi: float,
    n_grid: int,
    zero_tol: float = 0.0,
    vectorized: bool = False,
) -> List[Tuple[float, float]]:
    """Brackets of strict sign changes of ``f`` on a uniform grid.

    Values with ``|f| <= zero_tol`` carry no sign and are skipped, so a
    bracket may span several grid cells. With ``vectorized=True`` the whole
    grid is passed to ``f`` in one call.
    """
    if n_grid < 2:
        raise DomainError(f"n_grid must be at least 2, got {n_grid}")
    grid = np.linspace(lo, hi, n_grid)
    if vectorized:
        values = np.asarray(f(grid), dtype=float)
        if not np.all(np.isfinite(values)):
            raise DomainError("index function is not finite on the scan grid")
    else:
        values = np.array([_value(f, x) for x in grid])
    signs = np.where(np.abs(values) <= zero_tol, 0, np.sign(values))
    brackets = []
    last = None
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last is not None and s != signs[last]:
            brackets.append((float(grid[last]), float(grid[i])))
        last = i
    return brackets
