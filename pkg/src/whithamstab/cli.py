"""Command-line front end: ``python3 -m whithamstab <command> ...``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import bloch, criticality, indices, reduction, stokes
from .dispersion import DispersionSymbol, parse_symbol
from .errors import BracketError, WhithamStabError
from .export import render

__all__ = ["RunConfig", "Report", "UsageError", "main", "build_parser", "COMMANDS"]

SCAN_GRID = 5000
PROFILE_POINTS = 512


class UsageError(WhithamStabError):
    code = "usage"


@dataclass
class RunConfig:
    command: str
    symbol: DispersionSymbol = field(default_factory=lambda: parse_symbol("whitham"))
    kappa: Optional[float] = None
    kappa_range: Optional[Tuple[float, float, int]] = None
    a: float = 0.0
    b: float = 0.0
    tau_range: Tuple[float, float, int] = (0.0, 0.25, 101)
    modes: int = 64
    tol: float = 1e-12
    interval: Tuple[float, float] = criticality.DEFAULT_INTERVAL
    index: str = "lambda"
    inverted: bool = False
    zref: float = 1.146
    profile: bool = False
    growth: bool = False
    workers: int = 1
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.kappa_range is not None:
            _check_range(self.kappa_range, "kappa-range")
        _check_range(self.tau_range, "tau-range")
        lo, hi = self.interval
        if not lo < hi:
            raise UsageError(f"interval must be increasing, got {lo},{hi}")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.modes < 1:
            raise UsageError("--modes must be positive")

    def echo(self) -> dict:
        """Flat metadata for output headers."""
        d = asdict(self)
        d.pop("out")
        d["symbol"] = self.symbol.spec
        return d

    def kappas(self) -> np.ndarray:
        if self.kappa_range is not None:
            return grid(self.kappa_range)
        if self.kappa is None:
            raise UsageError("need --kappa or --kappa-range")
        return np.array([self.kappa])

    def kappa_one(self) -> float:
        if self.kappa is None:
            raise UsageError("need --kappa")
        return self.kappa


@dataclass
class Report:
    columns: List[str]
    rows: List[list]
    meta: dict

    def render(self, fmt: str) -> str:
        return render(fmt, self.columns, self.rows, self.meta)


def _check_range(r, name):
    lo, hi, n = r
    if n < 1:
        raise UsageError(f"{name}: empty grid (n={n})")
    if n > 1 and not lo < hi:
        raise UsageError(f"{name}: range must be increasing, got {lo},{hi}")


def grid(r) -> np.ndarray:
    lo, hi, n = r
    return np.linspace(lo, hi, int(n)) if n > 1 else np.array([float(lo)])


def cmd_index(cfg: RunConfig) -> Report:
    rows = []
    for k in cfg.kappas():
        v = indices.classify(cfg.symbol, float(k))
        rows.append([v.kappa, v.gamma, v.lambda_, v.classification])
    return Report(["kappa", "gamma", "lambda", "classification"], rows, cfg.echo())


def _index_functions(cfg):
    sym = cfg.symbol
    if cfg.index == "gamma":
        return (lambda k: indices.gamma_curve(sym, k)), (lambda k: indices.gamma_index(sym, k))
    if cfg.index == "lambda":
        return (lambda k: indices.lambda_curve(sym, k)), (lambda k: indices.lambda_index(sym, k))
    raise UsageError(f"unknown index {cfg.index!r}; use gamma or lambda")


def cmd_critical(cfg: RunConfig) -> Report:
    curve, point = _index_functions(cfg)
    lo, hi = cfg.interval
    brackets = criticality.scan_sign_changes(curve, lo, hi, SCAN_GRID, vectorized=True)
    if not brackets:
        raise BracketError(
            f"no stability switch on interval [{lo:g}, {hi:g}] for {cfg.symbol.spec}"
        )
    rows = []
    for b_lo, b_hi in brackets:
        r = criticality.find_root(point, b_lo, b_hi, rtol=cfg.tol)
        rows.append([r.root, r.bracket[0], r.bracket[1], r.residual, r.iterations, r.transversal])
    meta = cfg.echo()
    meta["scan_grid"] = SCAN_GRID
    return Report(
        ["root", "bracket_lo", "bracket_hi", "residual", "iterations", "transversal"], rows, meta
    )


def cmd_scan(cfg: RunConfig) -> Report:
    if cfg.kappa_range is None:
        raise UsageError("scan needs --kappa-range lo,hi,n")
    z = grid(cfg.kappa_range)
    kap = cfg.zref / z if cfg.inverted else z
    gam = indices.gamma_curve(cfg.symbol, kap)
    rows = [[zi, ki, gi] for zi, ki, gi in zip(z, kap, np.atleast_1d(gam))]
    return Report(["z", "kappa", "gamma"], rows, cfg.echo())


def _wave(cfg) -> stokes.TravelingWave:
    p = stokes.WaveParams(cfg.kappa_one(), cfg.a, cfg.b)
    return stokes.solve_wave(cfg.symbol, p, modes=cfg.modes, tol=cfg.tol)


def cmd_wave(cfg: RunConfig) -> Report:
    w = _wave(cfg)
    meta = cfg.echo()
    meta.update(c=w.speed, residual_norm=w.residual_norm, iterations=w.iterations, N=w.modes)
    if cfg.profile:
        z = np.linspace(-np.pi, np.pi, PROFILE_POINTS, endpoint=False)
        return Report(["z", "w"], [[zi, wi] for zi, wi in zip(z, stokes.evaluate_wave(w, z))], meta)
    return Report(["n", "w_hat_n"], [[n, c] for n, c in enumerate(w.cos_coeffs)], meta)


def cmd_bloch(cfg: RunConfig) -> Report:
    w = _wave(cfg)
    taus = grid(cfg.tau_range)
    slices = bloch.growth_scan(cfg.symbol, w, taus, N=cfg.modes, workers=cfg.workers)
    meta = cfg.echo()
    meta.update(
        c=w.speed,
        max_growth=bloch.overall_growth(slices),
        near_origin_growth=bloch.overall_growth(slices, near_origin=True),
    )
    if cfg.growth:
        rows = [[s.tau, s.max_growth] for s in slices]
        return Report(["tau", "max_growth"], rows, meta)
    rows = [[s.tau, mu.real, mu.imag] for s in slices for mu in s.eigenvalues]
    return Report(["tau", "re_mu", "im_mu"], rows, meta)


def cmd_pencil(cfg: RunConfig) -> Report:
    rows = []
    for k in cfg.kappas():
        k = float(k)
        lam = indices.lambda_index(cfg.symbol, k)
        for t in grid(cfg.tau_range):
            p = reduction.pencil_closed_form(cfg.symbol, k, float(t), cfg.a)
            kind = reduction.root_classification(p)
            rows.append([k, float(t), cfg.a, p.discriminant,
                         reduction.delta_tau0(cfg.symbol, k, float(t)), lam, kind])
    return Report(
        ["kappa", "tau", "a", "delta_full", "delta_tau0", "lambda", "classification"],
        rows,
        cfg.echo(),
    )


COMMANDS = {
    "index": cmd_index,
    "critical": cmd_critical,
    "scan": cmd_scan,
    "wave": cmd_wave,
    "bloch": cmd_bloch,
    "pencil": cmd_pencil,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text, n, name):
    parts = text.split(",")
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{name} needs {n} comma-separated values, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number in {name} {text!r}") from None


def _range3(text):
    lo, hi, n = _floats(text, 3, "range")
    if n != int(n):
        raise argparse.ArgumentTypeError(f"range count must be an integer, got {n:g}")
    return (lo, hi, int(n))


def _pair(text):
    return tuple(_floats(text, 2, "interval"))


def _symbol(text):
    try:
        return parse_symbol(text)
    except WhithamStabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--symbol", type=_symbol, default=parse_symbol("whitham"),
                        help="whitham, fkdv:<sigma>, ilw:<H>, kdv or bbm")
    common.add_argument("--out", help="write to this file instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--tol", type=float, default=1e-12)

    kappa = _Parser(add_help=False)
    kappa.add_argument("--kappa", type=float)
    kappa.add_argument("--kappa-range", type=_range3, metavar="LO,HI,N")

    amp = _Parser(add_help=False)
    amp.add_argument("--a", type=float, default=0.0, help="amplitude parameter")
    amp.add_argument("--b", type=float, default=0.0, help="integration constant")
    amp.add_argument("--modes", type=int, default=64, help="truncation N")

    taus = _Parser(add_help=False)
    taus.add_argument("--tau-range", type=_range3, default=(0.0, 0.25, 101), metavar="LO,HI,N")

    top = _Parser(prog="whithamstab", description="Modulational stability of Whitham-type waves.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("index", parents=[common, kappa], help="Gamma, Lambda and verdict")
    p = sub.add_parser("critical", parents=[common], help="critical wavenumbers")
    p.add_argument("--interval", type=_pair, default=criticality.DEFAULT_INTERVAL, metavar="LO,HI")
    p.add_argument("--index", choices=("lambda", "gamma"), default="lambda")
    p = sub.add_parser("scan", parents=[common, kappa], help="Gamma on a grid")
    p.add_argument("--inverted", action="store_true", help="evaluate Gamma(zref / z)")
    p.add_argument("--zref", type=float, default=1.146)
    p = sub.add_parser("wave", parents=[common, kappa, amp], help="traveling-wave solve")
    p.add_argument("--profile", action="store_true", help="emit w(z) on 512 points")
    p = sub.add_parser("bloch", parents=[common, kappa, amp, taus], help="Bloch spectra")
    p.add_argument("--growth", action="store_true", help="emit (tau, max_growth) only")
    p.add_argument("--workers", type=int, default=1)
    p = sub.add_parser("pencil", parents=[common, kappa, taus], help="reduced-pencil sweep")
    p.add_argument("--a", type=float, default=0.0)
    return top


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if v is not None}
    return RunConfig(**fields)


def run(cfg: RunConfig) -> Report:
    return COMMANDS[cfg.command](cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        text = run(cfg).render(cfg.fmt)
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    except WhithamStabError as exc:
        msg = " ".join(str(exc).split())
        print(f"error: {exc.code}: {msg}", file=sys.stderr)
        return 2 if isinstance(exc, UsageError) else 1


if __name__ == "__main__":
    sys.exit(main())
