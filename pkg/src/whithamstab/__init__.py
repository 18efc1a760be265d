"""Modulational stability of small-amplitude periodic waves in Whitham-type equations."""

from .dispersion import (
    DispersionSymbol,
    SymbolKind,
    alpha,
    alpha_d1,
    alpha_d2,
    bbm,
    custom_symbol,
    fkdv,
    ilw,
    kdv,
    parse_symbol,
    whitham,
)
from .errors import (
    BracketError,
    ConvergenceError,
    DimensionError,
    DomainError,
    NumericalError,
    ResonanceError,
    WhithamStabError,
)
from .indices import Classification, StabilityVerdict, classify, gamma_index, lambda_index
from .criticality import RootResult, find_root, scan_sign_changes
from .stokes import TravelingWave, WaveParams, asymptotic_wave, galilean_shift, solve_wave
from .bloch import BlochMatrix, SpectrumSlice, assemble_bloch, growth_scan, spectrum
from .reduction import ReducedPencil, pencil_closed_form, pencil_numeric, root_classification

__version__ = "0.1.0"
