"""Exact Artin-Schreier-Witt towers over F_p((t)), their ramification data and Galois scaffolds."""

from .errors import ConfigError, ContractViolation, PrecisionExhausted, ScaffoldLabError
from .ramification import compute_breaks, check_assumptions, decompose
from .report import analyze, load_config, parse_config, render_report
from .scaffold import ScaffoldBuilder, digit_maps, gms_verdict, hopf_verdict, scaffold_precision
from .series import LaurentSeries, PrimeField, parse_series
from .tower import Tower, TowerConfig, build_tower
from .witt import WittVector, addition_polynomials, witt_add

__version__ = "0.1.0"
