"""Soliton solutions of the Vakhnenko equation with a dissipative term.

The equation ``u_tx + (u u_x)_x + alpha u_x + u = 0`` is studied in the
transformed frame ``t = X``, ``x = T + W + x0`` where it reads
``W_XXT + W_X W_T + alpha W_T + W_X = 0`` and ``W = 6 (ln F)_X``.
"""
from .analysis import StructureCensus, count_structures, fission_timeline
from .bilinear import (ResidualReport, combined_bilinear_residual, derive_coefficients,
                       exact_bilinear_residual, pde_residual, verification_report)
from .classify import Regime, RegimeClass, alpha_star, amplitude_comparison, classify_regime, region_scan
from .errors import (BasisMismatchError, CertificationError, DomainError, ExpOverflowError,
                     NonPositiveTauError, SingularConfigurationError, VakhnenkoError)
from .exppoly import ExpPoly, Mode, PhaseBasis, diff, evaluate, hirota, is_zero, mul
from .presets import PRESETS
from .soliton import (SolitonParams, TauFunction, build_one_soliton, build_two_soliton, eval_U,
                      eval_W, interaction_coefficients, solve_wavenumber)
from .transform import ParametricProfile, jacobian_xT, physical_x, snapshot

__version__ = "0.1.0"
