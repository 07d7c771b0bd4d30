"""Loop / cusp / hump classification of one-soliton solutions.

With ``lambda = 6 K omega`` the physical profile is a loop for
``lambda > 1``, a cusp for ``lambda = 1`` and a hump for ``lambda < 1``.
Under the coupled dispersion relation this is equivalent to comparing
``alpha`` with ``alpha* = 1 / sqrt(6 v)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .soliton import Dispersion, solve_wavenumber

DEFAULT_TIE_TOL = 1e-9


class Regime(str, enum.Enum):
    LOOP = "loop"
    CUSP = "cusp"
    HUMP = "hump"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegimeClass:
    regime: Regime
    lam: float
    alpha_star: float
    K: float
    U_M: float
    alpha: float
    v: float

    def to_dict(self) -> dict:
        return {"regime": self.regime.value, "lambda": self.lam, "alpha_star": self.alpha_star,
                "K": self.K, "U_M": self.U_M, "alpha": self.alpha, "v": self.v}


def alpha_star(v: float, dispersion: Dispersion = "coupled") -> float:
    """Dissipation at which ``lambda = 1``.

    ``1/sqrt(6v)`` for the coupled relation, ``1/(3v)`` for the exact one.
    """
    if not v > 0:
        raise DomainError(f"velocity must be positive, got {v!r}")
    return 1.0 / math.sqrt(6.0 * v) if dispersion == "coupled" else 1.0 / (3.0 * v)


def classify_regime(alpha: float, v: float, tie_tol: float = DEFAULT_TIE_TOL,
                    dispersion: Dispersion = "coupled") -> RegimeClass:
    if tie_tol < 0:
        raise DomainError("tie tolerance must be non-negative")
    K = solve_wavenumber(alpha, v, dispersion)
    lam = 6.0 * K * K * v
    if abs(lam - 1.0) <= tie_tol:
        regime = Regime.CUSP
    elif lam > 1.0:
        regime = Regime.LOOP
    else:
        regime = Regime.HUMP
    return RegimeClass(regime, lam, alpha_star(v, dispersion), K, 6.0 * K * K, alpha, v)


_CODES = {Regime.LOOP: 1, Regime.CUSP: 0, Regime.HUMP: -1}


@dataclass
class RegionScan:
    """Per-cell classification over an ``(alpha, v)`` grid.

    Arrays are indexed ``[i_alpha, i_v]``; ``code`` is +1 loop, 0 cusp, -1 hump.
    """

    alphas: np.ndarray
    vs: np.ndarray
    K: np.ndarray
    lam: np.ndarray
    U_M: np.ndarray
    code: np.ndarray

    def regime(self, i: int, j: int) -> Regime:
        return {v: k for k, v in _CODES.items()}[int(self.code[i, j])]

    def rows(self):
        for i, a in enumerate(self.alphas):
            for j, v in enumerate(self.vs):
                yield (float(a), float(v), float(self.K[i, j]), float(self.lam[i, j]),
                       float(self.U_M[i, j]), self.regime(i, j).value)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("alpha,v,K,lambda,U_M,regime\n")
            for a, v, K, lam, um, reg in self.rows():
                fh.write(f"{a!r},{v!r},{K!r},{lam!r},{um!r},{reg}\n")

    def transition_cells(self):
        """``(i, j)`` of every cell whose regime differs from its successor in ``alpha``."""
        diff = self.code[1:, :] != self.code[:-1, :]
        return [tuple(map(int, ij)) for ij in np.argwhere(diff)]


def region_scan(alpha_range=(0.0, 3.0), v_range=(0.05, 1.0), grid=(60, 60),
                tie_tol: float = DEFAULT_TIE_TOL, dispersion: Dispersion = "coupled") -> RegionScan:
    na, nv = grid
    if na < 2 or nv < 2:
        raise DomainError("scan grid must be at least 2x2")
    if alpha_range[0] < 0 or v_range[0] <= 0:
        raise DomainError("scan ranges must be non-negative in alpha and positive in v")
    alphas = np.linspace(*alpha_range, na)
    vs = np.linspace(*v_range, nv)
    K = np.full((na, nv), np.nan)
    lam = np.full((na, nv), np.nan)
    code = np.zeros((na, nv), dtype=int)
    for i, a in enumerate(alphas):
        for j, v in enumerate(vs):
            rc = classify_regime(float(a), float(v), tie_tol, dispersion)
            K[i, j], lam[i, j], code[i, j] = rc.K, rc.lam, _CODES[rc.regime]
    return RegionScan(alphas, vs, K, lam, 6.0 * K * K, code)


def amplitude_comparison(v: float, alphas, tie_tol: float = DEFAULT_TIE_TOL,
                         dispersion: Dispersion = "coupled") -> list[RegimeClass]:
    """Classifications at fixed ``v`` ordered by ascending ``alpha``.

    ``U_M`` decreases strictly along the returned list.
    """
    if not v > 0:
        raise DomainError(f"velocity must be positive, got {v!r}")
    return [classify_regime(float(a), v, tie_tol, dispersion) for a in sorted(alphas)]
