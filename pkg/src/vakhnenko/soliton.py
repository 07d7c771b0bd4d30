"""One- and two-soliton tau functions in the transformed ``(X, T)`` frame.

Two dispersion models are available:

``"coupled"`` (default)
    ``2*(alpha + 2K)*omega = 1``, the linear order of the coupled bilinear
    pair.  All regime thresholds and preset scenarios use this relation.
``"exact"``
    ``omega*(4K**2 + alpha) = K``, the relation under which ``1 + exp(2*eta)``
    solves ``W_XXT + W_X W_T + alpha W_T + W_X = 0`` exactly.  The two modes
    then interact through the single bilinear form
    ``(D_T D_X^3 + D_X^2 + alpha D_X D_T) F.F = 0``.

The two relations coincide at ``alpha = 0``.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import CertificationError, DomainError, NonPositiveTauError, SingularConfigurationError
from .exppoly import ExpPoly, Mode, PhaseBasis, diff, evaluate_shifted, hirota

log = logging.getLogger(__name__)

Dispersion = Literal["coupled", "exact"]
DISPERSIONS = ("coupled", "exact")

#: Tolerance on the dispersion and ``omega = K*v`` invariants.
INVARIANT_TOL = 1e-12


class UncertifiedTauWarning(UserWarning):
    """A tau function was returned although its residual certification failed."""


def _check_dispersion(dispersion):
    if dispersion not in DISPERSIONS:
        raise DomainError(f"unknown dispersion model {dispersion!r}; expected one of {DISPERSIONS}")


def solve_wavenumber(alpha: float, v: float, dispersion: Dispersion = "coupled") -> float:
    """Positive wave number ``K`` for dissipation ``alpha`` and velocity ``v``.

    For the coupled relation ``K`` is the positive root of
    ``4v K^2 + 2 alpha v K - 1 = 0``, evaluated in the cancellation-free form
    ``1 / (alpha v + sqrt(alpha^2 v^2 + 4v))``.  For the exact relation
    ``K = sqrt((1 - alpha v) / (4v))``, which needs ``alpha * v < 1``.
    """
    _check_dispersion(dispersion)
    if not (v > 0 and math.isfinite(v)):
        raise DomainError(f"velocity must be positive and finite, got v={v!r}")
    if not (alpha >= 0 and math.isfinite(alpha)):
        raise DomainError(f"dissipation must be non-negative and finite, got alpha={alpha!r}")
    if dispersion == "coupled":
        av = alpha * v
        return 1.0 / (av + math.sqrt(av * av + 4.0 * v))
    if alpha * v >= 1.0:
        raise DomainError(
            f"no exact soliton for alpha*v = {alpha * v:.6g} >= 1 (alpha={alpha}, v={v})")
    return math.sqrt((1.0 - alpha * v) / (4.0 * v))


def dispersion_residual(alpha: float, K: float, omega: float,
                        dispersion: Dispersion = "coupled") -> float:
    """Residual of the selected dispersion relation."""
    if dispersion == "coupled":
        return 2.0 * (alpha + 2.0 * K) * omega - 1.0
    return omega * (4.0 * K * K + alpha) - K


@dataclass(frozen=True)
class SolitonMode:
    v: float
    K: float
    omega: float
    eta0: float = 0.0


@dataclass(frozen=True)
class SolitonParams:
    """Dissipation parameter plus one or two modes obeying the dispersion relation."""

    alpha: float
    modes: tuple[SolitonMode, ...]
    dispersion: Dispersion = "coupled"

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        _check_dispersion(self.dispersion)
        if len(self.modes) not in (1, 2):
            raise DomainError("one or two modes are supported")
        for i, m in enumerate(self.modes, 1):
            if not (m.K > 0 and m.omega > 0 and m.v > 0):
                raise DomainError(f"mode {i}: v, K, omega must be positive")
            res = dispersion_residual(self.alpha, m.K, m.omega, self.dispersion)
            if abs(res) > INVARIANT_TOL:
                raise DomainError(f"mode {i}: dispersion residual {res:.3g} exceeds {INVARIANT_TOL}")
            if abs(m.omega - m.K * m.v) > INVARIANT_TOL * max(1.0, abs(m.omega)):
                raise DomainError(f"mode {i}: omega != K*v")

    @classmethod
    def from_velocities(cls, alpha, velocities, eta0s=None, dispersion: Dispersion = "coupled"):
        eta0s = eta0s or [0.0] * len(velocities)
        modes = []
        for v, eta0 in zip(velocities, eta0s):
            K = solve_wavenumber(alpha, v, dispersion)
            modes.append(SolitonMode(v=v, K=K, omega=K * v, eta0=float(eta0)))
        return cls(alpha=float(alpha), modes=tuple(modes), dispersion=dispersion)

    @property
    def kind(self) -> str:
        return "one-soliton" if len(self.modes) == 1 else "two-soliton"

    def basis(self) -> PhaseBasis:
        return PhaseBasis(tuple(Mode(m.K, m.omega, m.eta0) for m in self.modes))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "modes": [{"v": m.v, "K": m.K, "omega": m.omega, "eta0": m.eta0} for m in self.modes],
            "kind": self.kind,
            "dispersion": self.dispersion,
        }

    @classmethod
    def from_dict(cls, d) -> "SolitonParams":
        modes = tuple(SolitonMode(m["v"], m["K"], m["omega"], m.get("eta0", 0.0)) for m in d["modes"])
        return cls(alpha=d["alpha"], modes=modes, dispersion=d.get("dispersion", "coupled"))


@dataclass(frozen=True)
class TauFunction:
    """Tau function ``F`` together with the parameters it was built from.

    ``coefficients`` holds ``(A, B, C)`` for two-soliton functions.  For the
    exact model ``A = B = 0``.  ``certificate`` is the residual report
    produced at construction, when one was run.
    """

    F: ExpPoly
    params: SolitonParams
    coefficients: tuple[float, float, float] | None = None
    form: str = "canonical"
    certificate: object = field(default=None, compare=False)

    @property
    def kind(self) -> str:
        return self.params.kind

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @cached_property
    def derivatives(self) -> dict[str, ExpPoly]:
        """``F``, its partial derivatives up to ``F_XXXT`` and the Hirota numerators.

        ``FF = F^2``, ``DXX = D_X^2 F.F`` and ``DXT = D_X D_T F.F``, so that
        ``(ln F)_XX = DXX / (2 FF)`` and ``(ln F)_XT = DXT / (2 FF)`` without
        floating-point cancellation.
        """
        F = self.F
        FX = diff(F, "X")
        FXX = diff(FX, "X")
        FXXX = diff(FXX, "X")
        return {
            "F": F, "X": FX, "XX": FXX, "XXX": FXXX,
            "T": diff(F, "T"), "XT": diff(FX, "T"), "XXT": diff(FXX, "T"), "XXXT": diff(FXXX, "T"),
            "FF": F * F, "DXX": hirota(F, F, 2, 0), "DXT": hirota(F, F, 1, 1),
        }

    def _check_positive(self, X, T):
        (F,), _ = evaluate_shifted([self.F], X, T)
        F = np.asarray(F)
        if np.any(F <= 0) or not np.all(np.isfinite(F)):
            node = tuple(np.argwhere(~(F > 0))[0]) if F.ndim else ()
            Xb = np.broadcast_to(np.asarray(X, float), F.shape)[node]
            Tb = np.broadcast_to(np.asarray(T, float), F.shape)[node]
            raise NonPositiveTauError(f"tau function is not positive at X={Xb:.6g}, T={Tb:.6g}")

    def ratios(self, X, T, names=("X", "XX", "T", "XT"), denominator="F") -> dict[str, np.ndarray]:
        """Ratios ``num / F`` (or ``num / F^2`` with ``denominator="FF"``), overflow free.

        Raises :class:`NonPositiveTauError` if ``F <= 0`` at any node.
        """
        self._check_positive(X, T)
        d = self.derivatives
        values, _ = evaluate_shifted([d[denominator]] + [d[n] for n in names], X, T)
        return {n: v / values[0] for n, v in zip(names, values[1:])}

    def W(self, X, T):
        return eval_W(self, X, T)

    def U(self, X, T):
        return eval_U(self, X, T)

    def W_T(self, X, T):
        """``W_T = 6 (ln F)_XT = 3 D_X D_T F.F / F^2``."""
        return 3.0 * self.ratios(X, T, ("DXT",), "FF")["DXT"]

    def certify(self, tol: float = 1e-9):
        """Coefficient residual of the bilinear form matching ``params.dispersion``."""
        from .bilinear import combined_bilinear_residual, exact_bilinear_residual

        if self.params.dispersion == "exact":
            return exact_bilinear_residual(self.F, self.alpha, tol)
        return combined_bilinear_residual(self.F, self.alpha, tol)

    def to_dict(self) -> dict:
        d = self.params.to_dict()
        d["form"] = self.form
        if self.coefficients is not None:
            d["coefficients"] = dict(zip("ABC", self.coefficients))
        d["F"] = self.F.to_dict()["terms"]
        return d


def eval_W(tau: TauFunction, X, T):
    """``W = 6 (ln F)_X``."""
    return 6.0 * tau.ratios(X, T, ("X",))["X"]


def eval_U(tau: TauFunction, X, T):
    """``U = W_X = 6 (F_XX F - F_X^2) / F^2``, evaluated as ``3 D_X^2 F.F / F^2``."""
    return 3.0 * tau.ratios(X, T, ("DXX",), "FF")["DXX"]


def build_one_soliton(alpha: float, v: float, eta0: float = 0.0,
                      dispersion: Dispersion = "coupled"):
    """``F = 1 + exp(2 eta)`` with ``eta = K X - K v T + eta0``.

    Returns ``(params, tau)``.
    """
    params = SolitonParams.from_velocities(alpha, [v], [eta0], dispersion)
    basis = params.basis()
    F = ExpPoly(basis, {(0, 0): 1.0, (2, 0): 1.0})
    return params, TauFunction(F=F, params=params)


def interaction_coefficients(params: SolitonParams) -> tuple[float, float, float]:
    """Closed-form ``(A, B, C)`` for the two-soliton tau function.

    ``A = alpha / (2 (alpha + 6 K1))``, ``B`` likewise with ``K2``, and ``C``
    from the long closed form below.  These are not exact: see
    :func:`vakhnenko.bilinear.derive_coefficients` for the order-by-order
    values and the remaining residual.
    """
    if len(params.modes) != 2:
        raise DomainError("interaction coefficients need exactly two modes")
    a = params.alpha
    if not a > 0:
        raise DomainError("interaction coefficients require alpha > 0")
    m1, m2 = params.modes
    K1, K2, w1, w2 = m1.K, m2.K, m1.omega, m2.omega
    if K1 == K2:
        raise DomainError("K1 == K2 is degenerate")
    A = a / (2.0 * (a + 6.0 * K1))
    B = a / (2.0 * (a + 6.0 * K2))
    num = (2.0 * a * ((w1 - w2) * (K1 ** 2 - K2 ** 2) + 2.0 * K1 * K2 * (w1 + w2))
           + 4.0 * (w2 - w1) * (K1 - K2) ** 3 + (K1 - K2) ** 2)
    bracket = 2.0 * (w1 + w2) * (a + 2.0 * K1 + K2) - 1.0
    den = (K1 + K2) ** 2 * bracket
    if abs(bracket) < 1e-14:
        raise SingularConfigurationError(
            f"C denominator vanishes for alpha={a}, v1={m1.v}, v2={m2.v} (K1={K1}, K2={K2})")
    return A, B, num / den


def exact_phase_shift(params: SolitonParams) -> float:
    """Interaction coefficient of ``F = 1 + e1 + e2 + C e1 e2`` in the exact model.

    With ``P(p, q) = q p^3 + p^2 + alpha p q`` and the phase rates
    ``p_i = 2 K_i``, ``q_i = -2 omega_i``, ``C = -P(p1 - p2, q1 - q2) / P(p1 + p2, q1 + q2)``.
    """
    if len(params.modes) != 2:
        raise DomainError("phase shift needs exactly two modes")
    a = params.alpha

    def poly(p, q):
        return q * p ** 3 + p * p + a * p * q

    (m1, m2) = params.modes
    p1, p2, q1, q2 = 2 * m1.K, 2 * m2.K, -2 * m1.omega, -2 * m2.omega
    den = poly(p1 + p2, q1 + q2)
    if den == 0:
        raise SingularConfigurationError("exact phase-shift denominator vanishes")
    return -poly(p1 - p2, q1 - q2) / den


def two_soliton_poly(basis: PhaseBasis, A: float, B: float, C: float,
                     form: str = "canonical") -> ExpPoly:
    """Assemble ``1 + e^{2h1} + e^{2h2} + A e^{4h1} + B e^{4h2} + C e^{2h1+2h2}``.

    ``form="literal"`` uses ``e^{h2}`` in place of ``e^{2h1}``, the variant
    with a first power of the second phase; it is kept only so that it can be certified.
    """
    if form == "canonical":
        first = {(2, 0): 1.0, (0, 2): 1.0}
    elif form == "literal":
        first = {(0, 1): 1.0, (0, 2): 1.0}
    else:
        raise DomainError(f"unknown two-soliton form {form!r}")
    terms = {(0, 0): 1.0, **first}
    for key, c in (((4, 0), A), ((0, 4), B), ((2, 2), C)):
        terms[key] = terms.get(key, 0.0) + c
    return ExpPoly(basis, terms)


def build_two_soliton(alpha: float, v1: float, v2: float, eta10: float = 0.0,
                      eta20: float = 0.0, *, dispersion: Dispersion = "coupled",
                      coefficients: str = "printed", form: str = "canonical",
                      strict: bool = True, tol: float = 1e-9):
    """Two-soliton tau function, certified against its bilinear residual.

    Parameters
    ----------
    alpha, v1, v2, eta10, eta20 : float
        Modes are reordered so that ``v1 > v2``; a notice is logged.
    dispersion : {"coupled", "exact"}
    coefficients : {"printed", "oracle"}
        Coupled model only: take ``(A, B, C)`` from the closed forms or from
        the order-by-order solve.
    form : {"canonical", "literal"}
    strict : bool
        When the certification fails, raise :class:`CertificationError`
        (default) or return the tau function with the failing report
        attached and emit :class:`UncertifiedTauWarning`.
    tol : float
        Relative coefficient tolerance of the certification.

    Returns
    -------
    (SolitonParams, TauFunction)
    """
    _check_dispersion(dispersion)
    if v1 < v2:
        log.warning("reordering modes so that v1 > v2 (got v1=%g, v2=%g)", v1, v2)
        v1, v2, eta10, eta20 = v2, v1, eta20, eta10
    if v1 == v2:
        raise DomainError("v1 == v2 gives K1 == K2, a degenerate two-soliton")
    if dispersion == "coupled" and not alpha > 0:
        raise DomainError("the coupled two-soliton requires alpha > 0")
    params = SolitonParams.from_velocities(alpha, [v1, v2], [eta10, eta20], dispersion)
    basis = params.basis()

    if dispersion == "exact":
        A, B, C = 0.0, 0.0, exact_phase_shift(params)
    elif coefficients == "printed":
        A, B, C = interaction_coefficients(params)
    elif coefficients == "oracle":
        from .bilinear import derive_coefficients

        A, B, C = derive_coefficients(params, tol=tol).solved
    else:
        raise DomainError(f"unknown coefficient source {coefficients!r}")

    F = two_soliton_poly(basis, A, B, C, form)
    tau = TauFunction(F=F, params=params, coefficients=(A, B, C), form=form)
    report = tau.certify(tol)
    tau = TauFunction(F=F, params=params, coefficients=(A, B, C), form=form, certificate=report)
    if not report.passed:
        msg = (f"two-soliton tau (alpha={alpha}, v1={v1}, v2={v2}, {coefficients} coefficients, "
               f"{form} form) fails its bilinear residual: max relative coefficient "
               f"{report.max_relative_coefficient:.3g} at exponent {report.offending_exponent}")
        if strict:
            raise CertificationError(msg, report)
        warnings.warn(msg, UncertifiedTauWarning, stacklevel=2)
    return params, tau
