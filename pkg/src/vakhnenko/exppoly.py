"""Exact algebra of exponential polynomials in two phase generators.

An :class:`ExpPoly` is a finite sum ``sum c * exp(m*eta1 + n*eta2)`` where
``eta_i = K_i*X - omega_i*T + eta_i0``.  Exponent vectors ``(m, n)`` are
integers, so like terms are matched exactly and only the coefficients carry
round-off.  Derivatives in ``X`` and ``T`` and Hirota's bilinear derivatives
act diagonally on the exponent vectors, which makes the whole algebra closed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BasisMismatchError, DomainError, ExpOverflowError

#: Largest exponent argument accepted by :func:`evaluate`.
MAX_EXPONENT = 700.0

Key = tuple[int, int]


@dataclass(frozen=True)
class Mode:
    """One phase generator ``eta = K*X - omega*T + eta0``."""

    K: float
    omega: float
    eta0: float = 0.0


@dataclass(frozen=True)
class PhaseBasis:
    """One or two phase generators shared by a family of polynomials."""

    modes: tuple[Mode, ...]

    def __post_init__(self):
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        if len(modes) not in (1, 2):
            raise DomainError(f"a phase basis holds 1 or 2 modes, got {len(modes)}")
        for i, mode in enumerate(modes, 1):
            if not (mode.K > 0 and mode.omega > 0):
                raise DomainError(
                    f"mode {i}: K and omega must be strictly positive "
                    f"(K={mode.K!r}, omega={mode.omega!r})"
                )
            if not math.isfinite(mode.eta0):
                raise DomainError(f"mode {i}: eta0 must be finite")
        if len(modes) == 2 and modes[0].K == modes[1].K:
            raise DomainError(f"degenerate basis: K1 == K2 == {modes[0].K!r}")

    @classmethod
    def of(cls, *triples: Sequence[float]) -> "PhaseBasis":
        """Build from ``(K, omega[, eta0])`` tuples."""
        return cls(tuple(Mode(*t) for t in triples))

    @property
    def size(self) -> int:
        return len(self.modes)

    def _pair(self, attr):
        vals = [getattr(m, attr) for m in self.modes]
        return (vals[0], vals[1] if len(vals) == 2 else 0.0)

    def rate_X(self, key: Key) -> float:
        """Coefficient of ``X`` in the exponent of ``key``."""
        K1, K2 = self._pair("K")
        return key[0] * K1 + key[1] * K2

    def rate_T(self, key: Key) -> float:
        """Coefficient of ``T`` in the exponent of ``key``."""
        w1, w2 = self._pair("omega")
        return -(key[0] * w1 + key[1] * w2)

    def phases(self, X, T):
        """Return ``(eta1, eta2)``; ``eta2`` is zero for a one-mode basis."""
        X = np.asarray(X, dtype=float)
        T = np.asarray(T, dtype=float)
        out = [m.K * X - m.omega * T + m.eta0 for m in self.modes]
        if len(out) == 1:
            out.append(np.zeros(np.broadcast(X, T).shape))
        return out[0], out[1]

    def to_dict(self) -> dict:
        return {"modes": [{"K": m.K, "omega": m.omega, "eta0": m.eta0} for m in self.modes]}


class ExpPoly:
    """Immutable exponential polynomial over a :class:`PhaseBasis`.

    Parameters
    ----------
    basis : PhaseBasis
    terms : mapping
        ``{(m, n): c}``.  Exact zeros are dropped.
    scale : float, optional
        Largest coefficient magnitude met while building the polynomial.
        Zero tests are relative to it.  Defaults to the largest stored
        coefficient.
    """

    __slots__ = ("_basis", "_terms", "_scale")

    def __init__(self, basis: PhaseBasis, terms: Mapping[Key, float] | None = None,
                 scale: float | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            m, n = (int(key[0]), int(key[1]))
            if (m, n) != tuple(key):
                raise DomainError(f"exponent vector {key!r} is not integral")
            if basis.size == 1 and n != 0:
                raise DomainError(f"exponent {key!r} refers to a second mode the basis lacks")
            c = float(c)
            if c != 0.0:
                clean[(m, n)] = clean.get((m, n), 0.0) + c
        clean = {k: v for k, v in sorted(clean.items()) if v != 0.0}
        largest = max((abs(c) for c in clean.values()), default=0.0)
        self._basis = basis
        self._terms = MappingProxyType(clean)
        self._scale = max(largest, scale or 0.0)

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, basis: PhaseBasis, c: float = 1.0) -> "ExpPoly":
        return cls(basis, {(0, 0): c})

    @classmethod
    def monomial(cls, basis: PhaseBasis, key: Key, c: float = 1.0) -> "ExpPoly":
        return cls(basis, {tuple(key): c})

    @classmethod
    def zero(cls, basis: PhaseBasis) -> "ExpPoly":
        return cls(basis, {})

    # -- accessors ------------------------------------------------------
    @property
    def basis(self) -> PhaseBasis:
        return self._basis

    @property
    def terms(self) -> Mapping[Key, float]:
        return self._terms

    @property
    def scale(self) -> float:
        return self._scale

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key: Key) -> float:
        return self._terms.get(tuple(key), 0.0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __repr__(self):
        body = " + ".join(f"{c:.6g}*e[{m},{n}]" for (m, n), c in self._terms.items()) or "0"
        return f"ExpPoly({body})"

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> "ExpPoly":
        if isinstance(other, ExpPoly):
            _check_basis(self, other)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return ExpPoly.constant(self._basis, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return ExpPoly(self._basis, terms, max(self._scale, other._scale))

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(self._basis, {k: -c for k, c in self._terms.items()}, self._scale)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return mul(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return ExpPoly(self._basis, {k: s * c for k, c in self._terms.items()},
                           self._scale * abs(s))
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, X, T):
        return evaluate(self, X, T)

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        d = self._basis.to_dict()
        d["terms"] = [{"m": m, "n": n, "c": c} for (m, n), c in self._terms.items()]
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: Mapping) -> "ExpPoly":
        basis = PhaseBasis(tuple(Mode(m["K"], m["omega"], m.get("eta0", 0.0)) for m in d["modes"]))
        return cls(basis, {(t["m"], t["n"]): t["c"] for t in d["terms"]})

    @classmethod
    def from_json(cls, text: str) -> "ExpPoly":
        return cls.from_dict(json.loads(text))


def _check_basis(a: ExpPoly, b: ExpPoly):
    if a.basis != b.basis:
        raise BasisMismatchError("exponential polynomials live on different phase bases")


def diff(p: ExpPoly, var: str, order: int = 1) -> ExpPoly:
    """Partial derivative with respect to ``"X"`` or ``"T"``."""
    if order < 0:
        raise DomainError("derivative order must be non-negative")
    rate = {"X": p.basis.rate_X, "T": p.basis.rate_T}.get(var)
    if rate is None:
        raise DomainError(f"unknown variable {var!r}; expected 'X' or 'T'")
    terms = {k: c * rate(k) ** order for k, c in p}
    largest = max((abs(c) for c in terms.values()), default=0.0)
    return ExpPoly(p.basis, terms, max(p.scale, largest))


def mul(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    """Product; exponent vectors add component-wise."""
    _check_basis(a, b)
    terms: dict[Key, float] = {}
    largest = max(a.scale, b.scale)
    for (m1, n1), c1 in a:
        for (m2, n2), c2 in b:
            c = c1 * c2
            largest = max(largest, abs(c))
            key = (m1 + m2, n1 + n2)
            terms[key] = terms.get(key, 0.0) + c
    return ExpPoly(a.basis, terms, largest)


def hirota(a: ExpPoly, b: ExpPoly, orderX: int, orderT: int) -> ExpPoly:
    r"""Hirota bilinear derivative :math:`D_X^{m} D_T^{n}\, a\cdot b`.

    For exponentials the operator reduces to multiplying each product of
    terms by ``(rX(u) - rX(v))**orderX * (rT(u) - rT(v))**orderT`` where
    ``rX``, ``rT`` are the linear rates of the two factors.
    """
    _check_basis(a, b)
    if orderX < 0 or orderT < 0:
        raise DomainError("Hirota orders must be non-negative")
    basis = a.basis
    terms: dict[Key, float] = {}
    largest = max(a.scale, b.scale)
    for u, cu in a:
        xu, tu = basis.rate_X(u), basis.rate_T(u)
        for v, cv in b:
            c = cu * cv * (xu - basis.rate_X(v)) ** orderX * (tu - basis.rate_T(v)) ** orderT
            largest = max(largest, abs(c))
            key = (u[0] + v[0], u[1] + v[1])
            terms[key] = terms.get(key, 0.0) + c
    return ExpPoly(basis, terms, largest)


@dataclass(frozen=True)
class ZeroTest:
    """Outcome of :func:`is_zero`."""

    passed: bool
    max_relative: float
    offender: Key | None
    scale: float

    def __bool__(self):
        return self.passed


def is_zero(p: ExpPoly, tol: float = 1e-9) -> ZeroTest:
    """Test whether every coefficient is negligible relative to the build scale.

    A coefficient is negligible when ``|c| <= tol * max(scale, 1)``, where
    ``scale`` is the largest magnitude met while ``p`` was constructed.
    """
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    scale = max(p.scale, 1.0)
    worst, offender = 0.0, None
    for k, c in p:
        r = abs(c) / scale
        if r > worst:
            worst, offender = r, k
    return ZeroTest(worst <= tol, worst, offender, scale)


def exponents(p: ExpPoly, X, T) -> dict[Key, np.ndarray]:
    """Exponent arguments ``m*eta1 + n*eta2`` of every term."""
    e1, e2 = p.basis.phases(X, T)
    return {(m, n): m * e1 + n * e2 for (m, n) in p.keys()}


def evaluate(p: ExpPoly, X, T):
    """Evaluate ``p`` at ``(X, T)`` (scalars or broadcastable arrays).

    Raises
    ------
    ExpOverflowError
        If any exponent argument exceeds :data:`MAX_EXPONENT` in magnitude.
    """
    args = exponents(p, X, T)
    total = np.zeros(np.broadcast(np.asarray(X), np.asarray(T)).shape)
    for key, arg in args.items():
        big = np.abs(arg) > MAX_EXPONENT
        if np.any(big):
            bad = float(np.asarray(arg)[big].flat[0])
            raise ExpOverflowError(
                f"exponent {bad:.6g} of term {key} exceeds +/-{MAX_EXPONENT:g}",
                exponent=key, argument=bad)
        total = total + p.coefficient(key) * np.exp(arg)
    return total[()] if total.ndim == 0 else total


def evaluate_shifted(polys: Iterable[ExpPoly], X, T):
    """Evaluate several polynomials with a common exponential shift.

    Returns ``(values, shift)`` with ``values[i] == polys[i](X, T) * exp(-shift)``.
    Ratios of the returned values are exact and free of overflow, which is
    all the logarithmic derivatives of a tau function need.
    """
    polys = list(polys)
    if not polys:
        return [], 0.0
    basis = polys[0].basis
    for q in polys[1:]:
        _check_basis(polys[0], q)
    keys = sorted({k for q in polys for k in q.keys()})
    e1, e2 = basis.phases(X, T)
    args = {k: k[0] * e1 + k[1] * e2 for k in keys}
    shape = np.broadcast(e1, e2).shape
    shift = np.full(shape, -np.inf)
    for arg in args.values():
        shift = np.maximum(shift, arg)
    if not keys:
        shift = np.zeros(shape)
    weights = {k: np.exp(arg - shift) for k, arg in args.items()}
    values = []
    for q in polys:
        v = np.zeros(shape)
        for k, c in q:
            v = v + c * weights[k]
        values.append(v[()] if v.ndim == 0 else v)
    return values, (shift[()] if shift.ndim == 0 else shift)
