"""Map transformed-frame solutions to physical space.

The physical coordinates are ``t = X`` and
``x = T + int_{-inf}^{X} U(s, T) ds + x0``.  Because ``U = W_X`` and ``W``
vanishes as ``X -> -inf``, the integral is just ``W(X, T)``.  At fixed
physical time the profile is the curve ``T -> (x(t, T), U(t, T))``, which
folds back on itself wherever ``x_T = 1 + W_T`` is negative.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .soliton import TauFunction

#: Padding of the automatic ``T`` window, in units of ``1 / K_min``.
PAD_FACTOR = 20.0
DEFAULT_SAMPLES = 2001


def physical_x(tau: TauFunction, X, T, x0: float = 0.0):
    """``x = T + W(X, T) + x0``."""
    return np.asarray(T, dtype=float) + tau.W(X, T) + x0


def jacobian_xT(tau: TauFunction, X, T):
    """``dx/dT = 1 + W_T`` at fixed ``X``."""
    return 1.0 + tau.W_T(X, T)


def breakpoints(tau: TauFunction, t: float) -> list[float]:
    """Values of ``T`` where the dominant term of ``F(t, .)`` changes.

    Each term ``c exp(m h1 + n h2)`` is a line in ``T`` on a log scale; the
    structures of the profile sit at the corners of the upper envelope of
    these lines.
    """
    basis = tau.F.basis
    lines = []
    for key, c in tau.F:
        offset = math.log(abs(c)) + sum(k * (m.K * t + m.eta0) for k, m in zip(key, basis.modes))
        lines.append((offset, basis.rate_T(key)))
    corners = []
    for (a0, a1), (b0, b1) in itertools.combinations(lines, 2):
        if a1 == b1:
            continue
        T = (b0 - a0) / (a1 - b1)
        top = a0 + a1 * T
        if all(top >= o + s * T - 1e-9 * (1 + abs(top)) for o, s in lines):
            corners.append(T)
    return sorted(set(corners))


def default_T_range(tau: TauFunction, t: float) -> tuple[float, float]:
    """Window covering every phase zero and envelope corner, padded by ``20/K_min``."""
    modes = tau.params.modes
    zeros = [(m.K * t + m.eta0) / m.omega for m in modes]
    pts = zeros + breakpoints(tau, t)
    pad = PAD_FACTOR / min(m.K for m in modes)
    return min(pts) - pad, max(pts) + pad


@dataclass
class ParametricProfile:
    """Samples ``(T, x, U, xT)`` of the physical profile at time ``t``."""

    t: float
    x0: float
    T: np.ndarray
    x: np.ndarray
    U: np.ndarray
    xT: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.T)

    @property
    def sign_changes(self) -> int:
        """Number of sign changes of ``x_T`` (zeros are skipped)."""
        s = np.sign(self.xT)
        s = s[s != 0]
        return int(np.count_nonzero(s[1:] != s[:-1]))

    @property
    def multivalued(self) -> bool:
        return self.sign_changes > 0

    @property
    def min_xT(self) -> float:
        return float(np.min(self.xT))

    def to_csv(self, path) -> None:
        data = np.column_stack([self.T, self.x, self.U, self.xT])
        np.savetxt(path, data, delimiter=",", header="T,x,U,xT", comments="", fmt="%.17g")

    @classmethod
    def from_csv(cls, path, t: float = float("nan"), x0: float = 0.0) -> "ParametricProfile":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(t=t, x0=x0, T=data[:, 0], x=data[:, 1], U=data[:, 2], xT=data[:, 3])

    def write_sidecar(self, path, **extra) -> None:
        meta = {"t": self.t, "x0": self.x0, "n_samples": len(self), **self.metadata, **extra}
        with open(path, "w") as fh:
            json.dump(meta, fh, indent=2)


def snapshot(tau: TauFunction, t: float, T_range=None, n_samples: int = DEFAULT_SAMPLES,
             x0: float = 0.0) -> ParametricProfile:
    """Sample the profile at physical time ``t`` on a uniform ``T`` grid."""
    if n_samples < 2:
        raise DomainError("a snapshot needs at least two samples")
    if T_range is None:
        T_range = default_T_range(tau, t)
    lo, hi = map(float, T_range)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"invalid T range {T_range!r}")
    T = np.linspace(lo, hi, n_samples)
    W = tau.W(t, T)
    U = tau.U(t, T)
    W_T = tau.W_T(t, T)
    meta = {"alpha": tau.alpha, "modes": tau.params.to_dict()["modes"],
            "kind": tau.kind, "dispersion": tau.params.dispersion, "T_range": [lo, hi]}
    return ParametricProfile(t=float(t), x0=float(x0), T=T, x=T + W + x0, U=U,
                             xT=1.0 + W_T, metadata=meta)


def self_intersections(profile: ParametricProfile, min_U: float = 0.0):
    """Crossing points of the polyline ``(x, U)`` with itself.

    Adjacent segments are skipped.  Only crossings with ``U > min_U`` are
    returned.
    """
    P = np.column_stack([profile.x, profile.U])
    a, b = P[:-1], P[1:]
    d = b - a
    n = len(a)
    hits = []
    for i in range(n - 2):
        q, e = a[i + 2:], d[i + 2:]
        denom = d[i, 0] * e[:, 1] - d[i, 1] * e[:, 0]
        w = q - a[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / denom
            u = (w[:, 0] * d[i, 1] - w[:, 1] * d[i, 0]) / denom
        ok = (denom != 0) & (s >= 0) & (s < 1) & (u >= 0) & (u < 1)
        for j in np.flatnonzero(ok):
            pt = a[i] + s[j] * d[i]
            if pt[1] > min_U:
                hits.append((float(pt[0]), float(pt[1])))
    return hits
