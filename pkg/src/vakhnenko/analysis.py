"""Census of solitary structures along snapshots and over time."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import DomainError
from .soliton import TauFunction
from .transform import DEFAULT_SAMPLES, ParametricProfile, snapshot

DEFAULT_PROMINENCE = 0.02


@dataclass(frozen=True)
class Structure:
    U_peak: float
    x_peak: float
    T_peak: float
    multivalued: bool
    prominence: float


@dataclass
class StructureCensus:
    t: float
    structures: tuple[Structure, ...]

    @property
    def count(self) -> int:
        return len(self.structures)

    def to_dict(self) -> dict:
        return {"t": self.t, "count": self.count,
                "structures": [{"U_peak": s.U_peak, "x_peak": s.x_peak,
                                "multivalued": s.multivalued, "T_peak": s.T_peak,
                                "prominence": s.prominence} for s in self.structures]}


def count_structures(profile: ParametricProfile,
                     prominence: float = DEFAULT_PROMINENCE) -> StructureCensus:
    """Local maxima of ``U`` along ``T`` whose prominence is at least ``prominence * max U``.

    Peaks are searched along the curve parameter, not along ``x``, since the
    profile can be multivalued in ``x``.  Each structure owns the stretch of
    samples between the lowest points separating it from its neighbours;
    it is multivalued when ``x_T`` turns negative there.
    """
    if len(profile) < 3:
        raise DomainError("a census needs at least three samples")
    if not prominence > 0:
        raise DomainError("prominence must be positive")
    U = np.asarray(profile.U)
    top = float(np.max(U))
    if not np.all(np.isfinite(U)) or top <= 0:
        raise DomainError("profile has no positive finite amplitude")
    # endpoints padded so that a peak on the boundary is still found
    floor = float(np.min(U))
    padded = np.concatenate([[floor], U, [floor]])
    peaks, props = find_peaks(padded, prominence=prominence * top)
    peaks = peaks - 1
    cuts = [0]
    for a, b in zip(peaks[:-1], peaks[1:]):
        cuts.append(a + int(np.argmin(U[a:b + 1])))
    cuts.append(len(U) - 1)
    structures = []
    for k, p in enumerate(peaks):
        window = profile.xT[cuts[k]:cuts[k + 1] + 1]
        structures.append(Structure(
            U_peak=float(U[p]), x_peak=float(profile.x[p]), T_peak=float(profile.T[p]),
            multivalued=bool(np.any(window < 0)), prominence=float(props["prominences"][k])))
    structures.sort(key=lambda s: s.x_peak)
    return StructureCensus(t=profile.t, structures=tuple(structures))


@dataclass
class FissionTimeline:
    censuses: list[StructureCensus]
    fission_index: int | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def times(self):
        return [c.t for c in self.censuses]

    @property
    def counts(self):
        return [c.count for c in self.censuses]

    def to_list(self) -> list[dict]:
        return [c.to_dict() for c in self.censuses]

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_list(), **kwargs)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "count", "index", "U_peak", "x_peak", "multivalued"])
            for c in self.censuses:
                for i, s in enumerate(c.structures):
                    w.writerow([repr(c.t), c.count, i, repr(s.U_peak), repr(s.x_peak),
                                int(s.multivalued)])


def fission_timeline(tau: TauFunction, t_start: float | None = None, t_end: float | None = None,
                     n_times: int | None = None, prominence: float = DEFAULT_PROMINENCE, *,
                     times=None, n_samples: int = DEFAULT_SAMPLES, x0: float = 0.0,
                     T_range=None) -> FissionTimeline:
    """Census at each time; marks the first index where the count goes from 1 to 2.

    Give either ``(t_start, t_end, n_times)`` or an explicit ``times`` list.
    """
    if times is None:
        if t_start is None or t_end is None or n_times is None:
            raise DomainError("give t_start, t_end and n_times, or times")
        if not t_start < t_end:
            raise DomainError("t_start must precede t_end")
        if n_times < 2:
            raise DomainError("n_times must be at least 2")
        times = np.linspace(t_start, t_end, n_times)
    censuses = [count_structures(snapshot(tau, float(t), T_range, n_samples, x0), prominence)
                for t in times]
    fission = None
    for i in range(1, len(censuses)):
        if censuses[i - 1].count == 1 and censuses[i].count == 2:
            fission = i
            break
    return FissionTimeline(censuses, fission, {"prominence": prominence, "x0": x0,
                                               "n_samples": n_samples})
