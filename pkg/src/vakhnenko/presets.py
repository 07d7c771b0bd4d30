"""Reference parameter sets for two-soliton fission scenarios."""
from dataclasses import dataclass


@dataclass(frozen=True)
class Preset:
    name: str
    alpha: float
    v1: float
    v2: float
    times: tuple[float, ...]


PRESETS = {
    p.name: p
    for p in (
        Preset("fig4-5", 1.2, 0.24, 0.12, (-15.0, 11.0)),
        Preset("fig6-7", 0.1, 0.24, 0.12, (-15.0, 11.0)),
        Preset("fig8-9", 2.6, 0.24, 0.12, (-15.0, 11.0)),
        Preset("fig10-11", 5.0, 0.24, 0.12, (-15.0, 11.0)),
    )
}
