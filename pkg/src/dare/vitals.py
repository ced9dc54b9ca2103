"""Synthetic vital-sign streams and the report/suppress decision.

Each (seed, patient, kind) triple owns an independent random stream. The
signal is a mean-reverting Gaussian walk held inside a resting range; on
each round, with ``excursion_prob``, the reading instead jumps to a value
strictly outside the resting range (but inside the hard clamp range).
With the resting range equal to the threshold band, a threshold sensor
therefore fires on a fraction ``excursion_prob`` of rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Mapping, Optional, Tuple

import numpy as np

from .core import ConfigurationError, SensorKind

_CHUNK = 1024


@dataclass(frozen=True)
class ThresholdBand:
    low: float
    high: float

    def __post_init__(self):
        if not self.low < self.high:
            raise ConfigurationError(f"band low {self.low} must be below high {self.high}")

    def outside(self, value: float) -> bool:
        return value < self.low or value > self.high


DEFAULT_BANDS: Mapping[SensorKind, ThresholdBand] = {
    SensorKind.TEMPERATURE: ThresholdBand(35.0, 40.0),  # deg C
    SensorKind.GLUCOSE: ThresholdBand(110.0, 125.0),  # mg/dL
}


@dataclass(frozen=True)
class Reading:
    kind: SensorKind
    value: float
    round: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError(f"non-finite reading {self.value!r}")


@dataclass(frozen=True)
class SignalModel:
    """Parameters of one vital's random walk.

    ``step`` is the standard deviation of the per-round increment and
    ``reversion`` the fraction of the gap to ``mean`` closed each round.
    ``rest`` bounds the walk itself; ``clamp`` bounds every reading,
    excursions included. ``rest`` defaults to ``clamp``.
    """

    mean: float
    step: float
    clamp: Tuple[float, float]
    rest: Optional[Tuple[float, float]] = None
    reversion: float = 0.1
    excursion_prob: float = 0.0

    def __post_init__(self):
        lo, hi = self.clamp
        rlo, rhi = self.resting
        if not lo <= rlo < rhi <= hi:
            raise ConfigurationError(f"resting range {self.resting} must sit inside clamp {self.clamp}")
        if not rlo <= self.mean <= rhi:
            raise ConfigurationError(f"mean {self.mean} outside resting range {self.resting}")
        if self.step < 0 or not 0.0 <= self.reversion <= 1.0:
            raise ConfigurationError("step must be >= 0 and reversion in [0, 1]")
        if not 0.0 <= self.excursion_prob <= 1.0:
            raise ConfigurationError(f"excursion_prob {self.excursion_prob} not in [0, 1]")
        if self.excursion_prob > 0 and (lo, hi) == (rlo, rhi):
            raise ConfigurationError("excursions need room between the resting and clamp ranges")

    @property
    def resting(self) -> Tuple[float, float]:
        return self.rest if self.rest is not None else self.clamp


# Threshold kinds rest exactly on their band, so only excursions fire.
DEFAULT_SIGNALS: Mapping[SensorKind, SignalModel] = {
    SensorKind.ECG: SignalModel(mean=1.0, step=0.05, clamp=(0.5, 2.0)),  # R-wave, mV
    SensorKind.PULSE_RATE: SignalModel(mean=75.0, step=1.5, clamp=(45.0, 140.0)),
    SensorKind.HEART_RATE: SignalModel(mean=72.0, step=1.5, clamp=(40.0, 150.0)),
    SensorKind.TEMPERATURE: SignalModel(
        mean=37.0, step=0.15, clamp=(34.0, 42.0), rest=(35.0, 40.0), excursion_prob=0.1
    ),
    SensorKind.GLUCOSE: SignalModel(
        mean=117.5, step=1.0, clamp=(60.0, 250.0), rest=(110.0, 125.0), excursion_prob=0.1
    ),
    SensorKind.TOXINS: SignalModel(mean=0.2, step=0.02, clamp=(0.0, 1.0)),  # normalised
    SensorKind.MOTION: SignalModel(mean=1.0, step=0.1, clamp=(0.0, 4.0)),  # g
}


def with_excursion(model: SignalModel, prob: float) -> SignalModel:
    return replace(model, excursion_prob=prob)


class VitalStream:
    """Lazily generated readings for one sensor; ``value(t)`` is pure in t.

    Values are drawn in fixed-size chunks so the sequence does not depend on
    how far ahead callers ask.
    """

    def __init__(self, kind: SensorKind, patient: int, seed: int, model: SignalModel):
        self.kind = kind
        self.model = model
        ss = np.random.SeedSequence([int(seed) & (2**64 - 1), int(patient), kind.index])
        self._rng = np.random.default_rng(ss)
        self._state = model.mean
        self._values: list = []

    def value(self, t: int) -> float:
        if t < 0:
            raise ValueError(f"round index must be >= 0, got {t}")
        while len(self._values) <= t:
            self._extend()
        return self._values[t]

    def reading(self, t: int) -> Reading:
        return Reading(self.kind, self.value(t), t)

    def _extend(self):
        m = self.model
        lo, hi = m.clamp
        rlo, rhi = m.resting
        noise = self._rng.standard_normal(_CHUNK)
        trigger = self._rng.random(_CHUNK)
        side = self._rng.random(_CHUNK)
        depth = self._rng.random(_CHUNK)
        below, above = rlo - lo, hi - rhi
        p_below = below / (below + above) if below + above > 0 else 0.0
        x = self._state
        out = self._values
        for i in range(_CHUNK):
            x += m.reversion * (m.mean - x) + m.step * noise[i]
            x = min(max(x, rlo), rhi)
            if trigger[i] < m.excursion_prob:
                if side[i] < p_below:
                    v = lo + depth[i] * below
                    if v >= rlo:
                        v = math.nextafter(rlo, -math.inf)
                else:
                    v = hi - depth[i] * above
                    if v <= rhi:
                        v = math.nextafter(rhi, math.inf)
                out.append(float(v))
            else:
                out.append(float(x))
        self._state = x


@lru_cache(maxsize=256)
def _stream(kind: SensorKind, patient: int, seed: int, model: SignalModel) -> VitalStream:
    return VitalStream(kind, patient, seed, model)


def sample(
    kind: SensorKind,
    patient: int,
    round: int,
    seed: int,
    model: Optional[SignalModel] = None,
) -> Reading:
    """Reading of ``kind`` for ``patient`` at round index ``round`` (0-based)."""
    model = DEFAULT_SIGNALS[kind] if model is None else model
    return _stream(kind, patient, seed, model).reading(round)


def should_transmit(reading: Reading, band: Optional[ThresholdBand] = None) -> bool:
    """Continuous sensors always report; threshold sensors only outside the band."""
    if reading.kind.is_threshold:
        if band is None:
            raise ConfigurationError(f"{reading.kind.value} needs a threshold band")
        return band.outside(reading.value)
    if band is not None:
        raise ConfigurationError(f"{reading.kind.value} is continuous; no band applies")
    return True
