"""Synthetic multi-sensor telemetry generator for desk-scale testing.

Scenarios reproduce the pathologies of the real telemetry corpus: several
readings sharing one timestamp, sensors with different emission periods and
gaps, and attacks arriving as contiguous time blocks. Attack influence is
modelled primarily through emission-pattern changes (sensors falling silent),
with an optional value shift per class.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from sensorgrid.errors import InvalidSchedule
from sensorgrid.ingest import format_date_time
from sensorgrid.schema import (
    CATEGORY_ONE,
    FEATURES_BY_SENSOR,
    SENSOR_ORDER,
    CategoricalSet,
    EventClass,
    FeatureId,
    NumericRange,
    SensorKind,
)

DEFAULT_START_EPOCH = 1_556_000_000


@dataclass(frozen=True)
class SensorProfile:
    """Emission behaviour of one sensor: cadence plus same-timestamp bursts."""

    period: int = 1
    jitter: int = 0
    phase: int = 0
    burst_prob: float = 0.0
    burst_min: int = 2
    burst_max: int = 2


@dataclass(frozen=True)
class ClassEffect:
    """How an event class perturbs the sensors while its block is active.

    ``silent_sensors`` stop emitting entirely, ``value_shift`` pushes numeric
    draws toward the top of their domain (0 = none, 1 = pinned to the top) and
    ``period_scale`` stretches or squeezes emission cadence.
    """

    silent_sensors: tuple[SensorKind, ...] = ()
    value_shift: float = 0.0
    period_scale: float = 1.0


@dataclass(frozen=True)
class ScheduleBlock:
    clazz: EventClass
    start: int
    end: int


@dataclass
class Scenario:
    """Full recipe for one synthetic telemetry run."""

    seed: int
    duration: int
    schedule: list[ScheduleBlock]
    profiles: dict[SensorKind, SensorProfile] = field(default_factory=dict)
    effects: dict[EventClass, ClassEffect] = field(default_factory=dict)
    start_epoch: int = DEFAULT_START_EPOCH

    def validate(self) -> None:
        """Blocks must be ordered, non-overlapping and tile [0, duration)."""
        if self.duration <= 0:
            raise InvalidSchedule("duration must be positive")
        if not self.schedule:
            raise InvalidSchedule("schedule is empty")
        cursor = 0
        for block in self.schedule:
            if block.start != cursor:
                raise InvalidSchedule(
                    f"block {block.clazz.value} starts at {block.start}, expected {cursor}")
            if block.end <= block.start:
                raise InvalidSchedule(f"block {block.clazz.value} is empty or reversed")
            cursor = block.end
        if cursor != self.duration:
            raise InvalidSchedule(f"schedule ends at {cursor}, duration is {self.duration}")

    def block_at(self, t: int) -> ScheduleBlock:
        for block in self.schedule:
            if block.start <= t < block.end:
                return block
        raise InvalidSchedule(f"time {t} outside the schedule")

    def to_json(self) -> str:
        raw = {
            "seed": self.seed,
            "duration": self.duration,
            "start_epoch": self.start_epoch,
            "schedule": [
                {"class": b.clazz.value, "start": b.start, "end": b.end}
                for b in self.schedule
            ],
            "profiles": {
                kind.value: {
                    "period": p.period, "jitter": p.jitter, "phase": p.phase,
                    "burst_prob": p.burst_prob,
                    "burst_min": p.burst_min, "burst_max": p.burst_max,
                }
                for kind, p in self.profiles.items()
            },
            "effects": {
                clazz.value: {
                    "silent_sensors": [s.value for s in e.silent_sensors],
                    "value_shift": e.value_shift,
                    "period_scale": e.period_scale,
                }
                for clazz, e in self.effects.items()
            },
        }
        return json.dumps(raw, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        raw = json.loads(text)
        schedule = [
            ScheduleBlock(EventClass.from_name(b["class"]), int(b["start"]), int(b["end"]))
            for b in raw["schedule"]
        ]
        profiles = {
            SensorKind(k): SensorProfile(
                period=int(p.get("period", 1)),
                jitter=int(p.get("jitter", 0)),
                phase=int(p.get("phase", 0)),
                burst_prob=float(p.get("burst_prob", 0.0)),
                burst_min=int(p.get("burst_min", 2)),
                burst_max=int(p.get("burst_max", 2)),
            )
            for k, p in raw.get("profiles", {}).items()
        }
        effects = {
            EventClass.from_name(c): ClassEffect(
                silent_sensors=tuple(SensorKind(s) for s in e.get("silent_sensors", [])),
                value_shift=float(e.get("value_shift", 0.0)),
                period_scale=float(e.get("period_scale", 1.0)),
            )
            for c, e in raw.get("effects", {}).items()
        }
        return cls(
            seed=int(raw["seed"]),
            duration=int(raw["duration"]),
            schedule=schedule,
            profiles=profiles,
            effects=effects,
            start_epoch=int(raw.get("start_epoch", DEFAULT_START_EPOCH)),
        )


_NO_EFFECT = ClassEffect()


def _one_token(domain: CategoricalSet) -> str:
    candidates = [t for t in domain.tokens if t in CATEGORY_ONE or t == "1"]
    return max(candidates, key=lambda t: (len(t), t))


def _zero_token(domain: CategoricalSet) -> str:
    candidates = [t for t in domain.tokens if t not in CATEGORY_ONE and t != "1"]
    return max(candidates, key=lambda t: (len(t), t))


def _draw_value(feat: FeatureId, shift: float, rng: np.random.Generator) -> str:
    domain = feat.domain
    if isinstance(domain, NumericRange):
        lo_eff = domain.lo + shift * (domain.hi - domain.lo)
        if domain.integer:
            lo_int = int(np.ceil(lo_eff))
            return str(int(rng.integers(lo_int, int(domain.hi) + 1)))
        # sample on a 0.1 grid so rounding can never leave the domain
        steps = int(round((domain.hi - domain.lo) / 0.1))
        lo_step = int(np.ceil(round((lo_eff - domain.lo) / 0.1, 9)))
        k = int(rng.integers(lo_step, steps + 1))
        return f"{domain.lo + k * 0.1:.1f}"
    p_one = min(1.0, 0.5 + shift / 2.0)
    token = _one_token(domain) if rng.random() < p_one else _zero_token(domain)
    return token


def generate(scenario: Scenario, out_dir: Path | str) -> dict:
    """Write the seven per-sensor CSVs plus a ground-truth summary.

    Deterministic for a given scenario: each sensor draws from its own
    seeded stream, so output files are byte-identical across runs.
    """
    scenario.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    class_counts: Counter = Counter()
    rows_per_sensor: dict[str, int] = {}
    files: dict[str, str] = {}

    for si, kind in enumerate(SENSOR_ORDER):
        profile = scenario.profiles.get(kind, SensorProfile())
        rng = np.random.default_rng(np.random.SeedSequence(scenario.seed, spawn_key=(si,)))
        features = FEATURES_BY_SENSOR[kind]
        filename = f"telemetry_{kind.value}.csv"
        path = out_dir / filename
        n_rows = 0
        with path.open("w", newline="", encoding="utf-8") as fh:
            header = ["ts", "date", "time"] + [f.name for f in features] + ["label", "type"]
            fh.write(",".join(header) + "\n")
            t = profile.phase
            while t < scenario.duration:
                block = scenario.block_at(t)
                effect = scenario.effects.get(block.clazz, _NO_EFFECT)
                if kind not in effect.silent_sensors:
                    burst = 1
                    if profile.burst_prob > 0 and rng.random() < profile.burst_prob:
                        burst = int(rng.integers(profile.burst_min, profile.burst_max + 1))
                    epoch = scenario.start_epoch + t
                    date_s, time_s = format_date_time(epoch)
                    for _ in range(burst):
                        cells = [_draw_value(f, effect.value_shift, rng) for f in features]
                        row = [str(epoch), date_s, time_s] + cells + [
                            str(block.clazz.label), block.clazz.value]
                        fh.write(",".join(row) + "\n")
                        class_counts[block.clazz.value] += 1
                        n_rows += 1
                advance = max(1, int(round(profile.period * effect.period_scale)))
                if profile.jitter:
                    advance = max(1, advance + int(rng.integers(-profile.jitter,
                                                                profile.jitter + 1)))
                t += advance
        rows_per_sensor[kind.value] = n_rows
        files[kind.value] = filename

    summary = {
        "seed": scenario.seed,
        "duration": scenario.duration,
        "files": files,
        "rows_per_sensor": rows_per_sensor,
        "class_counts": dict(class_counts),
        "total_rows": sum(rows_per_sensor.values()),
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return summary


def separable_scenario(
    seed: int = 11,
    block_seconds: int = 500,
    pattern: Sequence[str] = ("normal", "ddos", "normal", "password") * 3,
    burst: Optional[Mapping[SensorKind, SensorProfile]] = None,
) -> Scenario:
    """Scenario whose attack blocks silence two sensors each.

    Windows that lie fully inside an attack block then show a missing-value
    stripe that no normal window has, so mask-driven classifiers can separate
    the classes perfectly. Blocks are sized to align with downstream chunking.
    """
    schedule = []
    for i, name in enumerate(pattern):
        schedule.append(ScheduleBlock(EventClass.from_name(name),
                                      i * block_seconds, (i + 1) * block_seconds))
    effects = {
        EventClass.DDOS: ClassEffect(
            silent_sensors=(SensorKind.GPS_TRACKER, SensorKind.MOTION_LIGHT)),
        EventClass.PASSWORD: ClassEffect(
            silent_sensors=(SensorKind.FRIDGE, SensorKind.GARAGE_DOOR)),
        EventClass.BACKDOOR: ClassEffect(
            silent_sensors=(SensorKind.MODBUS, SensorKind.WEATHER)),
    }
    return Scenario(
        seed=seed,
        duration=len(pattern) * block_seconds,
        schedule=schedule,
        profiles=dict(burst) if burst else {},
        effects=effects,
    )
