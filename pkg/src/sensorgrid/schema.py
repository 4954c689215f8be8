"""Domain model shared by every pipeline stage.

The sensor schema is fixed: seven sources exposing seventeen features in a
deterministic column order. Readings and combined rows keep their cell values
as the raw text tokens found in the source files, so any stage can be replayed
bit-exactly; numeric interpretation happens only at imputation time through
:func:`numeric_code`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Mapping, Optional, Sequence, Union

from sensorgrid.errors import InconsistentAnnotation, UnknownClass

FORMAT_VERSION = "1"

#: Height and width of an encoded sample and the number of channels.
WINDOW_HEIGHT = 224
WINDOW_WIDTH = 224
CHANNELS = 3

#: Bytes occupied by one sample in a container file.
SAMPLE_BYTES = WINDOW_HEIGHT * WINDOW_WIDTH * CHANNELS


class SensorKind(Enum):
    """The seven telemetry sources, in fixed column-layout order."""

    FRIDGE = "fridge"
    GARAGE_DOOR = "garage_door"
    GPS_TRACKER = "gps_tracker"
    MODBUS = "modbus"
    MOTION_LIGHT = "motion_light"
    THERMOSTAT = "thermostat"
    WEATHER = "weather"


SENSOR_ORDER: tuple[SensorKind, ...] = tuple(SensorKind)
SENSOR_INDEX: dict[SensorKind, int] = {k: i for i, k in enumerate(SENSOR_ORDER)}


@dataclass(frozen=True)
class NumericRange:
    """Closed numeric interval; ``integer`` restricts it to whole numbers."""

    lo: float
    hi: float
    integer: bool = False

    def contains(self, token: str) -> bool:
        token = token.strip()
        try:
            if self.integer:
                value = int(token)
            else:
                value = float(token)
        except ValueError:
            return False
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class CategoricalSet:
    """Finite token set; membership is case-insensitive."""

    tokens: frozenset[str]

    def contains(self, token: str) -> bool:
        return token.strip().lower() in self.tokens


FeatureDomain = Union[NumericRange, CategoricalSet]


@dataclass(frozen=True)
class FeatureId:
    """One named feature column owned by a single sensor."""

    name: str
    sensor: SensorKind
    domain: FeatureDomain

    @property
    def categorical(self) -> bool:
        return isinstance(self.domain, CategoricalSet)


def _cat(*tokens: str) -> CategoricalSet:
    return CategoricalSet(frozenset(t.lower() for t in tokens))


#: The full 17-feature layout. Sensor blocks appear in ``SENSOR_ORDER`` and
#: features keep their order inside each block; this tuple is the single
#: source of truth for column positions everywhere downstream.
FEATURES: tuple[FeatureId, ...] = (
    FeatureId("fridge_temperature", SensorKind.FRIDGE, NumericRange(1.0, 14.0)),
    FeatureId("temp_condition", SensorKind.FRIDGE, _cat("high", "low")),
    FeatureId("door_state", SensorKind.GARAGE_DOOR, _cat("open", "closed")),
    FeatureId("sphone_signal", SensorKind.GARAGE_DOOR, _cat("true", "false", "0", "1")),
    FeatureId("latitude", SensorKind.GPS_TRACKER, NumericRange(0.0, 550.0)),
    FeatureId("longitude", SensorKind.GPS_TRACKER, NumericRange(10.0, 556.0)),
    FeatureId("FC1_Read_Input_Register", SensorKind.MODBUS, NumericRange(0, 65535, integer=True)),
    FeatureId("FC2_Read_Discrete_Value", SensorKind.MODBUS, NumericRange(0, 65535, integer=True)),
    FeatureId("FC3_Read_Holding_Register", SensorKind.MODBUS, NumericRange(0, 65535, integer=True)),
    FeatureId("FC4_Read_Coil", SensorKind.MODBUS, NumericRange(0, 65535, integer=True)),
    FeatureId("motion_status", SensorKind.MOTION_LIGHT, _cat("0", "1")),
    FeatureId("light_status", SensorKind.MOTION_LIGHT, _cat("on", "off")),
    FeatureId("current_temperature", SensorKind.THERMOSTAT, NumericRange(25.0, 35.0)),
    FeatureId("thermostat_status", SensorKind.THERMOSTAT, _cat("0", "1")),
    FeatureId("temperature", SensorKind.WEATHER, NumericRange(20.0, 50.0)),
    FeatureId("pressure", SensorKind.WEATHER, NumericRange(-12.0, 12.5)),
    FeatureId("humidity", SensorKind.WEATHER, NumericRange(0.2, 100.0)),
)

FEATURE_COUNT = len(FEATURES)
FEATURE_INDEX: dict[str, int] = {f.name: i for i, f in enumerate(FEATURES)}
FEATURES_BY_SENSOR: dict[SensorKind, tuple[FeatureId, ...]] = {
    kind: tuple(f for f in FEATURES if f.sensor is kind) for kind in SENSOR_ORDER
}


def feature_layout() -> list[dict]:
    """Serializable description of the column layout, in column order."""
    out = []
    for f in FEATURES:
        if isinstance(f.domain, NumericRange):
            domain = {"kind": "integer" if f.domain.integer else "numeric",
                      "lo": f.domain.lo, "hi": f.domain.hi}
        else:
            domain = {"kind": "categorical", "tokens": sorted(f.domain.tokens)}
        out.append({"name": f.name, "sensor": f.sensor.value, "domain": domain})
    return out


class EventClass(Enum):
    """The eight event classes; every class except ``normal`` is an attack."""

    BACKDOOR = "backdoor"
    DDOS = "ddos"
    INJECTION = "injection"
    NORMAL = "normal"
    PASSWORD = "password"
    RANSOMWARE = "ransomware"
    SCANNING = "scanning"
    XSS = "xss"

    @property
    def label(self) -> int:
        """Binary annotation bit: 0 for normal operation, 1 for any attack."""
        return 0 if self is EventClass.NORMAL else 1

    @property
    def is_attack(self) -> bool:
        return self is not EventClass.NORMAL

    @classmethod
    def from_name(cls, name: str) -> "EventClass":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise UnknownClass(f"unknown event type {name!r}") from None


def class_of(label_bit: int, type_string: str) -> EventClass:
    """Resolve an event class from its label bit and type string.

    The two annotations must agree: bit 0 pairs only with ``normal`` and bit 1
    only with attack types. Raises :class:`InconsistentAnnotation` on
    contradiction and :class:`UnknownClass` on an unrecognised type string.
    """
    if label_bit not in (0, 1):
        raise InconsistentAnnotation(f"label bit must be 0 or 1, got {label_bit!r}")
    clazz = EventClass.from_name(type_string)
    if (label_bit == 0) != (clazz is EventClass.NORMAL):
        raise InconsistentAnnotation(
            f"label {label_bit} contradicts event type {clazz.value!r}"
        )
    return clazz


#: Raw tokens that code to 0.0 / 1.0 when a categorical cell is used numerically.
CATEGORY_ZERO = frozenset({"low", "closed", "false", "off"})
CATEGORY_ONE = frozenset({"high", "open", "true", "on"})


def numeric_code(token: str) -> float:
    """Numeric value of a raw cell token.

    Binary category words map to 0/1, everything else is parsed as a float.
    Tokens that fit neither convention code to 0.0; ingest counts them as
    out-of-domain so they never disappear silently.
    """
    t = token.strip().lower()
    if t in CATEGORY_ZERO:
        return 0.0
    if t in CATEGORY_ONE:
        return 1.0
    try:
        return float(t)
    except ValueError:
        return 0.0


@dataclass(frozen=True)
class SensorReading:
    """One timestamped measurement tuple from a single sensor.

    ``values`` maps feature name to the raw text token from the source file;
    all of the sensor's features must be present. ``arrival_index`` is the
    0-based position of the reading within its source file.
    """

    sensor: SensorKind
    timestamp: int
    arrival_index: int
    values: Mapping[str, str]
    clazz: EventClass

    def __post_init__(self) -> None:
        expected = {f.name for f in FEATURES_BY_SENSOR[self.sensor]}
        got = set(self.values)
        if got != expected:
            raise ValueError(
                f"{self.sensor.value} reading must carry exactly {sorted(expected)}, "
                f"got {sorted(got)}"
            )
        if self.arrival_index < 0:
            raise ValueError("arrival_index must be non-negative")


@dataclass(frozen=True)
class CombinedRow:
    """One 17-cell row of the combined dataset.

    ``cells`` holds raw tokens in fixed feature order with ``None`` marking a
    missing cell; ``mask`` derives from it (1 = missing). ``ordinal`` indexes
    rows sharing a timestamp and ``counter`` records how many original rows an
    aggregated row represents.
    """

    timestamp: int
    ordinal: int
    cells: tuple[Optional[str], ...]
    clazz: EventClass
    counter: int = 1

    def __post_init__(self) -> None:
        if len(self.cells) != FEATURE_COUNT:
            raise ValueError(f"expected {FEATURE_COUNT} cells, got {len(self.cells)}")
        if self.counter < 1:
            raise ValueError("counter must be >= 1")
        if self.ordinal < 0:
            raise ValueError("ordinal must be non-negative")

    @property
    def mask(self) -> tuple[int, ...]:
        """Missing-value mask over the 17 cells, 1 where the cell is absent."""
        return tuple(1 if c is None else 0 for c in self.cells)


@dataclass
class DatasetManifest:
    """Everything needed to re-derive a prepared store or dataset container.

    Written as a JSON document with sorted keys next to every artifact, so a
    run is reproducible from its manifest alone (plus the input files).
    """

    combination: str
    aggregated: bool
    block_size: int
    train_fraction: float
    seed: int
    effective_seed: int
    format_version: str = FORMAT_VERSION
    input_path: Optional[str] = None
    row_count: int = 0
    class_conflicts: int = 0
    ts_mismatches: int = 0
    chunks: list[dict] = field(default_factory=list)
    partitions: dict[str, list[int]] = field(default_factory=dict)
    imputation: Optional[str] = None
    step: Optional[int] = None
    scaler: Optional[list] = None
    impute_fill_values: Optional[list] = None
    sample_counts: Optional[dict] = None
    sample_total: Optional[int] = None
    short_chunks: int = 0
    notes: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        raw = json.loads(text)
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in raw.items() if k in known})


def class_counts_to_dict(counts: Mapping[EventClass, int]) -> dict[str, int]:
    """Histogram with class-name keys in class order, for JSON output."""
    return {c.value: int(counts.get(c, 0)) for c in EventClass if counts.get(c, 0)}


def row_values_matrix(rows: Sequence[CombinedRow]):
    """Numeric view of combined rows: (values, mask) float64/uint8 arrays.

    Missing cells are NaN in ``values`` and 1 in ``mask``.
    """
    import numpy as np

    n = len(rows)
    values = np.full((n, FEATURE_COUNT), np.nan, dtype=np.float64)
    mask = np.ones((n, FEATURE_COUNT), dtype=np.uint8)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row.cells):
            if cell is not None:
                values[i, j] = numeric_code(cell)
                mask[i, j] = 0
    return values, mask
