"""Parsing and validation of the per-sensor telemetry CSV files.

Each sensor ships as one CSV with a header row. Timestamps come from the
``ts`` column when present, otherwise from ``date`` + ``time`` interpreted in
the fixed UTC-0700 zone the collection used. Feature cells are kept as raw
text tokens; values outside the documented domains are admitted but counted,
because the public files themselves contain physically impossible readings.
"""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone, date as date_cls
from pathlib import Path
from typing import Mapping, Optional, Sequence

from sensorgrid.errors import (
    InconsistentAnnotation,
    MissingColumn,
    UnknownClass,
    UnparsableTimestamp,
)
from sensorgrid.schema import (
    FEATURES_BY_SENSOR,
    SENSOR_ORDER,
    EventClass,
    SensorKind,
    SensorReading,
    class_of,
)

#: Collection-site zone: a fixed UTC-0700 offset, deliberately not a tz name.
SOURCE_TZ = timezone(timedelta(hours=-7))

_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
           "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")
_MONTH_INDEX = {m.lower(): i + 1 for i, m in enumerate(_MONTHS)}

#: Filename keywords used to find each sensor's CSV inside a directory.
SENSOR_FILE_KEYWORDS: dict[SensorKind, str] = {
    SensorKind.FRIDGE: "fridge",
    SensorKind.GARAGE_DOOR: "garage",
    SensorKind.GPS_TRACKER: "gps",
    SensorKind.MODBUS: "modbus",
    SensorKind.MOTION_LIGHT: "motion",
    SensorKind.THERMOSTAT: "thermostat",
    SensorKind.WEATHER: "weather",
}


@dataclass
class ParseIssues:
    """Counters for admissible oddities found while parsing one file."""

    ts_mismatches: int = 0


@dataclass
class IngestReport:
    """Dataset statistics computed from parsed readings."""

    rows_per_sensor: dict[str, int]
    distinct_ts_per_sensor: dict[str, int]
    peak_per_second: dict[str, int]
    class_counts: dict[str, int]
    out_of_domain: int
    total_rows: int
    distinct_timestamps: int
    ts_mismatches: int = 0

    def to_dict(self) -> dict:
        return {
            "rows_per_sensor": self.rows_per_sensor,
            "distinct_ts_per_sensor": self.distinct_ts_per_sensor,
            "peak_per_second": self.peak_per_second,
            "class_counts": self.class_counts,
            "out_of_domain": self.out_of_domain,
            "total_rows": self.total_rows,
            "distinct_timestamps": self.distinct_timestamps,
            "ts_mismatches": self.ts_mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _parse_date(token: str) -> date_cls:
    token = token.strip()
    parts = token.split("-")
    if len(parts) == 3 and parts[1].lower() in _MONTH_INDEX:
        # d-MMM-yy, e.g. 25-Apr-19
        try:
            day = int(parts[0])
            month = _MONTH_INDEX[parts[1].lower()]
            year = int(parts[2])
            year += 2000 if year < 100 else 0
            return date_cls(year, month, day)
        except ValueError:
            raise UnparsableTimestamp(f"bad date {token!r}") from None
    if len(parts) == 3:
        # ISO yyyy-mm-dd
        try:
            return date_cls(int(parts[0]), int(parts[1]), int(parts[2]))
        except ValueError:
            raise UnparsableTimestamp(f"bad date {token!r}") from None
    raise UnparsableTimestamp(f"bad date {token!r}")


def _parse_time(token: str) -> tuple[int, int, int]:
    parts = token.strip().split(":")
    if len(parts) != 3:
        raise UnparsableTimestamp(f"bad time {token!r}")
    try:
        h, m, s = (int(p) for p in parts)
    except ValueError:
        raise UnparsableTimestamp(f"bad time {token!r}") from None
    if not (0 <= h < 24 and 0 <= m < 60 and 0 <= s < 60):
        raise UnparsableTimestamp(f"bad time {token!r}")
    return h, m, s


def epoch_from_date_time(date_token: str, time_token: str) -> int:
    """Epoch seconds of a date+time pair in the source zone."""
    d = _parse_date(date_token)
    h, m, s = _parse_time(time_token)
    return int(datetime(d.year, d.month, d.day, h, m, s, tzinfo=SOURCE_TZ).timestamp())


def format_date_time(epoch: int) -> tuple[str, str]:
    """Inverse of :func:`epoch_from_date_time`, in d-MMM-yy style."""
    dt = datetime.fromtimestamp(epoch, SOURCE_TZ)
    return (f"{dt.day:02d}-{_MONTHS[dt.month - 1]}-{dt.year % 100:02d}",
            f"{dt.hour:02d}:{dt.minute:02d}:{dt.second:02d}")


def _parse_ts(token: str) -> int:
    try:
        return int(float(token.strip()))
    except (ValueError, OverflowError):
        raise UnparsableTimestamp(f"bad ts {token!r}") from None


def parse_sensor_csv(
    path: Path | str,
    kind: SensorKind,
    issues: Optional[ParseIssues] = None,
) -> list[SensorReading]:
    """Parse one sensor CSV into readings, preserving raw cell tokens.

    Readings come back in file order with ``arrival_index`` equal to the data
    row index. When both ``ts`` and ``date``/``time`` are present and disagree,
    ``ts`` wins and the row is counted in ``issues``. Rows without label/type
    columns default to the normal class.
    """
    path = Path(path)
    features = FEATURES_BY_SENSOR[kind]
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingColumn(f"{path}: file has no header row")
        cols = {name.strip().lower(): i for i, name in enumerate(header)}
        feature_cols = []
        for feat in features:
            idx = cols.get(feat.name.lower())
            if idx is None:
                raise MissingColumn(f"{path}: missing column {feat.name!r}")
            feature_cols.append(idx)
        ts_col = cols.get("ts")
        date_col = cols.get("date")
        time_col = cols.get("time")
        if ts_col is None and (date_col is None or time_col is None):
            raise MissingColumn(f"{path}: need a ts column or date+time columns")
        label_col = cols.get("label")
        type_col = cols.get("type")

        def cell(row: list[str], idx: Optional[int]) -> str:
            if idx is None or idx >= len(row):
                return ""
            return row[idx]

        readings: list[SensorReading] = []
        for row in reader:
            if not row or all(c.strip() == "" for c in row):
                continue
            if ts_col is not None:
                timestamp = _parse_ts(cell(row, ts_col))
                if date_col is not None and time_col is not None:
                    try:
                        derived = epoch_from_date_time(cell(row, date_col), cell(row, time_col))
                    except UnparsableTimestamp:
                        derived = None
                    if derived is not None and derived != timestamp and issues is not None:
                        issues.ts_mismatches += 1
            else:
                timestamp = epoch_from_date_time(cell(row, date_col), cell(row, time_col))

            values = {
                feat.name: cell(row, idx).strip()
                for feat, idx in zip(features, feature_cols)
            }
            clazz = _resolve_class(cell(row, label_col), cell(row, type_col),
                                   label_col is not None, type_col is not None)
            readings.append(SensorReading(
                sensor=kind,
                timestamp=timestamp,
                arrival_index=len(readings),
                values=values,
                clazz=clazz,
            ))
    return readings


def _resolve_class(label_token: str, type_token: str,
                   has_label: bool, has_type: bool) -> EventClass:
    if has_type and type_token.strip():
        if has_label:
            try:
                bit = int(label_token.strip())
            except ValueError:
                raise InconsistentAnnotation(
                    f"label must be a 0/1 bit, got {label_token!r}") from None
            return class_of(bit, type_token)
        return EventClass.from_name(type_token)
    if has_label and label_token.strip():
        try:
            bit = int(label_token.strip())
        except ValueError:
            raise InconsistentAnnotation(
                f"label must be a 0/1 bit, got {label_token!r}") from None
        if bit == 0:
            return EventClass.NORMAL
        raise MissingColumn("attack row carries no type column to name its class")
    return EventClass.NORMAL


def discover_sensor_files(directory: Path | str) -> dict[SensorKind, Path]:
    """Locate the seven per-sensor CSVs in a directory by filename keyword."""
    directory = Path(directory)
    found: dict[SensorKind, Path] = {}
    for path in sorted(directory.glob("*.csv")):
        stem = path.name.lower()
        matches = [k for k, kw in SENSOR_FILE_KEYWORDS.items() if kw in stem]
        if len(matches) > 1:
            raise MissingColumn(f"{path.name}: matches several sensors {matches}")
        if not matches:
            continue
        kind = matches[0]
        if kind in found:
            raise MissingColumn(
                f"two files match sensor {kind.value!r}: {found[kind].name}, {path.name}")
        found[kind] = path
    missing = [k.value for k in SENSOR_ORDER if k not in found]
    if missing:
        raise MissingColumn(f"{directory}: no CSV found for sensors {missing}")
    return found


def parse_directory(
    directory: Path | str,
) -> tuple[dict[SensorKind, list[SensorReading]], dict[SensorKind, ParseIssues]]:
    """Parse all seven sensor files of a directory."""
    files = discover_sensor_files(directory)
    readings: dict[SensorKind, list[SensorReading]] = {}
    issues: dict[SensorKind, ParseIssues] = {}
    for kind in SENSOR_ORDER:
        issue = ParseIssues()
        readings[kind] = parse_sensor_csv(files[kind], kind, issue)
        issues[kind] = issue
    return readings, issues


def dataset_stats(
    readings_by_sensor: Mapping[SensorKind, Sequence[SensorReading]],
    issues: Optional[Mapping[SensorKind, ParseIssues]] = None,
) -> IngestReport:
    """Aggregate statistics over parsed readings.

    The merge is associative and order-independent, so per-sensor inputs may
    have been parsed concurrently.
    """
    rows_per_sensor: dict[str, int] = {}
    distinct_per_sensor: dict[str, int] = {}
    peak_per_second: dict[str, int] = {}
    class_counts: Counter = Counter()
    out_of_domain = 0
    all_ts: set[int] = set()

    for kind in SENSOR_ORDER:
        readings = readings_by_sensor.get(kind, ())
        per_ts = Counter(r.timestamp for r in readings)
        rows_per_sensor[kind.value] = len(readings)
        distinct_per_sensor[kind.value] = len(per_ts)
        peak_per_second[kind.value] = max(per_ts.values(), default=0)
        all_ts.update(per_ts)
        features = FEATURES_BY_SENSOR[kind]
        for r in readings:
            class_counts[r.clazz.value] += 1
            for feat in features:
                if not feat.domain.contains(r.values[feat.name]):
                    out_of_domain += 1

    mismatches = sum(i.ts_mismatches for i in issues.values()) if issues else 0
    return IngestReport(
        rows_per_sensor=rows_per_sensor,
        distinct_ts_per_sensor=distinct_per_sensor,
        peak_per_second=peak_per_second,
        class_counts=dict(class_counts),
        out_of_domain=out_of_domain,
        total_rows=sum(rows_per_sensor.values()),
        distinct_timestamps=len(all_ts),
        ts_mismatches=mismatches,
    )


def write_counts_csv(
    readings_by_sensor: Mapping[SensorKind, Sequence[SensorReading]],
    path: Path | str,
) -> None:
    """Write the per-timestamp reading counts used for event-rate plots."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sensor", "timestamp", "count"])
        for kind in SENSOR_ORDER:
            per_ts = Counter(r.timestamp for r in readings_by_sensor.get(kind, ()))
            for ts in sorted(per_ts):
                writer.writerow([kind.value, ts, per_ts[ts]])
