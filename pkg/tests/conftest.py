"""Shared fixtures: hand-written sensor files and reading builders."""

from __future__ import annotations

from pathlib import Path

import pytest

from sensorgrid.schema import FEATURES_BY_SENSOR, EventClass, SensorKind, SensorReading

DEFAULT_VALUES = {
    "fridge_temperature": "5.0",
    "temp_condition": "low",
    "door_state": "closed",
    "sphone_signal": "false",
    "latitude": "10.0",
    "longitude": "20.0",
    "FC1_Read_Input_Register": "1",
    "FC2_Read_Discrete_Value": "2",
    "FC3_Read_Holding_Register": "3",
    "FC4_Read_Coil": "4",
    "motion_status": "0",
    "light_status": "off",
    "current_temperature": "25.0",
    "thermostat_status": "0",
    "temperature": "25.0",
    "pressure": "0.0",
    "humidity": "50.0",
}


def make_reading(kind: SensorKind, ts: int, arrival: int,
                 clazz: EventClass = EventClass.NORMAL, **overrides) -> SensorReading:
    values = {f.name: DEFAULT_VALUES[f.name] for f in FEATURES_BY_SENSOR[kind]}
    values.update(overrides)
    return SensorReading(kind, ts, arrival, values, clazz)


def write_sensor_csv(path: Path, kind: SensorKind, rows: list[list[str]],
                     clazz: str = "injection", label: str = "1") -> Path:
    """Rows are [date, time, feature values...]; label/type appended."""
    features = [f.name for f in FEATURES_BY_SENSOR[kind]]
    lines = ["date,time," + ",".join(features) + ",label,type"]
    for row in rows:
        lines.append(",".join(row + [label, clazz]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


# The six-row aggregation walkthrough: three same-second rows at 10:01:30 and
# three at 10:01:31, fed from per-sensor files exactly as the combined table
# prints them (missing dashes mean the sensor did not emit at that ordinal).
WORKED_DATE = "25-Apr-19"
WORKED_T0 = "10:01:30"
WORKED_T1 = "10:01:31"

WORKED_SENSOR_ROWS = {
    SensorKind.FRIDGE: [
        [WORKED_DATE, WORKED_T0, "10.9", "True"],
        [WORKED_DATE, WORKED_T0, "12.6", "True"],
        [WORKED_DATE, WORKED_T0, "5.8", "False"],
    ],
    SensorKind.GARAGE_DOOR: [
        [WORKED_DATE, WORKED_T0, "0", "0"],
        [WORKED_DATE, WORKED_T0, "0", "0"],
        [WORKED_DATE, WORKED_T0, "0", "0"],
    ],
    SensorKind.GPS_TRACKER: [
        [WORKED_DATE, WORKED_T1, "82.9", "92.7"],
        [WORKED_DATE, WORKED_T1, "1.3", "11.1"],
    ],
    SensorKind.MODBUS: [
        [WORKED_DATE, WORKED_T0, "12503", "61055", "62763", "5173"],
        [WORKED_DATE, WORKED_T0, "1335", "40858", "30413", "59303"],
    ],
    SensorKind.MOTION_LIGHT: [
        [WORKED_DATE, WORKED_T1, "0", "0"],
        [WORKED_DATE, WORKED_T1, "0", "0"],
    ],
    SensorKind.THERMOSTAT: [
        [WORKED_DATE, WORKED_T0, "28.8", "1"],
        [WORKED_DATE, WORKED_T1, "25", "0"],
        [WORKED_DATE, WORKED_T1, "26.9", "1"],
        [WORKED_DATE, WORKED_T1, "25.8", "1"],
    ],
    SensorKind.WEATHER: [
        [WORKED_DATE, WORKED_T0, "28.0", "-6.6", "56.5"],
        [WORKED_DATE, WORKED_T1, "45.2", "9.5", "12.8"],
        [WORKED_DATE, WORKED_T1, "33.0", "0.4", "98.6"],
        [WORKED_DATE, WORKED_T1, "42.7", "-0.5", "29.6"],
    ],
}

# After joining by timestamp and keeping the ordinal-0 rows, the two survivors
# look exactly like this (cells in fixed feature order, None = missing).
WORKED_AGGREGATED_T0 = ("10.9", "True", "0", "0", None, None,
                        "12503", "61055", "62763", "5173", None, None,
                        "28.8", "1", "28.0", "-6.6", "56.5")
WORKED_AGGREGATED_T1 = (None, None, None, None, "82.9", "92.7",
                        None, None, None, None, "0", "0",
                        "25", "0", "45.2", "9.5", "12.8")


@pytest.fixture
def worked_example_dir(tmp_path: Path) -> Path:
    d = tmp_path / "worked"
    d.mkdir()
    for kind, rows in WORKED_SENSOR_ROWS.items():
        write_sensor_csv(d / f"telemetry_{kind.value}.csv", kind, rows)
    return d
