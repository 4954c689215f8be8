import csv
import random
from datetime import datetime

import pytest

from sensorgrid.errors import MissingColumn, UnknownClass, UnparsableTimestamp
from sensorgrid.ingest import (
    SOURCE_TZ,
    ParseIssues,
    dataset_stats,
    discover_sensor_files,
    epoch_from_date_time,
    format_date_time,
    parse_sensor_csv,
    write_counts_csv,
)
from sensorgrid.schema import EventClass, SensorKind

from conftest import make_reading, write_sensor_csv


def test_parse_fridge_example_row(tmp_path):
    path = write_sensor_csv(
        tmp_path / "fridge.csv", SensorKind.FRIDGE,
        [["25-Apr-19", "10:01:30", "10.9", "high"]])
    readings = parse_sensor_csv(path, SensorKind.FRIDGE)
    assert len(readings) == 1
    r = readings[0]
    assert r.sensor is SensorKind.FRIDGE
    assert r.values == {"fridge_temperature": "10.9", "temp_condition": "high"}
    assert r.clazz is EventClass.INJECTION
    expected = int(datetime(2019, 4, 25, 10, 1, 30, tzinfo=SOURCE_TZ).timestamp())
    assert r.timestamp == expected
    assert r.arrival_index == 0


def test_empty_file_with_header(tmp_path):
    path = write_sensor_csv(tmp_path / "fridge.csv", SensorKind.FRIDGE, [])
    assert parse_sensor_csv(path, SensorKind.FRIDGE) == []


def test_missing_feature_column(tmp_path):
    path = tmp_path / "fridge.csv"
    path.write_text("date,time,fridge_temperature,label,type\n", encoding="utf-8")
    with pytest.raises(MissingColumn):
        parse_sensor_csv(path, SensorKind.FRIDGE)


def test_missing_timestamp_columns(tmp_path):
    path = tmp_path / "fridge.csv"
    path.write_text("fridge_temperature,temp_condition,label,type\n", encoding="utf-8")
    with pytest.raises(MissingColumn):
        parse_sensor_csv(path, SensorKind.FRIDGE)


def test_unparsable_timestamp(tmp_path):
    path = write_sensor_csv(
        tmp_path / "fridge.csv", SensorKind.FRIDGE,
        [["yesterday", "10:01:30", "10.9", "high"]])
    with pytest.raises(UnparsableTimestamp):
        parse_sensor_csv(path, SensorKind.FRIDGE)


def test_unknown_class(tmp_path):
    path = write_sensor_csv(
        tmp_path / "fridge.csv", SensorKind.FRIDGE,
        [["25-Apr-19", "10:01:30", "10.9", "high"]], clazz="meltdown", label="1")
    with pytest.raises(UnknownClass):
        parse_sensor_csv(path, SensorKind.FRIDGE)


def test_ts_column_wins_and_mismatch_is_flagged(tmp_path):
    path = tmp_path / "fridge.csv"
    epoch = epoch_from_date_time("25-Apr-19", "10:01:30")
    path.write_text(
        "ts,date,time,fridge_temperature,temp_condition,label,type\n"
        f"{epoch + 60},25-Apr-19,10:01:30,10.9,high,1,injection\n"
        f"{epoch},25-Apr-19,10:01:30,11.0,low,1,injection\n",
        encoding="utf-8")
    issues = ParseIssues()
    readings = parse_sensor_csv(path, SensorKind.FRIDGE, issues)
    assert readings[0].timestamp == epoch + 60
    assert readings[1].timestamp == epoch
    assert issues.ts_mismatches == 1


def test_rows_without_label_type_default_to_normal(tmp_path):
    path = tmp_path / "fridge.csv"
    path.write_text(
        "date,time,fridge_temperature,temp_condition\n"
        "25-Apr-19,10:01:30,10.9,high\n", encoding="utf-8")
    readings = parse_sensor_csv(path, SensorKind.FRIDGE)
    assert readings[0].clazz is EventClass.NORMAL


def test_arrival_index_is_contiguous(tmp_path):
    rows = [["25-Apr-19", "10:01:30", "10.9", "high"] for _ in range(5)]
    path = write_sensor_csv(tmp_path / "fridge.csv", SensorKind.FRIDGE, rows)
    readings = parse_sensor_csv(path, SensorKind.FRIDGE)
    assert [r.arrival_index for r in readings] == list(range(5))


def test_parse_is_lossless_on_random_inputs(tmp_path):
    rng = random.Random(20240501)
    rows = []
    for i in range(50):
        temp = f"{rng.uniform(1.0, 14.0):.1f}"
        cond = rng.choice(["high", "low"])
        rows.append(["25-Apr-19", f"10:{i % 60:02d}:{(7 * i) % 60:02d}", temp, cond])
    path = write_sensor_csv(tmp_path / "fridge.csv", SensorKind.FRIDGE, rows, clazz="injection")
    readings = parse_sensor_csv(path, SensorKind.FRIDGE)
    assert len(readings) == len(rows)
    for row, r in zip(rows, readings):
        assert r.values["fridge_temperature"] == row[2]
        assert r.values["temp_condition"] == row[3]
        assert r.timestamp == epoch_from_date_time(row[0], row[1])


def test_date_time_round_trip():
    epoch = epoch_from_date_time("25-Apr-19", "10:01:30")
    assert format_date_time(epoch) == ("25-Apr-19", "10:01:30")
    iso = epoch_from_date_time("2019-04-25", "10:01:30")
    assert iso == epoch


def test_dataset_stats_counted_by_hand():
    readings = {
        SensorKind.FRIDGE: [
            make_reading(SensorKind.FRIDGE, 5, 0),
            make_reading(SensorKind.FRIDGE, 5, 1),
            make_reading(SensorKind.FRIDGE, 6, 2),
        ],
    }
    rep = dataset_stats(readings)
    assert rep.peak_per_second["fridge"] == 2
    assert rep.distinct_ts_per_sensor["fridge"] == 2
    assert rep.rows_per_sensor["fridge"] == 3
    assert rep.total_rows == 3
    assert rep.distinct_timestamps == 2
    assert sum(rep.class_counts.values()) == rep.total_rows


def test_dataset_stats_out_of_domain_counting():
    ok = make_reading(SensorKind.GPS_TRACKER, 1, 0, latitude="550.0")
    bad = make_reading(SensorKind.GPS_TRACKER, 2, 1, latitude="551.0")
    rep = dataset_stats({SensorKind.GPS_TRACKER: [ok, bad]})
    assert rep.out_of_domain == 1


def test_dataset_stats_class_counts():
    readings = {
        SensorKind.FRIDGE: [
            make_reading(SensorKind.FRIDGE, 1, 0, clazz=EventClass.NORMAL),
            make_reading(SensorKind.FRIDGE, 2, 1, clazz=EventClass.DDOS),
            make_reading(SensorKind.FRIDGE, 3, 2, clazz=EventClass.DDOS),
        ],
    }
    rep = dataset_stats(readings)
    assert rep.class_counts == {"normal": 1, "ddos": 2}


def test_discover_sensor_files(worked_example_dir):
    files = discover_sensor_files(worked_example_dir)
    assert set(files) == set(SensorKind)
    with pytest.raises(MissingColumn):
        discover_sensor_files(worked_example_dir.parent)


def test_counts_csv(tmp_path):
    readings = {
        SensorKind.FRIDGE: [
            make_reading(SensorKind.FRIDGE, 5, 0),
            make_reading(SensorKind.FRIDGE, 5, 1),
            make_reading(SensorKind.FRIDGE, 6, 2),
        ],
    }
    out = tmp_path / "counts.csv"
    write_counts_csv(readings, out)
    with out.open(newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["sensor", "timestamp", "count"]
    assert ["fridge", "5", "2"] in rows and ["fridge", "6", "1"] in rows
