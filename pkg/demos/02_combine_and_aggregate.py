"""Walk through the two combination modes and timestamp aggregation.

A handful of readings from three sensors, some sharing a timestamp, are
combined first by concatenation (one sparse row per reading) and then by
joining on the timestamp (dense rows with per-timestamp ordinals). Finally
aggregation keeps only the ordinal-0 row of each second and records how many
rows it replaced in the counter column.
"""

from sensorgrid.pipeline import aggregate_keep_first, concatenate, group_by_timestamp
from sensorgrid.schema import EventClass, FEATURES, SensorKind, SensorReading


def reading(kind, ts, arrival, **values):
    return SensorReading(kind, ts, arrival, values, EventClass.NORMAL)


sources = {
    SensorKind.FRIDGE: [
        reading(SensorKind.FRIDGE, 100, 0, fridge_temperature="10.9", temp_condition="high"),
        reading(SensorKind.FRIDGE, 100, 1, fridge_temperature="12.6", temp_condition="high"),
        reading(SensorKind.FRIDGE, 101, 2, fridge_temperature="5.8", temp_condition="low"),
    ],
    SensorKind.THERMOSTAT: [
        reading(SensorKind.THERMOSTAT, 100, 0, current_temperature="28.8", thermostat_status="1"),
    ],
    SensorKind.WEATHER: [
        reading(SensorKind.WEATHER, 101, 0, temperature="28.0", pressure="-6.6", humidity="56.5"),
    ],
}


def show(rows, title):
    print(f"\n{title} ({len(rows)} rows)")
    names = [f.name for f in FEATURES]
    for r in rows:
        populated = {names[i]: c for i, c in enumerate(r.cells) if c is not None}
        print(f"  ts={r.timestamp} ord={r.ordinal} counter={r.counter} "
              f"missing={sum(r.mask)}/17 {populated}")


show(concatenate(sources), "concatenate: one row per reading")
grouped = group_by_timestamp(sources)
show(grouped, "group_by_timestamp: same second joined, ordinal = per-sensor depth")
show(aggregate_keep_first(grouped), "aggregate_keep_first: one row per second")

print("\nNote how the counter keeps the collapsed multiplicity while the")
print("ordinal-0 cells survive untouched; the counter itself is never used")
print("as a model feature.")
