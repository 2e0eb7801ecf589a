"""
From score file to resolved events
==================================

Parses the reference score, validates it, and shows the two views the
resolver offers: the flat event listing (one row per note, exact factor
and frequency) and the per-region frequency table (what every key of the
instrument would sound like in each harmonic region).
"""

from pathlib import Path

from dtseq import (
    export_events,
    frequency_table,
    parse,
    resolve_composition,
    serialize,
    validate_composition,
)

score_path = Path(__file__).resolve().parent.parent / "scores" / "reference.dts"
composition = parse(score_path.read_bytes())
assert not isinstance(composition, list), composition

violations = validate_composition(composition)
print(f"validation: {len(violations)} findings")

events = resolve_composition(composition)
print()
print(export_events(events))

# The same data, tabulated: the harmony has two tones (1/1 then 3/2), so
# there are two regions; all eight keys shift by 3/2 in the second one.
for region in frequency_table(composition, "lead"):
    print(f"ticks [{region.start}, {region.end})")
    for row in region.rows:
        print(f"  key {row.key_index}: {str(row.factor):>5} -> {row.frequency_hz:.3f} Hz")

# Serialization is canonical (sections ordered, names sorted, ratios
# reduced) and parsing it back gives an equal composition.
canonical = serialize(composition)
assert parse(canonical) == composition
print()
print("canonical form:")
print(canonical)
