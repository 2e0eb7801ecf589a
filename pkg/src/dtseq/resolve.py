"""Frequency resolution: notes to events via cumulative rational products.

Each note's pitch factor is the instrument key at its scale index times the
transposition tone of every bound harmony at the note's onset tick,
multiplied exactly as rationals.  The single float conversion happens at
event emission, so identical inputs always yield bit-identical factors and
frequencies.  A note that sustains across a transposition boundary keeps
the factors sampled at its onset for its whole duration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Composition, Instrument, Note


class ResolutionError(Exception):
    """A note could not be resolved; ``level`` 0 is the instrument scale,
    levels 1..n are the bound harmonies in order."""

    def __init__(self, message: str, *, instrument: str, level: int):
        super().__init__(message)
        self.instrument = instrument
        self.level = level


@dataclass(frozen=True)
class ResolvedEvent:
    """One playable sound: exact pitch factor plus real-time placement."""

    instrument: str
    factor: Fraction
    frequency_hz: float
    start_sec: float
    duration_sec: float
    velocity: int


def resolve_note(composition: Composition, instrument: Instrument,
                 note: Note) -> ResolvedEvent:
    """Resolve one note of one instrument to an event.

    All level lookups use the note's onset tick.  Raises
    :class:`ResolutionError` naming the failing level for dangling
    references, out-of-scale keys, or an onset no harmony tone covers.
    """
    onset = note.interval.start

    scale = composition.scales.get(instrument.scale_name)
    if scale is None:
        raise ResolutionError(
            f"instrument {instrument.name!r}: unknown scale {instrument.scale_name!r}",
            instrument=instrument.name, level=0)
    if note.key_index >= len(scale):
        raise ResolutionError(
            f"instrument {instrument.name!r}: key index {note.key_index} outside "
            f"scale {scale.name!r} of {len(scale)} keys",
            instrument=instrument.name, level=0)
    factor = scale.keys[note.key_index]

    for level, harmony_name in enumerate(instrument.harmony_names, start=1):
        harmony = composition.harmonies.get(harmony_name)
        if harmony is None:
            raise ResolutionError(
                f"instrument {instrument.name!r} level {level}: "
                f"unknown harmony {harmony_name!r}",
                instrument=instrument.name, level=level)
        hscale = composition.scales.get(harmony.scale_name)
        if hscale is None:
            raise ResolutionError(
                f"instrument {instrument.name!r} level {level}: harmony "
                f"{harmony_name!r} uses unknown scale {harmony.scale_name!r}",
                instrument=instrument.name, level=level)
        try:
            tone = harmony.tone_at(onset)
        except ValueError as exc:
            raise ResolutionError(
                f"instrument {instrument.name!r} level {level}: {exc}",
                instrument=instrument.name, level=level) from exc
        if tone.key_index >= len(hscale):
            raise ResolutionError(
                f"instrument {instrument.name!r} level {level}: tone key index "
                f"{tone.key_index} outside scale {hscale.name!r}",
                instrument=instrument.name, level=level)
        factor *= hscale.keys[tone.key_index]

    frequency = float(Fraction(composition.base_frequency_hz) * factor)
    return ResolvedEvent(
        instrument=instrument.name,
        factor=factor,
        frequency_hz=frequency,
        start_sec=composition.seconds(onset),
        duration_sec=composition.seconds(note.interval.duration),
        velocity=note.velocity,
    )


def resolve_composition(composition: Composition) -> list[ResolvedEvent]:
    """Resolve every note of every instrument into one flat event list.

    Scores are normalized first, so the result does not depend on input
    note order.  Events are returned sorted by (start, instrument name,
    frequency, velocity) for deterministic output.
    """
    events: list[ResolvedEvent] = []
    for inst in composition.instruments:
        for i, note in enumerate(inst.score.normalized().notes):
            try:
                events.append(resolve_note(composition, inst, note))
            except ResolutionError as exc:
                raise ResolutionError(
                    f"note {i} of {exc}", instrument=exc.instrument,
                    level=exc.level) from exc
    events.sort(key=lambda e: (e.start_sec, e.instrument, e.frequency_hz, e.velocity))
    return events


@dataclass(frozen=True)
class TableRow:
    """Resolved pitch of one scale key inside one harmonic region."""

    key_index: int
    factor: Fraction
    frequency_hz: float


@dataclass(frozen=True)
class TableRegion:
    """Maximal tick range over which every bound harmony tone is constant."""

    start: int
    end: int
    rows: tuple[TableRow, ...]


def frequency_table(composition: Composition, instrument_name: str) -> list[TableRegion]:
    """Tabulate what every key of an instrument sounds like over time.

    Region boundaries are the merged tone boundaries of all harmonies the
    instrument follows; within a region each scale key maps to one exact
    factor and frequency.  Requires a validated composition; raises
    KeyError for an unknown instrument name.
    """
    inst = composition.instrument(instrument_name)
    scale = composition.scales[inst.scale_name]
    harmonies = [composition.harmonies[name] for name in inst.harmony_names]

    bounds = {0, composition.length_ticks}
    for harmony in harmonies:
        for tone in harmony.tones:
            bounds.add(tone.interval.start)
            bounds.add(tone.interval.end)
    ticks = sorted(b for b in bounds if 0 <= b <= composition.length_ticks)

    base = Fraction(composition.base_frequency_hz)
    regions: list[TableRegion] = []
    for lo, hi in zip(ticks, ticks[1:]):
        shift = Fraction(1)
        for harmony in harmonies:
            hscale = composition.scales[harmony.scale_name]
            shift *= hscale.keys[harmony.tone_at(lo).key_index]
        rows = tuple(
            TableRow(i, key * shift, float(base * key * shift))
            for i, key in enumerate(scale.keys)
        )
        regions.append(TableRegion(lo, hi, rows))
    return regions
