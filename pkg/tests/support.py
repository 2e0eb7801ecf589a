"""Shared test fixtures: the reference score, a brute-force frequency
oracle, and a randomized composition generator.

The oracle deliberately avoids the library's lookup code: it finds the
active tone of each level by linear scan at every single tick, so any
agreement with the resolver is meaningful.
"""

from __future__ import annotations

import random
from fractions import Fraction

from dtseq import (
    Composition,
    HarmonicSequence,
    Instrument,
    InstrumentScore,
    Note,
    Scale,
    TimeInterval,
    TranspositionTone,
)

REFERENCE_SCORE = """\
# header
base      440.0            # f0 in Hz
ppq       480              # ticks per beat
tempo     120              # beats per minute
length    1920             # composition length in ticks

scale just-major-7  1/1 9/8 5/4 4/3 3/2 5/3 15/8 2/1
scale fifths        1/1 3/2

harmony H1 level 1 scale fifths
  tone 0 @ 0    +960
  tone 1 @ 960  +960
end

instrument lead scale just-major-7 harmonies H1
  note 0 @ 0    +480  vel 96
  note 2 @ 480  +480  vel 96
  note 4 @ 960  +960  vel 112
end
"""


# Brute-force oracle

def per_tick_level_factors(composition: Composition,
                           harmony: HarmonicSequence) -> list[Fraction]:
    """The harmony's factor at every tick of the piece, by linear scan."""
    keys = composition.scales[harmony.scale_name].keys
    factors = []
    for t in range(composition.length_ticks):
        hit = None
        for tone in harmony.tones:
            if tone.interval.start <= t < tone.interval.start + tone.interval.duration:
                hit = tone
                break
        assert hit is not None, f"tick {t} uncovered in {harmony.name}"
        factors.append(keys[hit.key_index])
    return factors


def oracle_note_factor(composition: Composition, instrument: Instrument,
                       note: Note,
                       level_factors: dict[str, list[Fraction]]) -> Fraction:
    """Expected cumulative factor for one note, from per-tick tables."""
    factor = composition.scales[instrument.scale_name].keys[note.key_index]
    for name in instrument.harmony_names:
        factor *= level_factors[name][note.interval.start]
    return factor


def all_level_factors(composition: Composition) -> dict[str, list[Fraction]]:
    return {
        name: per_tick_level_factors(composition, harmony)
        for name, harmony in composition.harmonies.items()
    }


# Randomized composition generator

RATIO_POOL = [
    (1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (4, 3), (5, 4), (6, 5),
    (9, 8), (5, 3), (15, 8), (8, 5), (5, 6), (7, 4), (16, 9), (9, 4),
]


def random_scale(rng: random.Random, name: str) -> Scale:
    pairs = rng.sample(RATIO_POOL, rng.randint(1, 6))
    return Scale(name, [Fraction(a, b) for a, b in pairs])


def random_timeline(rng: random.Random, length: int,
                    scale_size: int) -> list[TranspositionTone]:
    """A valid spanning, contiguous, non-overlapping tone list."""
    count = rng.randint(1, min(length, 8))
    cuts = sorted(rng.sample(range(1, length), count - 1)) if count > 1 else []
    edges = [0, *cuts, length]
    return [
        TranspositionTone(rng.randrange(scale_size), TimeInterval(lo, hi - lo))
        for lo, hi in zip(edges, edges[1:])
    ]


def random_composition(rng: random.Random, *, max_instruments: int = 4,
                       max_harmonic_levels: int = 2, max_ticks: int = 10_000,
                       max_notes: int = 10, min_instruments: int = 0,
                       min_notes: int = 0, min_harmonic_levels: int = 0) -> Composition:
    """A structurally valid composition of bounded size.

    ``max_harmonic_levels`` counts transposition levels, so 2 means up to
    a level-3 piece (score plus two stacked harmonies).  Everything the
    validator checks holds by construction; boundary-crossing notes can
    and do occur.
    """
    # skew lengths small so per-tick oracles stay fast, but cover the
    # full range up to max_ticks
    small, medium = min(100, max_ticks), min(1200, max_ticks)
    bucket = rng.randrange(3)
    if bucket == 0:
        length = rng.randint(1, small)
    elif bucket == 1:
        length = rng.randint(small, medium)
    else:
        length = rng.randint(medium, max_ticks)

    scales = [random_scale(rng, f"s{i}") for i in range(rng.randint(1, 3))]
    by_name = {s.name: s for s in scales}
    scale_names = [s.name for s in scales]

    levels = rng.randint(min_harmonic_levels, max_harmonic_levels)
    harmonies = []
    alternatives: dict[int, list[str]] = {}
    for level in range(1, levels + 1):
        alternatives[level] = []
        for tag in "ab"[: rng.randint(1, 2)]:
            name = f"h{level}{tag}"
            scale_name = rng.choice(scale_names)
            tones = random_timeline(rng, length, len(by_name[scale_name]))
            harmonies.append(HarmonicSequence(name, level, scale_name, tones))
            alternatives[level].append(name)

    instruments = []
    for i in range(rng.randint(min_instruments, max_instruments)):
        scale_name = rng.choice(scale_names)
        depth = rng.randint(0, levels)
        bound = [rng.choice(alternatives[level]) for level in range(1, depth + 1)]
        notes = []
        for _ in range(rng.randint(min_notes, max_notes)):
            start = rng.randrange(length)
            duration = rng.randint(1, length - start)
            notes.append(Note(rng.randrange(len(by_name[scale_name])),
                              TimeInterval(start, duration),
                              rng.randint(1, 127)))
        instruments.append(Instrument(f"inst{i}", scale_name, bound,
                                      InstrumentScore(notes).normalized()))

    return Composition(
        base_frequency_hz=rng.choice([220.0, 261.63, 432.0, 440.0]),
        ticks_per_beat=rng.choice([96, 240, 480]),
        tempo_bpm=rng.choice([60.0, 90.0, 120.0, 140.0]),
        length_ticks=length,
        scales=by_name,
        harmonies=harmonies,
        instruments=instruments,
    )


def scaled_tone_composition(composition: Composition, harmony_name: str,
                            tone_index: int, r: Fraction) -> Composition:
    """A copy where one transposition tone's effective ratio is times ``r``.

    Implemented by pointing the tone at a key equal to old * r, appending
    that key to the harmony's scale when it is not already present.
    """
    harmony = composition.harmonies[harmony_name]
    scale = composition.scales[harmony.scale_name]
    target = harmony.tones[tone_index]
    new_key = scale.keys[target.key_index] * r

    if new_key in scale.keys:
        new_index = scale.keys.index(new_key)
        new_scales = dict(composition.scales)
    else:
        new_index = len(scale.keys)
        new_scales = dict(composition.scales)
        new_scales[scale.name] = Scale(scale.name, scale.keys + (new_key,))

    new_tones = list(harmony.tones)
    new_tones[tone_index] = TranspositionTone(new_index, target.interval)
    new_harmonies = dict(composition.harmonies)
    new_harmonies[harmony_name] = HarmonicSequence(
        harmony.name, harmony.level, harmony.scale_name, new_tones)

    return Composition(
        base_frequency_hz=composition.base_frequency_hz,
        ticks_per_beat=composition.ticks_per_beat,
        tempo_bpm=composition.tempo_bpm,
        length_ticks=composition.length_ticks,
        scales=new_scales,
        harmonies=new_harmonies,
        instruments=composition.instruments,
    )
