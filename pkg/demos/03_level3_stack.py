"""
Stacking transposition levels programmatically
==============================================

Builds a level-3 composition in code: one instrument key (5/4), a level-1
tone of 3/2, and a level-2 tone of 2.  The note's factor is the exact
product 5/4 * 3/2 * 2 = 15/4, so 440 Hz resolves to 1650 Hz with no
rounding anywhere in the chain.

Then it demonstrates the property the whole design exists for: scaling
one transposition tone by a rational r scales exactly the notes under it
by r and leaves every other note untouched.
"""

from fractions import Fraction

from dtseq import (
    Composition,
    HarmonicSequence,
    Instrument,
    Note,
    Scale,
    TimeInterval,
    TranspositionTone,
    resolve_composition,
)


def spanning_tone(key_index, length):
    return [TranspositionTone(key_index, TimeInterval(0, length))]


composition = Composition(
    base_frequency_hz=440.0,
    ticks_per_beat=480,
    tempo_bpm=120.0,
    length_ticks=960,
    scales=[
        Scale("inst", ["1/1", "5/4", "3/2"]),
        Scale("trans", ["1/1", "3/2", "2/1"]),
    ],
    harmonies=[
        HarmonicSequence("chord", 1, "trans", spanning_tone(1, 960)),
        HarmonicSequence("register", 2, "trans", spanning_tone(2, 960)),
    ],
    instruments=[
        Instrument("lead", "inst", ["chord", "register"],
                   [Note(1, TimeInterval(0, 960))]),
    ],
)

event = resolve_composition(composition)[0]
print(f"factor   = {event.factor}        (5/4 * 3/2 * 2)")
print(f"frequency= {event.frequency_hz} Hz  (440 * 15/4)")

# Now split the level-1 harmony into two tones and raise the second by
# 9/8: the note starting under it moves by exactly 9/8, nothing else.
two_notes = Composition(
    base_frequency_hz=440.0, ticks_per_beat=480, tempo_bpm=120.0, length_ticks=960,
    scales=[Scale("inst", ["5/4"]), Scale("trans", ["3/2", "27/16"])],
    harmonies=[HarmonicSequence("chord", 1, "trans",
                                [TranspositionTone(0, TimeInterval(0, 480)),
                                 TranspositionTone(1, TimeInterval(480, 480))])],
    instruments=[Instrument("lead", "inst", ["chord"],
                            [Note(0, TimeInterval(0, 480)),
                             Note(0, TimeInterval(480, 480))])],
)

first, second = resolve_composition(two_notes)
print()
print(f"note under 3/2       : factor {first.factor}")
print(f"note under 3/2 * 9/8 : factor {second.factor}")
assert second.factor == first.factor * Fraction(9, 8)
print("second / first       =", second.factor / first.factor)
