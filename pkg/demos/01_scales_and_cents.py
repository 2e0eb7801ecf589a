"""
Built-in scales and their sizes in cents
========================================

Rational scale steps are unevenly spaced on a log-frequency axis, unlike
the twelve equal semitones of 100 cents each.  This prints every built-in
scale with each key's exact ratio, its size in cents, and how far it sits
from the nearest equal-tempered semitone.
"""

from dtseq import builtin_scales, cents, octave_normalize

for scale in builtin_scales():
    print(f"{scale.name}")
    for i, key in enumerate(scale.keys):
        c = cents(key)
        nearest_semitone = round(c / 100) * 100
        print(f"  key {i}: {str(key):>5}  {c:9.3f} cents  "
              f"({c - nearest_semitone:+.3f} from {nearest_semitone})")
    print()

# The octave-reduction helper maps any factor into [1, 2).  The published
# major sequence contains 5/6, which normalizes to the major sixth 5/3:
print("octave_normalize(5/6) =", octave_normalize("5/6"))
print("octave_normalize(3/1) =", octave_normalize("3/1"))
