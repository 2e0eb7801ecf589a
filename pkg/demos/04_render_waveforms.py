"""
Rendering a score to audio
==========================

Renders the motif-progression score twice, as plain sines and with four
harmonic partials, and writes both WAV files next to this script.  The
additive waveform makes the consonance of rational intervals much easier
to hear: partials of notes a just fifth apart land on common frequencies.
"""

from pathlib import Path

import numpy as np

from dtseq import parse, resolve_composition, synthesize, write_wav
from dtseq.render import RenderSettings

here = Path(__file__).resolve().parent
score = here.parent / "scores" / "motif-progression.dts"

composition = parse(score.read_bytes())
assert not isinstance(composition, list), composition
events = resolve_composition(composition)
print(f"{len(events)} events, "
      f"{max(e.start_sec + e.duration_sec for e in events):.1f} s of music")

for waveform in ("sine", "additive-4"):
    settings = RenderSettings(waveform=waveform)
    buffer = synthesize(events, settings)
    out = here / f"motif-{waveform}.wav"
    write_wav(buffer, out)
    peak = float(np.max(np.abs(buffer.samples)))
    print(f"{out.name}: {len(buffer.samples)} samples, peak {peak:.3f}")
