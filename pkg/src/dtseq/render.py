"""Audio rendering: oscillator synthesis, WAV output, event listings.

Synthesis is deliberately plain.  Each event is an oscillator at its
resolved frequency, shaped by a linear attack/release envelope, summed
into a mono float64 mix; rendering the same events with the same settings
is bit-reproducible.  The "additive-4" waveform stacks partials at 2f, 3f
and 4f (amplitudes 1/2, 1/3, 1/4) on the fundamental so that rational
interval consonance is audible.
"""

from __future__ import annotations

import wave
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .resolve import ResolvedEvent

WAVEFORMS = ("sine", "additive-4")

EVENT_HEADER = "instrument\tfactor\tfrequency_hz\tstart_sec\tduration_sec\tvelocity"


@dataclass(frozen=True)
class RenderSettings:
    sample_rate: int = 44100
    waveform: str = "sine"
    attack_sec: float = 0.010
    release_sec: float = 0.050
    master_gain: float = 0.8

    def __post_init__(self):
        if not isinstance(self.sample_rate, int) or self.sample_rate < 1:
            raise ValueError(f"sample rate must be a positive integer: {self.sample_rate!r}")
        if self.waveform not in WAVEFORMS:
            raise ValueError(f"unknown waveform {self.waveform!r}; choose from {WAVEFORMS}")
        if self.attack_sec < 0 or self.release_sec < 0:
            raise ValueError("attack and release must be non-negative")
        if not 0 < self.master_gain <= 1:
            raise ValueError(f"master gain must be in (0, 1]: {self.master_gain!r}")


@dataclass(eq=False)
class AudioBuffer:
    """Mono float64 samples in [-1, 1] after mastering."""

    sample_rate: int
    samples: np.ndarray


def _oscillator(phase: np.ndarray, waveform: str) -> np.ndarray:
    out = np.sin(phase)
    if waveform == "additive-4":
        for k in (2, 3, 4):
            out += np.sin(k * phase) / k
    return out


def synthesize(events: Sequence[ResolvedEvent],
               settings: RenderSettings | None = None) -> AudioBuffer:
    """Mix every event into one buffer.

    Per event: amplitude velocity/127, linear attack inside the note,
    linear release extending past its nominal end.  Notes shorter than
    attack + release get both scaled proportionally to fit, so there is
    never an envelope discontinuity.  After summation the mix is scaled
    down to ``master_gain`` peak only if it exceeds it.
    """
    settings = settings or RenderSettings()
    sr = settings.sample_rate

    spans: list[tuple[int, int, int, int, ResolvedEvent]] = []
    total = 0
    for ev in events:
        attack, release = settings.attack_sec, settings.release_sec
        if attack + release > ev.duration_sec > 0:
            squeeze = ev.duration_sec / (attack + release)
            attack *= squeeze
            release *= squeeze
        first = round(ev.start_sec * sr)
        n_note = round(ev.duration_sec * sr)
        n_attack = min(round(attack * sr), n_note)
        n_release = round(release * sr)
        spans.append((first, n_note, n_attack, n_release, ev))
        total = max(total, first + n_note + n_release)

    mix = np.zeros(total, dtype=np.float64)
    for first, n_note, n_attack, n_release, ev in spans:
        n = n_note + n_release
        if n == 0:
            continue
        t = np.arange(n, dtype=np.float64) / sr
        signal = _oscillator(2.0 * np.pi * ev.frequency_hz * t, settings.waveform)
        envelope = np.ones(n)
        if n_attack:
            envelope[:n_attack] = np.arange(n_attack) / n_attack
        if n_release:
            envelope[n_note:] = 1.0 - np.arange(1, n_release + 1) / n_release
        mix[first:first + n] += (ev.velocity / 127.0) * envelope * signal

    peak = float(np.max(np.abs(mix))) if total else 0.0
    if peak > settings.master_gain:
        mix *= settings.master_gain / peak
    return AudioBuffer(sr, mix)


def write_wav(buffer: AudioBuffer, path) -> None:
    """Write 16-bit mono PCM with the plain 44-byte RIFF/WAVE header.

    Samples are rounded from value * 32767 and clamped to the int16 range,
    so identical buffers produce bit-identical files.
    """
    quantized = np.clip(np.rint(buffer.samples * 32767.0), -32768, 32767).astype("<i2")
    with open(path, "wb") as fh:
        with wave.open(fh, "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(buffer.sample_rate)
            wav.writeframes(quantized.tobytes())


def export_events(events: Iterable[ResolvedEvent]) -> str:
    """Tab-separated event listing, one line per event after a header.

    Factors print reduced as ``num/den``; the float columns use 6
    significant digits.  Event order is kept as given (the resolver's
    order is already deterministic).
    """
    lines = [EVENT_HEADER]
    for ev in events:
        lines.append(
            f"{ev.instrument}\t{ev.factor.numerator}/{ev.factor.denominator}\t"
            f"{ev.frequency_hz:.6g}\t{ev.start_sec:.6g}\t{ev.duration_sec:.6g}\t"
            f"{ev.velocity}"
        )
    return "\n".join(lines) + "\n"
