"""Exact rational pitch arithmetic and scale construction.

Every pitch factor in this package is a strictly positive rational number,
represented by :class:`fractions.Fraction` (aliased as ``Ratio``).  Fraction
already stores values in lowest terms and multiplies exactly with
arbitrary-precision integers, so cumulative products of scale keys never
drift and never overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

#: All pitch factors are exact rationals.
Ratio = Fraction

RatioLike = Union[Fraction, int, str]

#: Names usable in score files: letter or underscore, then letters, digits,
#: ``_``, ``-`` or ``.`` (anything else would not survive serialization).
IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")


class InvalidRatioError(ValueError):
    """A ratio whose numerator or denominator is not a positive integer."""


def check_name(name: str, what: str = "name") -> str:
    """Return ``name`` if it is a legal identifier, else raise ValueError."""
    if not isinstance(name, str) or not IDENTIFIER_RE.match(name):
        raise ValueError(f"invalid {what}: {name!r}")
    return name


def ratio(numerator: int, denominator: int = 1) -> Fraction:
    """Build a pitch factor in lowest terms.

    Both arguments must be positive integers; zero and negative values are
    rejected because pitch factors are frequency multipliers.
    """
    if not isinstance(numerator, int) or not isinstance(denominator, int):
        raise InvalidRatioError(
            f"ratio parts must be integers, got {numerator!r}/{denominator!r}"
        )
    if numerator < 1 or denominator < 1:
        raise InvalidRatioError(
            f"ratio must be positive: {numerator}/{denominator}"
        )
    return Fraction(numerator, denominator)


def as_ratio(value: RatioLike) -> Fraction:
    """Coerce ints, strings like ``"3/2"``, or Fractions to a valid ratio."""
    try:
        f = Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidRatioError(f"not a ratio: {value!r}") from exc
    if f <= 0:
        raise InvalidRatioError(f"ratio must be positive: {value!r}")
    return f


def octave_normalize(r: RatioLike) -> Fraction:
    """Scale ``r`` by a power of two into the octave ``[1, 2)``."""
    f = as_ratio(r)
    while f >= 2:
        f /= 2
    while f < 1:
        f *= 2
    return f


def cents(r: RatioLike) -> float:
    """Logarithmic size of the interval ``r``: 1200 * log2(num/den)."""
    f = as_ratio(r)
    return 1200.0 * (math.log2(f.numerator) - math.log2(f.denominator))


@dataclass(frozen=True)
class Scale:
    """A named, ordered collection of pitch factors.

    Keys need not be sorted or confined to one octave; the only requirements
    are at least one key and no duplicates (compared as reduced rationals).
    """

    name: str
    keys: tuple[Fraction, ...]

    def __init__(self, name: str, keys: Iterable[RatioLike]):
        check_name(name, "scale name")
        reduced = tuple(as_ratio(k) for k in keys)
        if not reduced:
            raise ValueError(f"scale {name!r} needs at least one key")
        if len(set(reduced)) != len(reduced):
            raise ValueError(f"scale {name!r} has duplicate keys")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "keys", reduced)

    def __len__(self) -> int:
        return len(self.keys)

    def __getitem__(self, key_index: int) -> Fraction:
        return self.keys[key_index]


def builtin_scales() -> tuple[Scale, ...]:
    """Scales shipped with the package, in listing order."""
    return _BUILTIN


def builtin_scale(name: str) -> Scale:
    """Look up one built-in scale by name (KeyError if unknown)."""
    return _BUILTIN_BY_NAME[name]


_BUILTIN = (
    Scale("just-major-7", ("1/1", "9/8", "5/4", "4/3", "3/2", "5/3", "15/8", "2/1")),
    Scale("major-triad", ("1/1", "5/4", "3/2")),
    Scale("minor-triad", ("1/1", "6/5", "3/2")),
    # Published form of the major sequence, kept verbatim: it carries 5/6
    # where the ascending scale has 5/3.
    Scale("paper-major", ("1/1", "9/8", "5/4", "4/3", "3/2", "5/6", "15/8", "2/1")),
)

_BUILTIN_BY_NAME = {s.name: s for s in _BUILTIN}
