"""Scheme tables, loaded from the shipped data file and self-checked.

All conversions pivot through an internal one-symbol-per-phoneme alphabet
(SLP1-style).  Roman scheme tables are phoneme -> rendering maps plus input
aliases; Devanagari is handled by dedicated abugida tables.  The self-check
rejects tables whose input side is ambiguous (one string claimed by two
phonemes) or whose output side is non-injective.
"""

from __future__ import annotations

import json
import string
import unicodedata
from dataclasses import dataclass
from enum import Enum
from importlib import resources


class Scheme(Enum):
    DEVANAGARI = "DEVANAGARI"
    IAST = "IAST"
    HK = "HK"
    ITRANS = "ITRANS"
    SLP1 = "SLP1"
    VELTHUIS = "VELTHUIS"
    WX = "WX"


def coerce_scheme(value) -> Scheme:
    if isinstance(value, Scheme):
        return value
    try:
        return Scheme[str(value).upper()]
    except KeyError:
        raise ValueError(f"unknown transliteration scheme: {value!r}") from None


DIGITS = tuple(string.digits)

# Characters that pass through any scheme silently (no advisory).
NEUTRAL_CHARS = set(" \t\n\r,;:?!()-")

# Vedic tone marks are stripped with an advisory, never converted.
VEDIC_ACCENTS = {"॑", "॒"}


@dataclass(frozen=True)
class RomanScheme:
    name: str
    out_map: dict[str, str]          # phoneme -> rendering (digits included)
    in_map: dict[str, str]           # rendering or alias -> phoneme
    max_token: int


@dataclass(frozen=True)
class DevanagariTables:
    independent_vowels: dict[str, str]
    vowel_signs: dict[str, str]
    consonants: dict[str, str]
    marks: dict[str, str]
    virama: str
    symbols: dict[str, str]
    digits: dict[str, str]
    input_decompose: dict[str, list[str]]
    to_phoneme: dict[str, tuple[str, str]]  # devanagari char -> (kind, phoneme)


def _load_raw() -> dict:
    data = resources.files("koshagraph").joinpath("data/schemes.json").read_text(encoding="utf-8")
    return json.loads(data)


def _build_roman(name: str, spec: dict, phonemes: list[str]) -> RomanScheme:
    out_map = dict(spec["map"])
    missing = [p for p in phonemes if p not in out_map]
    if missing:
        raise ValueError(f"scheme {name}: missing renderings for {missing}")
    extra = [p for p in out_map if p not in phonemes]
    if extra:
        raise ValueError(f"scheme {name}: renderings for unknown phonemes {extra}")
    for d in DIGITS:
        out_map[d] = d
    seen: dict[str, str] = {}
    for ph, rendering in out_map.items():
        if rendering in seen:
            raise ValueError(f"scheme {name}: rendering {rendering!r} used by {seen[rendering]!r} and {ph!r}")
        seen[rendering] = ph
    in_map = {rendering: ph for ph, rendering in out_map.items()}
    for alias, ph in spec.get("aliases", {}).items():
        if in_map.get(alias, ph) != ph:
            raise ValueError(f"scheme {name}: alias {alias!r} conflicts with canonical rendering")
        in_map[alias] = ph
    return RomanScheme(name=name, out_map=out_map, in_map=in_map, max_token=max(map(len, in_map)))


def _build_devanagari(spec: dict) -> DevanagariTables:
    to_phoneme: dict[str, tuple[str, str]] = {}

    def add(kind: str, table: dict[str, str]) -> None:
        for ph, ch in table.items():
            if ch in to_phoneme:
                raise ValueError(f"devanagari: char {ch!r} mapped twice")
            to_phoneme[ch] = (kind, ph)

    add("vowel", spec["independent_vowels"])
    add("sign", spec["vowel_signs"])
    add("consonant", spec["consonants"])
    add("mark", spec["marks"])
    add("symbol", spec["symbols"])
    add("digit", {d: ch for d, ch in spec["digits"].items()})
    return DevanagariTables(
        independent_vowels=spec["independent_vowels"],
        vowel_signs=spec["vowel_signs"],
        consonants=spec["consonants"],
        marks=spec["marks"],
        virama=spec["virama"],
        symbols=spec["symbols"],
        digits=spec["digits"],
        input_decompose=spec.get("input_decompose", {}),
        to_phoneme=to_phoneme,
    )


_raw = _load_raw()
PHONEMES: list[str] = (
    list(_raw["phonemes"]["vowels"])
    + list(_raw["phonemes"]["consonants"])
    + list(_raw["phonemes"]["marks"])
    + list(_raw["phonemes"]["symbols"])
)
VOWELS = frozenset(_raw["phonemes"]["vowels"])
CONSONANTS = frozenset(_raw["phonemes"]["consonants"])
MARKS = frozenset(_raw["phonemes"]["marks"])
SYMBOLS = frozenset(_raw["phonemes"]["symbols"])

ROMAN: dict[Scheme, RomanScheme] = {
    Scheme[name]: _build_roman(name, spec, PHONEMES)
    for name, spec in _raw["roman_schemes"].items()
}
DEVANAGARI = _build_devanagari(_raw["devanagari"])

if set(ROMAN) != set(Scheme) - {Scheme.DEVANAGARI}:
    raise ValueError("schemes.json must define exactly the six roman schemes")


def grapheme_length(text: str) -> int:
    """Approximate user-perceived character count.

    Combining marks do not count; a consonant right after a virama folds into
    the previous cluster (conjuncts).
    """
    count = 0
    after_virama = False
    for ch in unicodedata.normalize("NFC", text):
        if unicodedata.category(ch) in ("Mn", "Mc", "Me"):
            after_virama = ch == DEVANAGARI.virama
            continue
        if after_virama:
            after_virama = False
            continue
        count += 1
    return count
