"""Conversion between the seven schemes via the internal phoneme alphabet.

Roman input is tokenized longest-match-first against the scheme's rendering
table (plus input aliases); Devanagari input goes through abugida rules
(inherent a, vowel signs, virāma, anusvāra/visarga, avagraha).  Unknown
characters pass through unchanged and are reported in the advisory list.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from . import tables
from .tables import DEVANAGARI, NEUTRAL_CHARS, ROMAN, Scheme, VEDIC_ACCENTS, coerce_scheme

_PH = "ph"
_RAW = "raw"


@dataclass
class TransliterationResult:
    text: str
    advisories: list[str] = field(default_factory=list)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.text


def _tokenize_roman(text: str, scheme: Scheme, advisories: list[str]) -> list[tuple[str, str]]:
    table = ROMAN[scheme]
    in_map, longest = table.in_map, table.max_token
    tokens: list[tuple[str, str]] = []
    i, n = 0, len(text)
    while i < n:
        match = None
        for width in range(min(longest, n - i), 0, -1):
            candidate = text[i:i + width]
            if candidate in in_map:
                match = candidate
                break
        if match is not None:
            tokens.append((_PH, in_map[match]))
            i += len(match)
            continue
        ch = text[i]
        if ch not in NEUTRAL_CHARS:
            advisories.append(f"passthrough: {ch!r}")
        tokens.append((_RAW, ch))
        i += 1
    return tokens


def _tokenize_devanagari(text: str, advisories: list[str]) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pending: str | None = None  # consonant awaiting its vowel

    def flush(inherent: bool) -> None:
        nonlocal pending
        if pending is not None:
            tokens.append((_PH, pending))
            if inherent:
                tokens.append((_PH, "a"))
            pending = None

    for ch in text:
        if ch in VEDIC_ACCENTS:
            advisories.append(f"stripped accent: U+{ord(ch):04X}")
            continue
        if ch in DEVANAGARI.input_decompose:
            flush(True)
            tokens.extend((_PH, p) for p in DEVANAGARI.input_decompose[ch])
            continue
        kind_ph = DEVANAGARI.to_phoneme.get(ch)
        if kind_ph is None:
            if ch == DEVANAGARI.virama:
                flush(False)
            else:
                flush(True)
                if ch not in NEUTRAL_CHARS:
                    advisories.append(f"passthrough: {ch!r}")
                tokens.append((_RAW, ch))
            continue
        kind, ph = kind_ph
        if kind == "consonant":
            flush(True)
            pending = ph
        elif kind == "sign":
            if pending is None:
                advisories.append(f"stray vowel sign: {ch!r}")
                tokens.append((_RAW, ch))
            else:
                tokens.append((_PH, pending))
                tokens.append((_PH, ph))
                pending = None
        else:  # independent vowel, mark, symbol, digit
            flush(True)
            tokens.append((_PH, ph))
    flush(True)
    return tokens


def _render_roman(tokens: list[tuple[str, str]], scheme: Scheme) -> str:
    out_map = ROMAN[scheme].out_map
    return "".join(out_map[value] if kind == _PH else value for kind, value in tokens)


def _render_devanagari(tokens: list[tuple[str, str]]) -> str:
    out: list[str] = []
    pending = False  # consonant emitted, vowel not yet decided
    for kind, value in tokens:
        if kind == _RAW:
            if pending:
                out.append(DEVANAGARI.virama)
                pending = False
            out.append(value)
            continue
        if value in tables.CONSONANTS:
            if pending:
                out.append(DEVANAGARI.virama)
            out.append(DEVANAGARI.consonants[value])
            pending = True
        elif value in tables.VOWELS:
            if pending:
                if value != "a":
                    out.append(DEVANAGARI.vowel_signs[value])
                pending = False
            else:
                out.append(DEVANAGARI.independent_vowels[value])
        else:
            if pending:
                out.append(DEVANAGARI.virama)
                pending = False
            if value in tables.MARKS:
                out.append(DEVANAGARI.marks[value])
            elif value in DEVANAGARI.symbols:
                out.append(DEVANAGARI.symbols[value])
            else:
                out.append(DEVANAGARI.digits[value])
    if pending:
        out.append(DEVANAGARI.virama)
    return "".join(out)


def transliterate_detailed(text: str, source, target) -> TransliterationResult:
    src, dst = coerce_scheme(source), coerce_scheme(target)
    advisories: list[str] = []
    normalized = unicodedata.normalize("NFC", text)
    if src is Scheme.DEVANAGARI:
        tokens = _tokenize_devanagari(normalized, advisories)
    else:
        tokens = _tokenize_roman(normalized, src, advisories)
    if dst is Scheme.DEVANAGARI:
        rendered = _render_devanagari(tokens)
    else:
        rendered = _render_roman(tokens, dst)
    return TransliterationResult(text=rendered, advisories=advisories)


def transliterate(text: str, source, target) -> str:
    """Convert ``text`` from one scheme to another; advisories discarded."""
    return transliterate_detailed(text, source, target).text
