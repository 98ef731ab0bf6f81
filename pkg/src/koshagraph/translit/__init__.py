"""Transliteration among seven schemes and prefix autocomplete."""

from .convert import TransliterationResult, transliterate, transliterate_detailed
from .index import MAX_RESULTS, MIN_PREFIX, TransliterationIndex
from .tables import Scheme, grapheme_length

__all__ = [
    "MAX_RESULTS",
    "MIN_PREFIX",
    "Scheme",
    "TransliterationIndex",
    "TransliterationResult",
    "grapheme_length",
    "transliterate",
    "transliterate_detailed",
]
