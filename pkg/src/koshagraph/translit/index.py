"""Global prefix-autocomplete index over every scheme rendering of a lemma.

Each indexed Devanagari lemma is stored under the lowercased rendering in all
seven schemes; queries of fewer than three user-perceived characters return
nothing.  Case distinctions of HK/SLP1/WX are deliberately destroyed by the
lowercasing, so colliding renderings return the union of their lemmas.
"""

from __future__ import annotations

import bisect
import threading
import unicodedata

from .convert import transliterate
from .tables import Scheme, grapheme_length

MIN_PREFIX = 3
MAX_RESULTS = 50


class TransliterationIndex:
    def __init__(self, min_prefix: int = MIN_PREFIX, max_results: int = MAX_RESULTS):
        self.min_prefix = min_prefix
        self.max_results = max_results
        self._entries: dict[str, set[str]] = {}
        self._keys: list[str] = []
        self._lemmas: set[str] = set()
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._lemmas)

    def __contains__(self, lemma: str) -> bool:
        return unicodedata.normalize("NFC", lemma) in self._lemmas

    @staticmethod
    def renderings(lemma: str) -> list[str]:
        """Lowercased renderings of a Devanagari lemma in all seven schemes."""
        lemma = unicodedata.normalize("NFC", lemma)
        out = []
        for scheme in Scheme:
            rendered = lemma if scheme is Scheme.DEVANAGARI else transliterate(lemma, Scheme.DEVANAGARI, scheme)
            out.append(unicodedata.normalize("NFC", rendered.lower()))
        return out

    def index_lemma(self, lemma: str) -> None:
        if not lemma or not lemma.strip():
            raise ValueError("cannot index an empty lemma")
        lemma = unicodedata.normalize("NFC", lemma)
        keys = self.renderings(lemma)
        # All seven renderings are inserted under one lock so a concurrent
        # suggest() never sees a partially indexed lemma.
        with self._lock:
            for key in keys:
                bucket = self._entries.get(key)
                if bucket is None:
                    self._entries[key] = {lemma}
                    bisect.insort(self._keys, key)
                else:
                    bucket.add(lemma)
            self._lemmas.add(lemma)

    def lookup(self, text: str) -> list[str]:
        """Lemmas whose rendering in any scheme equals ``text`` (lowercased)."""
        needle = unicodedata.normalize("NFC", text.lower())
        with self._lock:
            return sorted(self._entries.get(needle, ()))

    def suggest(self, prefix: str) -> list[str]:
        if grapheme_length(prefix) < self.min_prefix:
            return []
        needle = unicodedata.normalize("NFC", prefix.lower())
        with self._lock:
            start = bisect.bisect_left(self._keys, needle)
            found: set[str] = set()
            for key in self._keys[start:]:
                if not key.startswith(needle):
                    break
                found |= self._entries[key]
        return sorted(found)[: self.max_results]
