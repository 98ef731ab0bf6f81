"""Line-structured corpus store (chapters -> verses -> lines).

Lines carry caller-supplied stable ids (the source edition's six-digit ids
are preserved), authoritative Devanagari text, stored IAST, an optional
sandhi-split display form and optional per-word analyses.  Import is atomic:
either the whole stream is accepted or the store is left untouched.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateLineIdError, InvalidRangeError, NoSuchLineError, ParseError


@dataclass(frozen=True)
class WordAnalysis:
    word: str
    root: str
    gender: str
    case_no: str
    number: str

    def to_json(self) -> dict:
        return {"word": self.word, "root": self.root, "gender": self.gender,
                "case": self.case_no, "number": self.number}

    @classmethod
    def from_json(cls, obj: dict) -> "WordAnalysis":
        return cls(word=obj["word"], root=obj["root"], gender=obj["gender"],
                   case_no=obj["case"], number=obj["number"])


@dataclass(frozen=True)
class Line:
    line_id: int
    chapter: str
    verse_no: int
    line_in_verse: int
    text_devanagari: str
    text_iast: str
    split_text: str | None = None
    analyses: tuple[WordAnalysis, ...] = ()

    def to_json(self) -> dict:
        return {
            "line_id": self.line_id,
            "chapter": self.chapter,
            "verse_no": self.verse_no,
            "line_in_verse": self.line_in_verse,
            "text_devanagari": self.text_devanagari,
            "text_iast": self.text_iast,
            "split_text": self.split_text,
            "analyses": [a.to_json() for a in self.analyses] or None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Line":
        analyses = tuple(WordAnalysis.from_json(a) for a in obj.get("analyses") or ())
        return cls(
            line_id=int(obj["line_id"]),
            chapter=obj["chapter"],
            verse_no=int(obj["verse_no"]),
            line_in_verse=int(obj["line_in_verse"]),
            text_devanagari=obj["text_devanagari"],
            text_iast=obj["text_iast"],
            split_text=obj.get("split_text"),
            analyses=analyses,
        )


@dataclass(frozen=True)
class CorpusStats:
    chapters: int
    verses: int
    lines: int

    def to_json(self) -> dict:
        return {"chapters": self.chapters, "verses": self.verses, "lines": self.lines}


class CorpusStore:
    def __init__(self):
        self._lines: dict[int, Line] = {}
        self._order: list[Line] = []
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._lines)

    def import_corpus(self, source) -> CorpusStats:
        """Import a JSON Lines stream (path, file object or iterable of records)."""
        records = list(self._iter_records(source))
        staged: dict[int, Line] = {}
        keys: set[tuple[str, int, int]] = set()
        for idx, obj in records:
            try:
                line = Line.from_json(obj)
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad corpus record: {exc}", record=idx) from exc
            if line.line_id in staged or line.line_id in self._lines:
                raise DuplicateLineIdError(f"line_id {line.line_id} already present (record {idx})")
            key = (line.chapter, line.verse_no, line.line_in_verse)
            if key in keys or any(
                (l.chapter, l.verse_no, l.line_in_verse) == key for l in self._lines.values()
            ):
                raise DuplicateLineIdError(f"position {key} already present (record {idx})")
            staged[line.line_id] = line
            keys.add(key)
        with self._lock:
            self._lines.update(staged)
            self._order = sorted(self._lines.values(),
                                 key=lambda l: (l.chapter, l.verse_no, l.line_in_verse))
        return self.stats()

    @staticmethod
    def _iter_records(source):
        if isinstance(source, (str, Path)):
            try:
                text = Path(source).read_text(encoding="utf-8")
            except OSError as exc:
                raise ParseError(f"cannot read corpus: {exc}", source=str(source)) from exc
            lines = text.splitlines()
        elif hasattr(source, "read"):
            lines = source.read().splitlines()
        else:
            lines = list(source)
        for idx, raw in enumerate(lines):
            if isinstance(raw, dict):
                yield idx, raw
                continue
            raw = raw.strip()
            if not raw:
                continue
            try:
                yield idx, json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"record {idx} is not valid JSON: {exc}", record=idx) from exc

    def stats(self) -> CorpusStats:
        chapters = {l.chapter for l in self._order}
        verses = {(l.chapter, l.verse_no) for l in self._order}
        return CorpusStats(chapters=len(chapters), verses=len(verses), lines=len(self._order))

    def get_line(self, line_id: int) -> Line:
        line = self._lines.get(line_id)
        if line is None:
            raise NoSuchLineError(f"no line with id {line_id}")
        return line

    def has_line(self, line_id: int) -> bool:
        return line_id in self._lines

    def get_lines(self, chapter: str, from_verse: int, to_verse: int) -> list[Line]:
        if from_verse > to_verse:
            raise InvalidRangeError(f"from_verse {from_verse} > to_verse {to_verse}")
        return [l for l in self._order
                if l.chapter == chapter and from_verse <= l.verse_no <= to_verse]

    def chapters(self) -> list[str]:
        return sorted({l.chapter for l in self._order})

    def export_corpus(self) -> list[dict]:
        return [l.to_json() for l in self._order]

    def export_jsonl(self) -> str:
        return "\n".join(json.dumps(rec, ensure_ascii=False) for rec in self.export_corpus()) + ("\n" if self._order else "")
