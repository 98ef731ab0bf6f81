"""Closed vocabulary of entity and relation types.

The ontology is loaded once from a JSON document, validated, and treated as
immutable afterwards.  Every type has a canonical English label (the key used
in annotation) and a derived UPPER_SNAKE identifier used in the query
language, e.g. "is Increased by" -> IS_INCREASED_BY, "Tridoṣa" -> TRIDOSHA.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DuplicateTypeError, EmptyOntologyError, ParseError, UnknownTypeError

# Folding applied before building identifiers: loose "English" romanization
# of IAST diacritics (ṣ -> sh, not the scientific s).
_IDENT_FOLD = {
    "ā": "a", "ī": "i", "ū": "u", "ṛ": "r", "ṝ": "r", "ḷ": "l", "ḹ": "l",
    "ṃ": "m", "ḥ": "h", "ṅ": "n", "ñ": "n", "ṭ": "t", "ḍ": "d", "ṇ": "n",
    "ś": "sh", "ṣ": "sh", "ḻ": "l",
}


def type_identifier(name: str) -> str:
    """UPPER_SNAKE identifier for a type label."""
    folded = "".join(_IDENT_FOLD.get(ch, ch) for ch in unicodedata.normalize("NFC", name.lower()))
    return re.sub(r"[^A-Za-z0-9]+", "_", folded).strip("_").upper()


def _levenshtein(a: str, b: str) -> int:
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[-1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class EntityType:
    name: str
    description: str = ""

    @property
    def identifier(self) -> str:
        return type_identifier(self.name)


@dataclass(frozen=True)
class InferenceRule:
    """Default entity types for dangling relation endpoints (None = no rule)."""

    src_default_type: str | None = None
    dst_default_type: str | None = None


@dataclass(frozen=True)
class RelationType:
    name: str
    symmetric: bool = False
    inverse_reading: str | None = None
    inference: InferenceRule = field(default_factory=InferenceRule)

    @property
    def identifier(self) -> str:
        return type_identifier(self.name)


class Ontology:
    """Validated, read-only collection of entity and relation types."""

    def __init__(self, entity_types: list[EntityType], relation_types: list[RelationType], version: str = "1"):
        if not entity_types or not relation_types:
            raise EmptyOntologyError("ontology must define at least one entity type and one relation type")
        self.entity_types = list(entity_types)
        self.relation_types = list(relation_types)
        self.version = version
        self._entities: dict[str, EntityType] = {}
        self._relations: dict[str, RelationType] = {}
        for et in self.entity_types:
            self._register(self._entities, et, "entity")
        for rt in self.relation_types:
            if rt.symmetric and rt.inverse_reading is not None:
                raise ParseError(f"symmetric relation {rt.name!r} must not carry an inverse reading")
            self._register(self._relations, rt, "relation")
        for rt in self.relation_types:
            for t in (rt.inference.src_default_type, rt.inference.dst_default_type):
                if t is not None and t.lower() not in self._entities:
                    raise ParseError(f"inference rule of {rt.name!r} names unknown entity type {t!r}")

    @staticmethod
    def _register(table: dict, typ, kind: str) -> None:
        if not typ.name.strip():
            raise ParseError(f"{kind} type with empty name")
        for key in {typ.name.lower(), typ.identifier.lower()}:
            if key in table:
                raise DuplicateTypeError(f"duplicate {kind} type name: {typ.name!r}")
            table[key] = typ

    # Resolution is case-insensitive and accepts either the canonical label
    # or the UPPER_SNAKE identifier; it never mutates the ontology.
    def entity_type(self, name: str) -> EntityType:
        return self._resolve(self._entities, name, "entity")

    def relation_type(self, name: str) -> RelationType:
        return self._resolve(self._relations, name, "relation")

    def _resolve(self, table: dict, name: str, kind: str):
        hit = table.get(unicodedata.normalize("NFC", name).lower())
        if hit is not None:
            return hit
        target = name.lower()
        best = min(table, key=lambda k: (_levenshtein(target, k), k), default=None)
        suggestion = table[best].name if best is not None else None
        raise UnknownTypeError(kind, name, suggestion)

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "entity_types": [{"name": et.name, "description": et.description} for et in self.entity_types],
            "relation_types": [
                {
                    "name": rt.name,
                    "symmetric": rt.symmetric,
                    **({"inverse_reading": rt.inverse_reading} if rt.inverse_reading else {}),
                    "inference": {
                        "src": rt.inference.src_default_type,
                        "dst": rt.inference.dst_default_type,
                    },
                }
                for rt in self.relation_types
            ],
        }


def load_ontology(source) -> Ontology:
    """Load and validate an ontology from a path, file object or dict."""
    if isinstance(source, dict):
        doc = source
    else:
        try:
            if hasattr(source, "read"):
                doc = json.load(source)
            else:
                doc = json.loads(Path(source).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read ontology document: {exc}", source=str(source)) from exc
    if not isinstance(doc, dict):
        raise ParseError("ontology document must be a JSON object")
    try:
        entity_types = [
            EntityType(name=e["name"], description=e.get("description", ""))
            for e in doc.get("entity_types", [])
        ]
        relation_types = []
        for r in doc.get("relation_types", []):
            inf = r.get("inference") or {}
            relation_types.append(
                RelationType(
                    name=r["name"],
                    symmetric=bool(r.get("symmetric", False)),
                    inverse_reading=r.get("inverse_reading"),
                    inference=InferenceRule(inf.get("src"), inf.get("dst")),
                )
            )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed ontology document: {exc}") from exc
    return Ontology(entity_types, relation_types, version=str(doc.get("version", "1")))


def default_ontology_path() -> Path:
    return Path(str(resources.files("koshagraph").joinpath("data/ontology.json")))


def load_default_ontology() -> Ontology:
    return load_ontology(default_ontology_path())
