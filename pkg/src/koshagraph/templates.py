"""Bilingual query-template registry, placeholder instantiation and execution.

A template pairs a Sanskrit and an English question with one graph-query
text, all sharing numbered placeholders typed Entity, EntityType or Relation.
Entity arguments are canonicalized to their synonym component's canonical
lemma before substitution, so the shipped one-hop queries stay synonym-safe
after curation.
"""

from __future__ import annotations

import json
import re
import unicodedata
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ArityError, ParseError, TemplateValidationError, UnknownEntityError
from .graph import GraphStore
from .ontology import Ontology
from .query import ResultSet, evaluate, parse
from .translit import TransliterationIndex

INPUT_TYPES = ("Entity", "EntityType", "Relation")
_PLACEHOLDER_RE = re.compile(r"\{(\d+)\}")


@dataclass(frozen=True)
class QueryTemplate:
    template_id: str
    category: str
    nl_sanskrit: str
    nl_english: str
    gql_template: str
    input_types: tuple[str, ...]
    interpretation: str | None = None

    def to_json(self) -> dict:
        out = {
            "template_id": self.template_id,
            "category": self.category,
            "nl_sanskrit": self.nl_sanskrit,
            "nl_english": self.nl_english,
            "gql_template": self.gql_template,
            "input_types": list(self.input_types),
        }
        if self.interpretation:
            out["interpretation"] = self.interpretation
        return out


@dataclass(frozen=True)
class InstantiatedQuery:
    template_id: str
    nl_sanskrit: str
    nl_english: str
    gql_text: str
    args: tuple[str, ...]


def _placeholders(text: str) -> set[int]:
    return {int(m) for m in _PLACEHOLDER_RE.findall(text)}


def _substitute(text: str, values: list[str]) -> str:
    return _PLACEHOLDER_RE.sub(lambda m: values[int(m.group(1))], text)


class TemplateCatalog:
    def __init__(self, templates: list[QueryTemplate], ontology: Ontology):
        self.templates = templates
        self.ontology = ontology
        self.by_id = {t.template_id: t for t in templates}
        seen: list[str] = []
        for t in templates:
            if t.category not in seen:
                seen.append(t.category)
        self.categories = seen

    def __len__(self) -> int:
        return len(self.templates)

    def get(self, template_id: str) -> QueryTemplate:
        t = self.by_id.get(template_id)
        if t is None:
            raise TemplateValidationError(f"no template {template_id!r}")
        return t

    # -- instantiation -----------------------------------------------------

    def _resolve_entity(self, arg: str, graph: GraphStore,
                        index: TransliterationIndex | None) -> str:
        arg = unicodedata.normalize("NFC", arg)
        node = graph.node_by_lemma(arg)
        if node is None and index is not None:
            candidates = [l for l in index.lookup(arg) if graph.node_by_lemma(l) is not None]
            if len(candidates) == 1:
                node = graph.node_by_lemma(candidates[0])
            elif len(candidates) > 1:
                raise UnknownEntityError(
                    f"{arg!r} is ambiguous between {', '.join(candidates)}")
        if node is None:
            raise UnknownEntityError(f"no annotated entity matches {arg!r}")
        if node.canonical_of is not None:
            node = graph.node(node.canonical_of)
        return node.lemma

    def instantiate(self, template_id: str, args: list[str], graph: GraphStore,
                    index: TransliterationIndex | None = None) -> InstantiatedQuery:
        t = self.get(template_id)
        if len(args) != len(t.input_types):
            raise ArityError(
                f"template {template_id!r} takes {len(t.input_types)} argument(s), got {len(args)}")
        gql_values: list[str] = []
        nl_values: list[str] = []
        for slot, arg in zip(t.input_types, args):
            if slot == "Entity":
                lemma = self._resolve_entity(arg, graph, index)
                gql_values.append(lemma.replace("\\", "\\\\").replace('"', '\\"'))
                nl_values.append(lemma)
            elif slot == "EntityType":
                et = self.ontology.entity_type(arg)
                gql_values.append(et.identifier)
                nl_values.append(et.name)
            else:
                rt = self.ontology.relation_type(arg)
                gql_values.append(rt.identifier)
                nl_values.append(rt.name)
        return InstantiatedQuery(
            template_id=template_id,
            nl_sanskrit=_substitute(t.nl_sanskrit, nl_values),
            nl_english=_substitute(t.nl_english, nl_values),
            gql_text=_substitute(t.gql_template, gql_values),
            args=tuple(nl_values),
        )

    def run(self, template_id: str, args: list[str], graph: GraphStore,
            index: TransliterationIndex | None = None) -> ResultSet:
        inst = self.instantiate(template_id, args, graph, index)
        result = evaluate(parse(inst.gql_text), graph)
        t = self.get(template_id)
        result.metadata = {
            "template_id": template_id,
            "category": t.category,
            "question_sanskrit": inst.nl_sanskrit,
            "question_english": inst.nl_english,
            "gql": inst.gql_text,
        }
        if t.interpretation:
            result.metadata["interpretation"] = t.interpretation
        return result

    def to_json(self) -> dict:
        return {
            "categories": self.categories,
            "templates": [t.to_json() for t in self.templates],
        }


def load_templates(source, ontology: Ontology) -> TemplateCatalog:
    """Load, validate and dummy-parse a template file."""
    if isinstance(source, list):
        doc = source
    else:
        try:
            if hasattr(source, "read"):
                doc = json.load(source)
            else:
                doc = json.loads(Path(source).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read template file: {exc}", source=str(source)) from exc
    if not isinstance(doc, list):
        raise ParseError("template file must be a JSON array")

    dummy_entity = "x"
    dummy_et = ontology.entity_types[0].identifier
    dummy_rel = ontology.relation_types[0].identifier

    templates: list[QueryTemplate] = []
    seen_ids: set[str] = set()
    for obj in doc:
        try:
            t = QueryTemplate(
                template_id=obj["template_id"],
                category=obj["category"],
                nl_sanskrit=obj["nl_sanskrit"],
                nl_english=obj["nl_english"],
                gql_template=obj["gql_template"],
                input_types=tuple(obj["input_types"]),
                interpretation=obj.get("interpretation"),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed template record: {exc}") from exc
        if t.template_id in seen_ids:
            raise TemplateValidationError(f"duplicate template id {t.template_id!r}")
        seen_ids.add(t.template_id)
        for slot in t.input_types:
            if slot not in INPUT_TYPES:
                raise TemplateValidationError(
                    f"template {t.template_id!r}: unknown input type {slot!r}")
        expected = set(range(len(t.input_types)))
        for label, text in (("Sanskrit", t.nl_sanskrit), ("English", t.nl_english),
                            ("graph query", t.gql_template)):
            if _placeholders(text) != expected:
                raise TemplateValidationError(
                    f"template {t.template_id!r}: {label} text placeholders do not match arity")
        dummies = [
            {"Entity": dummy_entity, "EntityType": dummy_et, "Relation": dummy_rel}[slot]
            for slot in t.input_types
        ]
        try:
            ast = parse(_substitute(t.gql_template, dummies))
        except Exception as exc:
            raise TemplateValidationError(
                f"template {t.template_id!r} does not parse: {exc}") from exc
        try:
            for pattern in ast.patterns:
                for node in pattern.nodes:
                    if node.label:
                        ontology.entity_type(node.label)
                for edge in pattern.edges:
                    for rel in edge.relation_types:
                        ontology.relation_type(rel)
        except Exception as exc:
            raise TemplateValidationError(
                f"template {t.template_id!r} uses a type missing from the ontology: {exc}") from exc
        templates.append(t)
    if not templates:
        warnings.warn("template catalog is empty", stacklevel=2)
    return TemplateCatalog(templates, ontology)


def default_templates_path() -> Path:
    return Path(str(resources.files("koshagraph").joinpath("data/templates.json")))


def load_default_templates(ontology: Ontology) -> TemplateCatalog:
    return load_templates(default_templates_path(), ontology)
