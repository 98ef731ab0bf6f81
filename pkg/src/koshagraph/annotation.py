"""Per-line human annotations, validated and materialized into the graph.

Annotations are append-only events; the graph is a materialized view, so
replaying the full log into an empty graph reproduces it exactly.  Deleting
appends a tombstone and recomputes the provenance of the touched node or
edge from the surviving events (contributions that never came from the log,
e.g. curator links or inferred nodes, survive).
"""

from __future__ import annotations

import json
import time
import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .corpus import CorpusStore
from .errors import (
    AnnotationPermissionError,
    DuplicateUnnamedOrdinalError,
    NoSuchAnnotationError,
    ParseError,
    SelfLoopError,
)
from .graph import GraphStore, unnamed_lemma
from .translit import TransliterationIndex

_DEVANAGARI_RANGE = range(0x0900, 0x0980)


def _indexable(lemma: str) -> bool:
    return any(ord(ch) in _DEVANAGARI_RANGE for ch in lemma)


@dataclass
class EntityAnnotation:
    ann_id: int
    line_id: int
    lemma: str
    entity_type: str
    annotator: str
    unnamed_ordinal: int | None
    ts: float
    deleted: bool = False

    def to_json(self) -> dict:
        rec = {"kind": "entity", "line_id": self.line_id, "entity_type": self.entity_type,
               "annotator": self.annotator, "ts": self.ts}
        if self.unnamed_ordinal is not None:
            rec["unnamed_ordinal"] = self.unnamed_ordinal
        else:
            rec["lemma"] = self.lemma
        return rec


@dataclass
class RelationAnnotation:
    ann_id: int
    line_id: int
    src_lemma: str
    relation_type: str
    dst_lemma: str
    detail: str | None
    annotator: str
    ts: float
    deleted: bool = False

    def to_json(self) -> dict:
        return {"kind": "relation", "line_id": self.line_id, "src": self.src_lemma,
                "relation_type": self.relation_type, "dst": self.dst_lemma,
                "detail": self.detail, "annotator": self.annotator, "ts": self.ts}


class AnnotationStore:
    def __init__(self, corpus: CorpusStore, graph: GraphStore, index: TransliterationIndex):
        self.corpus = corpus
        self.graph = graph
        self.index = index
        self._entities: dict[int, EntityAnnotation] = {}
        self._relations: dict[int, RelationAnnotation] = {}
        self._next_id = 1
        # Ordered event log (annotations and deletes); replaying it into an
        # empty graph reproduces the current one exactly, ids included.
        self._log: list[dict] = []

    # -- writes ------------------------------------------------------------

    def annotate_entity(self, line_id: int, entity_type: str, annotator: str,
                        lemma: str | None = None, unnamed_ordinal: int | None = None,
                        ts: float | None = None) -> int:
        line = self.corpus.get_line(line_id)
        if unnamed_ordinal is not None:
            if unnamed_ordinal < 1:
                raise ValueError("unnamed_ordinal must be positive")
            for ann in self._entities.values():
                if (not ann.deleted and ann.line_id == line.line_id
                        and ann.annotator == annotator
                        and ann.unnamed_ordinal == unnamed_ordinal):
                    raise DuplicateUnnamedOrdinalError(
                        f"annotator {annotator!r} already used ordinal {unnamed_ordinal} on line {line_id}")
            lemma = unnamed_lemma(unnamed_ordinal, line.line_id)
        elif not lemma or not lemma.strip():
            raise ValueError("named entity annotation needs a lemma")
        else:
            lemma = unicodedata.normalize("NFC", lemma)
        with self.graph.write_lock():
            node_id = self.graph.upsert_node(lemma, entity_type, line.line_id, annotator)
            ann = EntityAnnotation(
                ann_id=self._next_id, line_id=line.line_id, lemma=lemma,
                entity_type=self.graph.ontology.entity_type(entity_type).name,
                annotator=annotator, unnamed_ordinal=unnamed_ordinal,
                ts=time.time() if ts is None else ts,
            )
            self._next_id += 1
            self._entities[ann.ann_id] = ann
            self._log.append(ann.to_json())
        if _indexable(lemma):
            self.index.index_lemma(lemma)
        return node_id

    def annotate_relation(self, line_id: int, src_lemma: str, relation_type: str,
                          dst_lemma: str, annotator: str, detail: str | None = None,
                          ts: float | None = None) -> int:
        line = self.corpus.get_line(line_id)
        src_lemma = unicodedata.normalize("NFC", src_lemma)
        dst_lemma = unicodedata.normalize("NFC", dst_lemma)
        if src_lemma == dst_lemma:
            raise SelfLoopError(f"relation endpoints must differ, got {src_lemma!r} twice")
        with self.graph.write_lock():
            edge_id = self.graph.upsert_edge(src_lemma, relation_type, dst_lemma,
                                             detail, line.line_id, annotator)
            ann = RelationAnnotation(
                ann_id=self._next_id, line_id=line.line_id, src_lemma=src_lemma,
                relation_type=self.graph.ontology.relation_type(relation_type).name,
                dst_lemma=dst_lemma, detail=detail, annotator=annotator,
                ts=time.time() if ts is None else ts,
            )
            self._next_id += 1
            self._relations[ann.ann_id] = ann
            self._log.append(ann.to_json())
        return edge_id

    # -- reads ---------------------------------------------------------------

    def list_annotations(self, line_id: int) -> tuple[list[EntityAnnotation], list[RelationAnnotation]]:
        ents = [a for a in self._entities.values() if a.line_id == line_id and not a.deleted]
        rels = [a for a in self._relations.values() if a.line_id == line_id and not a.deleted]
        ents.sort(key=lambda a: (a.ts, a.ann_id))
        rels.sort(key=lambda a: (a.ts, a.ann_id))
        return ents, rels

    def get(self, ann_id: int):
        ann = self._entities.get(ann_id) or self._relations.get(ann_id)
        if ann is None or ann.deleted:
            raise NoSuchAnnotationError(f"no annotation with id {ann_id}")
        return ann

    # -- delete ----------------------------------------------------------------

    def delete_annotation(self, ann_id: int, annotator: str, is_curator: bool = False) -> None:
        ann = self.get(ann_id)
        if ann.annotator != annotator and not is_curator:
            raise AnnotationPermissionError(
                f"{annotator!r} may not delete an annotation owned by {ann.annotator!r}")
        ann.deleted = True
        self._log.append({"kind": "delete", "ann_id": ann_id, "annotator": annotator,
                          "curator": is_curator})
        with self.graph.write_lock():
            if isinstance(ann, EntityAnnotation):
                self._refresh_node(ann.lemma)
            else:
                self._refresh_edge(ann)

    def _live_entity_anns(self, lemma: str) -> list[EntityAnnotation]:
        return [a for a in self._entities.values() if not a.deleted and a.lemma == lemma]

    def _refresh_node(self, lemma: str) -> None:
        node = self.graph.node_by_lemma(lemma)
        if node is None:
            return
        live = self._live_entity_anns(lemma)
        ever = {a.annotator for a in self._entities.values() if a.lemma == lemma}
        ever_lines = {a.line_id for a in self._entities.values() if a.lemma == lemma}
        keep_annotators = (node.annotators - ever) | {a.annotator for a in live}
        keep_lines = (node.line_ids - ever_lines) | {a.line_id for a in live}
        if not keep_annotators and not keep_lines and not live:
            self.graph.remove_node(node.node_id)
            return
        node.annotators = keep_annotators
        node.line_ids = keep_lines

    def _refresh_edge(self, ann: RelationAnnotation) -> None:
        matching = [a for a in self._relations.values()
                    if (a.src_lemma, a.relation_type, a.dst_lemma, a.detail)
                    == (ann.src_lemma, ann.relation_type, ann.dst_lemma, ann.detail)]
        live = [a for a in matching if not a.deleted]
        src = self.graph.node_by_lemma(ann.src_lemma)
        dst = self.graph.node_by_lemma(ann.dst_lemma)
        edge = None
        if src is not None and dst is not None:
            for e, _ in self.graph.neighbors(src.node_id, ann.relation_type, "out"):
                if e.dst == dst.node_id and e.detail == ann.detail:
                    edge = e
                    break
        if edge is None:
            return
        ever = {a.annotator for a in matching}
        ever_lines = {a.line_id for a in matching}
        keep_annotators = (edge.annotators - ever) | {a.annotator for a in live}
        keep_lines = (edge.line_ids - ever_lines) | {a.line_id for a in live}
        if not keep_annotators and not keep_lines and not live:
            self.graph.remove_edge(edge.edge_id)
            return
        edge.annotators = keep_annotators
        edge.line_ids = keep_lines

    # -- dump / restore ----------------------------------------------------------

    def events(self) -> list:
        """Live annotations in insertion order."""
        out = [*self._entities.values(), *self._relations.values()]
        out.sort(key=lambda a: a.ann_id)
        return [a for a in out if not a.deleted]

    def event_log(self) -> list[dict]:
        """The full ordered log, deletes included."""
        return [dict(rec) for rec in self._log]

    def apply_event(self, rec: dict) -> None:
        kind = rec["kind"]
        if kind == "entity":
            self.annotate_entity(
                line_id=rec["line_id"], entity_type=rec["entity_type"],
                annotator=rec["annotator"], lemma=rec.get("lemma"),
                unnamed_ordinal=rec.get("unnamed_ordinal"), ts=rec.get("ts"))
        elif kind == "relation":
            self.annotate_relation(
                line_id=rec["line_id"], src_lemma=rec["src"],
                relation_type=rec["relation_type"], dst_lemma=rec["dst"],
                annotator=rec["annotator"], detail=rec.get("detail"), ts=rec.get("ts"))
        elif kind == "delete":
            self.delete_annotation(rec["ann_id"], rec["annotator"],
                                   is_curator=rec.get("curator", False))
        else:
            raise ParseError(f"unknown event kind {kind!r}")

    def replay_log(self, log: list[dict]) -> None:
        for rec in log:
            self.apply_event(rec)

    def dump_jsonl(self) -> str:
        recs = [json.dumps(a.to_json(), ensure_ascii=False) for a in self.events()]
        return "\n".join(recs) + ("\n" if recs else "")

    def restore(self, source) -> int:
        """Replay an annotation dump (path, file object or iterable of records)."""
        if isinstance(source, (str, Path)):
            raw_lines = Path(source).read_text(encoding="utf-8").splitlines()
        elif hasattr(source, "read"):
            raw_lines = source.read().splitlines()
        else:
            raw_lines = list(source)
        count = 0
        for idx, raw in enumerate(raw_lines):
            obj = raw if isinstance(raw, dict) else None
            if obj is None:
                raw = raw.strip()
                if not raw:
                    continue
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"record {idx} is not valid JSON: {exc}", record=idx) from exc
            try:
                kind = obj["kind"]
                if kind == "entity":
                    self.annotate_entity(
                        line_id=obj["line_id"], entity_type=obj["entity_type"],
                        annotator=obj["annotator"], lemma=obj.get("lemma"),
                        unnamed_ordinal=obj.get("unnamed_ordinal"), ts=obj.get("ts"),
                    )
                elif kind == "relation":
                    self.annotate_relation(
                        line_id=obj["line_id"], src_lemma=obj["src"],
                        relation_type=obj["relation_type"], dst_lemma=obj["dst"],
                        annotator=obj["annotator"], detail=obj.get("detail"), ts=obj.get("ts"),
                    )
                else:
                    raise ParseError(f"record {idx} has unknown kind {kind!r}", record=idx)
            except KeyError as exc:
                raise ParseError(f"record {idx} is missing {exc}", record=idx) from exc
            count += 1
        return count

    def migration_report(self, new_ontology) -> list[dict]:
        """Annotations that stop validating under a replacement ontology."""
        broken = []
        for ann in self.events():
            try:
                if isinstance(ann, EntityAnnotation):
                    new_ontology.entity_type(ann.entity_type)
                else:
                    new_ontology.relation_type(ann.relation_type)
            except Exception as exc:
                broken.append({"ann_id": ann.ann_id, "reason": str(exc)})
        return broken
