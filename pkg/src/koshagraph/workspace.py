"""Shared application state: one corpus, graph, index and catalog per data dir.

The data directory holds the canonical on-disk state (corpus.jsonl,
annotations.jsonl, graph.json); the CLI and the HTTP service both build a
Workspace and go through it, so both front doors produce identical payloads.
"""

from __future__ import annotations

import json
from pathlib import Path

from .annotation import AnnotationStore
from .corpus import CorpusStore
from .curation import (
    apply_inference_rules,
    canonicalize_synonyms,
    detect_category_conflicts,
    link_equivalent,
    resolve_conflict,
)
from .errors import ConfigError, KoshagraphError
from .graph import GraphStore
from .ontology import default_ontology_path, load_ontology
from .query import evaluate, parse
from .templates import default_templates_path, load_templates
from .translit import TransliterationIndex


def dumps(payload) -> str:
    """Canonical JSON used by both the CLI and the HTTP service."""
    return json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


class Workspace:
    CORPUS_FILE = "corpus.jsonl"
    ANNOTATIONS_FILE = "annotations.jsonl"
    GRAPH_FILE = "graph.json"
    RESOLUTIONS_FILE = "resolutions.json"

    def __init__(self, data_dir: str | Path, ontology_path: str | Path | None = None,
                 templates_path: str | Path | None = None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        ontology_path = Path(ontology_path) if ontology_path else default_ontology_path()
        templates_path = Path(templates_path) if templates_path else default_templates_path()
        for label, path in (("ontology", ontology_path), ("templates", templates_path)):
            if not path.exists():
                raise ConfigError(f"{label} file not found: {path}")
        self.ontology = load_ontology(ontology_path)
        self.catalog = load_templates(templates_path, self.ontology)
        self.corpus = CorpusStore()
        self.graph = GraphStore(self.ontology)
        self.index = TransliterationIndex()
        self.annotations = AnnotationStore(self.corpus, self.graph, self.index)
        self._load_state()

    # -- state ---------------------------------------------------------------

    def _load_state(self) -> None:
        corpus_file = self.data_dir / self.CORPUS_FILE
        if corpus_file.exists():
            self.corpus.import_corpus(corpus_file)
        ann_file = self.data_dir / self.ANNOTATIONS_FILE
        if ann_file.exists():
            self.annotations.restore(ann_file)
        graph_file = self.data_dir / self.GRAPH_FILE
        if graph_file.exists():
            # A saved graph snapshot (possibly curated) wins over the replayed
            # view; the claims table from the replay is kept.
            self.graph.import_graph(graph_file, keep_claims=True)
            for lemma in [n.lemma for n in self.graph.nodes()]:
                if any("ऀ" <= ch <= "ॿ" for ch in lemma):
                    self.index.index_lemma(lemma)
        resolutions_file = self.data_dir / self.RESOLUTIONS_FILE
        if resolutions_file.exists():
            for lemma, entity_type in json.loads(resolutions_file.read_text(encoding="utf-8")).items():
                self.graph.record_resolution(lemma, entity_type)

    def save(self) -> None:
        (self.data_dir / self.CORPUS_FILE).write_text(self.corpus.export_jsonl(), encoding="utf-8")
        (self.data_dir / self.ANNOTATIONS_FILE).write_text(self.annotations.dump_jsonl(), encoding="utf-8")
        (self.data_dir / self.GRAPH_FILE).write_text(
            dumps(self.graph.export_graph()) + "\n", encoding="utf-8")
        (self.data_dir / self.RESOLUTIONS_FILE).write_text(
            dumps(self.graph.conflict_resolutions()) + "\n", encoding="utf-8")

    def load_fixtures(self) -> None:
        """Seed an empty workspace with the shipped corpus and demo annotations."""
        from importlib import resources

        base = resources.files("koshagraph").joinpath("data")
        self.corpus.import_corpus(str(base.joinpath("corpus_dhanyavarga_1_10.jsonl")))
        self.corpus.import_corpus(str(base.joinpath("corpus_dhanyavarga_sections.jsonl")))
        self.annotations.restore(str(base.joinpath("annotations_demo.jsonl")))
        self.save()

    # -- payload builders ----------------------------------------------------

    def corpus_payload(self, chapter: str, from_verse: int, to_verse: int) -> dict:
        lines = self.corpus.get_lines(chapter, from_verse, to_verse)
        return {"chapter": chapter, "lines": [l.to_json() for l in lines],
                "graph_version": self.graph.version}

    def stats_payload(self) -> dict:
        out = self.graph.stats().to_json()
        out["corpus"] = self.corpus.stats().to_json()
        out["graph_version"] = self.graph.version
        return out

    def suggest_payload(self, prefix: str) -> dict:
        return {"query": prefix, "suggestions": self.index.suggest(prefix),
                "graph_version": self.graph.version}

    def templates_payload(self) -> dict:
        out = self.catalog.to_json()
        out["graph_version"] = self.graph.version
        return out

    def annotations_payload(self, line_id: int) -> dict:
        ents, rels = self.annotations.list_annotations(line_id)
        return {
            "line_id": line_id,
            "entities": [{"ann_id": a.ann_id, **a.to_json()} for a in ents],
            "relations": [{"ann_id": a.ann_id, **a.to_json()} for a in rels],
            "graph_version": self.graph.version,
        }

    def query_payload(self, template_id: str | None = None, args: list[str] | None = None,
                      raw: str | None = None) -> dict:
        if raw is not None and template_id is not None:
            raise KoshagraphError("pass either a template id or a raw query, not both")
        if raw is not None:
            result = evaluate(parse(raw), self.graph)
            result.metadata = {"gql": raw}
        elif template_id is not None:
            result = self.catalog.run(template_id, args or [], self.graph, self.index)
        else:
            raise KoshagraphError("a query needs a template id or raw query text")
        out = result.to_json()
        out["graph_version"] = self.graph.version
        return out

    def conflicts_payload(self) -> dict:
        return {"conflicts": [c.to_json() for c in detect_category_conflicts(self.graph)],
                "graph_version": self.graph.version}

    # -- mutations -------------------------------------------------------------

    def annotate_entity(self, line_id: int, entity_type: str, annotator: str,
                        lemma: str | None = None, unnamed_ordinal: int | None = None) -> dict:
        node_id = self.annotations.annotate_entity(
            line_id, entity_type, annotator, lemma=lemma, unnamed_ordinal=unnamed_ordinal)
        self.save()
        node = self.graph.node(node_id)
        return {"node_id": node_id, "lemma": node.lemma, "entity_type": node.entity_type,
                "graph_version": self.graph.version}

    def annotate_relation(self, line_id: int, src: str, relation_type: str, dst: str,
                          annotator: str, detail: str | None = None) -> dict:
        edge_id = self.annotations.annotate_relation(
            line_id, src, relation_type, dst, annotator, detail=detail)
        self.save()
        materialized = edge_id in {e.edge_id for e in self.graph.edges()}
        return {"edge_id": edge_id, "materialized": materialized,
                "graph_version": self.graph.version}

    def delete_annotation(self, ann_id: int, annotator: str, is_curator: bool) -> dict:
        self.annotations.delete_annotation(ann_id, annotator, is_curator=is_curator)
        self.save()
        return {"deleted": ann_id, "graph_version": self.graph.version}

    def import_corpus(self, path: str | Path) -> dict:
        stats = self.corpus.import_corpus(path)
        self.save()
        return {"imported": str(path), **stats.to_json(), "graph_version": self.graph.version}

    def import_annotations(self, path: str | Path) -> dict:
        count = self.annotations.restore(path)
        self.save()
        return {"imported": str(path), "annotations": count,
                "graph_version": self.graph.version}

    def curate(self, pass_name: str, dry_run: bool = False) -> dict:
        if pass_name == "conflicts":
            report = {"conflicts": [c.to_json() for c in detect_category_conflicts(self.graph)]}
        elif pass_name == "infer":
            inferred = apply_inference_rules(self.graph)
            report = {"inferred_entities": inferred,
                      "unresolved_dangling": len(self.graph.dangling_references())}
            if not dry_run:
                self.save()
        elif pass_name == "canonicalize":
            report = canonicalize_synonyms(self.graph, dry_run=dry_run).to_json()
            if not dry_run:
                self.save()
        else:
            raise KoshagraphError(f"unknown curation pass {pass_name!r}")
        report["pass"] = pass_name
        report["dry_run"] = dry_run
        report["graph_version"] = self.graph.version
        return report

    def resolve_conflict(self, lemma: str, entity_type: str, curator: str) -> dict:
        resolve_conflict(self.graph, lemma, entity_type, curator)
        self.save()
        return {"lemma": lemma, "entity_type": self.ontology.entity_type(entity_type).name,
                "graph_version": self.graph.version}

    def link_equivalent(self, lemma_a: str, lemma_b: str, curator: str) -> dict:
        edge_id = link_equivalent(self.graph, lemma_a, lemma_b, curator)
        self.save()
        return {"edge_id": edge_id, "graph_version": self.graph.version}

    def export_payload(self) -> dict:
        return self.graph.export_graph()
