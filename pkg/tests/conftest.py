"""Shared fixtures: stores wired together and the paper-derived demo graphs."""

from __future__ import annotations

from pathlib import Path

import pytest

from koshagraph.annotation import AnnotationStore
from koshagraph.corpus import CorpusStore
from koshagraph.graph import GraphStore
from koshagraph.ontology import load_default_ontology
from koshagraph.templates import load_default_templates
from koshagraph.translit import TransliterationIndex

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "koshagraph" / "data"

APPENDIX_CORPUS = DATA_DIR / "corpus_dhanyavarga_1_10.jsonl"
SECTIONS_CORPUS = DATA_DIR / "corpus_dhanyavarga_sections.jsonl"
DEMO_ANNOTATIONS = DATA_DIR / "annotations_demo.jsonl"

RAJIKA_SYNONYMS = ["क्षव", "क्षुताभिजनक", "कृष्णिका", "कृष्णसर्षप",
                   "राजी", "क्षुज्जनिका", "आसुरि", "तिक्ष्णगन्धा", "चीनाक"]


@pytest.fixture(scope="session")
def ontology():
    return load_default_ontology()


@pytest.fixture(scope="session")
def catalog(ontology):
    return load_default_templates(ontology)


@pytest.fixture()
def corpus():
    store = CorpusStore()
    store.import_corpus(APPENDIX_CORPUS)
    store.import_corpus(SECTIONS_CORPUS)
    return store


@pytest.fixture()
def stores(ontology, corpus):
    graph = GraphStore(ontology)
    index = TransliterationIndex()
    annotations = AnnotationStore(corpus, graph, index)
    return corpus, graph, index, annotations


def annotate_godhuma(annotations: AnnotationStore, annotator: str = "a1") -> None:
    """The śloka-31/33 fixture: eight entities, seven relations."""
    annotations.annotate_entity(256343, "Substance", annotator, lemma="गोधूम")
    annotations.annotate_entity(256343, "Substance", annotator, lemma="सुमन")
    for lemma in ("मधुर", "शीत", "गुरु"):
        annotations.annotate_entity(256345, "Property", annotator, lemma=lemma)
    for lemma in ("वात", "पित्त"):
        annotations.annotate_entity(256345, "Tridoṣa", annotator, lemma=lemma)
    annotations.annotate_entity(256346, "Tridoṣa", annotator, lemma="कफ")
    annotations.annotate_relation(256343, "सुमन", "is Synonym of", "गोधूम", annotator)
    annotations.annotate_relation(256345, "मधुर", "is Property of", "गोधूम", annotator, detail="rasa")
    annotations.annotate_relation(256345, "शीत", "is Property of", "गोधूम", annotator)
    annotations.annotate_relation(256345, "वात", "is Decreased/Reduced by", "गोधूम", annotator)
    annotations.annotate_relation(256345, "पित्त", "is Decreased/Reduced by", "गोधूम", annotator)
    annotations.annotate_relation(256345, "गुरु", "is Property of", "गोधूम", annotator)
    annotations.annotate_relation(256346, "कफ", "is Increased by", "गोधूम", annotator)


def annotate_mudga(annotations: AnnotationStore, annotator: str = "a2") -> None:
    """The śloka-39 fixture: five unnamed variants with colour and laghu chains."""
    annotations.annotate_entity(256358, "Substance", annotator, lemma="मुद्ग")
    for ordinal in (1, 2, 3):
        annotations.annotate_entity(256358, "Substance", annotator, unnamed_ordinal=ordinal)
    for lemma in ("श्याम", "हरित", "पीत"):
        annotations.annotate_entity(256358, "Property", annotator, lemma=lemma)
    for ordinal in (1, 2):
        annotations.annotate_entity(256359, "Substance", annotator, unnamed_ordinal=ordinal)
    annotations.annotate_relation(256358, "श्याम", "is Property of", "X1-256358", annotator, detail="varṇa")
    annotations.annotate_relation(256358, "हरित", "is Property of", "X2-256358", annotator, detail="varṇa")
    annotations.annotate_relation(256358, "पीत", "is Property of", "X3-256358", annotator, detail="varṇa")
    better = "is Better/Larger/Greater than"
    annotations.annotate_relation(256359, "X1-256358", better, "X2-256358", annotator, detail="laghu")
    annotations.annotate_relation(256359, "X2-256358", better, "X3-256358", annotator, detail="laghu")
    annotations.annotate_relation(256359, "X3-256358", better, "X1-256359", annotator, detail="laghu")
    annotations.annotate_relation(256359, "X1-256359", better, "X2-256359", annotator, detail="laghu")


def annotate_rajika(annotations: AnnotationStore, annotator: str = "a3") -> None:
    """The synonym-group fixture: ten names, uṣṇa property on rājikā."""
    annotations.annotate_entity(256400, "Substance", annotator, lemma="राजिका")
    for lemma in RAJIKA_SYNONYMS[:4]:
        annotations.annotate_entity(256400, "Substance", annotator, lemma=lemma)
    for lemma in RAJIKA_SYNONYMS[4:]:
        annotations.annotate_entity(256401, "Substance", annotator, lemma=lemma)
    annotations.annotate_entity(256401, "Property", annotator, lemma="उष्ण")
    for lemma in RAJIKA_SYNONYMS:
        annotations.annotate_relation(256400, lemma, "is Synonym of", "राजिका", annotator)
    annotations.annotate_relation(256401, "उष्ण", "is Property of", "राजिका", annotator)
