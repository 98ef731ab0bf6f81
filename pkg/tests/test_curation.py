import random

import pytest

from koshagraph.curation import (
    SYNONYM_RELATION,
    apply_inference_rules,
    canonicalize_synonyms,
    detect_category_conflicts,
    link_equivalent,
    resolve_conflict,
)
from koshagraph.errors import NoSuchNodeError, SelfLoopError
from koshagraph.graph import GraphStore
from koshagraph.query import evaluate, parse

from conftest import RAJIKA_SYNONYMS, annotate_godhuma, annotate_rajika
from oracles import canonical_component_answer, component_answer, synonym_component


def test_category_conflicts(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256381, "Symptom", "a1", lemma="ज्वर")
    assert detect_category_conflicts(graph) == []
    annotations.annotate_entity(256381, "Disease", "a2", lemma="ज्वर")
    conflicts = detect_category_conflicts(graph)
    assert len(conflicts) == 1
    conflict = conflicts[0]
    assert conflict.lemma == "ज्वर"
    assert {c["entity_type"] for c in conflict.claimed_types} == {"Symptom", "Disease"}
    assert conflict.resolution is None
    annotations.annotate_entity(256381, "Others", "a3", lemma="ज्वर")
    (conflict,) = detect_category_conflicts(graph)
    assert len(conflict.claimed_types) == 3


def test_resolve_conflict(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256381, "Symptom", "a1", lemma="ज्वर")
    annotations.annotate_entity(256381, "Disease", "a2", lemma="ज्वर")
    resolve_conflict(graph, "ज्वर", "Disease", "c1")
    assert graph.node_by_lemma("ज्वर").entity_type == "Disease"
    (conflict,) = detect_category_conflicts(graph)
    assert conflict.resolution == "Disease"


def test_inference_rule_creates_property_node(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256343, "Substance", "a1", lemma="गोधूम")
    annotations.annotate_relation(256345, "मधुर", "is Property of", "गोधूम", "a1", detail="rasa")
    assert graph.node_by_lemma("मधुर") is None
    inferred = apply_inference_rules(graph)
    assert inferred == [{"lemma": "मधुर", "entity_type": "Property",
                         "via_edge": inferred[0]["via_edge"]}]
    node = graph.node_by_lemma("मधुर")
    assert node.entity_type == "Property"
    assert node.line_ids == {256345}
    assert graph.dangling_references() == []
    assert len(graph.edges()) == 1


def test_inference_leaves_ruleless_endpoints(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256343, "Substance", "a1", lemma="गोधूम")
    annotations.annotate_relation(256343, "गोधूम", "is Similar to", "यव", "a1")
    assert apply_inference_rules(graph) == []
    assert len(graph.dangling_references()) == 1


def test_inference_on_clean_graph(stores):
    corpus, graph, index, annotations = stores
    annotate_godhuma(annotations)
    assert apply_inference_rules(graph) == []


def test_link_equivalent(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256381, "Property", "a1", lemma="ग्राह")
    annotations.annotate_entity(256381, "Property", "a1", lemma="ग्राहिन्")
    edge_id = link_equivalent(graph, "ग्राह", "ग्राहिन्", "c1")
    edge = graph.edge(edge_id)
    assert edge.relation_type == SYNONYM_RELATION
    assert edge.annotators == {"c1"}
    assert edge.line_ids == set()
    with pytest.raises(SelfLoopError):
        link_equivalent(graph, "ग्राह", "ग्राह", "c1")
    with pytest.raises(NoSuchNodeError):
        link_equivalent(graph, "ग्राह", "नास्ति", "c1")
    report = canonicalize_synonyms(graph)
    (component,) = report.components
    assert set(component.lemmas) == {"ग्राह", "ग्राहिन्"}


def assert_star_shape(graph):
    for node in graph.nodes():
        if node.canonical_of is not None:
            out_syn = [e for e, _ in graph.neighbors(node.node_id, SYNONYM_RELATION, "out")]
            assert len(out_syn) == 1
            canonical = graph.node(out_syn[0].dst)
            assert canonical.canonical_of is None
            for edge, _ in graph.neighbors(node.node_id, None, "both"):
                assert edge.relation_type == SYNONYM_RELATION


def test_rajika_star(stores):
    corpus, graph, index, annotations = stores
    annotate_rajika(annotations)
    rajika = graph.node_by_lemma("राजिका")
    pre_answer = component_answer(graph, "क्षव")
    report = canonicalize_synonyms(graph)

    (component,) = report.components
    assert component.canonical_lemma == "राजिका"
    assert len(component.members) == 10
    synonym_edges = [e for e in graph.edges() if e.relation_type == SYNONYM_RELATION]
    assert len(synonym_edges) == 9
    assert all(e.dst == rajika.node_id for e in synonym_edges)
    assert_star_shape(graph)
    # uṣṇa stays attached to the canonical node
    props = graph.neighbors(rajika.node_id, "is Property of", "in")
    assert [n.lemma for _, n in props] == ["उष्ण"]

    one_hop = parse(
        'MATCH (x:SUBSTANCE)-[:IS_SYNONYM_OF*0..1]->(c), (p)-[:IS_PROPERTY_OF]->(c) '
        'WHERE x.lemma = "क्षव" RETURN p')
    assert evaluate(one_hop, graph).lemmas("p") == pre_answer == {"उष्ण"}


def test_canonicalize_no_synonyms_is_identity(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256343, "Substance", "a1", lemma="गोधूम")
    annotations.annotate_entity(256345, "Property", "a1", lemma="मधुर")
    annotations.annotate_relation(256345, "मधुर", "is Property of", "गोधूम", "a1")
    before = graph.export_graph()
    report = canonicalize_synonyms(graph)
    assert report.components == []
    assert graph.export_graph() == before


def test_chain_rewrite_matches_oracle(ontology, corpus, stores):
    corpus, graph, index, annotations = stores
    # A-B-C-D synonym chain; properties on the ends; B gets the highest degree.
    for lemma in ("अ", "ब", "च", "द"):
        annotations.annotate_entity(256400, "Substance", "a1", lemma=lemma)
    for lemma in ("प१", "प२", "प३"):
        annotations.annotate_entity(256401, "Property", "a1", lemma=lemma)
    annotations.annotate_relation(256400, "अ", "is Synonym of", "ब", "a1")
    annotations.annotate_relation(256400, "ब", "is Synonym of", "च", "a1")
    annotations.annotate_relation(256400, "च", "is Synonym of", "द", "a1")
    annotations.annotate_relation(256401, "प१", "is Property of", "अ", "a1")
    annotations.annotate_relation(256401, "प२", "is Property of", "द", "a1")
    annotations.annotate_relation(256401, "प३", "is Property of", "ब", "a1")

    pre = {lemma: component_answer(graph, lemma) for lemma in ("अ", "ब", "च", "द")}
    assert pre["अ"] == {"प१", "प२", "प३"}

    report = canonicalize_synonyms(graph)
    (component,) = report.components
    assert component.canonical_lemma == "ब"  # degree 4 beats 2/3/2
    assert report.edges_rewired == 2
    assert_star_shape(graph)
    canonical = graph.node_by_lemma("ब")
    props = {n.lemma for _, n in graph.neighbors(canonical.node_id, "is Property of", "in")}
    assert props == pre["अ"]
    for lemma in ("अ", "च", "द"):
        one_hop = parse(
            'MATCH (x)-[:IS_SYNONYM_OF*0..1]->(c), (p)-[:IS_PROPERTY_OF]->(c) '
            f'WHERE x.lemma = "{lemma}" RETURN p')
        assert evaluate(one_hop, graph).lemmas("p") == pre[lemma]


def test_self_loop_edges_dropped(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256400, "Substance", "a1", lemma="अ")
    annotations.annotate_entity(256400, "Substance", "a1", lemma="ब")
    annotations.annotate_relation(256400, "अ", "is Synonym of", "ब", "a1")
    annotations.annotate_relation(256400, "अ", "is Variant of", "ब", "a1")
    report = canonicalize_synonyms(graph)
    assert report.self_loops_dropped == 1
    assert all(e.relation_type == SYNONYM_RELATION for e in graph.edges())


def test_unnamed_member_never_canonical_over_named(stores):
    corpus, graph, index, annotations = stores
    annotations.annotate_entity(256358, "Substance", "a1", unnamed_ordinal=1)
    annotations.annotate_entity(256358, "Substance", "a1", lemma="मुद्ग")
    annotations.annotate_entity(256358, "Property", "a1", lemma="श्याम")
    annotations.annotate_entity(256358, "Property", "a1", lemma="हरित")
    annotations.annotate_relation(256358, "X1-256358", "is Synonym of", "मुद्ग", "a1")
    # pile degree onto the unnamed node
    annotations.annotate_relation(256358, "श्याम", "is Property of", "X1-256358", "a1")
    annotations.annotate_relation(256358, "हरित", "is Property of", "X1-256358", "a1")
    report = canonicalize_synonyms(graph)
    (component,) = report.components
    assert component.canonical_lemma == "मुद्ग"


def _random_graph(ontology, rng: random.Random, size: int) -> GraphStore:
    graph = GraphStore(ontology)
    n_nodes = rng.randint(4, size)
    lemmas = []
    for i in range(n_nodes):
        unnamed = rng.random() < 0.15
        lemma = f"X{i + 1}-256343" if unnamed else f"w{i}"
        entity_type = rng.choice(["Substance", "Property", "Disease", "Tridoṣa"])
        graph.upsert_node(lemma, entity_type, 256343, rng.choice(["a1", "a2"]))
        lemmas.append(lemma)
    for _ in range(rng.randint(0, 2 * n_nodes)):
        a, b = rng.sample(lemmas, 2)
        relation = rng.choice([SYNONYM_RELATION, "is Property of", "is Variant of",
                               "is Increased by"])
        detail = rng.choice([None, None, "d1", "d2"])
        line = rng.choice([256343, 256345, 256400])
        graph.upsert_edge(a, relation, b, detail, line, rng.choice(["a1", "a2", "a3"]))
    return graph


@pytest.mark.parametrize("seed", range(25))
def test_randomized_oracle_equivalence(ontology, seed):
    rng = random.Random(seed)
    graph = _random_graph(ontology, rng, 30)
    lemmas = [n.lemma for n in graph.nodes()]
    # Post-rewrite answers are component representatives, so the oracle maps
    # pre-rewrite sources through its own canonical choice.
    pre = {lemma: canonical_component_answer(graph, lemma) for lemma in lemmas}
    pre_nodes = len(graph.nodes())
    pre_edges = len(graph.edges())
    pre_line_ids = set()
    for e in graph.edges():
        pre_line_ids |= e.line_ids

    report = canonicalize_synonyms(graph)

    assert len(graph.nodes()) == pre_nodes
    assert len(graph.edges()) <= pre_edges
    assert_star_shape(graph)
    post_line_ids = set()
    for e in graph.edges():
        post_line_ids |= e.line_ids
    if report.self_loops_dropped == 0:
        assert post_line_ids == pre_line_ids

    for lemma in lemmas:
        one_hop = parse(
            'MATCH (x)-[:IS_SYNONYM_OF*0..1]->(c), (p)-[:IS_PROPERTY_OF]->(c) '
            f'WHERE x.lemma = "{lemma}" RETURN p')
        assert evaluate(one_hop, graph).lemmas("p") == pre[lemma], (seed, lemma)

    snapshot = graph.export_graph()
    second = canonicalize_synonyms(graph)
    assert graph.export_graph() == snapshot
    assert second.edges_rewired == 0 and second.edges_merged == 0


def test_dry_run_leaves_graph_untouched(stores):
    corpus, graph, index, annotations = stores
    annotate_rajika(annotations)
    before = graph.export_graph()
    report = canonicalize_synonyms(graph, dry_run=True)
    assert report.dry_run is True
    assert graph.export_graph() == before
    assert report.components[0].canonical_lemma == "राजिका"


def test_synonym_component_oracle_matches_members(stores):
    corpus, graph, index, annotations = stores
    annotate_rajika(annotations)
    rajika = graph.node_by_lemma("राजिका")
    members = synonym_component(graph, rajika.node_id)
    assert {graph.node(m).lemma for m in members} == set(RAJIKA_SYNONYMS) | {"राजिका"}
