"""Post-annotation curation passes.

Category-conflict reporting, inference of missing entities for dangling
relation endpoints, curator-made equivalence links, and the synonym
star-canonicalization rewrite: every synonym component collapses onto its
highest-degree member so any lookup needs at most one synonym hop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoSuchNodeError, SelfLoopError
from .graph import GraphStore
from .ontology import Ontology

SYNONYM_RELATION = "is Synonym of"


@dataclass
class CategoryConflict:
    lemma: str
    claimed_types: list[dict]
    resolution: str | None = None

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "claimed_types": self.claimed_types,
                "resolution": self.resolution}


@dataclass
class SynonymComponent:
    members: list[int]
    canonical: int
    lemmas: list[str]
    canonical_lemma: str

    def to_json(self) -> dict:
        return {"members": self.members, "canonical": self.canonical,
                "lemmas": self.lemmas, "canonical_lemma": self.canonical_lemma}


@dataclass
class CurationReport:
    conflicts: list[CategoryConflict] = field(default_factory=list)
    inferred_entities: list[dict] = field(default_factory=list)
    components: list[SynonymComponent] = field(default_factory=list)
    edges_rewired: int = 0
    edges_merged: int = 0
    self_loops_dropped: int = 0
    unresolved_dangling: int = 0
    dry_run: bool = False
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "conflicts": [c.to_json() for c in self.conflicts],
            "inferred_entities": self.inferred_entities,
            "components": [c.to_json() for c in self.components],
            "edges_rewired": self.edges_rewired,
            "edges_merged": self.edges_merged,
            "self_loops_dropped": self.self_loops_dropped,
            "unresolved_dangling": self.unresolved_dangling,
            "dry_run": self.dry_run,
            "notes": self.notes,
        }


def detect_category_conflicts(graph: GraphStore) -> list[CategoryConflict]:
    """One conflict per live lemma claimed with two or more entity types."""
    conflicts = []
    resolutions = graph.conflict_resolutions()
    for lemma in sorted(graph.category_claims()):
        if graph.node_by_lemma(lemma) is None:
            continue
        by_type = graph.category_claims()[lemma]
        if len(by_type) < 2:
            continue
        claims = [
            {"entity_type": et, "annotators": sorted(annotators), "line_ids": sorted(line_ids)}
            for et, (annotators, line_ids) in sorted(by_type.items())
        ]
        conflicts.append(CategoryConflict(lemma=lemma, claimed_types=claims,
                                          resolution=resolutions.get(lemma)))
    return conflicts


def resolve_conflict(graph: GraphStore, lemma: str, entity_type: str, curator: str) -> None:
    node = graph.node_by_lemma(lemma)
    if node is None:
        raise NoSuchNodeError(f"no node for lemma {lemma!r}")
    et = graph.ontology.entity_type(entity_type)
    with graph.write_lock():
        graph.set_node_type(node.node_id, et.name)
        node.annotators.add(curator)
        graph.record_resolution(lemma, et.name)


def apply_inference_rules(graph: GraphStore, onto: Ontology | None = None) -> list[dict]:
    """Create nodes for dangling endpoints whose relation carries a default type.

    Returns one record per inferred entity; endpoints with no applicable rule
    stay dangling.
    """
    onto = onto or graph.ontology
    inferred: list[dict] = []
    with graph.write_lock():
        # Node creation inside the loop can materialize (and thus remove)
        # dangling refs, so take a snapshot first.
        for ref in list(graph.dangling_references()):
            rt = onto.relation_type(ref.relation_type)
            for lemma, default in ((ref.src_lemma, rt.inference.src_default_type),
                                   (ref.dst_lemma, rt.inference.dst_default_type)):
                if default is None or graph.node_by_lemma(lemma) is not None:
                    continue
                line_id = min(ref.line_ids) if ref.line_ids else None
                annotator = min(ref.annotators) if ref.annotators else None
                graph.upsert_node(lemma, default, line_id, annotator)
                inferred.append({"lemma": lemma, "entity_type": default, "via_edge": ref.edge_id})
    return inferred


def link_equivalent(graph: GraphStore, lemma_a: str, lemma_b: str, curator: str) -> int:
    """Curator-made synonym edge between two existing nodes."""
    if lemma_a == lemma_b:
        raise SelfLoopError(f"cannot link {lemma_a!r} to itself")
    for lemma in (lemma_a, lemma_b):
        if graph.node_by_lemma(lemma) is None:
            raise NoSuchNodeError(f"no node for lemma {lemma!r}")
    return graph.upsert_edge(lemma_a, SYNONYM_RELATION, lemma_b,
                             detail=None, line_id=None, annotator=curator)


def _synonym_components(graph: GraphStore) -> list[list[int]]:
    """Connected components over synonym edges treated as undirected."""
    adjacency: dict[int, set[int]] = {}
    for edge in graph.edges():
        if edge.relation_type == SYNONYM_RELATION:
            adjacency.setdefault(edge.src, set()).add(edge.dst)
            adjacency.setdefault(edge.dst, set()).add(edge.src)
    seen: set[int] = set()
    components = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, component = [start], []
        seen.add(start)
        while stack:
            node = stack.pop()
            component.append(node)
            for neighbor in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    stack.append(neighbor)
        components.append(sorted(component))
    return components


def _choose_canonical(graph: GraphStore, members: list[int]) -> int:
    """argmax degree; named members beat unnamed; ties break on lemma then id."""
    named = [m for m in members if not graph.node(m).unnamed]
    candidates = named or members
    return min(candidates,
               key=lambda m: (-graph.degree(m), graph.node(m).lemma, m))


def _is_canonical_star(graph: GraphStore, members: list[int], canonical: int) -> bool:
    member_set = set(members)
    for m in members:
        node = graph.node(m)
        if m == canonical:
            if node.canonical_of is not None:
                return False
            continue
        if node.canonical_of != canonical:
            return False
        out_syn = [e for e, _ in graph.neighbors(m, SYNONYM_RELATION, "out")]
        if len(out_syn) != 1 or out_syn[0].dst != canonical:
            return False
        if any(e.relation_type == SYNONYM_RELATION for e, _ in graph.neighbors(m, None, "in")):
            return False
        for e, _ in graph.neighbors(m, None, "both"):
            if e.relation_type != SYNONYM_RELATION:
                return False
    for e, _ in graph.neighbors(canonical, SYNONYM_RELATION, "out"):
        if e.dst in member_set:
            return False
    return True


def canonicalize_synonyms(graph: GraphStore, dry_run: bool = False) -> CurationReport:
    """Collapse every synonym component onto its canonical member.

    Non-synonym edges of non-canonical members are rewired to the canonical
    node (duplicates merge, would-be self-loops drop); intra-component
    synonym edges are replaced by one star edge per non-canonical member.
    Components already in canonical star shape are left untouched, making the
    pass idempotent.
    """
    if dry_run:
        shadow = GraphStore(graph.ontology)
        shadow.import_graph(graph.export_graph())
        report = canonicalize_synonyms(shadow, dry_run=False)
        report.dry_run = True
        report.conflicts = detect_category_conflicts(graph)
        return report

    report = CurationReport()
    with graph.write_lock():
        for members in _synonym_components(graph):
            canonical = _choose_canonical(graph, members)
            component = SynonymComponent(
                members=members, canonical=canonical,
                lemmas=[graph.node(m).lemma for m in members],
                canonical_lemma=graph.node(canonical).lemma,
            )
            report.components.append(component)
            if _is_canonical_star(graph, members, canonical):
                continue

            member_set = set(members)
            synonym_edges = []
            other_edges = []
            for m in members:
                for edge, _ in graph.neighbors(m, None, "both"):
                    if edge.relation_type == SYNONYM_RELATION and edge.src in member_set and edge.dst in member_set:
                        synonym_edges.append(edge)
                    else:
                        other_edges.append(edge)
            synonym_edges = list({e.edge_id: e for e in synonym_edges}.values())
            other_edges = list({e.edge_id: e for e in other_edges}.values())
            syn_lines = set().union(*(e.line_ids for e in synonym_edges)) if synonym_edges else set()
            syn_annotators = set().union(*(e.annotators for e in synonym_edges)) if synonym_edges else set()

            for edge in sorted(other_edges, key=lambda e: e.edge_id):
                new_src = canonical if edge.src in member_set else edge.src
                new_dst = canonical if edge.dst in member_set else edge.dst
                if (new_src, new_dst) == (edge.src, edge.dst):
                    continue
                graph.remove_edge(edge.edge_id)
                if new_src == new_dst:
                    report.self_loops_dropped += 1
                    continue
                report.edges_rewired += 1
                _, merged = graph.attach_edge(new_src, new_dst, edge.relation_type, edge.detail,
                                              edge_id=edge.edge_id, line_ids=edge.line_ids,
                                              annotators=edge.annotators)
                if merged:
                    report.edges_merged += 1

            for edge in synonym_edges:
                graph.remove_edge(edge.edge_id)
            for m in members:
                if m == canonical:
                    graph.set_canonical_of(m, None)
                    continue
                graph.attach_edge(m, canonical, SYNONYM_RELATION, None,
                                  line_ids=syn_lines, annotators=syn_annotators)
                graph.set_canonical_of(m, canonical)
            report.notes.append(
                f"component of {graph.node(canonical).lemma!r}: star edges carry the union "
                "of the component's original synonym provenance")
        report.unresolved_dangling = len(graph.dangling_references())
    report.conflicts = detect_category_conflicts(graph)
    return report
