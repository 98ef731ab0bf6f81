"""In-memory directed property graph with labeled nodes and typed edges.

One node per lemma (corpus-global identity); edges are deduplicated on
(src, dst, relation_type, detail) with provenance unioned.  Relations whose
endpoints have no node yet are held as dangling references and materialize
as soon as both endpoints exist (annotation order or inference passes decide
when).  All mutations serialize through one writer lock; every committed
mutation bumps the snapshot version.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NoSuchNodeError, OntologyMismatchError, ParseError, SelfLoopError
from .ontology import Ontology

UNNAMED_RE = re.compile(r"^X([1-9][0-9]*)-([0-9]+)$")


def unnamed_lemma(ordinal: int, line_id: int) -> str:
    return f"X{ordinal}-{line_id}"


@dataclass
class EntityNode:
    node_id: int
    lemma: str
    entity_type: str
    unnamed: bool
    line_ids: set[int] = field(default_factory=set)
    annotators: set[str] = field(default_factory=set)
    canonical_of: int | None = None

    def to_json(self) -> dict:
        return {
            "node_id": self.node_id,
            "lemma": self.lemma,
            "entity_type": self.entity_type,
            "unnamed": self.unnamed,
            "line_ids": sorted(self.line_ids),
            "annotators": sorted(self.annotators),
            "canonical_of": self.canonical_of,
        }


@dataclass
class RelationEdge:
    edge_id: int
    src: int
    dst: int
    relation_type: str
    detail: str | None
    line_ids: set[int] = field(default_factory=set)
    annotators: set[str] = field(default_factory=set)

    def key(self) -> tuple[int, int, str, str | None]:
        return (self.src, self.dst, self.relation_type, self.detail)

    def to_json(self) -> dict:
        return {
            "edge_id": self.edge_id,
            "src": self.src,
            "dst": self.dst,
            "relation_type": self.relation_type,
            "detail": self.detail,
            "line_ids": sorted(self.line_ids),
            "annotators": sorted(self.annotators),
        }


@dataclass
class DanglingRelation:
    """A relation whose src or dst lemma has no node yet.

    Keeps the edge id it reserved so later materialization is replay-stable.
    """

    edge_id: int
    src_lemma: str
    relation_type: str
    dst_lemma: str
    detail: str | None
    line_ids: set[int] = field(default_factory=set)
    annotators: set[str] = field(default_factory=set)

    def to_json(self) -> dict:
        return {
            "edge_id": self.edge_id,
            "src_lemma": self.src_lemma,
            "relation_type": self.relation_type,
            "dst_lemma": self.dst_lemma,
            "detail": self.detail,
            "line_ids": sorted(self.line_ids),
            "annotators": sorted(self.annotators),
        }


@dataclass(frozen=True)
class GraphStats:
    nodes: int
    edges: int
    by_entity_type: dict[str, int]
    by_relation_type: dict[str, int]

    def to_json(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "by_entity_type": dict(sorted(self.by_entity_type.items())),
            "by_relation_type": dict(sorted(self.by_relation_type.items())),
        }


class GraphStore:
    def __init__(self, ontology: Ontology):
        self.ontology = ontology
        self.version = 0
        self._nodes: dict[int, EntityNode] = {}
        self._edges: dict[int, RelationEdge] = {}
        self._by_lemma: dict[str, int] = {}
        self._edge_index: dict[tuple, int] = {}
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}
        self._dangling: list[DanglingRelation] = []
        self._next_node = 1
        self._next_edge = 1
        # Category claims per lemma: lemma -> type -> (annotators, line_ids).
        self._claims: dict[str, dict[str, tuple[set[str], set[int]]]] = {}
        self._resolutions: dict[str, str] = {}
        self._lock = threading.RLock()

    # -- locking ---------------------------------------------------------

    def write_lock(self):
        """Exclusive writer; curation passes hold it for their whole run."""
        return self._lock

    def _bump(self) -> None:
        self.version += 1

    # -- lookups ---------------------------------------------------------

    def node(self, node_id: int) -> EntityNode:
        n = self._nodes.get(node_id)
        if n is None:
            raise NoSuchNodeError(f"no node with id {node_id}")
        return n

    def edge(self, edge_id: int) -> RelationEdge:
        e = self._edges.get(edge_id)
        if e is None:
            raise NoSuchNodeError(f"no edge with id {edge_id}")
        return e

    def node_by_lemma(self, lemma: str) -> EntityNode | None:
        node_id = self._by_lemma.get(lemma)
        return self._nodes[node_id] if node_id is not None else None

    def nodes(self) -> list[EntityNode]:
        return [self._nodes[i] for i in sorted(self._nodes)]

    def edges(self) -> list[RelationEdge]:
        return [self._edges[i] for i in sorted(self._edges)]

    def dangling_references(self) -> list[DanglingRelation]:
        return list(self._dangling)

    # -- mutation --------------------------------------------------------

    def upsert_node(self, lemma: str, entity_type: str, line_id: int | None,
                    annotator: str | None) -> int:
        """Create or extend the node for ``lemma``.

        A type disagreement is not an error: both claims are recorded in the
        conflict side-table for curation, and the node keeps its first type
        until a curator resolves it.
        """
        et = self.ontology.entity_type(entity_type)
        if not lemma or not lemma.strip():
            raise ValueError("lemma must be non-empty")
        with self._lock:
            self._claim(lemma, et.name, annotator, line_id)
            node_id = self._by_lemma.get(lemma)
            if node_id is None:
                node_id = self._next_node
                self._next_node += 1
                self._nodes[node_id] = EntityNode(
                    node_id=node_id,
                    lemma=lemma,
                    entity_type=et.name,
                    unnamed=bool(UNNAMED_RE.match(lemma)),
                )
                self._by_lemma[lemma] = node_id
                self._out[node_id] = []
                self._in[node_id] = []
                self._materialize_dangling(lemma)
            node = self._nodes[node_id]
            if line_id is not None:
                node.line_ids.add(line_id)
            if annotator is not None:
                node.annotators.add(annotator)
            self._bump()
            return node_id

    def _claim(self, lemma: str, entity_type: str, annotator: str | None, line_id: int | None) -> None:
        by_type = self._claims.setdefault(lemma, {})
        annotators, line_ids = by_type.setdefault(entity_type, (set(), set()))
        if annotator is not None:
            annotators.add(annotator)
        if line_id is not None:
            line_ids.add(line_id)

    def upsert_edge(self, src_lemma: str, relation_type: str, dst_lemma: str,
                    detail: str | None, line_id: int | None, annotator: str | None) -> int:
        """Create or provenance-merge the edge; dangling endpoints are recorded.

        Returns the edge id (reserved immediately even when the relation
        cannot materialize yet).
        """
        rt = self.ontology.relation_type(relation_type)
        if src_lemma == dst_lemma:
            raise SelfLoopError(f"relation {rt.name!r} cannot relate {src_lemma!r} to itself")
        with self._lock:
            src = self._by_lemma.get(src_lemma)
            dst = self._by_lemma.get(dst_lemma)
            if src is None or dst is None:
                edge_id = self._pending_edge(src_lemma, rt.name, dst_lemma, detail, line_id, annotator)
            else:
                edge_id = self._insert_edge(src, dst, rt.name, detail, line_id, annotator)
            self._bump()
            return edge_id

    def _pending_edge(self, src_lemma: str, relation_type: str, dst_lemma: str,
                      detail: str | None, line_id: int | None, annotator: str | None) -> int:
        for ref in self._dangling:
            if (ref.src_lemma, ref.relation_type, ref.dst_lemma, ref.detail) == (
                    src_lemma, relation_type, dst_lemma, detail):
                if line_id is not None:
                    ref.line_ids.add(line_id)
                if annotator is not None:
                    ref.annotators.add(annotator)
                return ref.edge_id
        edge_id = self._next_edge
        self._next_edge += 1
        self._dangling.append(DanglingRelation(
            edge_id=edge_id, src_lemma=src_lemma, relation_type=relation_type,
            dst_lemma=dst_lemma, detail=detail,
            line_ids={line_id} if line_id is not None else set(),
            annotators={annotator} if annotator is not None else set(),
        ))
        return edge_id

    def _insert_edge(self, src: int, dst: int, relation_type: str, detail: str | None,
                     line_id: int | None, annotator: str | None,
                     edge_id: int | None = None,
                     line_ids: set[int] | None = None,
                     annotators: set[str] | None = None) -> int:
        key = (src, dst, relation_type, detail)
        existing = self._edge_index.get(key)
        if existing is not None:
            edge = self._edges[existing]
        else:
            if edge_id is None:
                edge_id = self._next_edge
                self._next_edge += 1
            edge = RelationEdge(edge_id=edge_id, src=src, dst=dst,
                                relation_type=relation_type, detail=detail)
            self._edges[edge.edge_id] = edge
            self._edge_index[key] = edge.edge_id
            self._out[src].append(edge.edge_id)
            self._in[dst].append(edge.edge_id)
        if line_id is not None:
            edge.line_ids.add(line_id)
        if annotator is not None:
            edge.annotators.add(annotator)
        if line_ids:
            edge.line_ids |= line_ids
        if annotators:
            edge.annotators |= annotators
        return edge.edge_id

    def _materialize_dangling(self, lemma: str) -> None:
        remaining: list[DanglingRelation] = []
        for ref in self._dangling:
            if lemma in (ref.src_lemma, ref.dst_lemma):
                src = self._by_lemma.get(ref.src_lemma)
                dst = self._by_lemma.get(ref.dst_lemma)
                if src is not None and dst is not None:
                    self._insert_edge(src, dst, ref.relation_type, ref.detail, None, None,
                                      edge_id=ref.edge_id, line_ids=ref.line_ids,
                                      annotators=ref.annotators)
                    continue
            remaining.append(ref)
        self._dangling = remaining

    def find_edge(self, src: int, dst: int, relation_type: str,
                  detail: str | None) -> RelationEdge | None:
        edge_id = self._edge_index.get((src, dst, relation_type, detail))
        return self._edges.get(edge_id) if edge_id is not None else None

    def attach_edge(self, src: int, dst: int, relation_type: str, detail: str | None,
                    *, edge_id: int | None = None, line_ids: set[int] | None = None,
                    annotators: set[str] | None = None) -> tuple[int, bool]:
        """Insert or provenance-merge a fully specified edge.

        Returns (edge_id, merged); used by curation rewires where endpoints
        are node ids rather than lemmas.
        """
        if src == dst:
            raise SelfLoopError("attach_edge cannot create a self-loop")
        with self._lock:
            merged = (src, dst, relation_type, detail) in self._edge_index
            eid = self._insert_edge(src, dst, relation_type, detail, None, None,
                                    edge_id=edge_id, line_ids=line_ids, annotators=annotators)
            self._bump()
            return eid, merged

    def remove_node(self, node_id: int) -> None:
        """Remove a node; incident edges demote to dangling references."""
        with self._lock:
            node = self.node(node_id)
            for edge_id in list(self._out[node_id]) + list(self._in[node_id]):
                edge = self._edges.get(edge_id)
                if edge is not None:
                    self._demote_edge(edge)
            del self._nodes[node_id]
            del self._by_lemma[node.lemma]
            del self._out[node_id]
            del self._in[node_id]
            self._bump()

    def _demote_edge(self, edge: RelationEdge) -> None:
        self._remove_edge_entry(edge)
        self._dangling.append(DanglingRelation(
            edge_id=edge.edge_id,
            src_lemma=self._nodes[edge.src].lemma,
            relation_type=edge.relation_type,
            dst_lemma=self._nodes[edge.dst].lemma,
            detail=edge.detail,
            line_ids=set(edge.line_ids),
            annotators=set(edge.annotators),
        ))

    def _remove_edge_entry(self, edge: RelationEdge) -> None:
        del self._edges[edge.edge_id]
        del self._edge_index[edge.key()]
        self._out[edge.src].remove(edge.edge_id)
        self._in[edge.dst].remove(edge.edge_id)

    def remove_edge(self, edge_id: int) -> None:
        with self._lock:
            edge = self._edges.get(edge_id)
            if edge is not None:
                self._remove_edge_entry(edge)
            else:
                self._dangling = [d for d in self._dangling if d.edge_id != edge_id]
            self._bump()

    def set_node_type(self, node_id: int, entity_type: str) -> None:
        et = self.ontology.entity_type(entity_type)
        with self._lock:
            self.node(node_id).entity_type = et.name
            self._bump()

    def set_canonical_of(self, node_id: int, canonical: int | None) -> None:
        with self._lock:
            self.node(node_id).canonical_of = canonical
            self._bump()

    # -- category conflicts ----------------------------------------------

    def category_claims(self) -> dict[str, dict[str, tuple[set[str], set[int]]]]:
        return self._claims

    def conflict_resolutions(self) -> dict[str, str]:
        return self._resolutions

    def record_resolution(self, lemma: str, entity_type: str) -> None:
        with self._lock:
            self._resolutions[lemma] = entity_type
            self._bump()

    # -- reads -------------------------------------------------------------

    def neighbors(self, node_id: int, relation_type: str | None = None,
                  direction: str = "both") -> list[tuple[RelationEdge, EntityNode]]:
        if direction not in ("in", "out", "both"):
            raise ValueError(f"direction must be in/out/both, got {direction!r}")
        node = self.node(node_id)
        wanted = self.ontology.relation_type(relation_type).name if relation_type else None
        results: list[tuple[RelationEdge, EntityNode]] = []
        if direction in ("out", "both"):
            for edge_id in self._out[node.node_id]:
                edge = self._edges[edge_id]
                if wanted is None or edge.relation_type == wanted:
                    results.append((edge, self._nodes[edge.dst]))
        if direction in ("in", "both"):
            for edge_id in self._in[node.node_id]:
                edge = self._edges[edge_id]
                if wanted is None or edge.relation_type == wanted:
                    results.append((edge, self._nodes[edge.src]))
        results.sort(key=lambda pair: (pair[0].relation_type, pair[1].lemma))
        return results

    def degree(self, node_id: int) -> int:
        node = self.node(node_id)
        return len(self._out[node.node_id]) + len(self._in[node.node_id])

    def stats(self) -> GraphStats:
        by_et: dict[str, int] = {}
        for n in self._nodes.values():
            by_et[n.entity_type] = by_et.get(n.entity_type, 0) + 1
        by_rt: dict[str, int] = {}
        for e in self._edges.values():
            by_rt[e.relation_type] = by_rt.get(e.relation_type, 0) + 1
        return GraphStats(nodes=len(self._nodes), edges=len(self._edges),
                          by_entity_type=by_et, by_relation_type=by_rt)

    # -- persistence -------------------------------------------------------

    def export_graph(self) -> dict:
        return {
            "nodes": [n.to_json() for n in self.nodes()],
            "edges": [e.to_json() for e in self.edges()],
            "dangling": [d.to_json() for d in self._dangling],
        }

    def import_graph(self, doc, keep_claims: bool = False) -> GraphStats:
        """Replace the store contents with the document's graph.

        ``keep_claims`` preserves the category-claims side table (used when an
        annotation replay already rebuilt it; the graph document itself only
        carries each node's current type).
        """
        if isinstance(doc, (str, Path)):
            try:
                doc = json.loads(Path(doc).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ParseError(f"cannot read graph document: {exc}") from exc
        if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
            raise ParseError("graph document must be an object with nodes and edges")
        nodes: dict[int, EntityNode] = {}
        by_lemma: dict[str, int] = {}
        try:
            for obj in doc["nodes"]:
                try:
                    et = self.ontology.entity_type(obj["entity_type"])
                except Exception as exc:
                    raise OntologyMismatchError(str(exc)) from exc
                node = EntityNode(
                    node_id=int(obj["node_id"]), lemma=obj["lemma"], entity_type=et.name,
                    unnamed=bool(obj.get("unnamed", False)),
                    line_ids=set(obj.get("line_ids", ())),
                    annotators=set(obj.get("annotators", ())),
                    canonical_of=obj.get("canonical_of"),
                )
                if node.lemma in by_lemma or node.node_id in nodes:
                    raise ParseError(f"duplicate node {node.lemma!r} in graph document")
                nodes[node.node_id] = node
                by_lemma[node.lemma] = node.node_id
            edges: dict[int, RelationEdge] = {}
            index: dict[tuple, int] = {}
            for obj in doc["edges"]:
                try:
                    rt = self.ontology.relation_type(obj["relation_type"])
                except Exception as exc:
                    raise OntologyMismatchError(str(exc)) from exc
                edge = RelationEdge(
                    edge_id=int(obj["edge_id"]), src=int(obj["src"]), dst=int(obj["dst"]),
                    relation_type=rt.name, detail=obj.get("detail"),
                    line_ids=set(obj.get("line_ids", ())),
                    annotators=set(obj.get("annotators", ())),
                )
                if edge.src not in nodes or edge.dst not in nodes:
                    raise ParseError(f"edge {edge.edge_id} references a missing node")
                if edge.key() in index or edge.edge_id in edges:
                    raise ParseError(f"duplicate edge {edge.edge_id} in graph document")
                edges[edge.edge_id] = edge
                index[edge.key()] = edge.edge_id
            dangling = [
                DanglingRelation(
                    edge_id=int(obj["edge_id"]), src_lemma=obj["src_lemma"],
                    relation_type=self.ontology.relation_type(obj["relation_type"]).name,
                    dst_lemma=obj["dst_lemma"], detail=obj.get("detail"),
                    line_ids=set(obj.get("line_ids", ())),
                    annotators=set(obj.get("annotators", ())),
                )
                for obj in doc.get("dangling", ())
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed graph document: {exc}") from exc
        with self._lock:
            self._nodes = nodes
            self._by_lemma = by_lemma
            self._edges = edges
            self._edge_index = index
            self._out = {i: [] for i in nodes}
            self._in = {i: [] for i in nodes}
            for edge in edges.values():
                self._out[edge.src].append(edge.edge_id)
                self._in[edge.dst].append(edge.edge_id)
            self._dangling = dangling
            self._next_node = max(nodes, default=0) + 1
            self._next_edge = max(
                [*edges, *(d.edge_id for d in dangling)], default=0) + 1
            if not keep_claims:
                self._claims = {}
                for node in nodes.values():
                    self._claim(node.lemma, node.entity_type,
                                annotator=None, line_id=None)
            self._bump()
        return self.stats()
