"""Independent oracles the tests check the package against.

Deliberately naive: exhaustive assignment enumeration for query matching and
undirected component traversal for synonym lookups.  Nothing here shares code
with the package's evaluator or curation rewrite.
"""

from __future__ import annotations

from itertools import product

SYNONYM = "is Synonym of"


# --- synonym-component oracle ---------------------------------------------------

def synonym_component(graph, node_id: int) -> set[int]:
    """Undirected reachability over synonym edges; includes the start node."""
    members = {node_id}
    frontier = [node_id]
    while frontier:
        current = frontier.pop()
        for edge in graph.edges():
            if edge.relation_type != SYNONYM:
                continue
            for a, b in ((edge.src, edge.dst), (edge.dst, edge.src)):
                if a == current and b not in members:
                    members.add(b)
                    frontier.append(b)
    return members


def component_answer(graph, lemma: str, relation: str = "is Property of") -> set[str]:
    """Lemmas related by ``relation`` to any synonym of ``lemma`` (full traversal)."""
    node = graph.node_by_lemma(lemma)
    if node is None:
        return set()
    members = synonym_component(graph, node.node_id)
    out = set()
    for edge in graph.edges():
        if edge.relation_type == relation and edge.dst in members:
            out.add(graph.node(edge.src).lemma)
    return out


def canonical_map(graph) -> dict[int, str]:
    """Independent re-derivation of each node's canonical lemma (pre-rewrite).

    Highest degree wins; named members beat unnamed ones; ties break on lemma
    then node id - the documented selection rule, recomputed from scratch.
    """
    degree = {n.node_id: 0 for n in graph.nodes()}
    for edge in graph.edges():
        degree[edge.src] += 1
        degree[edge.dst] += 1
    seen: set[int] = set()
    out: dict[int, str] = {}
    for node in graph.nodes():
        if node.node_id in seen:
            continue
        members = synonym_component(graph, node.node_id)
        seen |= members
        named = [m for m in members if not graph.node(m).unnamed]
        pool = named or sorted(members)
        best = min(pool, key=lambda m: (-degree[m], graph.node(m).lemma, m))
        for m in members:
            out[m] = graph.node(best).lemma
    return out


def canonical_component_answer(graph, lemma: str, relation: str = "is Property of") -> set[str]:
    """Like component_answer, expressed in post-rewrite identities.

    Sources are mapped to their own component's canonical lemma; sources
    inside the queried component are excluded, because the rewrite drops
    edges that would become self-loops.
    """
    node = graph.node_by_lemma(lemma)
    if node is None:
        return set()
    members = synonym_component(graph, node.node_id)
    canon = canonical_map(graph)
    out = set()
    for edge in graph.edges():
        if edge.relation_type == relation and edge.dst in members and edge.src not in members:
            out.add(canon[edge.src])
    return out


# --- brute-force query matcher ---------------------------------------------------

def _simple_path_exists(graph, start: int, end: int, types: set[str] | None,
                        direction: str, min_hops: int, max_hops: int) -> bool:
    if min_hops == 0 and start == end:
        return True

    def expand(at: int):
        for edge in graph.edges():
            if types is not None and edge.relation_type not in types:
                continue
            if direction in ("fwd", "any") and edge.src == at:
                yield edge.dst
            if direction in ("back", "any") and edge.dst == at:
                yield edge.src

    found = False

    def dfs(at: int, depth: int, seen: set[int]):
        nonlocal found
        if found or depth == max_hops:
            return
        for nxt in expand(at):
            if nxt in seen:
                continue
            if nxt == end and depth + 1 >= min_hops:
                found = True
                return
            dfs(nxt, depth + 1, seen | {nxt})

    dfs(start, 0, {start})
    return found


def _edge_matches(graph, edge_term, left: int, right: int):
    """All concrete edges satisfying a single-hop term, or a [None] marker."""
    types = {graph.ontology.relation_type(r).name for r in edge_term.relation_types} or None
    if (edge_term.min_hops, edge_term.max_hops) == (1, 1):
        hits = []
        for e in graph.edges():
            if types is not None and e.relation_type not in types:
                continue
            if edge_term.direction in ("fwd", "any") and (e.src, e.dst) == (left, right):
                hits.append(e)
            elif edge_term.direction in ("back", "any") and (e.src, e.dst) == (right, left):
                hits.append(e)
        return hits
    if _simple_path_exists(graph, left, right, types, edge_term.direction,
                           edge_term.min_hops, edge_term.max_hops):
        return [None]
    return []


def _node_ok(graph, term, node, labels: dict, filters: dict) -> bool:
    if term.label is not None and node.entity_type != labels[term.label]:
        return False
    for f in filters.get(term.var, ()):
        if f.field == "lemma":
            if node.lemma != f.value:
                return False
        else:
            wanted = f.value
            try:
                wanted = graph.ontology.entity_type(wanted).name
            except Exception:
                pass
            if node.entity_type != wanted:
                return False
    return True


def brute_force_rows(ast, graph, row_cap: int = 1000):
    """Row identities ((kind, id), ...) per returned column: deduped, sorted, capped."""
    labels = {}
    for pattern in ast.patterns:
        for term in pattern.nodes:
            if term.label is not None:
                labels[term.label] = graph.ontology.entity_type(term.label).name
    filters: dict = {}
    for f in ast.filters:
        filters.setdefault(f.var, []).append(f)

    all_nodes = graph.nodes()

    def pattern_bindings(pattern):
        out = []
        slots = len(pattern.nodes)
        for assignment in product(all_nodes, repeat=slots):
            binding = {}
            ok = True
            for term, node in zip(pattern.nodes, assignment):
                if not _node_ok(graph, term, node, labels, filters):
                    ok = False
                    break
                if term.var is not None:
                    if term.var in binding and binding[term.var] is not node:
                        ok = False
                        break
                    binding[term.var] = node
            if not ok:
                continue
            edge_choices = []
            for i, edge_term in enumerate(pattern.edges):
                hits = _edge_matches(graph, edge_term,
                                     assignment[i].node_id, assignment[i + 1].node_id)
                if not hits:
                    ok = False
                    break
                if edge_term.var is not None:
                    edge_choices.append([(edge_term.var, e) for e in hits])
            if not ok:
                continue
            if edge_choices:
                for combo in product(*edge_choices):
                    full = dict(binding)
                    consistent = True
                    for var, e in combo:
                        if var in full and full[var] is not e:
                            consistent = False
                            break
                        full[var] = e
                    if consistent:
                        out.append(full)
            else:
                out.append(binding)
        return out

    joined = [{}]
    for pattern in ast.patterns:
        bindings = pattern_bindings(pattern)
        merged = []
        for base in joined:
            for extra in bindings:
                candidate = dict(base)
                ok = True
                for var, val in extra.items():
                    if var in candidate and candidate[var] is not val:
                        ok = False
                        break
                    candidate[var] = val
                if ok:
                    merged.append(candidate)
        joined = merged

    node_lemma = {n.node_id: n.lemma for n in all_nodes}

    def identity(binding):
        out = []
        for name in ast.returns:
            bound = binding[name]
            if hasattr(bound, "node_id"):
                out.append(("n", bound.node_id))
            else:
                out.append(("e", bound.edge_id))
        return tuple(out)

    def sort_key(binding):
        key = []
        for name in ast.returns:
            bound = binding[name]
            if hasattr(bound, "node_id"):
                key.append(("n", bound.lemma))
            else:
                key.append(("e", bound.relation_type, node_lemma[bound.src],
                            node_lemma[bound.dst], bound.detail or ""))
        return tuple(key)

    unique = {}
    for binding in joined:
        unique.setdefault(identity(binding), binding)
    ordered = sorted(unique.values(), key=sort_key)
    return [identity(b) for b in ordered][:row_cap]
