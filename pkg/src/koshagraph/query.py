"""Minimal graph-pattern query language: parser, printer and evaluator.

Shape: ``MATCH (a:LABEL)-[r:REL_TYPE]->(b), ... WHERE a.lemma = "..." AND ...
RETURN a, r``.  Labels and relation types are the UPPER_SNAKE ontology
identifiers.  Edge terms come in three directions (``-[]->``, ``<-[]-`` and
the undirected ``-[]-``), accept alternation (``[:A|B]``) and bounded
variable-length hops (``[*0..3]``); matching is homomorphic (two variables
may bind one node), variable-length hops enumerate simple paths only.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import HopRangeError, OntologyMismatchError, QuerySyntaxError, UnboundVariableError
from .graph import EntityNode, GraphStore, RelationEdge

MAX_HOPS = 3
ROW_CAP = 1000

FORWARD = "fwd"
BACKWARD = "back"
UNDIRECTED = "any"

_FIELDS = ("lemma", "entity_type")


# --- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class NodeTerm:
    var: str | None = None
    label: str | None = None


@dataclass(frozen=True)
class EdgeTerm:
    var: str | None = None
    relation_types: tuple[str, ...] = ()
    direction: str = FORWARD
    min_hops: int = 1
    max_hops: int = 1

    @property
    def single_hop(self) -> bool:
        return (self.min_hops, self.max_hops) == (1, 1)


@dataclass(frozen=True)
class PathPattern:
    nodes: tuple[NodeTerm, ...]
    edges: tuple[EdgeTerm, ...]


@dataclass(frozen=True)
class EqualityFilter:
    var: str
    field: str
    value: str


@dataclass(frozen=True)
class QueryAST:
    patterns: tuple[PathPattern, ...]
    filters: tuple[EqualityFilter, ...] = ()
    returns: tuple[str, ...] = ()


# --- lexer ---------------------------------------------------------------------

_TWO_CHAR = {"->": "ARROW", "<-": "LARROW", "..": "DOTDOT"}
_ONE_CHAR = {"(": "LPAREN", ")": "RPAREN", "[": "LBRACKET", "]": "RBRACKET",
             ":": "COLON", ",": "COMMA", ".": "DOT", "=": "EQ", "*": "STAR",
             "|": "PIPE", "-": "DASH"}
_KEYWORDS = {"match", "where", "return", "and"}
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR:
            tokens.append(_Token(_TWO_CHAR[two], two, i))
            i += 2
            continue
        if ch == '"':
            j, out = i + 1, []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n and text[j + 1] in ('"', "\\"):
                    out.append(text[j + 1])
                    j += 2
                else:
                    out.append(text[j])
                    j += 1
            if j >= n:
                raise QuerySyntaxError("unterminated string literal", i)
            tokens.append(_Token("STRING", "".join(out), i))
            i = j + 1
            continue
        m = _INT_RE.match(text, i)
        if m:
            tokens.append(_Token("INT", m.group(), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            kind = "KEYWORD" if word.lower() in _KEYWORDS else "IDENT"
            tokens.append(_Token(kind, word, i))
            i = m.end()
            continue
        if ch in _ONE_CHAR:
            tokens.append(_Token(_ONE_CHAR[ch], ch, i))
            i += 1
            continue
        raise QuerySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("EOF", "", n))
    return tokens


# --- parser ---------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0
        self.node_vars: set[str] = set()
        self.edge_vars: set[str] = set()

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise QuerySyntaxError(f"expected {what}, found {tok.value or 'end of query'!r}", tok.pos)
        return tok

    def keyword(self, word: str) -> None:
        tok = self.next()
        if tok.kind != "KEYWORD" or tok.value.lower() != word:
            raise QuerySyntaxError(f"expected {word.upper()}", tok.pos)

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.value.lower() == word

    def parse(self) -> QueryAST:
        self.keyword("match")
        patterns = [self.pattern()]
        while self.peek().kind == "COMMA":
            self.next()
            patterns.append(self.pattern())
        filters: list[EqualityFilter] = []
        if self.at_keyword("where"):
            self.next()
            filters.append(self.condition())
            while self.at_keyword("and"):
                self.next()
                filters.append(self.condition())
        self.keyword("return")
        returns = [self.expect("IDENT", "a variable name").value]
        while self.peek().kind == "COMMA":
            self.next()
            returns.append(self.expect("IDENT", "a variable name").value)
        tok = self.peek()
        if tok.kind != "EOF":
            raise QuerySyntaxError(f"unexpected trailing input {tok.value!r}", tok.pos)
        ast = QueryAST(patterns=tuple(patterns), filters=tuple(filters), returns=tuple(returns))
        bound = self.node_vars | self.edge_vars
        for f in ast.filters:
            if f.var not in self.node_vars:
                raise UnboundVariableError(
                    f"filter on {f.var!r}, which is not a bound node variable")
        for name in ast.returns:
            if name not in bound:
                raise UnboundVariableError(f"returned variable {name!r} is never bound")
        return ast

    def pattern(self) -> PathPattern:
        nodes = [self.node_term()]
        edges: list[EdgeTerm] = []
        while self.peek().kind in ("DASH", "LARROW"):
            edges.append(self.edge_term())
            nodes.append(self.node_term())
        return PathPattern(nodes=tuple(nodes), edges=tuple(edges))

    def node_term(self) -> NodeTerm:
        self.expect("LPAREN", "'('")
        var = label = None
        if self.peek().kind == "IDENT":
            var = self.next().value
            self.bind(var, self.node_vars, self.edge_vars)
        if self.peek().kind == "COLON":
            self.next()
            label = self.expect("IDENT", "a label").value
        self.expect("RPAREN", "')'")
        return NodeTerm(var=var, label=label)

    def edge_term(self) -> EdgeTerm:
        tok = self.next()
        if tok.kind == "DASH":
            direction = FORWARD
        elif tok.kind == "LARROW":
            direction = BACKWARD
        else:  # pragma: no cover - guarded by caller
            raise QuerySyntaxError("expected an edge", tok.pos)
        self.expect("LBRACKET", "'['")
        var = None
        rel_types: list[str] = []
        min_hops = max_hops = 1
        if self.peek().kind == "IDENT":
            var = self.next().value
        if self.peek().kind == "COLON":
            self.next()
            rel_types.append(self.expect("IDENT", "a relation type").value)
            while self.peek().kind == "PIPE":
                self.next()
                rel_types.append(self.expect("IDENT", "a relation type").value)
        if self.peek().kind == "STAR":
            star = self.next()
            min_hops = int(self.expect("INT", "a hop count").value)
            self.expect("DOTDOT", "'..'")
            max_hops = int(self.expect("INT", "a hop count").value)
            if min_hops > max_hops or max_hops > MAX_HOPS:
                raise HopRangeError(
                    f"hop range [{min_hops},{max_hops}] outside 0 <= min <= max <= {MAX_HOPS}")
            if var is not None and (min_hops, max_hops) != (1, 1):
                raise QuerySyntaxError(
                    "a variable cannot bind a variable-length edge", star.pos)
        self.expect("RBRACKET", "']'")
        if direction == FORWARD:
            closer = self.next()
            if closer.kind == "DASH":
                direction = UNDIRECTED
            elif closer.kind != "ARROW":
                raise QuerySyntaxError("expected '->' or '-' after an edge", closer.pos)
        else:
            self.expect("DASH", "'-'")
        if var is not None:
            self.bind(var, self.edge_vars, self.node_vars)
        return EdgeTerm(var=var, relation_types=tuple(rel_types), direction=direction,
                        min_hops=min_hops, max_hops=max_hops)

    def bind(self, var: str, mine: set[str], other: set[str]) -> None:
        if var in other:
            raise QuerySyntaxError(
                f"variable {var!r} is bound to both a node and an edge", self.peek().pos)
        mine.add(var)

    def condition(self) -> EqualityFilter:
        var = self.expect("IDENT", "a variable name").value
        self.expect("DOT", "'.'")
        fld = self.expect("IDENT", "a field name")
        if fld.value not in _FIELDS:
            raise QuerySyntaxError(f"filters may test only {', '.join(_FIELDS)}", fld.pos)
        self.expect("EQ", "'='")
        value = self.expect("STRING", "a string literal").value
        return EqualityFilter(var=var, field=fld.value, value=value)


def parse(query_text: str) -> QueryAST:
    return _Parser(query_text).parse()


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def print_query(ast: QueryAST) -> str:
    """Render an AST back to query text; parse(print_query(ast)) == ast."""
    parts = []
    for pattern in ast.patterns:
        text = _print_node(pattern.nodes[0])
        for edge, node in zip(pattern.edges, pattern.nodes[1:]):
            body = edge.var or ""
            if edge.relation_types:
                body += ":" + "|".join(edge.relation_types)
            if not edge.single_hop:
                body += f"*{edge.min_hops}..{edge.max_hops}"
            if edge.direction == FORWARD:
                text += f"-[{body}]->"
            elif edge.direction == BACKWARD:
                text += f"<-[{body}]-"
            else:
                text += f"-[{body}]-"
            text += _print_node(node)
        parts.append(text)
    out = "MATCH " + ", ".join(parts)
    if ast.filters:
        out += " WHERE " + " AND ".join(
            f'{f.var}.{f.field} = "{_escape(f.value)}"' for f in ast.filters)
    out += " RETURN " + ", ".join(ast.returns)
    return out


def _print_node(node: NodeTerm) -> str:
    inner = node.var or ""
    if node.label:
        inner += f":{node.label}"
    return f"({inner})"


# --- evaluation -------------------------------------------------------------------

@dataclass
class ResultSet:
    columns: list[str]
    rows: list[dict]
    truncated: bool = False
    metadata: dict = field(default_factory=dict)
    node_index: dict = field(default_factory=dict, repr=False)

    @property
    def subgraph(self) -> dict:
        """Bound nodes plus bound edges with their endpoint nodes."""
        nodes: dict[int, EntityNode] = {}
        edges: dict[int, RelationEdge] = {}
        for row in self.rows:
            for bound in row.values():
                if isinstance(bound, EntityNode):
                    nodes[bound.node_id] = bound
                else:
                    edges[bound.edge_id] = bound
                    for end in (bound.src, bound.dst):
                        if end in self.node_index:
                            nodes[end] = self.node_index[end]
        return {
            "nodes": [nodes[i] for i in sorted(nodes)],
            "edges": [edges[i] for i in sorted(edges)],
        }

    def lemmas(self, column: str) -> set[str]:
        return {row[column].lemma for row in self.rows}

    def to_json(self) -> dict:
        sub = self.subgraph
        return {
            "columns": self.columns,
            "rows": [
                {
                    name: ({"kind": "node", **bound.to_json()}
                           if isinstance(bound, EntityNode)
                           else {"kind": "edge", **bound.to_json()})
                    for name, bound in row.items()
                }
                for row in self.rows
            ],
            "subgraph": {
                "nodes": [n.to_json() for n in sub["nodes"]],
                "edges": [e.to_json() for e in sub["edges"]],
            },
            "truncated": self.truncated,
            "row_count": len(self.rows),
            "metadata": self.metadata,
        }


def evaluate(ast: QueryAST, graph: GraphStore, row_cap: int = ROW_CAP) -> ResultSet:
    onto = graph.ontology
    labels: dict[str, str] = {}
    rel_names: dict[str, str] = {}
    for pattern in ast.patterns:
        for node in pattern.nodes:
            if node.label and node.label not in labels:
                try:
                    labels[node.label] = onto.entity_type(node.label).name
                except Exception as exc:
                    raise OntologyMismatchError(f"unknown label {node.label!r}: {exc}") from exc
        for edge in pattern.edges:
            for rel in edge.relation_types:
                if rel not in rel_names:
                    try:
                        rel_names[rel] = onto.relation_type(rel).name
                    except Exception as exc:
                        raise OntologyMismatchError(f"unknown relation {rel!r}: {exc}") from exc

    filters_by_var: dict[str, list[EqualityFilter]] = {}
    for f in ast.filters:
        filters_by_var.setdefault(f.var, []).append(f)

    def node_passes(term: NodeTerm, node: EntityNode) -> bool:
        if term.label and node.entity_type != labels[term.label]:
            return False
        for f in filters_by_var.get(term.var or "", ()):
            wanted = unicodedata.normalize("NFC", f.value)
            if f.field == "lemma":
                if node.lemma != wanted:
                    return False
            else:
                try:
                    wanted = onto.entity_type(wanted).name
                except Exception:
                    pass
                if node.entity_type != wanted:
                    return False
        return True

    def selectivity(term: NodeTerm) -> int:
        fs = filters_by_var.get(term.var or "", ())
        if any(f.field == "lemma" for f in fs):
            return 0
        if fs:
            return 1
        if term.label:
            return 2
        return 3

    def candidates(term: NodeTerm, binding: dict) -> list[EntityNode]:
        if term.var and term.var in binding:
            node = binding[term.var]
            return [node] if node_passes(term, node) else []
        lemma_filters = [f for f in filters_by_var.get(term.var or "", ()) if f.field == "lemma"]
        if lemma_filters:
            node = graph.node_by_lemma(unicodedata.normalize("NFC", lemma_filters[0].value))
            pool = [node] if node is not None else []
        else:
            pool = graph.nodes()
        return [n for n in pool if node_passes(term, n)]

    def traverse(edge: EdgeTerm, start: EntityNode):
        """Yield (end_node, single_edge_or_None) per the edge term."""
        wanted = {rel_names[r] for r in edge.relation_types} or None
        direction = {FORWARD: "out", BACKWARD: "in", UNDIRECTED: "both"}[edge.direction]
        if edge.single_hop:
            for e, other in graph.neighbors(start.node_id, None, direction):
                if wanted is None or e.relation_type in wanted:
                    yield other, e
            return
        ends: set[int] = set()
        if edge.min_hops == 0:
            ends.add(start.node_id)

        def dfs(at: int, depth: int, on_path: set[int]) -> None:
            if depth == edge.max_hops:
                return
            for e, other in graph.neighbors(at, None, direction):
                if wanted is not None and e.relation_type not in wanted:
                    continue
                if other.node_id in on_path:
                    continue
                if depth + 1 >= edge.min_hops:
                    ends.add(other.node_id)
                dfs(other.node_id, depth + 1, on_path | {other.node_id})

        dfs(start.node_id, 0, {start.node_id})
        for node_id in sorted(ends):
            yield graph.node(node_id), None

    def oriented(pattern: PathPattern) -> PathPattern:
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD, UNDIRECTED: UNDIRECTED}
        if selectivity(pattern.nodes[-1]) < selectivity(pattern.nodes[0]):
            flipped = tuple(
                EdgeTerm(var=e.var, relation_types=e.relation_types,
                         direction=flip[e.direction],
                         min_hops=e.min_hops, max_hops=e.max_hops)
                for e in reversed(pattern.edges)
            )
            return PathPattern(nodes=tuple(reversed(pattern.nodes)), edges=flipped)
        return pattern

    def match_pattern(pattern: PathPattern, base: dict):
        pattern = oriented(pattern)

        def bind(term: NodeTerm, node: EntityNode, binding: dict) -> dict | None:
            if not node_passes(term, node):
                return None
            if term.var is None:
                return binding
            if term.var in binding:
                return binding if binding[term.var] is node else None
            new = dict(binding)
            new[term.var] = node
            return new

        def walk(idx: int, at: EntityNode, binding: dict):
            if idx == len(pattern.edges):
                yield binding
                return
            edge_term = pattern.edges[idx]
            for end, used in traverse(edge_term, at):
                nxt = bind(pattern.nodes[idx + 1], end, binding)
                if nxt is None:
                    continue
                if edge_term.var is not None:
                    if edge_term.var in nxt:
                        if nxt[edge_term.var] is not used:
                            continue
                    else:
                        nxt = dict(nxt)
                        nxt[edge_term.var] = used
                yield from walk(idx + 1, end, nxt)

        for node in candidates(pattern.nodes[0], base):
            first = bind(pattern.nodes[0], node, base)
            if first is not None:
                yield from walk(0, node, first)

    partials: list[dict] = [{}]
    for pattern in ast.patterns:
        partials = [ext for binding in partials for ext in match_pattern(pattern, binding)]

    node_cache = {n.node_id: n for n in graph.nodes()}

    def sort_key(bound) -> tuple:
        if isinstance(bound, EntityNode):
            return ("n", bound.lemma)
        return ("e", bound.relation_type, node_cache[bound.src].lemma,
                node_cache[bound.dst].lemma, bound.detail or "")

    seen: set[tuple] = set()
    rows: list[dict] = []
    for binding in partials:
        row = {name: binding[name] for name in ast.returns}
        identity = tuple(
            ("n", row[name].node_id) if isinstance(row[name], EntityNode) else ("e", row[name].edge_id)
            for name in ast.returns
        )
        if identity in seen:
            continue
        seen.add(identity)
        rows.append(row)
    rows.sort(key=lambda row: tuple(sort_key(row[name]) for name in ast.returns))
    truncated = len(rows) > row_cap
    return ResultSet(columns=list(ast.returns), rows=rows[:row_cap],
                     truncated=truncated, node_index=node_cache)
