// Wire types mirroring the HTTP API payloads (see ../API.md).

export interface WordAnalysis {
  word: string;
  root: string;
  gender: string;
  case: string;
  number: string;
}

export interface Line {
  line_id: number;
  chapter: string;
  verse_no: number;
  line_in_verse: number;
  text_devanagari: string;
  text_iast: string;
  split_text: string | null;
  analyses: WordAnalysis[] | null;
}

export interface NodePayload {
  kind?: "node";
  node_id: number;
  lemma: string;
  entity_type: string;
  unnamed: boolean;
  line_ids: number[];
  annotators: string[];
  canonical_of: number | null;
}

export interface EdgePayload {
  kind?: "edge";
  edge_id: number;
  src: number;
  dst: number;
  relation_type: string;
  detail: string | null;
  line_ids: number[];
  annotators: string[];
}

export type Binding = ({ kind: "node" } & NodePayload) | ({ kind: "edge" } & EdgePayload);

export interface ResultSet {
  columns: string[];
  rows: Record<string, Binding>[];
  subgraph: { nodes: NodePayload[]; edges: EdgePayload[] };
  truncated: boolean;
  row_count: number;
  metadata: Record<string, string>;
  graph_version?: number;
}

export interface QueryTemplate {
  template_id: string;
  category: string;
  nl_sanskrit: string;
  nl_english: string;
  gql_template: string;
  input_types: ("Entity" | "EntityType" | "Relation")[];
  interpretation?: string;
}

export interface TemplateCatalog {
  categories: string[];
  templates: QueryTemplate[];
  graph_version?: number;
}

export interface AnnotationRecord {
  ann_id: number;
  kind: "entity" | "relation";
  line_id: number;
  lemma?: string;
  unnamed_ordinal?: number;
  entity_type?: string;
  src?: string;
  relation_type?: string;
  dst?: string;
  detail?: string | null;
  annotator: string;
  ts: number;
}

export interface LineAnnotations {
  line_id: number;
  entities: AnnotationRecord[];
  relations: AnnotationRecord[];
  graph_version?: number;
}

export interface CategoryConflict {
  lemma: string;
  claimed_types: { entity_type: string; annotators: string[]; line_ids: number[] }[];
  resolution: string | null;
}

export interface SynonymComponent {
  members: number[];
  canonical: number;
  lemmas: string[];
  canonical_lemma: string;
}

export interface CurationReport {
  components?: SynonymComponent[];
  conflicts?: CategoryConflict[];
  inferred_entities?: { lemma: string; entity_type: string; via_edge: number }[];
  edges_rewired?: number;
  edges_merged?: number;
  self_loops_dropped?: number;
  unresolved_dangling?: number;
  dry_run: boolean;
  notes?: string[];
  pass: string;
  graph_version?: number;
}

export interface GraphStats {
  nodes: number;
  edges: number;
  by_entity_type: Record<string, number>;
  by_relation_type: Record<string, number>;
  corpus: { chapters: number; verses: number; lines: number };
  graph_version: number;
}

export interface ApiErrorPayload {
  type: string;
  message: string;
  [extra: string]: unknown;
}
