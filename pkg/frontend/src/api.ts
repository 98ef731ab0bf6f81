// Thin typed client over the HTTP API. The UI performs no graph logic of its
// own: every displayed fact flows through this module.

import type {
  CurationReport,
  GraphStats,
  Line,
  LineAnnotations,
  CategoryConflict,
  ResultSet,
  TemplateCatalog,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public type: string,
    message: string,
  ) {
    super(message);
  }
}

export interface KoshaApi {
  corpus(chapter: string, fromVerse: number, toVerse: number): Promise<{ lines: Line[] }>;
  annotations(lineId: number): Promise<LineAnnotations>;
  annotateEntity(body: {
    line_id: number;
    entity_type: string;
    lemma?: string;
    unnamed_ordinal?: number;
  }): Promise<{ node_id: number; lemma: string }>;
  annotateRelation(body: {
    line_id: number;
    src: string;
    relation_type: string;
    dst: string;
    detail?: string;
  }): Promise<{ edge_id: number; materialized: boolean }>;
  deleteAnnotation(annId: number): Promise<void>;
  suggest(q: string): Promise<string[]>;
  templates(): Promise<TemplateCatalog>;
  query(body: { template_id?: string; args?: string[]; raw?: string }): Promise<ResultSet>;
  curate(pass: string, dryRun: boolean): Promise<{ job_id: string }>;
  curateStatus(jobId: string): Promise<{ status: string; report?: CurationReport; error?: string }>;
  conflicts(): Promise<{ conflicts: CategoryConflict[] }>;
  resolveConflict(lemma: string, entityType: string): Promise<void>;
  stats(): Promise<GraphStats>;
  graphVersion(): number;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class HttpApi implements KoshaApi {
  private version = 0;

  constructor(
    private baseUrl: string,
    private token: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  graphVersion(): number {
    return this.version;
  }

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: {
        "X-Auth-Token": this.token,
        ...(body === undefined ? {} : { "Content-Type": "application/json" }),
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const header = response.headers.get("X-Graph-Version");
    if (header !== null) {
      this.version = Number(header);
    }
    const text = await response.text();
    const payload = text ? JSON.parse(text) : {};
    if (!response.ok) {
      const err = payload?.error ?? { type: "http_error", message: response.statusText };
      throw new ApiError(response.status, err.type, err.message);
    }
    if (typeof payload?.graph_version === "number") {
      this.version = payload.graph_version;
    }
    return payload as T;
  }

  corpus(chapter: string, fromVerse: number, toVerse: number): Promise<{ lines: Line[] }> {
    return this.call("GET", `/api/corpus/${encodeURIComponent(chapter)}?from=${fromVerse}&to=${toVerse}`);
  }

  annotations(lineId: number): Promise<LineAnnotations> {
    return this.call("GET", `/api/annotate?line_id=${lineId}`);
  }

  annotateEntity(body: {
    line_id: number;
    entity_type: string;
    lemma?: string;
    unnamed_ordinal?: number;
  }): Promise<{ node_id: number; lemma: string }> {
    return this.call("POST", "/api/annotate/entity", body);
  }

  annotateRelation(body: {
    line_id: number;
    src: string;
    relation_type: string;
    dst: string;
    detail?: string;
  }): Promise<{ edge_id: number; materialized: boolean }> {
    return this.call("POST", "/api/annotate/relation", body);
  }

  async deleteAnnotation(annId: number): Promise<void> {
    await this.call("DELETE", `/api/annotate/${annId}`);
  }

  async suggest(q: string): Promise<string[]> {
    const payload = await this.call<{ suggestions: string[] }>(
      "GET",
      `/api/suggest?q=${encodeURIComponent(q)}`,
    );
    return payload.suggestions;
  }

  templates(): Promise<TemplateCatalog> {
    return this.call("GET", "/api/templates");
  }

  query(body: { template_id?: string; args?: string[]; raw?: string }): Promise<ResultSet> {
    return this.call("POST", "/api/query", body);
  }

  curate(pass: string, dryRun: boolean): Promise<{ job_id: string }> {
    return this.call("POST", "/api/curate", { pass, dry_run: dryRun });
  }

  curateStatus(jobId: string): Promise<{ status: string; report?: CurationReport; error?: string }> {
    return this.call("GET", `/api/curate/${jobId}`);
  }

  conflicts(): Promise<{ conflicts: CategoryConflict[] }> {
    return this.call("GET", "/api/conflicts");
  }

  async resolveConflict(lemma: string, entityType: string): Promise<void> {
    await this.call("POST", `/api/conflicts/${encodeURIComponent(lemma)}/resolve`, {
      entity_type: entityType,
    });
  }

  stats(): Promise<GraphStats> {
    return this.call("GET", "/api/graph/stats");
  }
}
