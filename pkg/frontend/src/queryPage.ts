// Templated querying: category-grouped template picker, typed arguments with
// autocomplete, and the twin result views (table and force-directed graph)
// rendered from one ResultSet.

import type { KoshaApi } from "./api.js";
import type { Binding, NodePayload, QueryTemplate, ResultSet, TemplateCatalog } from "./types.js";
import { forceLayout } from "./layout.js";
import { MIN_SUGGEST_PREFIX, escapeHtml, graphemeLength } from "./text.js";

export class QueryPage {
  catalog: TemplateCatalog | null = null;
  selectedCategory: string | null = null;
  selectedTemplateId: string | null = null;
  args: string[] = [];
  language: "sa" | "en" = "en";
  result: ResultSet | null = null;
  error: string | null = null;
  argSuggestions: string[] = [];
  argSuggestionsFor: number | null = null;

  constructor(private api: KoshaApi) {}

  async load(): Promise<void> {
    this.catalog = await this.api.templates();
    this.selectedCategory = this.catalog.categories[0] ?? null;
  }

  get template(): QueryTemplate | null {
    if (!this.catalog || this.selectedTemplateId === null) return null;
    return this.catalog.templates.find((t) => t.template_id === this.selectedTemplateId) ?? null;
  }

  templatesInCategory(): QueryTemplate[] {
    if (!this.catalog || this.selectedCategory === null) return [];
    return this.catalog.templates.filter((t) => t.category === this.selectedCategory);
  }

  selectCategory(category: string): void {
    this.selectedCategory = category;
    this.selectedTemplateId = null;
    this.args = [];
  }

  selectTemplate(templateId: string): void {
    this.selectedTemplateId = templateId;
    // argument count always matches template arity
    this.args = new Array(this.template?.input_types.length ?? 0).fill("");
    this.result = null;
    this.error = null;
  }

  setArg(index: number, value: string): void {
    this.args[index] = value;
  }

  /** Entity arguments share the global autocomplete; other slots do not. */
  async updateArgSuggestions(index: number, text: string): Promise<void> {
    const slot = this.template?.input_types[index];
    if (slot !== "Entity" || graphemeLength(text) < MIN_SUGGEST_PREFIX) {
      this.argSuggestions = [];
      this.argSuggestionsFor = null;
      return;
    }
    this.argSuggestions = await this.api.suggest(text);
    this.argSuggestionsFor = index;
  }

  validationError(): string | null {
    if (!this.template) return "pick a template";
    if (this.args.some((a) => !a.trim())) return "fill in every argument";
    return null;
  }

  async run(): Promise<void> {
    const invalid = this.validationError();
    if (invalid) {
      this.error = invalid;
      return;
    }
    this.error = null;
    try {
      this.result = await this.api.query({
        template_id: this.selectedTemplateId ?? undefined,
        args: this.args,
      });
    } catch (err) {
      this.result = null;
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  /** Node ids visible in the table view: node bindings plus the endpoints
   *  named inside edge cells. */
  tableNodeIds(): Set<number> {
    const ids = new Set<number>();
    for (const row of this.result?.rows ?? []) {
      for (const binding of Object.values(row)) {
        if (binding.kind === "node") {
          ids.add(binding.node_id);
        } else {
          ids.add(binding.src);
          ids.add(binding.dst);
        }
      }
    }
    return ids;
  }

  /** Node ids drawn in the graph view (the ResultSet subgraph). */
  graphNodeIds(): Set<number> {
    return new Set((this.result?.subgraph.nodes ?? []).map((n) => n.node_id));
  }

  private cell(binding: Binding, nodesById: Map<number, NodePayload>): string {
    if (binding.kind === "node") {
      return `<span class="node" data-node="${binding.node_id}">${escapeHtml(binding.lemma)}
        <small>[${escapeHtml(binding.entity_type)}]</small></span>`;
    }
    const src = nodesById.get(binding.src)?.lemma ?? String(binding.src);
    const dst = nodesById.get(binding.dst)?.lemma ?? String(binding.dst);
    const detail = binding.detail ? ` (${escapeHtml(binding.detail)})` : "";
    return `<span class="edge" data-node="${binding.src}" data-node-dst="${binding.dst}">
      ${escapeHtml(src)} —${escapeHtml(binding.relation_type)}${detail}→ ${escapeHtml(dst)}</span>`;
  }

  renderTable(): string {
    const result = this.result;
    if (!result) return "";
    if (result.rows.length === 0) {
      return `<p class="empty">no matches</p>`;
    }
    const nodesById = new Map(result.subgraph.nodes.map((n) => [n.node_id, n]));
    const head = result.columns.map((c) => `<th>${escapeHtml(c)}</th>`).join("");
    const body = result.rows
      .map(
        (row) =>
          `<tr>${result.columns
            .map((c) => `<td>${this.cell(row[c], nodesById)}</td>`)
            .join("")}</tr>`,
      )
      .join("");
    return `<table class="results"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`;
  }

  renderGraph(): string {
    const result = this.result;
    if (!result || result.subgraph.nodes.length === 0) return "";
    const points = forceLayout(result.subgraph.nodes, result.subgraph.edges);
    const at = new Map(points.map((p) => [p.id, p]));
    const edges = result.subgraph.edges
      .map((e) => {
        const a = at.get(e.src);
        const b = at.get(e.dst);
        if (!a || !b) return "";
        const label = e.detail ? `${e.relation_type} (${e.detail})` : e.relation_type;
        return `<line x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}" class="edge">
          <title>${escapeHtml(label)}</title></line>`;
      })
      .join("");
    const nodes = result.subgraph.nodes
      .map((n) => {
        const p = at.get(n.node_id);
        if (!p) return "";
        const properties = `${n.lemma} · ${n.entity_type} · lines ${n.line_ids.join(", ")}`;
        return `<g class="node" data-node="${n.node_id}">
          <circle cx="${p.x}" cy="${p.y}" r="14"><title>${escapeHtml(properties)}</title></circle>
          <text x="${p.x}" y="${p.y - 18}">${escapeHtml(n.lemma)}</text></g>`;
      })
      .join("");
    return `<svg viewBox="0 0 640 420" class="graph">${edges}${nodes}</svg>`;
  }

  render(): string {
    if (!this.catalog) {
      return `<section class="query"><p class="empty">loading templates…</p></section>`;
    }
    const categories = this.catalog.categories
      .map(
        (c) =>
          `<button class="category ${c === this.selectedCategory ? "active" : ""}"
                   data-category="${escapeHtml(c)}">${escapeHtml(c)}</button>`,
      )
      .join("");
    const templates = this.templatesInCategory()
      .map((t) => {
        const text = this.language === "sa" ? t.nl_sanskrit : t.nl_english;
        return `<li><button data-template="${escapeHtml(t.template_id)}"
          class="${t.template_id === this.selectedTemplateId ? "active" : ""}">
          ${escapeHtml(text)}</button></li>`;
      })
      .join("");
    const argInputs = (this.template?.input_types ?? [])
      .map(
        (slot, i) =>
          `<input class="arg" data-arg="${i}" data-slot="${slot}"
                  value="${escapeHtml(this.args[i] ?? "")}" placeholder="${slot}"/>`,
      )
      .join("");
    const suggestionList =
      this.argSuggestions.length === 0
        ? ""
        : `<ul class="suggestions" data-for-arg="${this.argSuggestionsFor}">${this.argSuggestions
            .map((s) => `<li>${escapeHtml(s)}</li>`)
            .join("")}</ul>`;
    const banner = this.result?.truncated
      ? `<p class="banner truncated">results truncated at ${this.result.rows.length} rows</p>`
      : "";
    const question = this.result
      ? `<p class="question">${escapeHtml(
          (this.language === "sa"
            ? this.result.metadata.question_sanskrit
            : this.result.metadata.question_english) ?? "",
        )}</p>`
      : "";
    return `
<section class="query">
  <nav class="categories">${categories}</nav>
  <button id="language-toggle">${this.language === "sa" ? "English" : "संस्कृतम्"}</button>
  <ul class="templates">${templates}</ul>
  <form id="query-form">${argInputs}<button id="query-run">run</button></form>
  ${suggestionList}
  ${this.error ? `<p class="error">${escapeHtml(this.error)}</p>` : ""}
  ${question}
  ${banner}
  <div class="views">${this.renderTable()}${this.renderGraph()}</div>
</section>`;
  }
}
