// Line-by-line annotation view: corpus text with linguistic rows, entity and
// relation forms, shared autocomplete, and the annotation list with delete.

import type { KoshaApi } from "./api.js";
import type { AnnotationRecord, Line } from "./types.js";
import { MIN_SUGGEST_PREFIX, escapeHtml, graphemeLength } from "./text.js";

export type SuggestField = "entityLemma" | "relationSrc" | "relationDst";

export interface EntityForm {
  lemma: string;
  entityType: string;
  unnamed: boolean;
  unnamedOrdinal: number;
}

export interface RelationForm {
  src: string;
  relationType: string;
  dst: string;
  detail: string;
}

export class AnnotationPage {
  lines: Line[] = [];
  current = 0;
  entities: AnnotationRecord[] = [];
  relations: AnnotationRecord[] = [];
  entityForm: EntityForm = { lemma: "", entityType: "Substance", unnamed: false, unnamedOrdinal: 1 };
  relationForm: RelationForm = { src: "", relationType: "is Property of", dst: "", detail: "" };
  suggestions: string[] = [];
  suggestionsFor: SuggestField | null = null;
  inferenceWarning: string | null = null;
  error: string | null = null;

  constructor(private api: KoshaApi) {}

  get line(): Line | null {
    return this.lines[this.current] ?? null;
  }

  async load(chapter: string, fromVerse: number, toVerse: number): Promise<void> {
    const payload = await this.api.corpus(chapter, fromVerse, toVerse);
    this.lines = payload.lines;
    this.current = 0;
    await this.refreshAnnotations();
  }

  async goto(offset: number): Promise<void> {
    const next = this.current + offset;
    if (next >= 0 && next < this.lines.length) {
      this.current = next;
      await this.refreshAnnotations();
    }
  }

  async refreshAnnotations(): Promise<void> {
    if (!this.line) {
      this.entities = [];
      this.relations = [];
      return;
    }
    const payload = await this.api.annotations(this.line.line_id);
    this.entities = payload.entities;
    this.relations = payload.relations;
  }

  /** The dropdown only populates once the prefix reaches three
   *  user-perceived characters; shorter input clears it without an API call. */
  async updateSuggestions(field: SuggestField, text: string): Promise<void> {
    if (graphemeLength(text) < MIN_SUGGEST_PREFIX) {
      this.suggestions = [];
      this.suggestionsFor = null;
      return;
    }
    this.suggestions = await this.api.suggest(text);
    this.suggestionsFor = field;
  }

  async submitEntity(): Promise<void> {
    if (!this.line) return;
    this.error = null;
    try {
      await this.api.annotateEntity({
        line_id: this.line.line_id,
        entity_type: this.entityForm.entityType,
        ...(this.entityForm.unnamed
          ? { unnamed_ordinal: this.entityForm.unnamedOrdinal }
          : { lemma: this.entityForm.lemma }),
      });
      this.entityForm.lemma = "";
      await this.refreshAnnotations();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  async submitRelation(): Promise<void> {
    if (!this.line) return;
    this.error = null;
    this.inferenceWarning = null;
    try {
      const result = await this.api.annotateRelation({
        line_id: this.line.line_id,
        src: this.relationForm.src,
        relation_type: this.relationForm.relationType,
        dst: this.relationForm.dst,
        ...(this.relationForm.detail ? { detail: this.relationForm.detail } : {}),
      });
      if (!result.materialized) {
        // An endpoint is not an entity yet; the relation waits for it (or
        // for the inference pass) instead of failing.
        this.inferenceWarning =
          "relation recorded; an endpoint has no entity yet and will be created by inference";
      }
      await this.refreshAnnotations();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  async deleteAnnotation(annId: number): Promise<void> {
    this.error = null;
    try {
      await this.api.deleteAnnotation(annId);
      await this.refreshAnnotations();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  entityChips(): string[] {
    return this.entities.map((a) => a.lemma ?? `X${a.unnamed_ordinal}-${a.line_id}`);
  }

  render(): string {
    const line = this.line;
    if (!line) {
      return `<section class="annotation"><p class="empty">no lines loaded</p></section>`;
    }
    const analyses = line.analyses ?? [];
    const analysisRows =
      analyses.length === 0
        ? ""
        : ["word", "root", "gender", "case", "number"]
            .map(
              (field) =>
                `<tr><th>${field.toUpperCase()}</th>${analyses
                  .map((a) => `<td>${escapeHtml(String(a[field as keyof typeof a]))}</td>`)
                  .join("")}</tr>`,
            )
            .join("");
    const chips = this.entityChips()
      .map((lemma) => `<span class="chip">${escapeHtml(lemma)}</span>`)
      .join("");
    const relationItems = this.relations
      .map(
        (r) =>
          `<li data-ann="${r.ann_id}">${escapeHtml(r.src ?? "")} — ${escapeHtml(
            r.relation_type ?? "",
          )}${r.detail ? ` (${escapeHtml(r.detail)})` : ""} → ${escapeHtml(r.dst ?? "")}` +
          `<button class="delete" data-ann-id="${r.ann_id}">×</button></li>`,
      )
      .join("");
    const dropdown =
      this.suggestions.length === 0
        ? ""
        : `<ul class="suggestions" data-for="${this.suggestionsFor ?? ""}">${this.suggestions
            .map((s) => `<li>${escapeHtml(s)}</li>`)
            .join("")}</ul>`;
    return `
<section class="annotation">
  <header>
    <button id="prev-line">‹</button>
    <span class="line-id">${line.line_id}</span>
    <span class="verse">v${line.verse_no}.${line.line_in_verse}</span>
    <button id="next-line">›</button>
  </header>
  <table class="line">
    <tr><th>TEXT</th><td>${escapeHtml(line.text_devanagari)}</td></tr>
    <tr><th>IAST</th><td>${escapeHtml(line.text_iast)}</td></tr>
    ${line.split_text ? `<tr><th>SPLIT</th><td>${escapeHtml(line.split_text)}</td></tr>` : ""}
    ${analysisRows}
  </table>
  <form id="entity-form">
    <input id="entity-lemma" value="${escapeHtml(this.entityForm.lemma)}"
           ${this.entityForm.unnamed ? "disabled" : ""} placeholder="lemma"/>
    <label><input type="checkbox" id="entity-unnamed" ${this.entityForm.unnamed ? "checked" : ""}/>
      unnamed</label>
    <input id="entity-ordinal" type="number" min="1" value="${this.entityForm.unnamedOrdinal}"
           ${this.entityForm.unnamed ? "" : "disabled"}/>
    <input id="entity-type" value="${escapeHtml(this.entityForm.entityType)}"/>
    <button id="entity-submit">add entity</button>
  </form>
  <form id="relation-form">
    <input id="relation-src" value="${escapeHtml(this.relationForm.src)}" placeholder="subject"/>
    <input id="relation-type" value="${escapeHtml(this.relationForm.relationType)}"/>
    <input id="relation-dst" value="${escapeHtml(this.relationForm.dst)}" placeholder="object"/>
    <input id="relation-detail" value="${escapeHtml(this.relationForm.detail)}" placeholder="detail"/>
    <button id="relation-submit">add relation</button>
  </form>
  ${dropdown}
  ${this.inferenceWarning ? `<p class="warning">${escapeHtml(this.inferenceWarning)}</p>` : ""}
  ${this.error ? `<p class="error">${escapeHtml(this.error)}</p>` : ""}
  <div class="chips">${chips}</div>
  <ul class="relations">${relationItems}</ul>
</section>`;
  }
}
