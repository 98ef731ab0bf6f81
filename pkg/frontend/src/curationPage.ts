// Curation console: category conflicts with resolve controls, the
// canonicalization dry-run report with a commit button, and stale-snapshot
// detection via the graph version.

import type { KoshaApi } from "./api.js";
import type { CategoryConflict, CurationReport } from "./types.js";
import { escapeHtml } from "./text.js";

async function pollJob(
  api: KoshaApi,
  jobId: string,
  delayMs = 50,
  attempts = 200,
): Promise<CurationReport> {
  for (let i = 0; i < attempts; i++) {
    const job = await api.curateStatus(jobId);
    if (job.status === "done" && job.report) return job.report;
    if (job.status === "error") throw new Error(job.error ?? "curation failed");
    await new Promise((resolve) => setTimeout(resolve, delayMs));
  }
  throw new Error("curation job did not finish");
}

export class CurationPage {
  conflicts: CategoryConflict[] = [];
  report: CurationReport | null = null;
  reportVersion: number | null = null;
  staleWarning: string | null = null;
  error: string | null = null;
  lastCommit: CurationReport | null = null;

  constructor(private api: KoshaApi) {}

  async load(): Promise<void> {
    const payload = await this.api.conflicts();
    this.conflicts = payload.conflicts;
  }

  async resolve(lemma: string, entityType: string): Promise<void> {
    this.error = null;
    try {
      await this.api.resolveConflict(lemma, entityType);
      await this.load();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  async runDryRun(): Promise<void> {
    this.error = null;
    this.staleWarning = null;
    try {
      const { job_id } = await this.api.curate("canonicalize", true);
      this.report = await pollJob(this.api, job_id);
      this.reportVersion = this.api.graphVersion();
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
  }

  /** Commit refuses to run against a snapshot newer than the dry run. */
  async commit(): Promise<boolean> {
    if (!this.report) {
      this.error = "run a dry run first";
      return false;
    }
    const stats = await this.api.stats();
    if (this.reportVersion !== null && stats.graph_version !== this.reportVersion) {
      this.staleWarning =
        `the graph changed since the dry run (version ${stats.graph_version} vs ` +
        `${this.reportVersion}); run it again`;
      return false;
    }
    try {
      const { job_id } = await this.api.curate("canonicalize", false);
      this.lastCommit = await pollJob(this.api, job_id);
      this.report = null;
      this.reportVersion = null;
      await this.load();
      return true;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      return false;
    }
  }

  renderConflicts(): string {
    if (this.conflicts.length === 0) {
      return `<p class="empty">no category conflicts</p>`;
    }
    return `<ul class="conflicts">${this.conflicts
      .map((c) => {
        const options = c.claimed_types
          .map(
            (t) =>
              `<button class="resolve" data-lemma="${escapeHtml(c.lemma)}"
                       data-type="${escapeHtml(t.entity_type)}">
                 ${escapeHtml(t.entity_type)} (${t.annotators.join(", ")})</button>`,
          )
          .join("");
        const state = c.resolution
          ? `<span class="resolved">resolved: ${escapeHtml(c.resolution)}</span>`
          : options;
        return `<li><span class="lemma">${escapeHtml(c.lemma)}</span> ${state}</li>`;
      })
      .join("")}</ul>`;
  }

  renderReport(): string {
    const report = this.report;
    if (!report) return "";
    const components = (report.components ?? [])
      .map((component) => {
        const members = component.lemmas
          .map((lemma) =>
            lemma === component.canonical_lemma
              ? `<strong class="canonical">${escapeHtml(lemma)}</strong>`
              : escapeHtml(lemma),
          )
          .join(", ");
        return `<li class="component" data-size="${component.members.length}">${members}</li>`;
      })
      .join("");
    return `
<div class="report ${report.dry_run ? "dry-run" : ""}">
  <h3>${report.dry_run ? "dry run" : "committed"}: ${escapeHtml(report.pass)}</h3>
  <ul class="components">${components}</ul>
  <dl class="counts">
    <dt>edges rewired</dt><dd>${report.edges_rewired ?? 0}</dd>
    <dt>edges merged</dt><dd>${report.edges_merged ?? 0}</dd>
    <dt>self-loops dropped</dt><dd>${report.self_loops_dropped ?? 0}</dd>
    <dt>unresolved dangling</dt><dd>${report.unresolved_dangling ?? 0}</dd>
  </dl>
  <button id="commit">commit</button>
</div>`;
  }

  render(): string {
    return `
<section class="curation">
  <h2>conflicts</h2>
  ${this.renderConflicts()}
  <h2>canonicalization</h2>
  <button id="dry-run">dry run</button>
  ${this.staleWarning ? `<p class="warning stale">${escapeHtml(this.staleWarning)}</p>` : ""}
  ${this.error ? `<p class="error">${escapeHtml(this.error)}</p>` : ""}
  ${this.renderReport()}
  ${this.lastCommit ? `<p class="banner">canonicalization committed</p>` : ""}
</section>`;
  }
}
