// Browser bootstrap: mounts the three pages and wires DOM events to the page
// controllers. All state lives in the controllers; this file only translates
// events and re-renders.

import { HttpApi } from "./api.js";
import { AnnotationPage } from "./annotationPage.js";
import { CurationPage } from "./curationPage.js";
import { QueryPage } from "./queryPage.js";
import type { SuggestField } from "./annotationPage.js";

const params = new URLSearchParams(window.location.search);
const api = new HttpApi(
  params.get("api") ?? "",
  params.get("token") ?? "querier-token",
);

const annotation = new AnnotationPage(api);
const query = new QueryPage(api);
const curation = new CurationPage(api);

type Tab = "annotate" | "query" | "curate";
let tab: Tab = (params.get("tab") as Tab) ?? "query";

const root = document.getElementById("app")!;

function render(): void {
  const nav = `<nav class="tabs">${(["annotate", "query", "curate"] as Tab[])
    .map((t) => `<button data-tab="${t}" class="${t === tab ? "active" : ""}">${t}</button>`)
    .join("")}</nav>`;
  const page =
    tab === "annotate" ? annotation.render() : tab === "query" ? query.render() : curation.render();
  root.innerHTML = nav + page;
}

const suggestFieldByInput: Record<string, SuggestField> = {
  "entity-lemma": "entityLemma",
  "relation-src": "relationSrc",
  "relation-dst": "relationDst",
};

root.addEventListener("click", (event) => {
  const target = event.target as HTMLElement;
  const handle = async () => {
    if (target.dataset.tab) {
      tab = target.dataset.tab as Tab;
      if (tab === "query" && !query.catalog) await query.load();
      if (tab === "curate") await curation.load();
      if (tab === "annotate" && annotation.lines.length === 0) {
        await annotation.load("Dhānyavarga", 1, 999);
      }
    } else if (target.id === "prev-line") {
      await annotation.goto(-1);
    } else if (target.id === "next-line") {
      await annotation.goto(1);
    } else if (target.id === "entity-submit") {
      event.preventDefault();
      await annotation.submitEntity();
    } else if (target.id === "relation-submit") {
      event.preventDefault();
      await annotation.submitRelation();
    } else if (target.classList.contains("delete") && target.dataset.annId) {
      await annotation.deleteAnnotation(Number(target.dataset.annId));
    } else if (target.dataset.category) {
      query.selectCategory(target.dataset.category);
    } else if (target.dataset.template) {
      query.selectTemplate(target.dataset.template);
    } else if (target.id === "query-run") {
      event.preventDefault();
      await query.run();
    } else if (target.id === "language-toggle") {
      query.language = query.language === "sa" ? "en" : "sa";
    } else if (target.id === "dry-run") {
      await curation.runDryRun();
    } else if (target.id === "commit") {
      await curation.commit();
    } else if (target.classList.contains("resolve")) {
      await curation.resolve(target.dataset.lemma!, target.dataset.type!);
    } else {
      return;
    }
    render();
  };
  void handle();
});

root.addEventListener("input", (event) => {
  const target = event.target as HTMLInputElement;
  const handle = async () => {
    if (target.id in suggestFieldByInput) {
      if (target.id === "entity-lemma") annotation.entityForm.lemma = target.value;
      if (target.id === "relation-src") annotation.relationForm.src = target.value;
      if (target.id === "relation-dst") annotation.relationForm.dst = target.value;
      await annotation.updateSuggestions(suggestFieldByInput[target.id], target.value);
      render();
    } else if (target.id === "entity-type") {
      annotation.entityForm.entityType = target.value;
    } else if (target.id === "entity-unnamed") {
      annotation.entityForm.unnamed = target.checked;
      render();
    } else if (target.id === "entity-ordinal") {
      annotation.entityForm.unnamedOrdinal = Number(target.value);
    } else if (target.id === "relation-type") {
      annotation.relationForm.relationType = target.value;
    } else if (target.id === "relation-detail") {
      annotation.relationForm.detail = target.value;
    } else if (target.dataset.arg !== undefined) {
      const index = Number(target.dataset.arg);
      query.setArg(index, target.value);
      await query.updateArgSuggestions(index, target.value);
      render();
    }
  };
  void handle();
});

void (async () => {
  if (tab === "query") await query.load();
  if (tab === "curate") await curation.load();
  if (tab === "annotate") await annotation.load("Dhānyavarga", 1, 999);
  render();
})();
