import { beforeEach, describe, expect, it } from "vitest";

import { QueryPage } from "../src/queryPage.js";
import { MockApi, SAMPLE_RESULT } from "./mockApi.js";

describe("query page", () => {
  let api: MockApi;
  let page: QueryPage;

  beforeEach(async () => {
    api = new MockApi();
    page = new QueryPage(api);
    await page.load();
  });

  it("groups templates by category and tracks arity", () => {
    expect(page.catalog?.categories).toHaveLength(2);
    page.selectCategory("साधारण (Generic)");
    expect(page.templatesInCategory().map((t) => t.template_id)).toEqual([
      "generic_how_related",
      "generic_related_by",
    ]);
    page.selectTemplate("generic_how_related");
    expect(page.args).toHaveLength(2);
    const html = page.render();
    expect(html.match(/class="arg"/g)).toHaveLength(2);
  });

  it("refuses to run with unfilled arguments", async () => {
    page.selectCategory("द्रव्य (Substance)");
    page.selectTemplate("properties_of");
    await page.run();
    expect(page.error).toMatch(/argument/);
    expect(api.calls.filter((c) => c.startsWith("query:"))).toHaveLength(0);
  });

  it("renders identical node sets in table and graph views", async () => {
    page.selectCategory("द्रव्य (Substance)");
    page.selectTemplate("properties_of");
    page.setArg(0, "गोधूम");
    await page.run();
    expect(page.result).toEqual(SAMPLE_RESULT);
    expect([...page.tableNodeIds()].sort()).toEqual([...page.graphNodeIds()].sort());
    const html = page.render();
    // every subgraph node is drawn in the SVG and named in the table
    for (const lemma of ["गोधूम", "मधुर", "शीत"]) {
      expect(html).toContain(lemma);
    }
    expect(html).toContain("<svg");
    expect(html).toContain("table class=\"results\"");
  });

  it("shows node properties on hover titles", async () => {
    page.selectTemplate("properties_of");
    page.setArg(0, "गोधूम");
    await page.run();
    const html = page.renderGraph();
    expect(html).toContain("<title>मधुर · Property · lines 256343</title>");
  });

  it("shows an explicit empty state", async () => {
    api.queryResult = { ...SAMPLE_RESULT, rows: [], row_count: 0,
                        subgraph: { nodes: [], edges: [] } };
    page.selectTemplate("properties_of");
    page.setArg(0, "गोधूम");
    await page.run();
    expect(page.renderTable()).toContain("no matches");
    expect(page.renderGraph()).toBe("");
  });

  it("shows a truncation banner when the row cap hits", async () => {
    api.queryResult = { ...SAMPLE_RESULT, truncated: true };
    page.selectTemplate("properties_of");
    page.setArg(0, "गोधूम");
    await page.run();
    expect(page.render()).toContain("truncated");
  });

  it("toggles between Sanskrit and English question text", async () => {
    page.selectTemplate("properties_of");
    page.setArg(0, "गोधूम");
    await page.run();
    expect(page.render()).toContain("What are the properties of गोधूम?");
    page.language = "sa";
    expect(page.render()).toContain("गुणाः");
  });

  it("suggests for entity arguments only at three characters", async () => {
    api.suggestions = { god: ["गोधूम"] };
    page.selectTemplate("properties_of");
    await page.updateArgSuggestions(0, "go");
    expect(page.argSuggestions).toEqual([]);
    await page.updateArgSuggestions(0, "god");
    expect(page.argSuggestions).toEqual(["गोधूम"]);
    // a Relation slot never queries the lemma index
    page.selectTemplate("generic_related_by");
    await page.updateArgSuggestions(1, "is Synonym of");
    expect(page.argSuggestions).toEqual([]);
    expect(api.calls.filter((c) => c === "suggest:is Synonym of")).toHaveLength(0);
  });

  it("surfaces API errors inline", async () => {
    api.query = async () => {
      throw new Error("no annotated entity matches 'नास्ति'");
    };
    page.selectTemplate("properties_of");
    page.setArg(0, "नास्ति");
    await page.run();
    expect(page.error).toMatch(/नास्ति/);
    expect(page.render()).toContain("error");
  });
});
