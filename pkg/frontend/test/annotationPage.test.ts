import { beforeEach, describe, expect, it } from "vitest";

import { AnnotationPage } from "../src/annotationPage.js";
import { MockApi } from "./mockApi.js";

describe("annotation page", () => {
  let api: MockApi;
  let page: AnnotationPage;

  beforeEach(async () => {
    api = new MockApi();
    api.suggestions = { mas: ["मसूर", "माष"], masu: ["मसूर"], गोधूम: ["गोधूम"] };
    page = new AnnotationPage(api);
    await page.load("Dhānyavarga", 46, 46);
  });

  it("renders the line with TEXT, SPLIT and analysis rows", () => {
    const html = page.render();
    expect(html).toContain("मसूरो मधुरः पाके संग्राही शीतलो लघुः");
    expect(html).toContain("SPLIT");
    expect(html).toContain("ROOT");
    expect(html).toContain("GENDER");
    expect(html).toContain("<td>मसूर</td>");
  });

  it("suggests only at three or more typed characters", async () => {
    await page.updateSuggestions("entityLemma", "ma");
    expect(page.suggestions).toEqual([]);
    expect(api.calls.filter((c) => c.startsWith("suggest:"))).toHaveLength(0);
    expect(page.render()).not.toContain("suggestions");

    await page.updateSuggestions("entityLemma", "mas");
    expect(page.suggestions).toEqual(["मसूर", "माष"]);
    expect(api.calls).toContain("suggest:mas");
    const html = page.render();
    expect(html).toContain("suggestions");
    expect(html).toContain("मसूर");

    // shrinking the prefix clears the dropdown again
    await page.updateSuggestions("entityLemma", "ma");
    expect(page.suggestions).toEqual([]);
  });

  it("counts Devanagari prefixes in user-perceived characters", async () => {
    // गोधू is two user-perceived characters even though it has four codepoints
    await page.updateSuggestions("relationSrc", "गोधू");
    expect(page.suggestions).toEqual([]);
    await page.updateSuggestions("relationSrc", "गोधूम");
    expect(api.calls).toContain("suggest:गोधूम");
  });

  it("submits an unnamed entity and shows its chip", async () => {
    page.entityForm.unnamed = true;
    page.entityForm.unnamedOrdinal = 1;
    await page.submitEntity();
    expect(api.calls).toContain("annotateEntity:X1-256381");
    expect(page.render()).toContain("X1-256381");
  });

  it("shows the will-be-inferred warning instead of blocking", async () => {
    api.materializeNext = false;
    page.relationForm = { src: "मधुर", relationType: "is Property of", dst: "मसूर", detail: "rasa" };
    await page.submitRelation();
    expect(page.inferenceWarning).toMatch(/inference/);
    expect(page.render()).toContain("warning");
    api.materializeNext = true;
    await page.submitRelation();
    expect(page.inferenceWarning).toBeNull();
  });

  it("deleting an annotation refreshes the list without it", async () => {
    page.entityForm.lemma = "मसूर";
    await page.submitEntity();
    expect(page.entityChips()).toContain("मसूर");
    const annId = api.lineAnnotations.entities[0].ann_id;
    await page.deleteAnnotation(annId);
    expect(api.calls).toContain(`delete:${annId}`);
    expect(page.entityChips()).not.toContain("मसूर");
  });

  it("fetches everything through the API (thin client)", () => {
    expect(api.calls[0]).toBe("corpus:Dhānyavarga:46-46");
    expect(api.calls).toContain("annotations:256381");
  });
});
