// Small text helpers shared by the pages.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const VIRAMA = "्";

/** User-perceived character count: combining marks do not count and a
 *  consonant right after a virāma folds into the previous cluster. */
export function graphemeLength(text: string): number {
  let count = 0;
  let afterVirama = false;
  for (const ch of text.normalize("NFC")) {
    if (/\p{M}/u.test(ch)) {
      afterVirama = ch === VIRAMA;
      continue;
    }
    if (afterVirama) {
      afterVirama = false;
      continue;
    }
    count += 1;
  }
  return count;
}

export const MIN_SUGGEST_PREFIX = 3;
