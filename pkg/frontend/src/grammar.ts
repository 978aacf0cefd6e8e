/** Client-side port of the factor-token grammar, used only for live
 * highlighting previews. The server's extraction remains authoritative;
 * `shared/token-grammar-vectors.json` keeps the two in lockstep.
 *
 * A factor token is a parenthesized identifier of letters, digits, and
 * underscores with at least two non-empty underscore-separated segments,
 * starting with a letter, e.g. `(sun_position)`. Tokens are lowercased on
 * extraction; duplicates count once per mention. */

const PAREN_RE = /\(([^()]*)\)/g;
const TOKEN_RE = /^[A-Za-z][A-Za-z0-9]*(?:_[A-Za-z0-9]+)+$/;

export function normalizeToken(token: string): string {
  return token.toLowerCase();
}

export function isFactorToken(candidate: string): boolean {
  return TOKEN_RE.test(candidate);
}

/** All factor tokens mentioned in `text`, normalized, in order of mention. */
export function extractFactors(text: string): string[] {
  const tokens: string[] = [];
  for (const match of text.matchAll(PAREN_RE)) {
    const candidate = match[1] ?? "";
    if (isFactorToken(candidate)) {
      tokens.push(normalizeToken(candidate));
    }
  }
  return tokens;
}

export interface HighlightSegment {
  text: string;
  /** Normalized token when this segment is a parenthesized factor mention. */
  token: string | null;
}

/** Split `text` into plain and factor-token segments for live highlighting.
 * Token segments include their parentheses; concatenating all segment texts
 * reproduces the input exactly. */
export function highlight(text: string): HighlightSegment[] {
  const segments: HighlightSegment[] = [];
  let cursor = 0;
  for (const match of text.matchAll(PAREN_RE)) {
    const candidate = match[1] ?? "";
    if (!isFactorToken(candidate)) {
      continue;
    }
    const start = match.index ?? 0;
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), token: null });
    }
    segments.push({ text: match[0], token: normalizeToken(candidate) });
    cursor = start + match[0].length;
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), token: null });
  }
  return segments;
}
