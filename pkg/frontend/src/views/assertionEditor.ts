/** Assertion editor: a draft pre-seeded with the mandatory template prefix,
 * live factor-token highlighting (client-side preview only; the server's
 * extraction is authoritative on submit), and submit gating on the prefix. */

import { extractFactors, highlight } from "../grammar.js";
import type { VersionConflictError } from "../api.js";
import type { StepDefinition, StepStatus } from "../types.js";
import { isEditable } from "./stepWizard.js";

export const ASSERTION_PREFIX = "The architect asserts that";

export function emptyDraft(): string {
  return `${ASSERTION_PREFIX} `;
}

export function hasPrefix(draft: string): boolean {
  return draft.startsWith(ASSERTION_PREFIX);
}

/** Draft with each factor-token mention wrapped in [[ ]] markers. */
export function renderHighlightedDraft(draft: string): string {
  return highlight(draft)
    .map((segment) =>
      segment.token === null ? segment.text : `[[${segment.text}]]`,
    )
    .join("");
}

export interface EditorState {
  step: StepDefinition;
  status: StepStatus;
  draft: string;
}

export function renderAssertionEditor(state: EditorState): string {
  const lines: string[] = [
    `Editing step ${state.step.index}: ${state.step.name}`,
  ];
  if (!isEditable(state.status)) {
    lines.push("This step is not editable.");
    return lines.join("\n");
  }
  lines.push(renderHighlightedDraft(state.draft));
  const tokens = extractFactors(state.draft);
  lines.push(
    tokens.length === 0
      ? "Factors: none detected"
      : `Factors: ${tokens.join(", ")}`,
  );
  if (hasPrefix(state.draft)) {
    lines.push("[Submit]");
  } else {
    lines.push(
      `Submit disabled: assertions must begin with "${ASSERTION_PREFIX}".`,
    );
  }
  return lines.join("\n");
}

/** Inline rendering of a 422 rule rejection from the engine. */
export function renderRejection(code: string, message: string): string {
  return `Rejected (${code}): ${message}`;
}

/** Conflict banner for a stale optimistic version, with one-click refresh. */
export function renderConflictBanner(error: VersionConflictError): string {
  return [
    `The session changed while you were editing (you had v${error.expectedVersion}, ` +
      `it is now v${error.currentVersion}).`,
    "[Refresh]",
  ].join("\n");
}
