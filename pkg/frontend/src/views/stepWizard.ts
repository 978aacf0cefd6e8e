/** Step wizard: the eight catalog steps with status badges, the active
 * step's verbatim question and prompt, and its current assertions.
 * Renderers return plain strings so they can be tested without a DOM. */

import type {
  Assertion,
  SessionPayload,
  StepDefinition,
  StepStatus,
} from "../types.js";

export const STATUS_BADGES: Record<StepStatus, string> = {
  locked: "[locked]",
  in_progress: "[in progress]",
  complete: "[complete]",
  stale: "[stale]",
};

export function isEditable(status: StepStatus): boolean {
  return status === "in_progress" || status === "stale";
}

/** The step the wizard opens by default: the first editable one, else the
 * last complete one, else step 1. */
export function defaultActiveStep(session: SessionPayload): number {
  for (let k = 0; k < session.steps.length; k++) {
    if (isEditable(session.steps[k] as StepStatus)) {
      return k + 1;
    }
  }
  for (let k = session.steps.length - 1; k >= 0; k--) {
    if (session.steps[k] === "complete") {
      return k + 1;
    }
  }
  return 1;
}

function currentAssertions(
  session: SessionPayload,
  stepIndex: number,
): Assertion[] {
  return session.assertions.filter(
    (a) => a.step_index === stepIndex && a.status === "current",
  );
}

export function renderStepWizard(
  catalog: StepDefinition[],
  session: SessionPayload,
  activeStep?: number,
): string {
  const active = activeStep ?? defaultActiveStep(session);
  const lines: string[] = [`Session: ${session.name} (v${session.version})`];
  for (const step of catalog) {
    const status = session.steps[step.index - 1] as StepStatus;
    const badge = STATUS_BADGES[status];
    const marker = step.index === active ? "> " : "  ";
    let line = `${marker}Step ${step.index}: ${step.name} ${badge}`;
    if (status === "stale") {
      line += " (reconfirm available)";
    }
    lines.push(line);
    if (step.index === active) {
      lines.push(`    Question: ${step.predictive_question}`);
      lines.push(`    Prompt: ${step.guiding_prompt}`);
      if (!isEditable(status)) {
        lines.push("    This step is not editable.");
      }
      const assertions = currentAssertions(session, step.index);
      if (assertions.length === 0) {
        lines.push("    No assertions yet.");
      }
      for (const assertion of assertions) {
        lines.push(`    ${assertion.id} (rev ${assertion.revision}): ${assertion.text}`);
      }
    }
  }
  return lines.join("\n");
}

/** Error screen for an unknown session, with a retry affordance. */
export function renderSessionError(sessionId: string, message: string): string {
  return [
    `Could not load session ${sessionId}: ${message}`,
    "[Retry]",
  ].join("\n");
}
