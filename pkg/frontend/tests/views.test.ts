import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import type {
  FactorReport,
  GraphExport,
  SessionDocument,
  SessionPayload,
  StepDefinition,
} from "../src/types.js";
import {
  STATUS_BADGES,
  defaultActiveStep,
  renderSessionError,
  renderStepWizard,
} from "../src/views/stepWizard.js";
import {
  ASSERTION_PREFIX,
  emptyDraft,
  renderAssertionEditor,
  renderConflictBanner,
  renderHighlightedDraft,
} from "../src/views/assertionEditor.js";
import {
  renderFactorPanel,
  renderStaleDataBanner,
} from "../src/views/factorPanel.js";
import {
  renderGraphSvg,
  renderNodeDetails,
} from "../src/views/graphView.js";
import { VersionConflictError } from "../src/api.js";

function read<T>(relative: string): T {
  return JSON.parse(
    readFileSync(new URL(relative, import.meta.url), "utf-8"),
  ) as T;
}

const catalog = read<StepDefinition[]>("../../shared/step-catalog.json");
const fixtureDocument = read<SessionDocument>("./fixtures/session.json");
const fixtureSession = fixtureDocument.session;
const fixtureFactors = read<FactorReport>("./fixtures/factors.json");
const fixtureGraph = read<GraphExport>("./fixtures/graph.json");

function freshSession(): SessionPayload {
  return {
    id: "fresh",
    name: "collision-avoidance",
    steps: [
      "in_progress",
      "locked",
      "locked",
      "locked",
      "locked",
      "locked",
      "locked",
      "locked",
    ],
    config: { red_flag_threshold: 1 },
    version: 1,
    systems: [],
    aspects: [],
    purposes: [],
    actions: [],
    assertions: [],
    revision_log: [],
    id_counter: 0,
  };
}

describe("step wizard", () => {
  it("renders all eight steps with their verbatim catalog text", () => {
    for (const step of catalog) {
      const view = renderStepWizard(catalog, fixtureSession, step.index);
      expect(view).toContain(step.predictive_question);
      expect(view).toContain(step.guiding_prompt);
    }
    expect(catalog).toHaveLength(8);
  });

  it("step 4 shows its prompt verbatim", () => {
    const view = renderStepWizard(catalog, fixtureSession, 4);
    expect(view).toContain("A purpose can be defined as a verb");
  });

  it("fresh session: step 1 editable, steps 2..8 visibly locked", () => {
    const session = freshSession();
    expect(defaultActiveStep(session)).toBe(1);
    const view = renderStepWizard(catalog, session);
    expect(view).not.toContain("This step is not editable.");
    const lockedLines = view
      .split("\n")
      .filter((line) => line.includes(STATUS_BADGES.locked));
    expect(lockedLines).toHaveLength(7);
  });

  it("stale downstream steps show stale badges and a reconfirm control", () => {
    const session = freshSession();
    session.steps = [
      "in_progress",
      "stale",
      "stale",
      "locked",
      "locked",
      "locked",
      "locked",
      "locked",
    ];
    const view = renderStepWizard(catalog, session);
    const staleLines = view
      .split("\n")
      .filter((line) => line.includes(STATUS_BADGES.stale));
    expect(staleLines).toHaveLength(2);
    for (const line of staleLines) {
      expect(line).toContain("(reconfirm available)");
    }
  });

  it("locked active step is marked not editable", () => {
    const view = renderStepWizard(catalog, freshSession(), 5);
    expect(view).toContain("This step is not editable.");
  });

  it("unknown session renders an error screen with retry", () => {
    const view = renderSessionError("nope", "no session with id 'nope'");
    expect(view).toContain("nope");
    expect(view).toContain("[Retry]");
  });
});

describe("assertion editor", () => {
  const step1 = catalog[0]!;

  it("pre-seeds the draft with the mandatory prefix", () => {
    expect(emptyDraft().startsWith(ASSERTION_PREFIX)).toBe(true);
  });

  it("highlights (sun_position) as the user types", () => {
    const draft = `${ASSERTION_PREFIX} glare from (sun_position)`;
    expect(renderHighlightedDraft(draft)).toContain("[[(sun_position)]]");
    const view = renderAssertionEditor({
      step: step1,
      status: "in_progress",
      draft,
    });
    expect(view).toContain("Factors: sun_position");
    expect(view).toContain("[Submit]");
  });

  it("deleting the prefix disables submit with a hint", () => {
    const view = renderAssertionEditor({
      step: step1,
      status: "in_progress",
      draft: "glare from (sun_position)",
    });
    expect(view).toContain("Submit disabled");
    expect(view).toContain(ASSERTION_PREFIX);
    expect(view).not.toContain("[Submit]");
  });

  it("stale version conflict renders a banner with one-click refresh", () => {
    const banner = renderConflictBanner(
      new VersionConflictError("version conflict", 4, 9),
    );
    expect(banner).toContain("v4");
    expect(banner).toContain("v9");
    expect(banner).toContain("[Refresh]");
  });
});

describe("factor panel", () => {
  it("fixture report ranks the decision-making process first", () => {
    const view = renderFactorPanel(fixtureFactors);
    const rows = view.split("\n").slice(1);
    expect(rows[0]).toContain("own_aircraft_pilot_decision_making_process");
    expect(rows[0]).toContain("most_influential");
    expect(rows[0]!.startsWith("* ")).toBe(true);
  });

  it("renders rows exactly in served order with served numbers", () => {
    const view = renderFactorPanel(fixtureFactors);
    const rows = view.split("\n").slice(1);
    expect(rows).toHaveLength(fixtureFactors.entries.length);
    fixtureFactors.entries.forEach((entry, i) => {
      expect(rows[i]).toContain(entry.token);
      expect(rows[i]).toContain(`  ${entry.frequency}  `);
    });
  });

  it("marks red-flag rows as potential emergence", () => {
    const view = renderFactorPanel(fixtureFactors);
    const redFlagRows = view
      .split("\n")
      .filter((line) => line.includes("red_flag"));
    const served = fixtureFactors.entries.filter(
      (e) => e.classification === "red_flag",
    );
    expect(redFlagRows).toHaveLength(served.length);
    for (const row of redFlagRows) {
      expect(row).toContain("potential emergence");
    }
  });

  it("renders served red-flag changes when the threshold is raised", () => {
    const raised: FactorReport = {
      ...fixtureFactors,
      threshold: 2,
      entries: fixtureFactors.entries.map((e) =>
        e.classification === "most_influential" || e.frequency > 2
          ? e
          : { ...e, classification: "red_flag" as const },
      ),
    };
    const before = renderFactorPanel(fixtureFactors)
      .split("\n")
      .filter((l) => l.includes("red_flag")).length;
    const after = renderFactorPanel(raised)
      .split("\n")
      .filter((l) => l.includes("red_flag")).length;
    expect(after).toBeGreaterThanOrEqual(before);
    expect(renderFactorPanel(raised)).toContain("threshold 2");
  });

  it("empty report renders an empty-state message", () => {
    const empty: FactorReport = {
      session_id: "fresh",
      session_version: 1,
      threshold: 1,
      total_factors: 0,
      total_mentions: 0,
      entries: [],
    };
    expect(renderFactorPanel(empty)).toContain("No factors mentioned yet.");
  });

  it("refresh failure keeps the last good version visible", () => {
    expect(renderStaleDataBanner(7)).toContain("v7");
  });
});

describe("graph view", () => {
  it("empty graph renders an empty-state", () => {
    const svg = renderGraphSvg({ nodes: [], edges: [] });
    expect(svg).toContain("empty-state");
  });

  it("fixture graph renders every node and the chain edges", () => {
    const svg = renderGraphSvg(fixtureGraph);
    for (const node of fixtureGraph.nodes) {
      expect(svg).toContain(`data-id="${node.id}"`);
    }
    const chainEdgeCount = fixtureGraph.edges.filter(
      (e) => e.type === "serves" || e.type === "fulfills",
    ).length;
    const servesLines = (svg.match(/class="edge serves"/g) ?? []).length;
    const fulfillsLines = (svg.match(/class="edge fulfills"/g) ?? []).length;
    expect(servesLines + fulfillsLines).toBe(chainEdgeCount);
  });

  it("styles nodes by kind and marks superseded purposes", () => {
    const svg = renderGraphSvg(fixtureGraph);
    expect(svg).toContain('class="node purpose primary superseded"');
    expect(svg).toContain('class="node purpose appreciation current"');
    expect(svg).toContain('class="node system environmental"');
  });

  it("selecting the prime-purpose owner shows current and superseded phrasing", () => {
    const avp = fixtureSession.systems.find((s) =>
      s.name.toLowerCase().includes("perception"),
    )!;
    const details = renderNodeDetails(fixtureSession, avp.id);
    expect(details).toContain("(current)");
    expect(details).toContain("(superseded)");
  });

  it("is deterministic", () => {
    expect(renderGraphSvg(fixtureGraph)).toBe(renderGraphSvg(fixtureGraph));
  });
});
