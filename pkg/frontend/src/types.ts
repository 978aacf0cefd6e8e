/** Payload shapes served by the workbench HTTP API. The UI treats these as
 * the source of truth and never recomputes displayed values locally. */

export type StepStatus = "locked" | "in_progress" | "complete" | "stale";

export interface StepDefinition {
  index: number;
  name: string;
  predictive_question: string;
  guiding_prompt: string;
  completion_criterion: string;
}

export interface SystemEntity {
  id: string;
  name: string;
  kind: "agent" | "non_agent" | "environmental";
  prime_purpose: string | null;
  sphere_of_control: string[];
}

export interface Aspect {
  id: string;
  token: string;
  description: string;
}

export interface Purpose {
  id: string;
  kind: "primary" | "influence" | "control" | "appreciation";
  owner_system: string;
  verb_phrase: string;
  serves: string | null;
  status: "current" | "superseded";
}

export interface ActionRecord {
  id: string;
  kind: "unsafe" | "influence" | "control" | "appreciative";
  source_system: string;
  description: string;
  target_system: string | null;
  target_aspect: string | null;
  fulfills: string | null;
}

export interface Assertion {
  id: string;
  step_index: number;
  text: string;
  revision: number;
  factor_tokens: string[];
  referenced_entities: string[];
  status: "current" | "superseded";
  supersedes: string | null;
  revision_rationale: string | null;
}

export interface RevisionEvent {
  step_index: number;
  target_id: string;
  event: string;
  rationale: string | null;
  timestamp: string;
}

export interface SessionPayload {
  id: string;
  name: string;
  steps: StepStatus[];
  config: { red_flag_threshold: number };
  version: number;
  systems: SystemEntity[];
  aspects: Aspect[];
  purposes: Purpose[];
  actions: ActionRecord[];
  assertions: Assertion[];
  revision_log: RevisionEvent[];
  id_counter: number;
}

export interface SessionDocument {
  format_version: number;
  session: SessionPayload;
}

export interface Finding {
  code: string;
  severity: "error" | "warning";
  entity: string;
  message: string;
}

export type FactorClassification = "most_influential" | "ordinary" | "red_flag";

export interface FactorEntry {
  token: string;
  frequency: number;
  steps: number[];
  classification: FactorClassification;
}

export interface FactorReport {
  session_id: string;
  session_version: number;
  threshold: number;
  total_factors: number;
  total_mentions: number;
  entries: FactorEntry[];
}

export interface GraphNode {
  id: string;
  type: "system" | "aspect" | "purpose" | "action";
  kind: string;
  label: string;
  status?: "current" | "superseded";
}

export interface GraphEdge {
  type: string;
  source: string;
  target: string;
}

export interface GraphExport {
  nodes: GraphNode[];
  edges: GraphEdge[];
}
