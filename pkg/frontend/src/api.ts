/** Typed client for the workbench HTTP API. All UI state originates from
 * these responses; the client performs no local recomputation. */

import type {
  FactorReport,
  Finding,
  GraphExport,
  SessionDocument,
  StepDefinition,
  Assertion,
  StepStatus,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class VersionConflictError extends ApiError {
  constructor(
    message: string,
    readonly expectedVersion: number,
    readonly currentVersion: number,
  ) {
    super(409, "VERSION_CONFLICT", message);
    this.name = "VersionConflictError";
  }
}

export interface ClientConfig {
  /** Base URL of the service, e.g. "http://127.0.0.1:8000". */
  baseUrl: string;
  /** Injectable for tests; defaults to the global fetch. */
  fetchImpl?: typeof fetch;
}

export interface SubmitOptions {
  referencedEntities?: string[];
  expectedVersion?: number;
}

export interface ReviseOptions extends SubmitOptions {
  rationale: string;
}

interface AssertionResponse {
  assertion: Assertion;
  version: number;
}

interface StepResponse {
  step: { index: number; status: StepStatus };
  version: number;
}

interface ValidationResponse {
  findings: Finding[];
  version: number;
}

export class WorkbenchClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: typeof fetch;

  constructor(config: ClientConfig) {
    this.baseUrl = config.baseUrl.replace(/\/+$/, "");
    this.fetchImpl = config.fetchImpl ?? fetch;
  }

  private async request(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const payload = (await response.json().catch(() => ({}))) as Record<
        string,
        unknown
      >;
      const code = typeof payload.code === "string" ? payload.code : "UNKNOWN";
      const message =
        typeof payload.message === "string"
          ? payload.message
          : `request failed with status ${response.status}`;
      if (response.status === 409) {
        throw new VersionConflictError(
          message,
          Number(payload.expected_version),
          Number(payload.current_version),
        );
      }
      throw new ApiError(response.status, code, message);
    }
    return response;
  }

  private async json<T>(
    method: "GET" | "POST",
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.request(method, path, body);
    return (await response.json()) as T;
  }

  async listSteps(): Promise<StepDefinition[]> {
    const payload = await this.json<{ steps: StepDefinition[] }>(
      "GET",
      "/steps",
    );
    return payload.steps;
  }

  createSession(
    name: string,
    redFlagThreshold?: number,
  ): Promise<SessionDocument> {
    const body: Record<string, unknown> = { name };
    if (redFlagThreshold !== undefined) {
      body.red_flag_threshold = redFlagThreshold;
    }
    return this.json("POST", "/sessions", body);
  }

  getSession(sessionId: string): Promise<SessionDocument> {
    return this.json("GET", `/sessions/${sessionId}`);
  }

  submitAssertion(
    sessionId: string,
    stepIndex: number,
    text: string,
    options: SubmitOptions = {},
  ): Promise<AssertionResponse> {
    return this.json(
      "POST",
      `/sessions/${sessionId}/steps/${stepIndex}/assertions`,
      {
        text,
        referenced_entities: options.referencedEntities ?? [],
        expected_version: options.expectedVersion ?? null,
      },
    );
  }

  completeStep(
    sessionId: string,
    stepIndex: number,
    expectedVersion?: number,
  ): Promise<StepResponse> {
    return this.json(
      "POST",
      `/sessions/${sessionId}/steps/${stepIndex}/complete`,
      { expected_version: expectedVersion ?? null },
    );
  }

  reconfirmStep(
    sessionId: string,
    stepIndex: number,
    expectedVersion?: number,
  ): Promise<StepResponse> {
    return this.json(
      "POST",
      `/sessions/${sessionId}/steps/${stepIndex}/reconfirm`,
      { expected_version: expectedVersion ?? null },
    );
  }

  reviseAssertion(
    sessionId: string,
    assertionId: string,
    text: string,
    options: ReviseOptions,
  ): Promise<AssertionResponse> {
    return this.json(
      "POST",
      `/sessions/${sessionId}/assertions/${assertionId}/revise`,
      {
        text,
        rationale: options.rationale,
        referenced_entities: options.referencedEntities ?? null,
        expected_version: options.expectedVersion ?? null,
      },
    );
  }

  getValidation(sessionId: string): Promise<ValidationResponse> {
    return this.json("GET", `/sessions/${sessionId}/validation`);
  }

  getFactors(sessionId: string, threshold?: number): Promise<FactorReport> {
    const query = threshold === undefined ? "" : `?threshold=${threshold}`;
    return this.json("GET", `/sessions/${sessionId}/factors${query}`);
  }

  async getReport(sessionId: string): Promise<string> {
    const response = await this.request(
      "GET",
      `/sessions/${sessionId}/report`,
    );
    return response.text();
  }

  getGraph(sessionId: string): Promise<GraphExport> {
    return this.json("GET", `/sessions/${sessionId}/graph`);
  }
}
