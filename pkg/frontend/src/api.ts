/**
 * Typed client for the scenario server. Every piece of domain state the UI
 * shows comes back through these calls; nothing is recomputed client-side.
 */

export interface NodeDoc {
  id: string;
  xyz: [number, number, number];
  region: string;
}

export interface ActivityDoc {
  id: string;
  description: string;
  region: string;
}

export interface HumanDoc {
  id: string;
  activity: ActivityDoc;
  anchor: string;
  waypoints: [number, number, number][];
  footprint_radius: number;
}

export interface ScenarioDoc {
  version: number;
  id: string;
  meta: { name: string; split: string };
  nodes: NodeDoc[];
  edges: [string, string][];
  humans: HumanDoc[];
}

export interface ScenarioSummary {
  id: string;
  name: string;
  humans: number;
}

export type Badge = "occupied" | "isolated" | "visible" | "unaffected";

export interface ApiErrorBody {
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function raise(res: Response): Promise<never> {
  let code = "unknown";
  let message = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    const detail = body.detail ?? body;
    if (typeof detail === "object" && detail !== null && "code" in detail) {
      code = String(detail.code);
      message = String(detail.message ?? message);
    } else {
      message = JSON.stringify(detail);
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(res.status, code, message);
}

export class Client {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  private async get(path: string): Promise<Response> {
    const res = await this.fetchImpl(this.baseUrl + path);
    if (!res.ok) await raise(res);
    return res;
  }

  async listScenarios(): Promise<ScenarioSummary[]> {
    const body = await (await this.get("/v1/scenarios")).json();
    return body.scenarios;
  }

  /** Fetch the canonical scenario document plus its content hash (ETag). */
  async getScenario(id: string): Promise<{ doc: ScenarioDoc; etag: string }> {
    const res = await this.get(`/v1/scenarios/${id}`);
    return { doc: await res.json(), etag: res.headers.get("ETag") ?? "" };
  }

  async putScenario(id: string, doc: ScenarioDoc, etag?: string): Promise<string> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (etag !== undefined) headers["If-Match"] = etag;
    const res = await this.fetchImpl(`${this.baseUrl}/v1/scenarios/${id}`, {
      method: "PUT",
      headers,
      body: JSON.stringify(doc),
    });
    if (!res.ok) await raise(res);
    return (await res.json()).hash;
  }

  async classification(id: string): Promise<Record<string, Badge>> {
    const body = await (await this.get(`/v1/scenarios/${id}/classification`)).json();
    return body.labels;
  }

  async occupancy(id: string, frame: number): Promise<string[]> {
    const body = await (
      await this.get(`/v1/scenarios/${id}/occupancy?frame=${frame}`)
    ).json();
    return body.nodes;
  }

  async activities(): Promise<ActivityDoc[]> {
    const body = await (await this.get("/v1/activities")).json();
    return body.activities;
  }

  async placeHuman(
    id: string,
    node: string,
    activity: string,
  ): Promise<{ human: string; occupancy: string[] }> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/scenarios/${id}/humans`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ node, activity }),
    });
    if (!res.ok) await raise(res);
    return res.json();
  }

  async deleteHuman(id: string, humanId: string): Promise<void> {
    const res = await this.fetchImpl(
      `${this.baseUrl}/v1/scenarios/${id}/humans/${humanId}`,
      { method: "DELETE" },
    );
    if (!res.ok) await raise(res);
  }
}
