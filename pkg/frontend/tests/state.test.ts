import { beforeEach, describe, expect, it } from "vitest";

import { Client, ScenarioDoc } from "../src/api.js";
import { Annotator } from "../src/state.js";
import { catalog, tinyScenario } from "./fixtures.js";

/** In-memory stand-in for the scenario server, honoring the same contract:
 * ETag on GET, If-Match conflict on PUT, re-fetchable state after POST. */
class FakeServer {
  doc: ScenarioDoc = tinyScenario();
  etag = "e1";
  failNextPlace: { status: number; code: string } | null = null;

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const method = init?.method ?? "GET";

    if (path === "/v1/activities") return json({ activities: catalog });
    if (path === `/v1/scenarios/${this.doc.id}` && method === "GET") {
      return json(this.doc, 200, { ETag: this.etag });
    }
    if (path === `/v1/scenarios/${this.doc.id}` && method === "PUT") {
      const match = new Headers(init?.headers).get("If-Match");
      if (match !== null && match !== this.etag) {
        return json({ detail: { code: "conflict", message: "stale hash" } }, 409);
      }
      return json({ hash: this.etag });
    }
    if (path === `/v1/scenarios/${this.doc.id}/classification`) {
      const labels = Object.fromEntries(
        this.doc.nodes.map((n) => [n.id, n.id === this.doc.humans[0]?.anchor ? "occupied" : "unaffected"]),
      );
      return json({ labels });
    }
    if (path.startsWith(`/v1/scenarios/${this.doc.id}/occupancy`)) {
      return json({ nodes: [this.doc.humans[0]?.anchor ?? ""] });
    }
    if (path === `/v1/scenarios/${this.doc.id}/humans` && method === "POST") {
      if (this.failNextPlace) {
        const { status, code } = this.failNextPlace;
        this.failNextPlace = null;
        return json({ detail: { code, message: "rejected" } }, status);
      }
      const body = JSON.parse(String(init?.body));
      const act = catalog.find((a) => a.id === body.activity)!;
      const node = this.doc.nodes.find((n) => n.id === body.node)!;
      const id = `h${String(this.doc.humans.length).padStart(2, "0")}`;
      this.doc.humans.push({
        id,
        activity: act,
        anchor: node.id,
        waypoints: [node.xyz],
        footprint_radius: 0.3,
      });
      this.etag += "'";
      return json({ human: id, occupancy: [node.id] });
    }
    const del = path.match(new RegExp(`^/v1/scenarios/${this.doc.id}/humans/(.+)$`));
    if (del && method === "DELETE") {
      this.doc.humans = this.doc.humans.filter((h) => h.id !== del[1]);
      this.etag += "'";
      return json({ deleted: del[1] });
    }
    return json({ detail: { code: "not-found", message: path } }, 404);
  };
}

function json(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}

describe("Annotator", () => {
  let server: FakeServer;
  let app: Annotator;

  beforeEach(async () => {
    server = new FakeServer();
    app = new Annotator(new Client("http://fake", server.fetch));
    await app.load("s0");
  });

  it("loads scenario, badges, and catalog together", () => {
    expect(app.view?.doc.id).toBe("s0");
    expect(app.view?.etag).toBe("e1");
    expect(app.view?.badges["a"]).toBe("occupied");
    expect(app.catalog).toHaveLength(3);
    expect(app.banner).toBeNull();
  });

  it("groups the catalog by region", () => {
    const groups = app.catalogByRegion();
    expect([...groups.keys()].sort()).toEqual(["bedroom", "kitchen"]);
    expect(groups.get("kitchen")).toHaveLength(2);
  });

  it("flags region-mismatched drafts without blocking them", () => {
    app.selectNode("c"); // bedroom node
    app.chooseActivity("act-00-0"); // kitchen activity
    expect(app.draft?.regionMismatch).toBe(true);
    app.chooseActivity("act-01-0"); // bedroom activity
    expect(app.draft?.regionMismatch).toBe(false);
  });

  it("placing a draft re-fetches the scenario from the server", async () => {
    app.selectNode("b");
    app.chooseActivity("act-00-1");
    expect(await app.placeDraft()).toBe(true);
    expect(app.view?.doc.humans.map((h) => h.anchor)).toContain("b");
    expect(app.view?.etag).toBe(server.etag);
    expect(app.draft).toBeNull();
  });

  it("a rejected placement keeps the draft and surfaces the server message", async () => {
    server.failNextPlace = { status: 422, code: "dangling-reference" };
    app.selectNode("b");
    app.chooseActivity("act-00-1");
    expect(await app.placeDraft()).toBe(false);
    expect(app.draft?.node).toBe("b");
    expect(app.banner).toMatchObject({ kind: "error" });
    expect((app.banner as { message: string }).message).toContain("dangling-reference");
  });

  it("save succeeds under the current ETag and records the hash", async () => {
    const hash = await app.save();
    expect(hash).toBe("e1");
    expect(app.banner).toMatchObject({ kind: "saved", hash: "e1" });
  });

  it("a stale ETag turns into a reload prompt, not an overwrite", async () => {
    server.etag = "e2"; // someone else saved since we loaded
    expect(await app.save()).toBeNull();
    expect(app.banner).toMatchObject({ kind: "conflict" });
  });

  it("occupancy preview stores the server's node list verbatim", async () => {
    await app.setPreviewFrame(60);
    expect(app.view?.preview).toEqual({ frame: 60, nodes: ["a"] });
    app.clearPreview();
    expect(app.view?.preview).toBeNull();
  });

  it("removing a human round-trips through the server", async () => {
    await app.removeHuman("h00");
    expect(app.view?.doc.humans).toHaveLength(0);
  });

  it("load failure leaves an error banner and no view", async () => {
    await app.load("missing");
    expect(app.view).toBeNull();
    expect(app.banner).toMatchObject({ kind: "error" });
  });
});
