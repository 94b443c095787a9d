/**
 * Annotator state machine. The server is the single source of truth: every
 * mutation round-trips through the API and the local view is rebuilt from
 * the response (or a re-fetch), never edited in place.
 */

import { ActivityDoc, ApiError, Badge, Client, ScenarioDoc } from "./api.js";

export interface PlacementDraft {
  node: string;
  activity: string | null;
  /** activity region differs from the node's region; allowed, but flagged */
  regionMismatch: boolean;
}

export interface GraphViewState {
  doc: ScenarioDoc;
  etag: string;
  badges: Record<string, Badge>;
  /** nodes inside a human zone at the preview frame, null = slider untouched */
  preview: { frame: number; nodes: string[] } | null;
}

export type Banner =
  | { kind: "error"; message: string }
  | { kind: "conflict"; message: string }
  | { kind: "saved"; hash: string }
  | null;

export class Annotator {
  view: GraphViewState | null = null;
  draft: PlacementDraft | null = null;
  catalog: ActivityDoc[] = [];
  banner: Banner = null;

  constructor(private readonly client: Client) {}

  async load(scenarioId: string): Promise<void> {
    this.banner = null;
    try {
      const [{ doc, etag }, badges, catalog] = await Promise.all([
        this.client.getScenario(scenarioId),
        this.client.classification(scenarioId),
        this.catalog.length ? Promise.resolve(this.catalog) : this.client.activities(),
      ]);
      this.view = { doc, etag, badges, preview: null };
      this.catalog = catalog;
      this.draft = null;
    } catch (e) {
      this.view = null;
      this.banner = { kind: "error", message: describe(e) };
    }
  }

  /** Activity catalog grouped by region, for the placement dropdown. */
  catalogByRegion(): Map<string, ActivityDoc[]> {
    const groups = new Map<string, ActivityDoc[]>();
    for (const act of this.catalog) {
      const bucket = groups.get(act.region) ?? [];
      bucket.push(act);
      groups.set(act.region, bucket);
    }
    return groups;
  }

  selectNode(nodeId: string): void {
    if (!this.view) return;
    const node = this.view.doc.nodes.find((n) => n.id === nodeId);
    if (!node) return;
    const keep = this.draft?.activity ?? null;
    this.draft = { node: nodeId, activity: keep, regionMismatch: false };
    if (keep) this.chooseActivity(keep);
  }

  chooseActivity(activityId: string): void {
    if (!this.view || !this.draft) return;
    const act = this.catalog.find((a) => a.id === activityId);
    const node = this.view.doc.nodes.find((n) => n.id === this.draft!.node);
    this.draft = {
      node: this.draft.node,
      activity: activityId,
      regionMismatch: !!act && !!node && act.region !== node.region,
    };
  }

  /** POST the draft; on success re-fetch so the view reflects server state. */
  async placeDraft(): Promise<boolean> {
    if (!this.view || !this.draft || !this.draft.activity) return false;
    const id = this.view.doc.id;
    try {
      await this.client.placeHuman(id, this.draft.node, this.draft.activity);
    } catch (e) {
      // validation failure or network trouble: keep the draft for another try
      this.banner = { kind: "error", message: describe(e) };
      return false;
    }
    await this.load(id);
    return true;
  }

  async removeHuman(humanId: string): Promise<void> {
    if (!this.view) return;
    const id = this.view.doc.id;
    try {
      await this.client.deleteHuman(id, humanId);
    } catch (e) {
      this.banner = { kind: "error", message: describe(e) };
      return;
    }
    await this.load(id);
  }

  /** PUT the current document under its ETag; stale hash means someone else
   * saved first, so prompt for a reload instead of overwriting. */
  async save(): Promise<string | null> {
    if (!this.view) return null;
    try {
      const hash = await this.client.putScenario(
        this.view.doc.id,
        this.view.doc,
        this.view.etag,
      );
      this.view = { ...this.view, etag: hash };
      this.banner = { kind: "saved", hash };
      return hash;
    } catch (e) {
      if (e instanceof ApiError && e.status === 409) {
        this.banner = { kind: "conflict", message: "scenario changed on the server — reload?" };
      } else {
        this.banner = { kind: "error", message: describe(e) };
      }
      return null;
    }
  }

  async setPreviewFrame(frame: number): Promise<void> {
    if (!this.view) return;
    try {
      const nodes = await this.client.occupancy(this.view.doc.id, frame);
      this.view = { ...this.view, preview: { frame, nodes } };
    } catch (e) {
      this.banner = { kind: "error", message: describe(e) };
    }
  }

  clearPreview(): void {
    if (this.view) this.view = { ...this.view, preview: null };
  }
}

function describe(e: unknown): string {
  if (e instanceof ApiError) return `${e.code}: ${e.message}`;
  return e instanceof Error ? e.message : String(e);
}
