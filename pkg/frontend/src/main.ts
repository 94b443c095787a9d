/**
 * Browser entry point: wires the annotator state machine to the DOM.
 * All domain data flows through the API client; this file only renders
 * whatever state the server handed back.
 */

import { Client } from "./api.js";
import { renderGraph, renderLegend } from "./render.js";
import { Annotator } from "./state.js";

const client = new Client(
  (window as { SERVER_URL?: string }).SERVER_URL ?? "http://localhost:8000",
);
const app = new Annotator(client);

let selectedNode: string | null = null;
let zoom = 1;
let panX = 0;
let panY = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderBanner(): string {
  const b = app.banner;
  if (!b) return "";
  if (b.kind === "saved") return `<div class="banner ok">saved — hash ${b.hash}</div>`;
  if (b.kind === "conflict") {
    return `<div class="banner conflict">${b.message} <button id="reload">reload</button></div>`;
  }
  return `<div class="banner error">${b.message}</div>`;
}

function renderHumans(): string {
  if (!app.view) return "";
  const rows = app.view.doc.humans
    .map(
      (h) =>
        `<li>${h.id} — ${h.activity.description} @ ${h.anchor} ` +
        `<button class="rm" data-human="${h.id}">remove</button></li>`,
    )
    .join("");
  return `<ul class="humans">${rows}</ul>`;
}

function renderCatalog(): string {
  const groups = [...app.catalogByRegion().entries()].sort(([a], [b]) => a.localeCompare(b));
  const options = groups
    .map(
      ([region, acts]) =>
        `<optgroup label="${region}">` +
        acts.map((a) => `<option value="${a.id}">${a.description}</option>`).join("") +
        `</optgroup>`,
    )
    .join("");
  return `<option value="">choose activity…</option>${options}`;
}

function redraw(): void {
  el("banner").innerHTML = renderBanner();
  el("humans").innerHTML = renderHumans();
  el("legend").innerHTML = renderLegend();
  const draft = app.draft;
  el("draft").textContent = draft
    ? `placing at ${draft.node}` + (draft.regionMismatch ? " (region mismatch — allowed)" : "")
    : "select a node to place a human";
  if (app.view) {
    el("graph").innerHTML = renderGraph(app.view, undefined, selectedNode);
    const svg = el("graph").querySelector("svg");
    if (svg) {
      svg.style.transform = `translate(${panX}px,${panY}px) scale(${zoom})`;
      svg.addEventListener("click", (ev) => {
        const target = ev.target as Element;
        const node = target.getAttribute("data-node");
        if (node) {
          selectedNode = node;
          app.selectNode(node);
          redraw();
        }
      });
    }
  }
  const reload = document.getElementById("reload");
  if (reload && app.view) {
    const id = app.view.doc.id;
    reload.addEventListener("click", () => void app.load(id).then(redraw));
  }
  for (const btn of el("humans").querySelectorAll<HTMLButtonElement>("button.rm")) {
    btn.addEventListener("click", () =>
      void app.removeHuman(btn.dataset.human ?? "").then(redraw),
    );
  }
}

async function boot(): Promise<void> {
  const scenarios = await client.listScenarios();
  const picker = el<HTMLSelectElement>("scenario");
  picker.innerHTML = scenarios
    .map((s) => `<option value="${s.id}">${s.name} (${s.humans} humans)</option>`)
    .join("");
  picker.addEventListener("change", () => void app.load(picker.value).then(afterLoad));

  el<HTMLSelectElement>("activity").addEventListener("change", (ev) => {
    app.chooseActivity((ev.target as HTMLSelectElement).value);
    redraw();
  });
  el<HTMLButtonElement>("place").addEventListener("click", () =>
    void app.placeDraft().then(() => {
      selectedNode = null;
      redraw();
    }),
  );
  el<HTMLButtonElement>("save").addEventListener("click", () => void app.save().then(redraw));
  el<HTMLInputElement>("frame").addEventListener("input", (ev) => {
    const frame = Number((ev.target as HTMLInputElement).value);
    void app.setPreviewFrame(frame).then(redraw);
  });
  el("graph").addEventListener("wheel", (ev) => {
    ev.preventDefault();
    zoom = Math.max(0.4, Math.min(5, zoom * (ev.deltaY < 0 ? 1.1 : 0.9)));
    redraw();
  });
  let dragging: [number, number] | null = null;
  el("graph").addEventListener("mousedown", (ev) => (dragging = [ev.clientX, ev.clientY]));
  window.addEventListener("mouseup", () => (dragging = null));
  window.addEventListener("mousemove", (ev) => {
    if (!dragging) return;
    panX += ev.clientX - dragging[0];
    panY += ev.clientY - dragging[1];
    dragging = [ev.clientX, ev.clientY];
    redraw();
  });

  if (scenarios.length) await app.load(scenarios[0]!.id).then(afterLoad);
}

function afterLoad(): void {
  el<HTMLSelectElement>("activity").innerHTML = renderCatalog();
  selectedNode = null;
  zoom = 1;
  panX = 0;
  panY = 0;
  redraw();
}

void boot().catch((e) => {
  el("banner").innerHTML = `<div class="banner error">server unreachable: ${String(e)}</div>`;
});
