// DOM layer: hash-routed screens over the pure modules (api/chart/controller/
// preview). Navigation mirrors the operator flow: opening -> settings or
// capture home -> item list -> capture screen.

import { ApiClient, ApiRequestError } from "./api.js";
import { StatsModel, drawChart } from "./chart.js";
import { CaptureController } from "./controller.js";
import { ACTION_BUTTONS, type SessionAction } from "./stateMachine.js";
import { PreviewStream, colorDataUrl, depthDataUrl, drawOverlay } from "./preview.js";
import { CATEGORIES, type PreviewMessage } from "./types.js";

const api = new ApiClient("");
const statsModel = new StatsModel();
let controller: CaptureController | null = null;
let preview: PreviewStream | null = null;

const root = () => document.getElementById("app")!;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function banner(message: string, kind: "error" | "info" = "error"): HTMLElement {
  return el("div", { class: `banner ${kind}` }, message);
}

function show(...nodes: (Node | string)[]): void {
  const container = root();
  container.replaceChildren(...nodes);
}

function navigate(hash: string): void {
  location.hash = hash;
}

// -- opening ---------------------------------------------------------------

function renderOpening(): void {
  show(
    el("h1", {}, "signcol operator console"),
    el("p", {}, "Collect multi-modality sign-language gestures."),
    el(
      "div",
      { class: "menu" },
      button("Settings & definitions", () => navigate("#/settings")),
      button("Capture", () => navigate("#/capture")),
      button("About", () => navigate("#/about")),
    ),
  );
}

function button(label: string, onClick: () => void, attrs: Record<string, string> = {}): HTMLButtonElement {
  const node = el("button", attrs, label);
  node.addEventListener("click", onClick);
  return node;
}

// -- settings & definitions ---------------------------------------------------

async function renderSettings(): Promise<void> {
  const [languages, performers] = await Promise.all([api.listLanguages(), api.listPerformers()]);

  const languageInput = el("input", { placeholder: "language name" });
  const performerName = el("input", { placeholder: "performer name" });
  const performerAge = el("input", { type: "number", placeholder: "age", min: "1", max: "130" });
  const performerPhone = el("input", { placeholder: "phone" });
  const message = el("div", { class: "form-message" });

  const submit = async (work: () => Promise<void>) => {
    try {
      await work();
      await renderSettings();
    } catch (err) {
      message.replaceChildren(banner(err instanceof Error ? err.message : String(err)));
    }
  };

  show(
    el("h1", {}, "Settings & definitions"),
    el(
      "section",
      {},
      el("h2", {}, "Languages"),
      el("ul", {}, ...languages.map((l) => el("li", {}, `${l.id}: ${l.name}`))),
      languageInput,
      button("Define language", () => submit(async () => void (await api.defineLanguage(languageInput.value)))),
    ),
    el(
      "section",
      {},
      el("h2", {}, "Performers"),
      el("ul", {}, ...performers.map((p) => el("li", {}, `${p.id}: ${p.name} (${p.age})`))),
      performerName,
      performerAge,
      performerPhone,
      button("Define performer", () =>
        submit(async () => {
          await api.definePerformer(performerName.value, Number(performerAge.value), performerPhone.value);
        }),
      ),
    ),
    el(
      "section",
      {},
      el("h2", {}, "Items"),
      button("New item", () => navigate("#/new-item")),
    ),
    message,
    button("Back", () => navigate("#/")),
  );
}

// -- new item -------------------------------------------------------------------

async function renderNewItem(): Promise<void> {
  const languages = await api.listLanguages();
  const nameInput = el("input", { placeholder: "item name" });
  const categorySelect = el("select", {});
  for (const category of CATEGORIES) {
    categorySelect.append(el("option", { value: category }, category));
  }
  const languageSelect = el("select", {});
  for (const language of languages) {
    languageSelect.append(el("option", { value: String(language.id) }, language.name));
  }
  const message = el("div", { class: "form-message" });

  show(
    el("h1", {}, "New item"),
    languages.length ? "" : banner("Define a language first.", "info"),
    el("div", { class: "form" }, nameInput, categorySelect, languageSelect),
    button("Create", async () => {
      try {
        await api.defineItem(nameInput.value, categorySelect.value, Number(languageSelect.value));
        navigate(`#/items/${categorySelect.value}`);
      } catch (err) {
        message.replaceChildren(banner(err instanceof Error ? err.message : String(err)));
      }
    }),
    message,
    button("Back", () => navigate("#/settings")),
  );
}

// -- capture home: chart + category buttons ------------------------------------------

async function renderCaptureHome(): Promise<void> {
  await statsModel.refresh(api);
  const canvas = el("canvas", { width: "640", height: "240", class: "chart" });

  const nodes: (Node | string)[] = [el("h1", {}, "Capture")];
  if (statsModel.error) {
    nodes.push(banner(`statistics unavailable: ${statsModel.error}`));
    if (statsModel.stale) nodes.push(banner("showing stale data", "info"));
  }
  if (statsModel.bars) {
    nodes.push(canvas);
  }
  nodes.push(
    el(
      "div",
      { class: "menu" },
      ...CATEGORIES.map((category) => button(category, () => navigate(`#/items/${category}`))),
    ),
    button("Back", () => navigate("#/")),
  );
  show(...nodes);
  if (statsModel.bars) drawChart(canvas, statsModel.bars);
}

// -- item list ------------------------------------------------------------------------

async function renderItemList(category: string): Promise<void> {
  const searchInput = el("input", { placeholder: "search" });
  const listNode = el("ul", { class: "items" });

  const refresh = async () => {
    const items = await api.listItems(category, searchInput.value);
    listNode.replaceChildren(
      ...items.map((item) =>
        el(
          "li",
          {},
          `${item.name} — ${item.recording_count ?? 0} video(s) `,
          button("capture", () => navigate(`#/capture/${item.id}`)),
        ),
      ),
    );
  };
  searchInput.addEventListener("input", () => void refresh());

  show(
    el("h1", {}, `Items in ${category}`),
    searchInput,
    listNode,
    button("New item", () => navigate("#/new-item")),
    button("Back", () => navigate("#/capture")),
  );
  await refresh();
}

// -- capture screen ----------------------------------------------------------------------

async function renderCaptureScreen(itemId: number): Promise<void> {
  controller = new CaptureController(api, itemId);
  const performers = await api.listPerformers();
  const items = await api.listItems();
  const item = items.find((i) => i.id === itemId);

  const performerSelect = el("select", {});
  for (const performer of performers) {
    performerSelect.append(el("option", { value: String(performer.id) }, performer.name));
  }

  const stateLabel = el("span", { class: "state" }, "none");
  const frameLabel = el("span", { class: "frames" }, "0 frames");
  const colorImage = el("img", { width: "480", height: "270", alt: "color preview" });
  const depthImage = el("img", { width: "256", height: "212", alt: "depth preview" });
  const overlay = el("canvas", { width: "256", height: "212", class: "overlay" });
  const message = el("div", { class: "form-message" });

  const actionButtons = new Map<SessionAction, HTMLButtonElement>();

  const sync = () => {
    const enabled = controller!.enabled();
    for (const [action, node] of actionButtons) {
      node.disabled = !enabled.includes(action);
    }
    stateLabel.textContent = controller!.state;
    frameLabel.textContent = `${controller!.session?.frames_written ?? 0} frames`;
  };

  const act = async (action: SessionAction) => {
    try {
      await controller!.dispatch(action, Number(performerSelect.value));
      message.replaceChildren();
      if (action === "initialize") startPreview();
      if (action === "save" || action === "discard") {
        stopPreview();
        await statsModel.refresh(api);
        if (item) navigate(`#/items/${item.category}`);
        return;
      }
    } catch (err) {
      // The API may still reject (e.g. a race); surface it without crashing.
      const detail =
        err instanceof ApiRequestError && err.state ? `${err.message} (state ${err.state})` : String(err);
      message.replaceChildren(banner(detail));
      await controller!.refresh().catch(() => undefined);
    }
    sync();
  };

  for (const action of ACTION_BUTTONS) {
    actionButtons.set(action, button(action, () => void act(action), { class: "action" }));
  }

  const startPreview = () => {
    stopPreview();
    preview = new PreviewStream(api.previewUrl());
    preview.connect((msg: PreviewMessage) => {
      colorImage.src = colorDataUrl(msg);
      depthImage.src = depthDataUrl(msg);
      drawOverlay(overlay, msg);
      void controller!.refresh().then(sync);
    });
  };
  const stopPreview = () => {
    preview?.close();
    preview = null;
  };

  show(
    el("h1", {}, `Capture: ${item?.name ?? itemId}`),
    el("div", {}, "Performer: ", performerSelect),
    el("div", { class: "status" }, "State: ", stateLabel, " · ", frameLabel),
    el("div", { class: "actions" }, ...actionButtons.values()),
    el(
      "div",
      { class: "previews" },
      el("figure", {}, colorImage, el("figcaption", {}, "color")),
      el("figure", { class: "depth-figure" }, depthImage, overlay, el("figcaption", {}, "depth + skeleton")),
    ),
    message,
    button("Back", () => {
      stopPreview();
      navigate(item ? `#/items/${item.category}` : "#/capture");
    }),
  );
  sync();
}

// -- about -----------------------------------------------------------------------------------

function renderAbout(): void {
  show(
    el("h1", {}, "About"),
    el(
      "p",
      {},
      "signcol records synchronized color, depth, infrared, body-index, " +
        "mapped-body and skeleton data for sign-language datasets, and tracks " +
        "collection statistics across eight sign categories.",
    ),
    button("Back", () => navigate("#/")),
  );
}

// -- router ------------------------------------------------------------------------------------

async function route(): Promise<void> {
  const hash = location.hash || "#/";
  try {
    if (hash === "#/") renderOpening();
    else if (hash === "#/settings") await renderSettings();
    else if (hash === "#/new-item") await renderNewItem();
    else if (hash === "#/capture") await renderCaptureHome();
    else if (hash === "#/about") renderAbout();
    else if (hash.startsWith("#/items/")) await renderItemList(hash.slice("#/items/".length));
    else if (hash.startsWith("#/capture/")) await renderCaptureScreen(Number(hash.slice("#/capture/".length)));
    else renderOpening();
  } catch (err) {
    show(banner(err instanceof Error ? err.message : String(err)), button("Home", () => navigate("#/")));
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
