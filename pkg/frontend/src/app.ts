/** Application shell: login, navigation, and view wiring. */

import { ApiClient, ApiError } from "./api.js";
import {
  DisplaySettings,
  Layer,
  defaultSettings,
  renderTextExplorer,
  toggleLayer,
} from "./explorer.js";
import { ExerciseRunner } from "./runner.js";
import {
  renderClassTable,
  renderLogbook,
  renderRanking,
  renderReportRows,
} from "./dashboard.js";

interface AppState {
  api: ApiClient | null;
  settings: DisplaySettings;
  facilitator: boolean;
}

const state: AppState = {
  api: null,
  settings: defaultSettings(),
  facilitator: false,
};

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function notice(message: string): void {
  const bar = byId<HTMLDivElement>("notice");
  bar.textContent = message;
  bar.classList.add("visible");
  setTimeout(() => bar.classList.remove("visible"), 6000);
}

async function guard<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (error) {
    if (error instanceof ApiError) {
      notice(`${error.status}: ${error.message}`);
    } else {
      notice(String(error));
    }
    return undefined;
  }
}

async function connect(): Promise<void> {
  const base = byId<HTMLInputElement>("base-url").value.replace(/\/$/, "");
  const token = byId<HTMLInputElement>("token").value.trim();
  const api = new ApiClient(base, token);
  const ok = await guard(async () => {
    await api.ranking();
    return true;
  });
  if (!ok) return;
  state.api = api;
  // Role probe: the class view rejects learner tokens.
  state.facilitator = true;
  try {
    await api.classReport([new Date().toISOString().slice(0, 10)]);
  } catch (error) {
    if (error instanceof ApiError && error.status === 403) {
      state.facilitator = false;
    }
  }
  byId("class-tab").style.display = state.facilitator ? "" : "none";
  byId("login").classList.add("connected");
  notice(state.facilitator ? "connected (facilitator)" : "connected (learner)");
  await showExplorer();
}

function requireApi(): ApiClient | null {
  if (!state.api) {
    notice("connect with a token first");
    return null;
  }
  return state.api;
}

async function showExplorer(): Promise<void> {
  const api = requireApi();
  if (!api) return;
  const from = byId<HTMLInputElement>("ref-from").value.trim();
  const to = byId<HTMLInputElement>("ref-to").value.trim();
  await guard(async () => {
    const rows = await api.text(from, to);
    byId("view").replaceChildren(renderTextExplorer(rows, state.settings));
  });
}

async function startDrill(): Promise<void> {
  const api = requireApi();
  if (!api) return;
  const specText = byId<HTMLTextAreaElement>("spec-text").value;
  const spec: Record<string, string> = {};
  for (const line of specText.split("\n")) {
    const eq = line.indexOf("=");
    if (eq > 0) spec[line.slice(0, eq).trim()] = line.slice(eq + 1).trim();
  }
  const seed = parseInt(byId<HTMLInputElement>("seed").value, 10) || 0;
  const view = byId("view");
  view.replaceChildren();
  const runner = new ExerciseRunner(api, view);
  await guard(() => runner.start(spec, seed));
}

async function showProgress(): Promise<void> {
  const api = requireApi();
  if (!api) return;
  await guard(async () => {
    const rows = await api.logbook();
    const view = byId("view");
    view.replaceChildren(renderLogbook(rows));
    view.appendChild(renderRanking(await api.ranking()));
    view.appendChild(renderReportRows(await api.tasks(), "Per-task results"));
  });
}

async function showClass(): Promise<void> {
  const api = requireApi();
  if (!api) return;
  const weeks = byId<HTMLInputElement>("weeks")
    .value.split(",")
    .map((w) => w.trim())
    .filter(Boolean);
  await guard(async () => {
    const report = await api.classReport(weeks);
    const view = byId("view");
    view.replaceChildren(renderClassTable(report));
    const user = byId<HTMLInputElement>("report-user").value.trim();
    if (user) {
      view.appendChild(renderReportRows(await api.tasks(user), `Tasks: ${user}`));
      const test = byId<HTMLInputElement>("report-test").value.trim();
      if (test) {
        view.appendChild(
          renderReportRows(await api.tests(user, test), `Test ${test}: ${user}`),
        );
      }
    }
  });
}

export function wire(): void {
  byId("connect").addEventListener("click", () => void connect());
  byId("show-text").addEventListener("click", () => void showExplorer());
  byId("start-drill").addEventListener("click", () => void startDrill());
  byId("progress-tab").addEventListener("click", () => void showProgress());
  byId("class-go").addEventListener("click", () => void showClass());
  byId<HTMLSelectElement>("script-mode").addEventListener("change", (event) => {
    state.settings.script = (event.target as HTMLSelectElement)
      .value as DisplaySettings["script"];
    void showExplorer();
  });
  for (const layer of ["word", "phrase", "clause", "sentence"] as Layer[]) {
    byId(`layer-${layer}`).addEventListener("change", () => {
      toggleLayer(state.settings, layer);
      void showExplorer();
    });
  }
  byId<HTMLInputElement>("show-gloss").addEventListener("change", (event) => {
    state.settings.showGloss = (event.target as HTMLInputElement).checked;
    void showExplorer();
  });
}

if (typeof document !== "undefined" && document.getElementById("connect")) {
  wire();
}
