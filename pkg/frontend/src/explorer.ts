/**
 * Layered text explorer: one row per clause atom with its label and code,
 * indentation by tab depth, and a hover pop-up showing every database
 * feature of the word under the cursor.
 */

import { ClauseRow, WordBundle } from "./api.js";
import { PayloadNode, asString } from "./payload.js";

export type Layer = "word" | "phrase" | "clause" | "sentence";

export interface DisplaySettings {
  script: "source" | "translit";
  layers: Set<Layer>;
  showGloss: boolean;
}

export function defaultSettings(): DisplaySettings {
  return {
    script: "source",
    layers: new Set<Layer>(["word", "clause"]),
    showGloss: false,
  };
}

/** At least one layer stays visible; toggling the last one is a no-op. */
export function toggleLayer(settings: DisplaySettings, layer: Layer): void {
  if (settings.layers.has(layer)) {
    if (settings.layers.size > 1) settings.layers.delete(layer);
  } else {
    settings.layers.add(layer);
  }
}

const BUNDLE_ORDER = [
  "surface", "translit", "gloss", "lexeme_id", "pos", "stem", "tense",
  "person", "gender", "number", "state", "verb_class", "frequency_rank",
  "frequency_count", "phrase_id", "phrase_type", "phrase_function",
  "clause_id", "clause_label", "clause_ctc", "clause_tab_depth",
  "sentence_id", "book", "chapter", "verse", "monad",
];

/** Multi-valued features (tag sets) join with +; scalars pass through. */
export function featureText(value: PayloadNode | undefined): string {
  if (Array.isArray(value)) return value.map((v) => asString(v)).join("+");
  return asString(value, "-");
}

/** The pop-up lists the full feature bundle, values verbatim. */
export function renderBundlePopup(bundle: WordBundle): HTMLElement {
  const popup = document.createElement("div");
  popup.className = "popup";
  const title = document.createElement("div");
  title.className = "popup-title";
  title.textContent = `${bundle["surface"] ?? ""} (${bundle["translit"] ?? ""})`;
  popup.appendChild(title);
  const table = document.createElement("table");
  const keys = [
    ...BUNDLE_ORDER.filter((k) => k in bundle),
    ...Object.keys(bundle).filter((k) => !BUNDLE_ORDER.includes(k)).sort(),
  ];
  for (const key of keys) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = key;
    const td = document.createElement("td");
    td.textContent = featureText(bundle[key]);
    td.dataset.feature = key;
    tr.append(th, td);
    table.appendChild(tr);
  }
  popup.appendChild(table);
  return popup;
}

export function renderTextExplorer(
  rows: ClauseRow[],
  settings: DisplaySettings,
): HTMLElement {
  const container = document.createElement("div");
  container.className = "explorer";
  let popup: HTMLElement | null = null;
  let lastSentence = "";

  for (const row of rows) {
    if (settings.layers.has("sentence")) {
      const sentence = asString(row.clause["sentence_id"]);
      if (sentence !== lastSentence) {
        const marker = document.createElement("div");
        marker.className = "sentence-marker";
        marker.textContent = `sentence ${sentence}`;
        container.appendChild(marker);
        lastSentence = sentence;
      }
    }
    const line = document.createElement("div");
    line.className = "clause-row";

    if (settings.layers.has("clause")) {
      const label = document.createElement("span");
      label.className = "clause-label";
      label.textContent = asString(row.clause["label"]);
      const ctc = document.createElement("span");
      ctc.className = "clause-ctc";
      ctc.textContent = asString(row.clause["ctc"]);
      line.append(label, ctc);
    }

    const text = document.createElement("span");
    text.className = "clause-text";
    const depth = parseInt(asString(row.clause["tab_depth"], "0"), 10) || 0;
    text.style.paddingInlineStart = `${depth * 2}em`;
    text.dataset.tabDepth = String(depth);
    if (settings.script === "source") text.dir = "rtl";

    for (const bundle of row.words) {
      const token = document.createElement("span");
      token.className = "token";
      token.textContent =
        settings.script === "source"
          ? asString(bundle["surface"])
          : asString(bundle["translit"]);
      if (settings.layers.has("phrase")) {
        token.title = `${asString(bundle["phrase_type"])}/${asString(bundle["phrase_function"])}`;
        token.classList.add(`func-${asString(bundle["phrase_function"])}`);
      }
      token.addEventListener("mouseenter", () => {
        if (popup) popup.remove();
        popup = renderBundlePopup(bundle);
        container.appendChild(popup);
      });
      token.addEventListener("mouseleave", () => {
        if (popup) {
          popup.remove();
          popup = null;
        }
      });
      text.appendChild(token);
      if (settings.showGloss && settings.layers.has("word")) {
        const gloss = document.createElement("span");
        gloss.className = "gloss";
        gloss.textContent = asString(bundle["gloss"]);
        text.appendChild(gloss);
      }
      text.appendChild(document.createTextNode(" "));
    }
    line.appendChild(text);
    container.appendChild(line);
  }
  return container;
}
