/**
 * Learner and facilitator dashboards.  Every number shown is the exact
 * string the API rendered; the client parses values only to place points
 * on the progress graph, never to display them.
 */

import { PayloadList, PayloadMap, asList, asMap, asString } from "./payload.js";

const LOGBOOK_COLUMNS: [string, string][] = [
  ["exercise_name", "Filename"],
  ["started_at", "Start at"],
  ["duration", "Duration (min:sec)"],
  ["seconds_per_right", "Seconds per right"],
  ["correct", "Correct"],
  ["wrong", "Wrong"],
  ["correct_per_minute", "Correct per minute"],
  ["accuracy", "Accuracy"],
  ["proficiency", "Proficiency"],
];

function table(
  columns: [string, string][],
  rows: PayloadList,
  className: string,
): HTMLTableElement {
  const el = document.createElement("table");
  el.className = className;
  const head = document.createElement("tr");
  for (const [, title] of columns) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  el.appendChild(head);
  for (const row of rows) {
    const map = asMap(row);
    const tr = document.createElement("tr");
    for (const [key] of columns) {
      const td = document.createElement("td");
      td.dataset.col = key;
      td.textContent = asString(map[key], "-");
      tr.appendChild(td);
    }
    el.appendChild(tr);
  }
  return el;
}

export function renderLogbook(rows: PayloadList): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "panel logbook";
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No practice sessions yet.";
    panel.appendChild(empty);
    return panel;
  }
  panel.appendChild(renderProgressGraph(rows));
  panel.appendChild(table(LOGBOOK_COLUMNS, rows, "logbook-table"));
  return panel;
}

function minsecToSeconds(text: string): number {
  const parts = text.split(":").map(Number);
  if (parts.some(Number.isNaN)) return 0;
  return parts.reduce((total, part) => total * 60 + part, 0);
}

/**
 * Proficiency (solid) and cumulative practice time (dashed) over sessions,
 * oldest to newest.  Values are parsed for point placement only; no
 * derived number is ever displayed as text.
 */
export function renderProgressGraph(rows: PayloadList): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "graph";
  const points = rows
    .map((row) => asMap(row))
    .map((row) => ({
      label: asString(row["started_at"]),
      value: parseFloat(asString(row["proficiency"], "0")) || 0,
      duration: minsecToSeconds(asString(row["duration"], "0:0")),
    }))
    .reverse();
  let running = 0;
  const cumulative = points.map((p) => (running += p.duration));
  const svgNS = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNS, "svg");
  svg.setAttribute("viewBox", "0 0 300 80");
  svg.setAttribute("class", "progress-graph");
  const step = points.length > 1 ? 280 / (points.length - 1) : 0;

  const scale = (values: number[]) => {
    const max = Math.max(...values, 0.1);
    return values.map((v, i) => `${10 + i * step},${72 - (v / max) * 64}`);
  };
  const proficiency = document.createElementNS(svgNS, "polyline");
  proficiency.setAttribute("points", scale(points.map((p) => p.value)).join(" "));
  proficiency.setAttribute("fill", "none");
  proficiency.setAttribute("stroke", "currentColor");
  proficiency.setAttribute("class", "series-proficiency");
  const time = document.createElementNS(svgNS, "polyline");
  time.setAttribute("points", scale(cumulative).join(" "));
  time.setAttribute("fill", "none");
  time.setAttribute("stroke", "currentColor");
  time.setAttribute("stroke-dasharray", "4 3");
  time.setAttribute("class", "series-time");
  svg.append(proficiency, time);
  wrap.appendChild(svg);
  return wrap;
}

export function renderRanking(rows: PayloadList): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "panel ranking";
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "Nobody has scored yet.";
    panel.appendChild(empty);
    return panel;
  }
  panel.appendChild(
    table(
      [
        ["rank", "Rank"],
        ["user_id", "User"],
        ["total_points", "Total Point"],
        ["total_time", "Time"],
      ],
      rows,
      "ranking-table",
    ),
  );
  return panel;
}

const TREND_ICON: Record<string, string> = {
  improved: "▲",
  worsened: "▼",
  steady: "▬",
};

export function renderClassTable(report: PayloadMap): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "panel class-report";
  const weeks = asList(report["weeks"]).map((w) => asString(w));
  const rows = asList(report["rows"]);
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No class activity in these weeks.";
    panel.appendChild(empty);
    return panel;
  }
  const el = document.createElement("table");
  el.className = "class-table";
  const head = document.createElement("tr");
  const corner = document.createElement("th");
  corner.textContent = "Student";
  head.appendChild(corner);
  for (const week of weeks) {
    const th = document.createElement("th");
    th.textContent = week;
    head.appendChild(th);
  }
  el.appendChild(head);
  for (const row of rows) {
    const map = asMap(row);
    const tr = document.createElement("tr");
    const name = document.createElement("th");
    name.textContent = asString(map["user_id"]);
    tr.appendChild(name);
    for (const cell of asList(map["cells"])) {
      const c = asMap(cell);
      const td = document.createElement("td");
      const trend = asString(c["trend"], "-");
      if (trend !== "-") td.classList.add(`trend-${trend}`);
      const grade = document.createElement("span");
      grade.className = "grade";
      grade.textContent = asString(c["grade"], "-");
      const time = document.createElement("span");
      time.className = "time";
      time.textContent = asString(c["cumulative_time"], "-");
      td.append(grade, time);
      if (trend !== "-") {
        const icon = document.createElement("span");
        icon.className = "trend-icon";
        icon.textContent = TREND_ICON[trend] ?? "";
        icon.title = trend;
        td.appendChild(icon);
      }
      tr.appendChild(td);
    }
    el.appendChild(tr);
  }
  panel.appendChild(el);
  return panel;
}

export function renderReportRows(rows: PayloadList, heading: string): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "panel task-report";
  const title = document.createElement("h3");
  title.textContent = heading;
  panel.appendChild(title);
  if (rows.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "Nothing recorded for this view.";
    panel.appendChild(empty);
    return panel;
  }
  panel.appendChild(
    table(
      [
        ["exercise_name", "Task"],
        ["answered", "Answered"],
        ["percentage", "Percentage"],
        ["grade", "Grade"],
      ],
      rows,
      "task-table",
    ),
  );
  return panel;
}
