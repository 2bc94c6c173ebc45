/**
 * End-to-end acceptance: a real `corpus-tutor serve` process, the typed
 * client, and the DOM views.  Covers the Figure-row inventory, a scripted
 * GRADE-task session reaching the facilitator class view, and the
 * zero-client-arithmetic rule (every on-screen statistic string equals the
 * API's rendered string).
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { defaultSettings, renderTextExplorer } from "../src/explorer.js";
import { ExerciseRunner } from "../src/runner.js";
import { renderClassTable, renderLogbook } from "../src/dashboard.js";
import { asList, asMap, asString } from "../src/payload.js";

let server: ChildProcess;
let base = "";

const EXPECTED_LABELS = ["Way0", "WayX", "Way0", "NmCl", "XQt", "Way0", "xQt0"];
const EXPECTED_CTC = ["477", "477", "477", "10", "427", "472", "12"];

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "corpus-tutor-ui-"));
  const tokens = join(dir, "tokens.tsv");
  writeFileSync(
    tokens,
    "tok-alice\talice\tlearner\ntok-prof\tprof\tfacilitator\n",
  );
  server = spawn(
    "python3",
    [
      "-m", "corpus_tutor.cli", "serve", "--port", "0",
      "--log", join(dir, "events.log"), "--auth", tokens,
    ],
    { cwd: join(__dirname, "..", ".."), env: { ...process.env, PYTHONUNBUFFERED: "1" } },
  );
  base = await new Promise<string>((resolve, reject) => {
    let buffer = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/serving on (http:\/\/[\d.]+:\d+)\//);
      if (match) resolve(match[1]);
    });
    server.stderr!.on("data", (chunk: Buffer) => {
      process.stderr.write(chunk);
    });
    server.on("exit", (code) => reject(new Error(`server exited ${code}`)));
    setTimeout(() => reject(new Error("server did not start")), 20000);
  });
});

afterAll(() => {
  server?.kill();
});

describe("text explorer end to end", () => {
  it("renders the Joshua 24:29-33 row inventory", async () => {
    const api = new ApiClient(base, "tok-alice");
    const rows = await api.text("Joshua.24.29", "Joshua.24.33");
    const el = renderTextExplorer(rows, defaultSettings());
    const labels = [...el.querySelectorAll(".clause-label")].map((n) => n.textContent);
    const codes = [...el.querySelectorAll(".clause-ctc")].map((n) => n.textContent);
    expect(labels).toEqual(EXPECTED_LABELS);
    expect(codes).toEqual(EXPECTED_CTC);
    const depths = [...el.querySelectorAll<HTMLElement>(".clause-text")].map(
      (n) => n.dataset.tabDepth,
    );
    expect(depths).toEqual(["0", "0", "0", "1", "0", "0", "1"]);
  });

  it("transliteration mode shows romanized text", async () => {
    const api = new ApiClient(base, "tok-alice");
    const rows = await api.text("Joshua.24.29", "Joshua.24.29");
    const settings = defaultSettings();
    settings.script = "translit";
    const el = renderTextExplorer(rows, settings);
    const first = el.querySelector(".token");
    expect(first?.textContent).toBe("wa");
  });

  it("hover pop-up equals the feature bundle verbatim", async () => {
    const api = new ApiClient(base, "tok-alice");
    const rows = await api.text("Joshua.24.29", "Joshua.24.29");
    const el = renderTextExplorer(rows, defaultSettings());
    document.body.appendChild(el);
    const tokens = el.querySelectorAll<HTMLElement>(".token");
    const bundle = rows[0].words[1];
    tokens[1].dispatchEvent(new Event("mouseenter"));
    const popup = el.querySelector(".popup")!;
    for (const [feature, value] of Object.entries(bundle)) {
      const cell = popup.querySelector(`td[data-feature="${feature}"]`);
      const expected = Array.isArray(value) ? value.join("+") : value;
      expect(cell?.textContent, `popup field ${feature}`).toBe(expected);
    }
    el.remove();
  });
});

describe("scripted session and dashboards", () => {
  it("runs five questions, grades the task, and reaches the class view", async () => {
    const api = new ApiClient(base, "tok-alice");
    const root = document.createElement("div");
    document.body.appendChild(root);
    let fakeNow = 0;
    const runner = new ExerciseRunner(api, root, { now: () => (fakeNow += 4000) });
    await runner.start(
      {
        kind: "vocabulary",
        name: "Vocabulary 1-20",
        scope: "rank:1-20",
        question_count: "5",
        choices_per_question: "4",
      },
      42,
    );
    for (let i = 0; i < 5; i++) {
      const choices = [...root.querySelectorAll<HTMLElement>(".choice")];
      expect(choices.length).toBe(4);
      await runner.submit(choices[0].textContent ?? "");
      expect(root.querySelector(".feedback")).toBeTruthy();
      await runner.advance();
    }
    expect(root.querySelector("#grade-task")).toBeTruthy();
    const summary = await runner.finish("grade_task");

    // The summary card shows the server's strings, character for character.
    for (const key of ["correct", "wrong", "duration", "proficiency"]) {
      const cell = root.querySelector(`td[data-stat="${key}"]`);
      expect(cell?.textContent).toBe(asString(asMap(summary)[key], "-"));
    }

    // Learner logbook gains exactly one row; count balances.
    const logbookRows = await api.logbook();
    expect(logbookRows).toHaveLength(1);
    const row = asMap(logbookRows[0]);
    const c = parseInt(asString(row["correct"]), 10);
    const w = parseInt(asString(row["wrong"]), 10);
    expect(c + w).toBe(5);
    expect(asString(row["mode"])).toBe("grade_task");

    // Facilitator class view shows the graded result after refresh.
    const prof = new ApiClient(base, "tok-prof");
    const today = new Date().toISOString().slice(0, 10);
    const report = await prof.classReport([today]);
    const table = renderClassTable(report);
    const aliceRow = [...table.querySelectorAll("tr")].find(
      (tr) => tr.querySelector("th")?.textContent === "alice",
    );
    expect(aliceRow).toBeTruthy();
    const grade = aliceRow!.querySelector(".grade")?.textContent;
    expect(grade).toBeTruthy();
    expect(grade).not.toBe("-");
    root.remove();
  });

  it("renders logbook statistics exactly as the API strings them", async () => {
    const api = new ApiClient(base, "tok-alice");
    const rows = await api.logbook();
    const panel = renderLogbook(rows);
    for (const [i, rowNode] of rows.entries()) {
      const row = asMap(rowNode);
      const tr = panel.querySelectorAll(".logbook-table tr")[i + 1];
      for (const cell of tr.querySelectorAll<HTMLElement>("td")) {
        const key = cell.dataset.col!;
        expect(cell.textContent, `column ${key}`).toBe(asString(row[key], "-"));
      }
    }
  });

  it("role gate: learner token cannot open the class view", async () => {
    const api = new ApiClient(base, "tok-alice");
    await expect(api.classReport(["2016-09-05"])).rejects.toMatchObject({
      status: 403,
    });
  });

  it("empty dashboards render empty states, not errors", async () => {
    const prof = new ApiClient(base, "tok-prof");
    const rows = await prof.logbook("prof");
    const panel = renderLogbook(rows);
    expect(panel.querySelector(".empty-state")).toBeTruthy();
  });

  it("session expiry surfaces as a catchable API error", async () => {
    const api = new ApiClient(base, "tok-alice");
    await expect(
      api.answer("alice-s999", "q1-x", "word", 2),
    ).rejects.toMatchObject({ status: 404 });
  });
});
