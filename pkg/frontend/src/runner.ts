/**
 * Exercise runner: fetch the next question, collect the answer, show the
 * server's verdict (never a locally computed one), and finish with the
 * SAVE outcome / GRADE task choice.  A per-question timer feeds elapsed.
 */

import { ApiClient, FeedbackView, QuestionView } from "./api.js";
import { PayloadMap } from "./payload.js";
import { asString } from "./payload.js";

export interface RunnerHooks {
  now?: () => number;
  onFinished?: (summary: PayloadMap) => void;
}

export class ExerciseRunner {
  sessionId = "";
  private questionShownAt = 0;
  private current: QuestionView | null = null;

  constructor(
    private api: ApiClient,
    private root: HTMLElement,
    private hooks: RunnerHooks = {},
  ) {}

  private now(): number {
    return this.hooks.now ? this.hooks.now() : performance.now();
  }

  async start(spec: Record<string, string>, seed: number): Promise<void> {
    const session = await this.api.createSession(spec, seed);
    this.sessionId = session.sessionId;
    await this.advance();
  }

  /** Fetch and render the next question (or the finish choice). */
  async advance(): Promise<void> {
    const question = await this.api.nextQuestion(this.sessionId);
    if (question.done) {
      this.renderFinishChoice();
      return;
    }
    this.current = question;
    this.questionShownAt = this.now();
    this.renderQuestion(question);
  }

  private renderQuestion(question: QuestionView): void {
    this.root.replaceChildren();
    const header = document.createElement("div");
    header.className = "question-header";
    header.textContent = `Question ${question.index} of ${question.total}`;
    const prompt = document.createElement("div");
    prompt.className = "prompt";
    prompt.textContent = question.prompt;
    const translit = document.createElement("div");
    translit.className = "prompt-translit";
    translit.textContent = question.promptTranslit;
    this.root.append(header, prompt, translit);

    const form = document.createElement("form");
    form.className = "answer-form";
    if (question.choices.length > 0) {
      for (const choice of question.choices) {
        const button = document.createElement("button");
        button.type = "button";
        button.className = "choice";
        button.textContent = choice;
        button.addEventListener("click", () => void this.submit(choice));
        form.appendChild(button);
      }
    } else if (question.askedFeatures.length > 0) {
      for (const feature of question.askedFeatures) {
        const label = document.createElement("label");
        label.textContent = feature;
        const input = document.createElement("input");
        input.name = feature;
        input.autocomplete = "off";
        label.appendChild(input);
        form.appendChild(label);
      }
      form.appendChild(this.submitButton(form, question));
    } else {
      const input = document.createElement("input");
      input.name = "answer";
      input.autocomplete = "off";
      form.appendChild(input);
      form.appendChild(this.submitButton(form, question));
    }
    form.addEventListener("submit", (e) => e.preventDefault());
    this.root.appendChild(form);
  }

  private submitButton(form: HTMLFormElement, question: QuestionView): HTMLElement {
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "Check";
    button.addEventListener("click", (e) => {
      e.preventDefault();
      if (question.askedFeatures.length > 0) {
        const submission: Record<string, string> = {};
        for (const feature of question.askedFeatures) {
          const input = form.querySelector<HTMLInputElement>(`input[name="${feature}"]`);
          submission[feature] = input ? input.value : "";
        }
        void this.submit(submission);
      } else {
        const input = form.querySelector<HTMLInputElement>('input[name="answer"]');
        void this.submit(input ? input.value : "");
      }
    });
    return button;
  }

  async submit(submission: string | Record<string, string>): Promise<void> {
    if (!this.current) return;
    const elapsedS = Math.max((this.now() - this.questionShownAt) / 1000, 0.001);
    const feedback = await this.api.answer(
      this.sessionId,
      this.current.id,
      submission,
      elapsedS,
    );
    this.renderFeedback(feedback);
  }

  private renderFeedback(feedback: FeedbackView): void {
    const panel = document.createElement("div");
    panel.className = feedback.overall ? "feedback correct" : "feedback wrong";
    const verdict = document.createElement("div");
    verdict.className = "verdict";
    verdict.textContent = feedback.overall ? "Correct" : "Wrong";
    panel.appendChild(verdict);
    if (!feedback.overall) {
      const table = document.createElement("table");
      for (const item of feedback.perFeature) {
        const tr = document.createElement("tr");
        tr.className = item.correct ? "feature-ok" : "feature-bad";
        const name = document.createElement("td");
        name.textContent = item.feature;
        const expected = document.createElement("td");
        expected.textContent = `expected ${item.expected}`;
        const got = document.createElement("td");
        got.textContent = `got ${item.got}`;
        tr.append(name, expected, got);
        table.appendChild(tr);
      }
      panel.appendChild(table);
    }
    const next = document.createElement("button");
    next.textContent = "Next";
    next.className = "next";
    next.addEventListener("click", () => void this.advance());
    panel.appendChild(next);
    this.root.appendChild(panel);
  }

  private renderFinishChoice(): void {
    this.root.replaceChildren();
    const note = document.createElement("div");
    note.textContent = "All questions answered. Keep this run private or share it?";
    const save = document.createElement("button");
    save.id = "save-outcome";
    save.textContent = "SAVE outcome";
    save.addEventListener("click", () => void this.finish("save_outcome"));
    const gradeBtn = document.createElement("button");
    gradeBtn.id = "grade-task";
    gradeBtn.textContent = "GRADE task";
    gradeBtn.addEventListener("click", () => void this.finish("grade_task"));
    this.root.append(note, save, gradeBtn);
  }

  async finish(mode: "save_outcome" | "grade_task"): Promise<PayloadMap> {
    const summary = await this.api.finish(this.sessionId, mode);
    this.renderSummary(summary, mode);
    if (this.hooks.onFinished) this.hooks.onFinished(summary);
    return summary;
  }

  private renderSummary(summary: PayloadMap, mode: string): void {
    this.root.replaceChildren();
    const card = document.createElement("div");
    card.className = "summary-card";
    const title = document.createElement("div");
    title.className = "summary-title";
    title.textContent = `${asString(summary["exercise_name"])} (${mode})`;
    card.appendChild(title);
    const table = document.createElement("table");
    for (const key of [
      "correct", "wrong", "duration", "seconds_per_right",
      "correct_per_minute", "accuracy", "proficiency",
    ]) {
      const tr = document.createElement("tr");
      const th = document.createElement("th");
      th.textContent = key.replaceAll("_", " ");
      const td = document.createElement("td");
      td.dataset.stat = key;
      td.textContent = asString(summary[key], "-");
      tr.append(th, td);
      table.appendChild(tr);
    }
    card.appendChild(table);
    this.root.appendChild(card);
  }
}
