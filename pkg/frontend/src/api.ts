/** Typed client over the versioned /api/v1 endpoints. */

import {
  PayloadList,
  PayloadMap,
  PayloadNode,
  asList,
  asMap,
  asString,
  decodePayload,
  encodeBody,
} from "./payload.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface WordBundle {
  [feature: string]: PayloadNode;
}

export interface ClauseRow {
  clause: PayloadMap;
  words: WordBundle[];
}

export interface QuestionView {
  done: boolean;
  id: string;
  index: string;
  total: string;
  kind: string;
  prompt: string;
  promptTranslit: string;
  choices: string[];
  askedFeatures: string[];
}

export interface FeedbackView {
  overall: boolean;
  perFeature: { feature: string; correct: boolean; expected: string; got: string }[];
}

export class ApiClient {
  constructor(
    public baseUrl: string,
    public token: string,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: string,
  ): Promise<PayloadMap> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: { Authorization: `Bearer ${this.token}` },
      body,
    });
    const text = await response.text();
    const { kind, data } = decodePayload(text);
    if (!response.ok || kind === "error") {
      const error = asMap(asMap(data)["error"] ?? {});
      throw new ApiError(
        response.status,
        asString(error["message"], `request failed (${response.status})`),
      );
    }
    return asMap(data);
  }

  async text(from: string, to: string): Promise<ClauseRow[]> {
    const data = await this.request(
      "GET",
      `/api/v1/text?from=${encodeURIComponent(from)}&to=${encodeURIComponent(to)}`,
    );
    return asList(data["rows"]).map((row) => {
      const map = asMap(row);
      return {
        clause: asMap(map["clause"]),
        words: asList(map["words"]).map((w) => asMap(w) as WordBundle),
      };
    });
  }

  async createSession(
    spec: Record<string, string>,
    seed: number,
  ): Promise<{ sessionId: string; name: string; questionCount: string }> {
    const data = await this.request(
      "POST",
      "/api/v1/sessions",
      encodeBody({ ...spec, seed: String(seed) }),
    );
    return {
      sessionId: asString(data["session_id"]),
      name: asString(data["name"]),
      questionCount: asString(data["question_count"]),
    };
  }

  async nextQuestion(sessionId: string): Promise<QuestionView> {
    const data = await this.request("GET", `/api/v1/sessions/${sessionId}/next`);
    return {
      done: asString(data["done"]) === "1",
      id: asString(data["id"]),
      index: asString(data["index"]),
      total: asString(data["total"]),
      kind: asString(data["kind"]),
      prompt: asString(data["prompt"]),
      promptTranslit: asString(data["prompt_translit"]),
      choices: asList(data["choices"]).map((c) => asString(c)),
      askedFeatures: asList(data["asked_features"]).map((f) => asString(f)),
    };
  }

  async answer(
    sessionId: string,
    questionId: string,
    submission: string | Record<string, string>,
    elapsedS: number,
  ): Promise<FeedbackView> {
    const fields: Record<string, string> = {
      question_id: questionId,
      elapsed_s: String(elapsedS),
    };
    if (typeof submission === "string") {
      fields["answer"] = submission;
    } else {
      for (const [feature, value] of Object.entries(submission)) {
        fields[`answer.${feature}`] = value;
      }
    }
    const data = await this.request(
      "POST",
      `/api/v1/sessions/${sessionId}/answer`,
      encodeBody(fields),
    );
    return {
      overall: asString(data["overall"]) === "1",
      perFeature: asList(data["per_feature"]).map((item) => {
        const map = asMap(item);
        return {
          feature: asString(map["feature"]),
          correct: asString(map["correct"]) === "1",
          expected: asString(map["expected"]),
          got: asString(map["got"]),
        };
      }),
    };
  }

  async finish(
    sessionId: string,
    mode: "save_outcome" | "grade_task",
  ): Promise<PayloadMap> {
    return this.request("POST", `/api/v1/sessions/${sessionId}/finish?mode=${mode}`);
  }

  async logbook(user?: string): Promise<PayloadList> {
    const suffix = user ? `?user=${encodeURIComponent(user)}` : "";
    return asList((await this.request("GET", `/api/v1/stats/logbook${suffix}`))["rows"]);
  }

  async ranking(): Promise<PayloadList> {
    return asList((await this.request("GET", "/api/v1/stats/ranking"))["rows"]);
  }

  async classReport(weeks: string[], users?: string[]): Promise<PayloadMap> {
    let path = `/api/v1/stats/class?weeks=${weeks.join(",")}`;
    if (users && users.length) path += `&users=${users.join(",")}`;
    return this.request("GET", path);
  }

  async tasks(user?: string): Promise<PayloadList> {
    const suffix = user ? `?user=${encodeURIComponent(user)}` : "";
    return asList((await this.request("GET", `/api/v1/stats/tasks${suffix}`))["rows"]);
  }

  async tests(user: string | undefined, test: string): Promise<PayloadList> {
    const params = new URLSearchParams();
    if (user) params.set("user", user);
    params.set("test", test);
    return asList(
      (await this.request("GET", `/api/v1/stats/tests?${params.toString()}`))["rows"],
    );
  }
}
