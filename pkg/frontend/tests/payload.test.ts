import { describe, expect, it } from "vitest";

import { asList, asMap, asString, decodePayload, encodeBody } from "../src/payload.js";

const TEXT_PAYLOAD = [
  "#corpus-tutor v1 kind=text_slice",
  "rows.0.clause.ctc=477",
  "rows.0.clause.label=Way0",
  "rows.0.clause.tab_depth=0",
  "rows.0.words.0.surface=וַ",
  "rows.0.words.0.translit=wa",
  "rows.1.clause.ctc=10",
  "rows.1.clause.label=NmCl",
  "rows.1.clause.tab_depth=1",
  "",
].join("\n");

describe("decodePayload", () => {
  it("parses kinds and nested lists", () => {
    const { kind, data } = decodePayload(TEXT_PAYLOAD);
    expect(kind).toBe("text_slice");
    const rows = asList(asMap(data)["rows"]);
    expect(rows).toHaveLength(2);
    expect(asString(asMap(asMap(rows[0])["clause"])["label"])).toBe("Way0");
    expect(asString(asMap(asMap(rows[1])["clause"])["ctc"])).toBe("10");
    const word = asMap(asList(asMap(rows[0])["words"])[0]);
    expect(asString(word["translit"])).toBe("wa");
  });

  it("keeps every leaf a string (no client-side number parsing)", () => {
    const { data } = decodePayload(
      "#corpus-tutor v1 kind=logbook\nrows.0.proficiency=1.3\nrows.0.accuracy=5\n",
    );
    const row = asMap(asList(asMap(data)["rows"])[0]);
    expect(row["proficiency"]).toBe("1.3");
    expect(row["accuracy"]).toBe("5");
  });

  it("treats values containing equals signs as raw text", () => {
    const { data } = decodePayload("#corpus-tutor v1 kind=x\nmessage=a=b=c\n");
    expect(asString(asMap(data)["message"])).toBe("a=b=c");
  });

  it("rejects non-payload text", () => {
    expect(() => decodePayload("hello")).toThrow();
  });

  it("keeps sparse numeric keys as maps, dense ones as lists", () => {
    const dense = decodePayload("#corpus-tutor v1 kind=x\na.0=p\na.1=q\n");
    expect(asList(asMap(dense.data)["a"])).toEqual(["p", "q"]);
    const sparse = decodePayload("#corpus-tutor v1 kind=x\na.0=p\na.2=q\n");
    expect(Array.isArray(asMap(sparse.data)["a"])).toBe(false);
  });
});

describe("encodeBody", () => {
  it("emits plain key=value lines", () => {
    expect(encodeBody({ kind: "typing", seed: "7" })).toBe("kind=typing\nseed=7\n");
  });
});
