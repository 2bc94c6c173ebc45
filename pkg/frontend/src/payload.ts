/**
 * Decoder for the service's versioned key=value payload encoding.
 *
 * Line 1: `#corpus-tutor v1 kind=<kind>`; every other line is
 * `dot.path=value`.  Numeric path segments index lists.  All leaf values
 * stay strings: the UI never re-derives a number the server rendered.
 */

const MAGIC = "#corpus-tutor v1 kind=";

export type Leaf = string;
export type PayloadNode = Leaf | PayloadList | PayloadMap;
export interface PayloadMap {
  [key: string]: PayloadNode;
}
export type PayloadList = PayloadNode[];

interface RawMap {
  [key: string]: RawMap | string;
}

function insert(root: RawMap, path: string[], value: string): void {
  let node: RawMap = root;
  for (const segment of path.slice(0, -1)) {
    const next = node[segment];
    if (next === undefined) {
      const fresh: RawMap = {};
      node[segment] = fresh;
      node = fresh;
    } else if (typeof next === "string") {
      throw new Error(`payload path conflict at ${segment}`);
    } else {
      node = next;
    }
  }
  node[path[path.length - 1]] = value;
}

function listify(node: RawMap | string): PayloadNode {
  if (typeof node === "string") return node;
  const keys = Object.keys(node);
  const converted: PayloadMap = {};
  for (const key of keys) converted[key] = listify(node[key]);
  if (keys.length > 0 && keys.every((k) => /^\d+$/.test(k))) {
    const indexes = keys.map(Number).sort((a, b) => a - b);
    if (indexes.every((n, i) => n === i)) {
      return indexes.map((i) => converted[String(i)]);
    }
  }
  return converted;
}

export function decodePayload(text: string): { kind: string; data: PayloadNode } {
  const lines = text.split("\n");
  if (!lines[0] || !lines[0].startsWith(MAGIC)) {
    throw new Error("not a corpus-tutor payload");
  }
  const kind = lines[0].slice(MAGIC.length);
  const root: RawMap = {};
  for (const raw of lines.slice(1)) {
    if (!raw) continue;
    const eq = raw.indexOf("=");
    if (eq < 0) throw new Error(`bad payload line: ${raw}`);
    insert(root, raw.slice(0, eq).split("."), raw.slice(eq + 1));
  }
  return { kind, data: listify(root) };
}

/** Encode a flat request body (plain key=value lines, no magic header). */
export function encodeBody(fields: Record<string, string>): string {
  return (
    Object.entries(fields)
      .map(([key, value]) => `${key}=${value}`)
      .join("\n") + "\n"
  );
}

export function asMap(node: PayloadNode): PayloadMap {
  if (typeof node === "string" || Array.isArray(node)) {
    throw new Error("expected a payload object");
  }
  return node;
}

export function asList(node: PayloadNode | undefined): PayloadList {
  if (node === undefined) return [];
  if (!Array.isArray(node)) throw new Error("expected a payload list");
  return node;
}

export function asString(node: PayloadNode | undefined, fallback = ""): string {
  return typeof node === "string" ? node : fallback;
}
