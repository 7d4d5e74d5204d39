// Recording stand-in for the canvas context: captures every draw call
// with the style values in effect, so tests can assert on the output.

import type { Canvas2D } from "../src/render.js";

export interface RecordedOp {
  op: string;
  args: unknown[];
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  globalAlpha: number;
}

export class FakeContext implements Canvas2D {
  fillStyle: string = "#000";
  strokeStyle: string = "#000";
  lineWidth = 1;
  globalAlpha = 1;
  font = "";
  textAlign = "";
  textBaseline = "";
  ops: RecordedOp[] = [];

  private record(op: string, ...args: unknown[]): void {
    this.ops.push({
      op,
      args,
      fillStyle: String(this.fillStyle),
      strokeStyle: String(this.strokeStyle),
      lineWidth: this.lineWidth,
      globalAlpha: this.globalAlpha,
    });
  }

  clearRect(...args: number[]) { this.record("clearRect", ...args); }
  fillRect(...args: number[]) { this.record("fillRect", ...args); }
  beginPath() { this.record("beginPath"); }
  arc(...args: number[]) { this.record("arc", ...args); }
  fill() { this.record("fill"); }
  stroke() { this.record("stroke"); }
  moveTo(...args: number[]) { this.record("moveTo", ...args); }
  lineTo(...args: number[]) { this.record("lineTo", ...args); }
  fillText(text: string, x: number, y: number) { this.record("fillText", text, x, y); }

  byOp(op: string): RecordedOp[] {
    return this.ops.filter((entry) => entry.op === op);
  }

  labels(): string[] {
    return this.byOp("fillText").map((entry) => String(entry.args[0]));
  }
}

type Route = (init?: RequestInit) => { status: number; body: unknown };

/** Scripted fetch: routes keyed "METHOD path", recording every call. */
export function makeFakeFetch(routes: Record<string, Route | Route[]>) {
  const calls: Array<{ method: string; url: string; body: string | null }> = [];
  const remaining = new Map<string, Route[]>();
  for (const [key, value] of Object.entries(routes)) {
    remaining.set(key, Array.isArray(value) ? [...value] : [value]);
  }
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    calls.push({
      method,
      url,
      body: typeof init?.body === "string" ? init.body : null,
    });
    const key = `${method} ${url}`;
    const queue = remaining.get(key);
    if (!queue || queue.length === 0) {
      throw new Error(`unexpected request: ${key}`);
    }
    const route = queue.length > 1 ? queue.shift()! : queue[0];
    const { status, body } = route(init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}
