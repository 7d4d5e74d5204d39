// Thin-client rendering contract against a golden map JSON produced by
// the pipeline: geometry, monotone size/thickness scales, overlay
// muting, density grid, and selection dimming.

import { describe, expect, it } from "vitest";

import { render, hitTestNode, makeProjection } from "../src/render.js";
import { MUTED_COLOR, scoreColor } from "../src/scales.js";
import { initialViewState, type MapDocument } from "../src/types.js";
import { FakeContext } from "./helpers.js";
import goldenJson from "./fixtures/golden-map.json";

const golden = goldenJson as unknown as MapDocument;
const viewport = { width: 800, height: 600 };

function freshState() {
  return initialViewState();
}

describe("network view", () => {
  it("draws one circle per node and one segment per edge", () => {
    const ctx = new FakeContext();
    render(ctx, viewport, golden, freshState());
    expect(ctx.byOp("arc").length).toBe(golden.nodes.length);
    expect(ctx.byOp("lineTo").length).toBe(golden.edges.length);
  });

  it("node radius is monotone in the occurrence weight", () => {
    const ctx = new FakeContext();
    render(ctx, viewport, golden, freshState());
    const radii = ctx.byOp("arc").map((op) => op.args[2] as number);
    for (let i = 0; i < golden.nodes.length; i++) {
      for (let j = 0; j < golden.nodes.length; j++) {
        const occI = golden.nodes[i].weight_occurrences;
        const occJ = golden.nodes[j].weight_occurrences;
        if (occI < occJ) expect(radii[i]).toBeLessThan(radii[j]);
        if (occI === occJ) expect(radii[i]).toBe(radii[j]);
      }
    }
  });

  it("edge thickness is monotone in the strength", () => {
    const ctx = new FakeContext();
    render(ctx, viewport, golden, freshState());
    const widths = ctx.byOp("stroke").map((op) => op.lineWidth);
    for (let i = 0; i < golden.edges.length; i++) {
      for (let j = 0; j < golden.edges.length; j++) {
        const a = golden.edges[i].strength;
        const b = golden.edges[j].strength;
        if (a < b) expect(widths[i]).toBeLessThan(widths[j]);
      }
    }
  });

  it("renders an empty map as a cleared canvas with a legend", () => {
    const ctx = new FakeContext();
    const empty: MapDocument = {
      nodes: [],
      edges: [],
      config: { record_count: 0, score_low: null, score_high: null },
    };
    render(ctx, viewport, empty, freshState());
    expect(ctx.byOp("clearRect").length).toBe(1);
    expect(ctx.byOp("arc").length).toBe(0);
    expect(ctx.labels().some((text) => text.includes("network view"))).toBe(true);
  });
});

describe("overlay view", () => {
  it("colors nodes by the served score range", () => {
    const ctx = new FakeContext();
    const state = freshState();
    state.mode = "overlay";
    render(ctx, viewport, golden, state);
    const fills = ctx.byOp("fill");
    const low = golden.config.score_low!;
    const high = golden.config.score_high!;
    golden.nodes.forEach((node, i) => {
      if (node.score_avg_pub_date !== null) {
        expect(fills[i].fillStyle).toBe(scoreColor(node.score_avg_pub_date, low, high));
      } else {
        expect(fills[i].fillStyle).toBe(MUTED_COLOR);
      }
    });
  });

  it("mutes nodes at or below the cutoff slider", () => {
    const ctx = new FakeContext();
    const state = freshState();
    state.mode = "overlay";
    const scores = golden.nodes
      .map((n) => n.score_avg_pub_date)
      .filter((s): s is number => s !== null)
      .sort((a, b) => a - b);
    const cutoff = scores[Math.floor(scores.length / 2)];
    state.cutoff = cutoff;
    render(ctx, viewport, golden, state);
    const fills = ctx.byOp("fill");
    golden.nodes.forEach((node, i) => {
      const score = node.score_avg_pub_date;
      if (score === null || score <= cutoff) {
        expect(fills[i].fillStyle).toBe(MUTED_COLOR);
      } else {
        expect(fills[i].fillStyle).not.toBe(MUTED_COLOR);
      }
    });
  });
});

describe("density view", () => {
  it("renders the served grid as filled cells", () => {
    const ctx = new FakeContext();
    const state = freshState();
    state.mode = "density";
    const density = {
      bounds: [-1, 1, -1, 1] as [number, number, number, number],
      bandwidth: 0.2,
      grid: [
        [0, 1, 2],
        [3, 4, 5],
        [6, 7, 8],
      ],
    };
    render(ctx, viewport, golden, state, { density });
    expect(ctx.byOp("fillRect").length).toBe(9);
    expect(ctx.byOp("lineTo").length).toBe(0); // no edges in density mode
  });
});

describe("selection", () => {
  it("dims everything except the selected node and its neighbors", () => {
    const ctx = new FakeContext();
    const state = freshState();
    const selected = golden.nodes[0];
    state.selectedId = selected.id;
    const neighborIds = new Set(
      golden.edges
        .filter((e) => e.source === selected.id || e.target === selected.id)
        .map((e) => (e.source === selected.id ? e.target : e.source)),
    );
    render(ctx, viewport, golden, state, { neighborIds });
    const fills = ctx.byOp("fill");
    golden.nodes.forEach((node, i) => {
      const prominent = node.id === selected.id || neighborIds.has(node.id);
      if (prominent) expect(fills[i].globalAlpha).toBe(1);
      else expect(fills[i].globalAlpha).toBeLessThan(0.5);
    });
  });

  it("hit testing finds the node under the cursor", () => {
    const state = freshState();
    const projection = makeProjection(golden, viewport, state.transform);
    const target = golden.nodes[3];
    const [sx, sy] = projection.toScreen(target.x, target.y);
    const hit = hitTestNode(golden, viewport, state.transform, sx, sy);
    expect(hit?.id).toBe(target.id);
    expect(hitTestNode(golden, viewport, state.transform, -50, -50)).toBeNull();
  });
});
