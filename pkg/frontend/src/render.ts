// Canvas renderer for the three map views. The context is typed as the
// small surface the renderer touches so tests can substitute a recorder.

import {
  clusterColor,
  densityColor,
  edgeWidth,
  MUTED_COLOR,
  nodeRadius,
  scoreColor,
} from "./scales.js";
import type {
  DensityDocument,
  MapDocument,
  MapNode,
  Transform,
  ViewState,
} from "./types.js";

export interface Canvas2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  stroke(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Viewport {
  width: number;
  height: number;
}

const LABEL_MIN_SCREEN_RADIUS = 7;
const MAX_LABELS = 40;
const DIM_ALPHA = 0.15;

export interface Projection {
  toScreen(x: number, y: number): [number, number];
  toWorld(sx: number, sy: number): [number, number];
  pixelsPerUnit: number;
}

export function makeProjection(
  map: MapDocument,
  viewport: Viewport,
  transform: Transform,
): Projection {
  let spread = 1;
  let cx = 0;
  let cy = 0;
  if (map.nodes.length > 0) {
    const xs = map.nodes.map((n) => n.x);
    const ys = map.nodes.map((n) => n.y);
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    const yMin = Math.min(...ys);
    const yMax = Math.max(...ys);
    spread = Math.max(xMax - xMin, yMax - yMin, 1e-9);
    cx = (xMin + xMax) / 2;
    cy = (yMin + yMax) / 2;
  }
  const fit = (0.85 * Math.min(viewport.width, viewport.height)) / spread;
  const k = fit * transform.scale;
  const ox = viewport.width / 2 + transform.tx;
  const oy = viewport.height / 2 + transform.ty;
  return {
    // y flipped: map y grows upward, canvas y grows downward
    toScreen: (x, y) => [ox + (x - cx) * k, oy - (y - cy) * k],
    toWorld: (sx, sy) => [cx + (sx - ox) / k, cy - (sy - oy) / k],
    pixelsPerUnit: k,
  };
}

function occurrenceRange(map: MapDocument): [number, number] {
  let min = Infinity;
  let max = -Infinity;
  for (const node of map.nodes) {
    min = Math.min(min, node.weight_occurrences);
    max = Math.max(max, node.weight_occurrences);
  }
  return [min, max];
}

function strengthRange(map: MapDocument): [number, number] {
  let min = Infinity;
  let max = -Infinity;
  for (const edge of map.edges) {
    min = Math.min(min, edge.strength);
    max = Math.max(max, edge.strength);
  }
  return [min, max];
}

export function screenRadius(
  node: MapNode,
  map: MapDocument,
  transform: Transform,
): number {
  const [minOcc, maxOcc] = occurrenceRange(map);
  return nodeRadius(node.weight_occurrences, minOcc, maxOcc) * Math.sqrt(transform.scale);
}

function nodeFill(node: MapNode, map: MapDocument, state: ViewState): {
  color: string;
  muted: boolean;
} {
  if (state.mode === "overlay") {
    const { score_low: low, score_high: high } = map.config;
    const score = node.score_avg_pub_date;
    if (score === null || low === null || high === null) {
      return { color: MUTED_COLOR, muted: true };
    }
    if (state.cutoff !== null && score <= state.cutoff) {
      return { color: MUTED_COLOR, muted: true };
    }
    return { color: scoreColor(score, low, high), muted: false };
  }
  return { color: clusterColor(node.cluster), muted: false };
}

export interface RenderExtras {
  density?: DensityDocument | null;
  /** neighbor ids of the selected node, from GET /node/{id}/neighbors */
  neighborIds?: Set<number> | null;
}

export function render(
  ctx: Canvas2D,
  viewport: Viewport,
  map: MapDocument,
  state: ViewState,
  extras: RenderExtras = {},
): void {
  ctx.globalAlpha = 1;
  ctx.clearRect(0, 0, viewport.width, viewport.height);
  const projection = makeProjection(map, viewport, state.transform);

  if (state.mode === "density" && extras.density) {
    drawDensity(ctx, viewport, extras.density, projection);
  }

  if (state.mode !== "density") {
    drawEdges(ctx, map, state, projection, extras);
  }
  drawNodes(ctx, map, state, projection, extras);
  drawLabels(ctx, map, state, projection);
  drawLegend(ctx, viewport, map, state);
}

function isDimmed(nodeId: number, state: ViewState, extras: RenderExtras): boolean {
  if (state.selectedId === null) return false;
  if (nodeId === state.selectedId) return false;
  return !(extras.neighborIds?.has(nodeId) ?? false);
}

function drawEdges(
  ctx: Canvas2D,
  map: MapDocument,
  state: ViewState,
  projection: Projection,
  extras: RenderExtras,
): void {
  const [minS, maxS] = strengthRange(map);
  const byId = new Map(map.nodes.map((n) => [n.id, n]));
  for (const edge of map.edges) {
    const a = byId.get(edge.source);
    const b = byId.get(edge.target);
    if (!a || !b) continue;
    // with a selection, only edges incident to it stay prominent
    const dimmed =
      state.selectedId !== null &&
      a.id !== state.selectedId &&
      b.id !== state.selectedId;
    ctx.globalAlpha = dimmed ? DIM_ALPHA : 0.55;
    ctx.strokeStyle = "#9aa5b1";
    ctx.lineWidth = edgeWidth(edge.strength, minS, maxS);
    const [ax, ay] = projection.toScreen(a.x, a.y);
    const [bx, by] = projection.toScreen(b.x, b.y);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
  }
  ctx.globalAlpha = 1;
}

function drawNodes(
  ctx: Canvas2D,
  map: MapDocument,
  state: ViewState,
  projection: Projection,
  extras: RenderExtras,
): void {
  const [minOcc, maxOcc] = occurrenceRange(map);
  for (const node of map.nodes) {
    const { color, muted } = nodeFill(node, map, state);
    const dimmed = isDimmed(node.id, state, extras);
    ctx.globalAlpha = dimmed ? DIM_ALPHA : muted ? 0.45 : 1;
    ctx.fillStyle = color;
    const [sx, sy] = projection.toScreen(node.x, node.y);
    const radius =
      nodeRadius(node.weight_occurrences, minOcc, maxOcc) *
      Math.sqrt(state.transform.scale);
    ctx.beginPath();
    ctx.arc(sx, sy, radius, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.globalAlpha = 1;
}

function drawLabels(
  ctx: Canvas2D,
  map: MapDocument,
  state: ViewState,
  projection: Projection,
): void {
  const [minOcc, maxOcc] = occurrenceRange(map);
  const candidates = map.nodes
    .map((node) => ({
      node,
      radius:
        nodeRadius(node.weight_occurrences, minOcc, maxOcc) *
        Math.sqrt(state.transform.scale),
    }))
    .filter(({ node, radius }) =>
      radius >= LABEL_MIN_SCREEN_RADIUS || node.id === state.selectedId,
    )
    .sort((a, b) => b.node.weight_occurrences - a.node.weight_occurrences)
    .slice(0, MAX_LABELS);

  ctx.font = "11px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "top";
  ctx.fillStyle = "#1b1f24";
  for (const { node, radius } of candidates) {
    const [sx, sy] = projection.toScreen(node.x, node.y);
    ctx.fillText(node.label, sx, sy + radius + 2);
  }
}

function drawDensity(
  ctx: Canvas2D,
  viewport: Viewport,
  density: DensityDocument,
  projection: Projection,
): void {
  const grid = density.grid;
  const ny = grid.length;
  if (ny === 0) return;
  const nx = grid[0].length;
  const [xMin, xMax, yMin, yMax] = density.bounds;
  let peak = 0;
  for (const row of grid) for (const v of row) peak = Math.max(peak, v);
  const dx = (xMax - xMin) / (nx - 1);
  const dy = (yMax - yMin) / (ny - 1);
  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      const wx = xMin + ix * dx;
      const wy = yMin + iy * dy;
      const [sx, sy] = projection.toScreen(wx - dx / 2, wy + dy / 2);
      const [sx2, sy2] = projection.toScreen(wx + dx / 2, wy - dy / 2);
      ctx.fillStyle = densityColor(grid[iy][ix], peak);
      ctx.globalAlpha = 0.9;
      ctx.fillRect(sx, sy, sx2 - sx, sy2 - sy);
    }
  }
  ctx.globalAlpha = 1;
}

function drawLegend(
  ctx: Canvas2D,
  viewport: Viewport,
  map: MapDocument,
  state: ViewState,
): void {
  ctx.globalAlpha = 1;
  ctx.font = "12px system-ui, sans-serif";
  ctx.textAlign = "left";
  ctx.textBaseline = "top";
  ctx.fillStyle = "#1b1f24";
  const parts = [`${state.mode} view`, `${map.nodes.length} items`];
  if (state.mode === "overlay" && state.cutoff !== null) {
    parts.push(`cutoff ${state.cutoff.toFixed(3)}`);
  }
  ctx.fillText(parts.join(" - "), 8, 8);
}

/** Topmost node under a screen point, by the same radii the renderer uses. */
export function hitTestNode(
  map: MapDocument,
  viewport: Viewport,
  transform: Transform,
  sx: number,
  sy: number,
): MapNode | null {
  const projection = makeProjection(map, viewport, transform);
  const [minOcc, maxOcc] = occurrenceRange(map);
  let best: MapNode | null = null;
  let bestRadius = Infinity;
  for (const node of map.nodes) {
    const [nx, ny] = projection.toScreen(node.x, node.y);
    const radius =
      nodeRadius(node.weight_occurrences, minOcc, maxOcc) * Math.sqrt(transform.scale);
    const hit = (sx - nx) ** 2 + (sy - ny) ** 2 <= radius ** 2;
    if (hit && radius < bestRadius) {
      best = node;
      bestRadius = radius;
    }
  }
  return best;
}
