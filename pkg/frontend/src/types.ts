// Wire types mirroring the map JSON served by the pipeline. The client
// treats these as read-only data: every displayed number originates here.

export interface MapNode {
  id: number;
  label: string;
  x: number;
  y: number;
  cluster: number;
  weight_occurrences: number;
  weight_links: number;
  weight_total_link_strength: number;
  score_avg_pub_date: number | null;
}

export interface MapEdge {
  source: number;
  target: number;
  strength: number;
}

export interface MapConfig {
  unit?: string;
  min_occurrences?: number;
  resolution?: number;
  seed?: number;
  restarts?: number;
  max_iterations?: number;
  rel_tolerance?: number;
  jitter_epsilon?: number;
  record_count: number;
  score_low: number | null;
  score_high: number | null;
}

export interface MapDocument {
  nodes: MapNode[];
  edges: MapEdge[];
  config: MapConfig;
}

export interface NeighborEntry {
  id: number;
  label: string;
  strength: number;
}

export interface NeighborsDocument {
  id: number;
  label: string;
  neighbors: NeighborEntry[];
}

export interface DensityDocument {
  bounds: [number, number, number, number];
  bandwidth: number;
  grid: number[][];
}

export type ViewMode = "network" | "overlay" | "density";

export type CurationAction =
  | { kind: "merge"; label: string; target: string }
  | { kind: "remove_term"; label: string }
  | { kind: "remove_term_and_studies"; label: string };

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export interface ViewState {
  mode: ViewMode;
  transform: Transform;
  selectedId: number | null;
  /** fractional-year slider for the emerging-topic overlay cut */
  cutoff: number | null;
  pendingEdits: CurationAction[];
  sessionLog: CurationAction[];
}

export function initialViewState(): ViewState {
  return {
    mode: "network",
    transform: { scale: 1, tx: 0, ty: 0 },
    selectedId: null,
    cutoff: null,
    pendingEdits: [],
    sessionLog: [],
  };
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

/** Structural check of a served map document; throws SchemaError with a
 * pointer to the first offending field. */
export function assertMapDocument(doc: unknown): MapDocument {
  if (typeof doc !== "object" || doc === null) {
    throw new SchemaError("map document is not an object");
  }
  const candidate = doc as Record<string, unknown>;
  if (!Array.isArray(candidate.nodes)) throw new SchemaError("nodes is not an array");
  if (!Array.isArray(candidate.edges)) throw new SchemaError("edges is not an array");
  if (typeof candidate.config !== "object" || candidate.config === null) {
    throw new SchemaError("config is missing");
  }
  candidate.nodes.forEach((node, i) => {
    const n = node as Record<string, unknown>;
    if (!isFiniteNumber(n.id)) throw new SchemaError(`nodes[${i}].id`);
    if (typeof n.label !== "string") throw new SchemaError(`nodes[${i}].label`);
    if (!isFiniteNumber(n.x) || !isFiniteNumber(n.y)) {
      throw new SchemaError(`nodes[${i}] position`);
    }
    if (!isFiniteNumber(n.cluster)) throw new SchemaError(`nodes[${i}].cluster`);
    if (!isFiniteNumber(n.weight_occurrences)) {
      throw new SchemaError(`nodes[${i}].weight_occurrences`);
    }
    if (n.score_avg_pub_date !== null && !isFiniteNumber(n.score_avg_pub_date)) {
      throw new SchemaError(`nodes[${i}].score_avg_pub_date`);
    }
  });
  candidate.edges.forEach((edge, i) => {
    const e = edge as Record<string, unknown>;
    if (!isFiniteNumber(e.source) || !isFiniteNumber(e.target) || !isFiniteNumber(e.strength)) {
      throw new SchemaError(`edges[${i}]`);
    }
  });
  return doc as MapDocument;
}
