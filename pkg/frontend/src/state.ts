// Client-side edit staging: schema validation before anything goes over
// the wire, plus the session log that exports as a thesaurus TSV the CLI
// can replay.

import type { CurationAction, MapDocument } from "./types.js";

export const THESAURUS_HEADER = "label\taction\ttarget";

/** Mirrors the server's label canonicalization (validation only). */
export function canonicalLabel(raw: string): string {
  return raw.split(/\s+/).filter((part) => part.length > 0).join(" ").toLowerCase();
}

export function validateAction(
  action: CurationAction,
  map: MapDocument | null,
  pending: CurationAction[],
): string | null {
  const label = canonicalLabel(action.label);
  if (!label) return "label must not be empty";
  if (action.kind === "merge") {
    const target = canonicalLabel(action.target);
    if (!target) return "merge target must not be empty";
    if (target === label) return "a label cannot merge into itself";
  }
  if (map !== null) {
    const known = new Set(map.nodes.map((node) => node.label));
    if (!known.has(label)) return `unknown label: ${label}`;
    if (action.kind === "merge" && !known.has(canonicalLabel(action.target))) {
      return `unknown merge target: ${canonicalLabel(action.target)}`;
    }
  }
  for (const earlier of pending) {
    if (canonicalLabel(earlier.label) === label) {
      return `a rule for ${label} is already staged`;
    }
  }
  return null;
}

export function actionToTsvLine(action: CurationAction): string {
  const label = canonicalLabel(action.label);
  if (action.kind === "merge") {
    return `${label}\tmerge\t${canonicalLabel(action.target)}`;
  }
  return `${label}\t${action.kind}`;
}

/** Session log as a thesaurus TSV; replaying it through the CLI rebuilds
 * the exact served map. */
export function exportSessionThesaurus(log: CurationAction[]): string {
  const lines = [THESAURUS_HEADER, ...log.map(actionToTsvLine)];
  return lines.join("\n") + "\n";
}
