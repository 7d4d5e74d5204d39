// The curation round trip: validate, POST /thesaurus, POST /rebuild,
// hand the fresh map back. Edits are submitted one at a time so every
// rebuild is attributable to a single rule.

import { ApiClient, ApiError } from "./api.js";
import { actionToTsvLine, validateAction } from "./state.js";
import type { CurationAction, MapDocument, ViewState } from "./types.js";

export class CurationError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CurationError";
  }
}

const REBUILD_RETRY_DELAY_MS = 500;

function delay(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export interface CurateOptions {
  retryDelayMs?: number;
}

/** Submit one staged action; resolves to the rebuilt map. A 409 from the
 * rebuild (another rebuild in flight) is retried once; a 400 surfaces as
 * a CurationError with the server's message. */
export async function curate(
  api: ApiClient,
  action: CurationAction,
  state: ViewState,
  currentMap: MapDocument | null,
  options: CurateOptions = {},
): Promise<MapDocument> {
  const problem = validateAction(action, currentMap, state.pendingEdits);
  if (problem !== null) throw new CurationError(problem);

  state.pendingEdits.push(action);
  try {
    try {
      await api.postThesaurus(actionToTsvLine(action) + "\n");
    } catch (error) {
      if (error instanceof ApiError) {
        throw new CurationError(`rule rejected: ${error.message}`);
      }
      throw error;
    }

    let rebuilt: MapDocument;
    try {
      rebuilt = await api.postRebuild();
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await delay(options.retryDelayMs ?? REBUILD_RETRY_DELAY_MS);
        rebuilt = await api.postRebuild();
      } else {
        throw error;
      }
    }

    state.sessionLog.push(action);
    return rebuilt;
  } finally {
    const index = state.pendingEdits.indexOf(action);
    if (index >= 0) state.pendingEdits.splice(index, 1);
  }
}
