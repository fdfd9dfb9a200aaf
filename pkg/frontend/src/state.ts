/** UI state and the mode/arity rules that gate every chart request.
 *
 * Selection order is significant: it decides bars vs segments and the flow
 * stage order, so the newest click is always kept and the oldest selection
 * is evicted when a mode's limit is exceeded. Invalid arities are never
 * sent to the server; `queryArity` returns null until the selection fits.
 */

export type Mode = "Rollup" | "Partition" | "Stratify" | "Explode";

export interface DetailOptions {
  granularity: "day" | "week" | "month";
  percentage: boolean;
  cumulative: boolean;
  flow: boolean;
  bands: boolean;
}

export interface UiState {
  mode: Mode;
  selection: string[];
  activeConcern: string;
  options: DetailOptions;
}

export function initialState(activeConcern = "All"): UiState {
  return {
    mode: "Rollup",
    selection: [],
    activeConcern,
    options: { granularity: "day", percentage: false, cumulative: false, flow: false, bands: true },
  };
}

export function selectionLimit(mode: Mode, flow: boolean): number {
  switch (mode) {
    case "Rollup":
    case "Partition":
      return 1;
    case "Explode":
      return 2;
    case "Stratify":
      return flow ? 3 : 2;
  }
}

/** Click semantics: toggle off if selected, else append, evicting the oldest. */
export function toggleSelection(state: UiState, attributeId: string): UiState {
  const limit = selectionLimit(state.mode, state.options.flow);
  let selection: string[];
  if (state.selection.includes(attributeId)) {
    selection = state.selection.filter((id) => id !== attributeId);
  } else {
    selection = [...state.selection, attributeId];
    while (selection.length > limit) {
      selection.shift();
    }
  }
  return { ...state, selection };
}

export function setMode(state: UiState, mode: Mode): UiState {
  const limit = selectionLimit(mode, state.options.flow);
  const selection = state.selection.slice(-limit);
  return { ...state, mode, selection };
}

export function setFlow(state: UiState, flow: boolean): UiState {
  const options = { ...state.options, flow };
  const limit = selectionLimit(state.mode, flow);
  return { ...state, options, selection: state.selection.slice(-limit) };
}

/** Number of attributes the query needs, or null while the selection is invalid. */
export function queryArity(state: UiState): number | null {
  const n = state.selection.length;
  switch (state.mode) {
    case "Rollup":
    case "Partition":
      return n === 1 ? 1 : null;
    case "Explode":
      return n === 2 ? 2 : null;
    case "Stratify":
      if (state.options.flow) {
        return n === 2 || n === 3 ? n : null;
      }
      return n === 2 ? 2 : null;
  }
}

export interface ChartRequest {
  mode: "rollup" | "histogram" | "partition" | "stratify" | "flow";
  dataset: string;
  attrs: string[];
  granularity?: string;
  values?: string;
  accumulate?: boolean;
}

/** Translate UI state into the server chart request, or null if not ready.
 * Rollup of a quantitative attribute dispatches to the histogram mode. */
export function chartRequest(
  state: UiState,
  datasetOf: (attributeId: string) => string,
  kindOf: (attributeId: string) => string,
): ChartRequest | null {
  if (queryArity(state) === null || state.mode === "Explode") {
    return null;
  }
  const attrs = state.selection;
  const dataset = datasetOf(attrs[0]);
  if (!attrs.every((a) => datasetOf(a) === dataset)) {
    return null; // cross-dataset strata are a server error; never send them
  }
  if (state.mode === "Rollup") {
    const mode = kindOf(attrs[0]) === "quantitative" ? "histogram" : "rollup";
    return { mode, dataset, attrs };
  }
  if (state.mode === "Partition") {
    return {
      mode: "partition",
      dataset,
      attrs,
      granularity: state.options.granularity,
      values: state.options.percentage ? "percentage" : "absolute",
      accumulate: state.options.cumulative,
    };
  }
  if (state.options.flow) {
    return { mode: "flow", dataset, attrs };
  }
  return { mode: "stratify", dataset, attrs };
}

/** Catalog lookups used across panels. */
export interface AttributeIndex {
  datasetOf: (attributeId: string) => string;
  kindOf: (attributeId: string) => string;
  get: (attributeId: string) => import("./types.js").AttributeInfo | undefined;
}

export function indexAttributes(catalog: import("./types.js").Catalog): AttributeIndex {
  const byId = new Map<string, { attr: import("./types.js").AttributeInfo; dataset: string }>();
  for (const ds of catalog.datasets) {
    for (const attr of ds.attributes) {
      byId.set(attr.id, { attr, dataset: ds.id });
    }
  }
  return {
    datasetOf: (id) => byId.get(id)?.dataset ?? "",
    kindOf: (id) => byId.get(id)?.attr.kind ?? "",
    get: (id) => byId.get(id)?.attr,
  };
}
