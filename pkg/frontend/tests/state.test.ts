import { describe, expect, it } from "vitest";

import {
  chartRequest,
  indexAttributes,
  initialState,
  queryArity,
  selectionLimit,
  setFlow,
  setMode,
  toggleSelection,
} from "../src/state.js";
import { catalogFixture } from "./fixtures.js";

const index = indexAttributes(catalogFixture());

describe("selection limits", () => {
  it("rollup and partition take one attribute", () => {
    expect(selectionLimit("Rollup", false)).toBe(1);
    expect(selectionLimit("Partition", false)).toBe(1);
  });

  it("stratify takes two, three with flow", () => {
    expect(selectionLimit("Stratify", false)).toBe(2);
    expect(selectionLimit("Stratify", true)).toBe(3);
  });

  it("explode takes exactly two", () => {
    expect(selectionLimit("Explode", false)).toBe(2);
  });
});

describe("toggleSelection", () => {
  it("appends in click order", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    expect(state.selection).toEqual(["Enc.Age", "Enc.Gender"]);
  });

  it("clicking a selected attribute deselects it", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    state = toggleSelection(state, "Enc.Age");
    expect(state.selection).toEqual(["Enc.Gender"]);
  });

  it("evicts the oldest selection beyond the limit", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    state = toggleSelection(state, "d3");
    expect(state.selection).toEqual(["Enc.Gender", "d3"]);
  });

  it("switching mode trims to the newest selections", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    state = setMode(state, "Rollup");
    expect(state.selection).toEqual(["Enc.Gender"]);
  });

  it("disabling flow trims a third selection", () => {
    let state = setFlow(setMode(initialState(), "Stratify"), true);
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    state = toggleSelection(state, "d3");
    expect(state.selection).toHaveLength(3);
    state = setFlow(state, false);
    expect(state.selection).toEqual(["Enc.Gender", "d3"]);
  });
});

describe("queryArity guards", () => {
  it("is null until the arity fits, so nothing invalid is ever sent", () => {
    let state = setMode(initialState(), "Stratify");
    expect(queryArity(state)).toBeNull();
    state = toggleSelection(state, "Enc.Age");
    expect(queryArity(state)).toBeNull();
    state = toggleSelection(state, "Enc.Gender");
    expect(queryArity(state)).toBe(2);
  });

  it("flow accepts two or three", () => {
    let state = setFlow(setMode(initialState(), "Stratify"), true);
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    expect(queryArity(state)).toBe(2);
    state = toggleSelection(state, "d3");
    expect(queryArity(state)).toBe(3);
  });
});

describe("chartRequest", () => {
  it("rollup of a quantitative attribute dispatches to histogram", () => {
    let state = initialState();
    state = toggleSelection(state, "Enc.Score");
    const request = chartRequest(state, index.datasetOf, index.kindOf);
    expect(request?.mode).toBe("histogram");
  });

  it("rollup of a categorical attribute stays rollup", () => {
    let state = initialState();
    state = toggleSelection(state, "Enc.Gender");
    expect(chartRequest(state, index.datasetOf, index.kindOf)?.mode).toBe("rollup");
  });

  it("partition forwards granularity, values, accumulate", () => {
    let state = setMode(initialState(), "Partition");
    state = toggleSelection(state, "Enc.Gender");
    state = { ...state, options: { ...state.options, granularity: "week", cumulative: true } };
    const request = chartRequest(state, index.datasetOf, index.kindOf);
    expect(request).toMatchObject({ mode: "partition", granularity: "week", accumulate: true });
  });

  it("stratify order maps first selection to bars", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    const request = chartRequest(state, index.datasetOf, index.kindOf);
    expect(request?.attrs).toEqual(["Enc.Age", "Enc.Gender"]);
    expect(request?.mode).toBe("stratify");
  });

  it("flow toggle switches stratify to flow", () => {
    let state = setFlow(setMode(initialState(), "Stratify"), true);
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Enc.Gender");
    expect(chartRequest(state, index.datasetOf, index.kindOf)?.mode).toBe("flow");
  });

  it("cross-dataset selections are never sent", () => {
    let state = setMode(initialState(), "Stratify");
    state = toggleSelection(state, "Enc.Age");
    state = toggleSelection(state, "Survey.Grade");
    expect(chartRequest(state, index.datasetOf, index.kindOf)).toBeNull();
  });

  it("incomplete selections are never sent", () => {
    const state = setMode(initialState(), "Stratify");
    expect(chartRequest(state, index.datasetOf, index.kindOf)).toBeNull();
  });
});
