/** Shared fixture data shaped exactly like the server's catalog/results. */

import type {
  Catalog,
  CrossTabResult,
  HistogramResult,
  PartitionResult,
  RollupResult,
  SankeyResult,
} from "../src/types.js";

export function catalogFixture(): Catalog {
  return {
    datasets: [
      {
        id: "Enc",
        name: "Enc",
        row_count: 5,
        time_attribute: "Enc.When",
        attributes: [
          {
            id: "Enc.When", name: "When", kind: "datetime", units: null,
            origin: "original", chartable: true, levels: null,
          },
          {
            id: "Enc.Gender", name: "Gender", kind: "categorical", units: null,
            origin: "original", chartable: true,
            levels: [
              { name: "F", color: "#4E79A7" },
              { name: "M", color: "#F28E2B" },
              { name: "NULL", color: "#BAB0AC" },
            ],
          },
          {
            id: "Enc.Age", name: "Age", kind: "categorical", units: null,
            origin: "original", chartable: true,
            levels: [
              { name: "Y", color: "#59A14F" },
              { name: "O", color: "#E15759" },
            ],
          },
          {
            id: "Enc.Score", name: "Score", kind: "quantitative", units: "count",
            origin: "original", chartable: true, levels: null,
          },
          {
            id: "d3", name: "Age (copy)", kind: "categorical", units: null,
            origin: "derived", chartable: true,
            levels: [{ name: "Y", color: "#59A14F" }],
          },
        ],
      },
      {
        id: "Survey",
        name: "Survey",
        row_count: 2,
        time_attribute: "Survey.When",
        attributes: [
          {
            id: "Survey.When", name: "When", kind: "datetime", units: null,
            origin: "original", chartable: true, levels: null,
          },
          {
            id: "Survey.Grade", name: "Grade", kind: "ordered", units: null,
            origin: "original", chartable: true,
            levels: [
              { name: "1", color: "#111111" },
              { name: "2", color: "#222222" },
            ],
          },
        ],
      },
    ],
    concerns: [
      {
        name: "All",
        members: ["Enc.When", "Enc.Gender", "Enc.Age", "Enc.Score", "d3", "Survey.When", "Survey.Grade"],
        origin: "default",
      },
      { name: "Mine", members: ["Enc.Gender", "Survey.Grade"], origin: "logged" },
    ],
    active_concern: "All",
    active_range: { start: "2021-01-01", end: "2021-01-05" },
  };
}

export function rollupFixture(): RollupResult {
  return {
    attribute_id: "Enc.Gender",
    levels: [
      { level: "F", count: 2, color: "#4E79A7" },
      { level: "M", count: 2, color: "#F28E2B" },
      { level: "NULL", count: 1, color: "#BAB0AC" },
    ],
    total: 5,
  };
}

export function histogramFixture(): HistogramResult {
  return {
    attribute_id: "Enc.Score",
    bins: [
      { lo: 0, hi: 1, count: 2 },
      { lo: 1, hi: 2, count: 0 },
      { lo: 2, hi: 3, count: 3 },
    ],
  };
}

export function partitionFixture(): PartitionResult {
  return {
    attribute_id: "Enc.Age",
    granularity: "week",
    value_mode: "absolute",
    accumulate: false,
    series: [
      {
        level: "Y",
        points: [
          { bucket_start: "2021-01-04", value: 2, band_min: 1, band_max: 3 },
          { bucket_start: "2021-01-11", value: 1, band_min: 0, band_max: 2 },
        ],
      },
      {
        level: "O",
        points: [
          { bucket_start: "2021-01-04", value: 1, band_min: 1, band_max: 1 },
          { bucket_start: "2021-01-11", value: 2, band_min: 1, band_max: 3 },
        ],
      },
    ],
  };
}

export function crossTabFixture(): CrossTabResult {
  return {
    bar_attribute_id: "Enc.Age",
    segment_attribute_id: "Enc.Gender",
    bars: [
      {
        bar_level: "Y",
        total: 3,
        segments: [
          { segment_level: "F", count: 2, percent: 66.66666666666667 },
          { segment_level: "M", count: 1, percent: 33.333333333333336 },
          { segment_level: "NULL", count: 0, percent: 0 },
        ],
      },
      {
        bar_level: "O",
        total: 2,
        segments: [
          { segment_level: "F", count: 0, percent: 0 },
          { segment_level: "M", count: 1, percent: 50 },
          { segment_level: "NULL", count: 1, percent: 50 },
        ],
      },
    ],
  };
}

export function sankeyFixture(): SankeyResult {
  return {
    stages: ["Enc.Age", "Enc.Gender"],
    nodes: [
      [
        { level: "Y", total: 3 },
        { level: "O", total: 2 },
      ],
      [
        { level: "F", total: 2 },
        { level: "M", total: 2 },
        { level: "NULL", total: 1 },
      ],
    ],
    links: [
      { from_stage: 0, from_level: "Y", to_level: "F", weight: 2 },
      { from_stage: 0, from_level: "Y", to_level: "M", weight: 1 },
      { from_stage: 0, from_level: "O", to_level: "M", weight: 1 },
      { from_stage: 0, from_level: "O", to_level: "NULL", weight: 1 },
    ],
  };
}
