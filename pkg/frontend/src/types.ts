/** Wire types mirroring the server's JSON bodies (field names are the contract). */

export interface LevelInfo {
  name: string;
  color: string;
}

export interface AttributeInfo {
  id: string;
  name: string;
  kind: "categorical" | "ordered" | "quantitative" | "datetime" | "list" | "freeform";
  units: string | null;
  origin: "original" | "derived";
  chartable: boolean;
  levels: LevelInfo[] | null;
}

export interface DatasetInfo {
  id: string;
  name: string;
  row_count: number;
  time_attribute: string;
  attributes: AttributeInfo[];
}

export interface ConcernInfo {
  name: string;
  members: string[];
  origin: "default" | "specified" | "logged" | "exploded";
}

export interface RangeInfo {
  start: string;
  end: string;
}

export interface Catalog {
  datasets: DatasetInfo[];
  concerns: ConcernInfo[];
  active_concern: string;
  active_range: RangeInfo | null;
}

export interface RollupResult {
  attribute_id: string;
  levels: { level: string; count: number; color: string }[];
  total: number;
}

export interface HistogramResult {
  attribute_id: string;
  bins: { lo: number; hi: number; count: number }[];
}

export interface PartitionPoint {
  bucket_start: string;
  value: number;
  band_min: number;
  band_max: number;
}

export interface PartitionResult {
  attribute_id: string;
  granularity: "day" | "week" | "month";
  value_mode: "absolute" | "percentage";
  accumulate: boolean;
  series: { level: string; points: PartitionPoint[] }[];
}

export interface CrossTabResult {
  bar_attribute_id: string;
  segment_attribute_id: string;
  bars: {
    bar_level: string;
    total: number;
    segments: { segment_level: string; count: number; percent: number }[];
  }[];
}

export interface SankeyResult {
  stages: string[];
  nodes: { level: string; total: number }[][];
  links: { from_stage: number; from_level: string; to_level: string; weight: number }[];
}

export type ChartResult =
  | RollupResult
  | HistogramResult
  | PartitionResult
  | CrossTabResult
  | SankeyResult;

export interface OpOutcome {
  seq: number;
  kind: string;
  mode: string | null;
  created_attribute_ids: string[];
  created_concern_name: string | null;
}

export interface OpRecord {
  seq: number;
  kind: string;
  dataset_id: string;
  target_attribute_id: string;
  params: Record<string, unknown>;
  created_attribute_ids: string[];
  timestamp: string;
  session_id: string;
  dependents: number[];
}

export interface ApiError {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
