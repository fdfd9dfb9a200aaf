/** Application wiring: one page, three panels, all state changes
 * round-tripping through the HTTP API so a reload reconstructs the same
 * view from the catalog. At most one mutating request runs at a time. */

import { Api, ServerError } from "./api.js";
import type { Catalog, ChartResult, OpRecord, PartitionResult } from "./types.js";
import {
  AttributeIndex,
  DetailOptions,
  UiState,
  chartRequest,
  indexAttributes,
  initialState,
  queryArity,
  setFlow,
  setMode,
  toggleSelection,
} from "./state.js";
import { renderMultiples } from "./multiples.js";
import { renderDetail } from "./detail.js";
import { renderHistory } from "./history.js";

const api = new Api();

interface AppState {
  catalog: Catalog | null;
  index: AttributeIndex | null;
  ui: UiState;
  selectedLevels: Set<string>;
  modeOverride: "MakeNew" | "ModifyCurrent" | null;
  ops: OpRecord[];
  highlighted: Set<number>;
  historyOpen: boolean;
  busy: boolean;
}

const app: AppState = {
  catalog: null,
  index: null,
  ui: initialState(),
  selectedLevels: new Set(),
  modeOverride: null,
  ops: [],
  highlighted: new Set(),
  historyOpen: false,
  busy: false,
};

function toast(message: string): void {
  const node = document.createElement("div");
  node.className = "toast";
  node.textContent = message;
  document.body.appendChild(node);
  setTimeout(() => node.remove(), 5000);
}

async function guarded<T>(work: () => Promise<T>): Promise<T | null> {
  if (app.busy) return null;
  app.busy = true;
  try {
    return await work();
  } catch (error) {
    toast(error instanceof ServerError ? error.message : String(error));
    return null;
  } finally {
    app.busy = false;
  }
}

async function refreshCatalog(): Promise<void> {
  app.catalog = await api.catalog();
  app.index = indexAttributes(app.catalog);
  app.ui.activeConcern = app.catalog.active_concern;
  app.ui.selection = app.ui.selection.filter((id) => app.index!.get(id) !== undefined);
  const history = await api.ops();
  app.ops = history.ops;
  app.highlighted = new Set();
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

async function renderAll(): Promise<void> {
  const root = document.getElementById("app")!;
  root.textContent = "";
  if (!app.catalog || app.catalog.datasets.length === 0) {
    root.appendChild(renderUpload());
    return;
  }
  root.appendChild(renderTopBar());
  const main = document.createElement("div");
  main.className = "main";
  root.appendChild(main);

  const multiplesHost = document.createElement("div");
  multiplesHost.className = "multiples-host";
  main.appendChild(multiplesHost);
  const detailHost = document.createElement("div");
  detailHost.className = "detail-host";
  main.appendChild(detailHost);

  await Promise.all([fillMultiples(multiplesHost), fillDetail(detailHost)]);

  if (app.historyOpen) {
    root.appendChild(
      renderHistory(app.ops, app.highlighted, {
        onUndo: () => void actUndo(),
        onSelect: (seq) => {
          const record = app.ops.find((op) => op.seq === seq);
          app.highlighted = new Set([seq, ...(record?.dependents ?? [])]);
          void renderAll();
        },
        onDeleteRequest: (seq) => void actDelete(seq),
      }),
    );
  }
}

async function fillMultiples(host: HTMLElement): Promise<void> {
  const catalog = app.catalog!;
  const index = app.index!;
  const concern = catalog.concerns.find((c) => c.name === app.ui.activeConcern);
  const members = concern?.members ?? [];

  const thumbnails = new Map<string, ChartResult | null>();
  const itemSeries = new Map<string, PartitionResult | null>();
  await Promise.all([
    ...catalog.datasets.map(async (ds) => {
      try {
        itemSeries.set(
          ds.id,
          (await api.chart({
            mode: "partition",
            dataset: ds.id,
            attrs: [ds.time_attribute],
            granularity: "week",
          })) as PartitionResult,
        );
      } catch {
        itemSeries.set(ds.id, null);
      }
    }),
    ...members.map(async (attributeId) => {
      const attr = index.get(attributeId);
      if (!attr || !attr.chartable || attr.kind === "datetime") {
        thumbnails.set(attributeId, null);
        return;
      }
      try {
        const mode = attr.kind === "quantitative" ? "histogram" : "rollup";
        thumbnails.set(
          attributeId,
          await api.chart({ mode, dataset: index.datasetOf(attributeId), attrs: [attributeId] }),
        );
      } catch {
        thumbnails.set(attributeId, null);
      }
    }),
  ]);

  host.appendChild(
    renderMultiples(catalog, app.ui.activeConcern, app.ui.selection, index, thumbnails, itemSeries, {
      onToggle: (attributeId) => {
        app.ui = toggleSelection(app.ui, attributeId);
        app.selectedLevels = new Set();
        void renderAll();
      },
    }),
  );
}

async function fillDetail(host: HTMLElement): Promise<void> {
  const index = app.index!;
  let result: ChartResult | null = null;
  let chartKind: string | null = null;
  const request =
    app.ui.mode === "Explode" && queryArity(app.ui) !== null
      ? chartRequest({ ...app.ui, mode: "Stratify" }, index.datasetOf, index.kindOf)
      : chartRequest(app.ui, index.datasetOf, index.kindOf);
  if (request) {
    try {
      result = await api.chart(request);
      chartKind = request.mode;
    } catch (error) {
      toast(error instanceof ServerError ? error.message : String(error));
    }
  }
  host.appendChild(
    renderDetail(app.ui, index, result, chartKind, app.selectedLevels, app.modeOverride, {
      onOptions: (options: Partial<DetailOptions>) => {
        app.ui = { ...app.ui, options: { ...app.ui.options, ...options } };
        if (options.flow !== undefined) {
          app.ui = setFlow(app.ui, options.flow);
        }
        void renderAll();
      },
      onLevelToggle: (level) => {
        if (app.selectedLevels.has(level)) {
          app.selectedLevels.delete(level);
        } else {
          app.selectedLevels.add(level);
        }
        void renderAll();
      },
      onCustomize: (kind, newName) => void actCustomize(kind, newName),
      onModeOverride: (mode) => {
        app.modeOverride = mode;
        void renderAll();
      },
      onExplode: () => void actExplode(),
      onPrint: () => {
        if (request) {
          window.open(api.exportSvgUrl(request), "_blank");
        }
      },
      onRenameAttribute: (newName) => void actRenameAttribute(newName),
      onDuplicateAttribute: () => void actDuplicateAttribute(),
    }),
  );
}

function renderTopBar(): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "topbar";

  const modes = document.createElement("span");
  modes.className = "modes";
  for (const mode of ["Rollup", "Partition", "Stratify", "Explode"] as const) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "mode";
    radio.value = mode;
    radio.checked = app.ui.mode === mode;
    radio.addEventListener("change", () => {
      app.ui = setMode(app.ui, mode);
      app.selectedLevels = new Set();
      void renderAll();
    });
    label.append(radio, document.createTextNode(` ${mode} `));
    modes.appendChild(label);
  }
  bar.appendChild(modes);

  const concerns = document.createElement("select");
  concerns.className = "concern-select";
  for (const concern of app.catalog!.concerns) {
    const option = document.createElement("option");
    option.value = concern.name;
    option.textContent = `${concern.name} (${concern.members.length})`;
    option.selected = concern.name === app.ui.activeConcern;
    concerns.appendChild(option);
  }
  concerns.addEventListener("change", () => void actSetActiveConcern(concerns.value));
  bar.appendChild(concerns);

  bar.appendChild(renderRangeSlider());

  const historyToggle = document.createElement("button");
  historyToggle.className = "history-toggle";
  historyToggle.textContent = app.historyOpen ? "Hide history" : `History (${app.ops.length})`;
  historyToggle.addEventListener("click", () => {
    app.historyOpen = !app.historyOpen;
    void renderAll();
  });
  bar.appendChild(historyToggle);
  return bar;
}

function renderRangeSlider(): HTMLElement {
  const wrap = document.createElement("span");
  wrap.className = "range-control";
  const range = app.catalog!.active_range;
  if (!range) {
    wrap.textContent = "no dated rows";
    return wrap;
  }
  const start = document.createElement("input");
  start.type = "date";
  start.className = "range-start";
  start.value = range.start;
  const end = document.createElement("input");
  end.type = "date";
  end.className = "range-end";
  end.value = range.end;
  const apply = document.createElement("button");
  apply.textContent = "Apply range";
  apply.className = "range-apply";
  apply.addEventListener("click", () => void actSetRange(start.value, end.value));
  wrap.append(start, document.createTextNode(" – "), end, apply);
  return wrap;
}

function renderUpload(): HTMLElement {
  const box = document.createElement("div");
  box.className = "upload-page";
  const title = document.createElement("h1");
  title.textContent = "Upload data";
  box.appendChild(title);
  const hint = document.createElement("p");
  hint.textContent = "Pick the CSV sources; each file's dataset name comes from the field label.";
  box.appendChild(hint);

  const inputs: { name: string; input: HTMLInputElement }[] = [];
  for (const name of ["Encounters", "IntervalOps", "Survey", "CallBack"]) {
    const row = document.createElement("p");
    const input = document.createElement("input");
    input.type = "file";
    input.accept = ".csv";
    row.append(input, document.createTextNode(` ${name}`));
    box.appendChild(row);
    inputs.push({ name, input });
  }
  const submit = document.createElement("button");
  submit.className = "upload-button";
  submit.textContent = "Upload";
  submit.addEventListener("click", () => {
    void guarded(async () => {
      const files = inputs
        .filter(({ input }) => input.files && input.files.length > 0)
        .map(({ name, input }) => ({ name, blob: input.files![0] as Blob }));
      if (!files.length) {
        toast("choose at least one CSV");
        return;
      }
      await api.upload(files);
      await refreshCatalog();
      await renderAll();
    });
  });
  box.appendChild(submit);
  return box;
}

// ---------------------------------------------------------------------------
// actions (every one round-trips through the API, then re-renders)
// ---------------------------------------------------------------------------

async function actSetRange(start: string, end: string): Promise<void> {
  await guarded(async () => {
    await api.setRange({ start, end });
    app.catalog!.active_range = { start, end };
    await renderAll();
  });
}

async function actSetActiveConcern(name: string): Promise<void> {
  await guarded(async () => {
    await api.editConcern("SetActive", { name });
    await refreshCatalog();
    app.ui.activeConcern = name;
    await renderAll();
  });
}

async function actCustomize(
  kind: "FilterOut" | "KeepOnly" | "MergeLevels" | "RenameLevel",
  newName?: string,
): Promise<void> {
  const attributeId = app.ui.selection[0];
  if (!attributeId || app.selectedLevels.size === 0) {
    toast("select levels on the chart first");
    return;
  }
  const params: Record<string, unknown> = { levels: [...app.selectedLevels] };
  if (kind === "MergeLevels" || kind === "RenameLevel") {
    if (!newName) {
      toast("enter a new level name");
      return;
    }
    params.new_name = newName;
  }
  if (app.modeOverride) {
    params.mode = app.modeOverride;
  }
  await guarded(async () => {
    const outcome = await api.postOp({
      kind,
      dataset_id: app.index!.datasetOf(attributeId),
      target_attribute_id: attributeId,
      params,
    });
    await refreshCatalog();
    // a make-new edit moves the focus onto the fresh attribute
    if (outcome.created_attribute_ids.length) {
      app.ui.selection = [outcome.created_attribute_ids[0]];
    }
    app.selectedLevels = new Set();
    app.modeOverride = null;
    await renderAll();
  });
}

async function actRenameAttribute(newName: string): Promise<void> {
  const attributeId = app.ui.selection[0];
  if (!attributeId || !newName) return;
  await guarded(async () => {
    await api.postOp({
      kind: "RenameAttribute",
      dataset_id: app.index!.datasetOf(attributeId),
      target_attribute_id: attributeId,
      params: { new_name: newName },
    });
    await refreshCatalog();
    await renderAll();
  });
}

async function actDuplicateAttribute(): Promise<void> {
  const attributeId = app.ui.selection[0];
  if (!attributeId) return;
  await guarded(async () => {
    await api.postOp({
      kind: "DuplicateAttribute",
      dataset_id: app.index!.datasetOf(attributeId),
      target_attribute_id: attributeId,
      params: {},
    });
    await refreshCatalog();
    await renderAll();
  });
}

async function actExplode(): Promise<void> {
  if (app.ui.mode !== "Explode" || app.ui.selection.length !== 2) {
    toast("explode needs exactly two attributes");
    return;
  }
  const [first, second] = app.ui.selection;
  await guarded(async () => {
    const outcome = await api.postOp({
      kind: "Explode",
      dataset_id: app.index!.datasetOf(first),
      target_attribute_id: first,
      params: { second_attribute_id: second },
    });
    await refreshCatalog();
    if (outcome.created_concern_name) {
      app.ui.activeConcern = outcome.created_concern_name;
    }
    app.ui = setMode({ ...app.ui, selection: [] }, "Rollup");
    await renderAll();
  });
}

async function actUndo(): Promise<void> {
  await guarded(async () => {
    await api.undo();
    await refreshCatalog();
    await renderAll();
  });
}

async function actDelete(seq: number): Promise<void> {
  await guarded(async () => {
    const dependents = await api.deleteProbe(seq);
    app.highlighted = new Set([seq, ...dependents]);
    await renderAll();
    const message = dependents.length
      ? `Delete operation ${seq} and ${dependents.length} dependent operation(s)?`
      : `Delete operation ${seq}?`;
    if (window.confirm(message)) {
      await api.deleteOp(seq);
      await refreshCatalog();
    }
    await renderAll();
  });
}

// ---------------------------------------------------------------------------

export async function start(): Promise<void> {
  try {
    await refreshCatalog();
  } catch {
    app.catalog = { datasets: [], concerns: [], active_concern: "All", active_range: null };
    app.index = indexAttributes(app.catalog);
  }
  await renderAll();
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void start();
}
