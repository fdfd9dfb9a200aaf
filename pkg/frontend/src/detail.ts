/** The detail panel: one large labelled chart for the current selection,
 * plus the controls that belong to the active mode. Customization controls
 * (filter / keep / merge / rename, make-new vs modify-current) appear only
 * in Rollup mode; Stratify adds the flow and percentage toggles; Partition
 * adds granularity, percentage, cumulative, and band toggles. */

import type {
  ChartResult,
  CrossTabResult,
  HistogramResult,
  PartitionResult,
  RollupResult,
  SankeyResult,
} from "./types.js";
import {
  DETAIL_OPTS,
  renderBars,
  renderHistogram,
  renderLines,
  renderSankey,
  renderSegments,
} from "./charts.js";
import type { AttributeIndex, DetailOptions, UiState } from "./state.js";

export interface DetailHandlers {
  onOptions: (options: Partial<DetailOptions>) => void;
  onLevelToggle: (level: string) => void;
  onCustomize: (kind: "FilterOut" | "KeepOnly" | "MergeLevels" | "RenameLevel", newName?: string) => void;
  onModeOverride: (mode: "MakeNew" | "ModifyCurrent" | null) => void;
  onExplode: () => void;
  onPrint: () => void;
  onRenameAttribute: (newName: string) => void;
  onDuplicateAttribute: () => void;
}

function button(label: string, onClick: () => void, className = ""): HTMLButtonElement {
  const node = document.createElement("button");
  node.textContent = label;
  if (className) node.className = className;
  node.addEventListener("click", onClick);
  return node;
}

function checkbox(label: string, checked: boolean, onChange: (value: boolean) => void): HTMLLabelElement {
  const wrap = document.createElement("label");
  wrap.className = "toggle";
  const input = document.createElement("input");
  input.type = "checkbox";
  input.checked = checked;
  input.addEventListener("change", () => onChange(input.checked));
  wrap.append(input, document.createTextNode(` ${label}`));
  return wrap;
}

function colorsFor(index: AttributeIndex, attributeId: string): Map<string, string> {
  const attr = index.get(attributeId);
  const map = new Map<string, string>();
  for (const level of attr?.levels ?? []) {
    map.set(level.name, level.color);
  }
  return map;
}

export function renderDetail(
  state: UiState,
  index: AttributeIndex,
  result: ChartResult | null,
  chartKind: string | null,
  selectedLevels: Set<string>,
  modeOverride: "MakeNew" | "ModifyCurrent" | null,
  handlers: DetailHandlers,
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "detail";

  const title = document.createElement("h2");
  title.className = "detail-title";
  title.textContent = state.selection.length
    ? state.selection.map((id) => index.get(id)?.name ?? id).join(" × ")
    : "Select attributes in the multiples panel";
  panel.appendChild(title);

  const controls = document.createElement("div");
  controls.className = "detail-controls";
  panel.appendChild(controls);

  if (state.mode === "Partition") {
    const granularity = document.createElement("span");
    granularity.className = "granularity";
    for (const g of ["day", "week", "month"] as const) {
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = "granularity";
      radio.value = g;
      radio.checked = state.options.granularity === g;
      radio.addEventListener("change", () => handlers.onOptions({ granularity: g }));
      label.append(radio, document.createTextNode(` by ${g} `));
      granularity.appendChild(label);
    }
    controls.appendChild(granularity);
    controls.appendChild(
      checkbox("percentage", state.options.percentage, (v) =>
        handlers.onOptions({ percentage: v, cumulative: v ? false : state.options.cumulative }),
      ),
    );
    controls.appendChild(
      checkbox("cumulative", state.options.cumulative, (v) =>
        handlers.onOptions({ cumulative: v, percentage: v ? false : state.options.percentage }),
      ),
    );
    controls.appendChild(
      checkbox("min/max bands", state.options.bands, (v) => handlers.onOptions({ bands: v })),
    );
  }
  if (state.mode === "Stratify") {
    controls.appendChild(checkbox("flow", state.options.flow, (v) => handlers.onOptions({ flow: v })));
    controls.appendChild(
      checkbox("percentage", state.options.percentage, (v) => handlers.onOptions({ percentage: v })),
    );
  }
  if (state.mode === "Explode") {
    const hint = document.createElement("span");
    hint.className = "hint";
    hint.textContent = "Pick two attributes, then ";
    controls.appendChild(hint);
    controls.appendChild(button("Explode", handlers.onExplode, "explode-button"));
  }
  if (result !== null) {
    controls.appendChild(button("Print Chart", handlers.onPrint, "print-button"));
  }

  const chartArea = document.createElement("div");
  chartArea.className = "chart-area";
  panel.appendChild(chartArea);
  if (result === null) {
    const empty = document.createElement("p");
    empty.className = "empty-hint";
    empty.textContent = arityHint(state);
    chartArea.appendChild(empty);
    return panel;
  }

  const attributeId = state.selection[0];
  if (chartKind === "rollup") {
    chartArea.appendChild(
      renderBars(result as RollupResult, DETAIL_OPTS, handlers.onLevelToggle, selectedLevels),
    );
  } else if (chartKind === "histogram") {
    chartArea.appendChild(renderHistogram(result as HistogramResult, DETAIL_OPTS));
  } else if (chartKind === "partition") {
    chartArea.appendChild(
      renderLines(result as PartitionResult, colorsFor(index, attributeId), DETAIL_OPTS, state.options.bands),
    );
  } else if (chartKind === "stratify") {
    const crossTab = result as CrossTabResult;
    chartArea.appendChild(
      renderSegments(
        crossTab,
        colorsFor(index, crossTab.segment_attribute_id),
        DETAIL_OPTS,
        state.options.percentage,
      ),
    );
  } else if (chartKind === "flow") {
    const flow = result as SankeyResult;
    chartArea.appendChild(
      renderSankey(flow, flow.stages.map((id) => colorsFor(index, id)), DETAIL_OPTS),
    );
  }

  if (state.mode === "Rollup" && chartKind === "rollup") {
    panel.appendChild(
      renderCustomizeControls(index, attributeId, selectedLevels, modeOverride, handlers),
    );
  }
  return panel;
}

function arityHint(state: UiState): string {
  switch (state.mode) {
    case "Rollup":
    case "Partition":
      return "Select exactly one attribute.";
    case "Explode":
      return "Select exactly two categorical/ordered attributes.";
    case "Stratify":
      return state.options.flow
        ? "Select two or three attributes; order sets the stages."
        : "Select exactly two attributes; the first makes the bars.";
  }
}

function renderCustomizeControls(
  index: AttributeIndex,
  attributeId: string,
  selectedLevels: Set<string>,
  modeOverride: "MakeNew" | "ModifyCurrent" | null,
  handlers: DetailHandlers,
): HTMLElement {
  const box = document.createElement("div");
  box.className = "customize";

  const picked = document.createElement("p");
  picked.className = "picked-levels";
  picked.textContent = selectedLevels.size
    ? `Selected levels: ${[...selectedLevels].join(", ")}`
    : "Click bars to select levels to act on.";
  box.appendChild(picked);

  const actions = document.createElement("div");
  actions.className = "customize-actions";
  actions.appendChild(button("Filter out", () => handlers.onCustomize("FilterOut"), "op-filter"));
  actions.appendChild(button("Keep only", () => handlers.onCustomize("KeepOnly"), "op-keep"));

  const nameInput = document.createElement("input");
  nameInput.type = "text";
  nameInput.placeholder = "new level name";
  nameInput.className = "new-name";
  actions.appendChild(nameInput);
  actions.appendChild(
    button("Merge", () => handlers.onCustomize("MergeLevels", nameInput.value), "op-merge"),
  );
  actions.appendChild(
    button("Rename level", () => handlers.onCustomize("RenameLevel", nameInput.value), "op-rename"),
  );
  box.appendChild(actions);

  const modeRow = document.createElement("div");
  modeRow.className = "mode-row";
  for (const option of ["auto", "MakeNew", "ModifyCurrent"] as const) {
    const label = document.createElement("label");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "edit-mode";
    radio.value = option;
    radio.checked = option === "auto" ? modeOverride === null : modeOverride === option;
    radio.addEventListener("change", () =>
      handlers.onModeOverride(option === "auto" ? null : option),
    );
    label.append(radio, document.createTextNode(` ${option === "auto" ? "auto (make new first)" : option} `));
    modeRow.appendChild(label);
  }
  box.appendChild(modeRow);

  const attrRow = document.createElement("div");
  attrRow.className = "attribute-actions";
  const renameInput = document.createElement("input");
  renameInput.type = "text";
  renameInput.placeholder = "rename attribute";
  renameInput.className = "attr-name";
  renameInput.value = index.get(attributeId)?.name ?? "";
  attrRow.appendChild(renameInput);
  attrRow.appendChild(
    button("Rename attribute", () => handlers.onRenameAttribute(renameInput.value), "op-rename-attr"),
  );
  attrRow.appendChild(button("Duplicate", handlers.onDuplicateAttribute, "op-duplicate"));
  box.appendChild(attrRow);
  return box;
}
