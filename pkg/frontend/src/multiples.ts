/** The multiples panel: a scrollable thumbnail grid of the active concern,
 * one section per data source. The first cell of every section is the item
 * count over time; the rest are rollup thumbnails of the concern's members,
 * marks plus attribute name only. Accents: blue for original leveled
 * attributes, green for original quantitative, orange for derived. */

import type { AttributeInfo, Catalog, ChartResult, PartitionResult, RollupResult } from "./types.js";
import { THUMB_OPTS, renderBars, renderHistogram, renderLines } from "./charts.js";
import type { AttributeIndex } from "./state.js";

export const ACCENTS = {
  original_leveled: "#1F77B4",
  original_quantitative: "#2CA02C",
  derived: "#FF7F0E",
} as const;

export function accentFor(attr: AttributeInfo): string {
  if (attr.origin === "derived") {
    return ACCENTS.derived;
  }
  return attr.kind === "quantitative" ? ACCENTS.original_quantitative : ACCENTS.original_leveled;
}

export interface MultiplesHandlers {
  onToggle: (attributeId: string) => void;
}

/** Data already fetched for thumbnails; null entries render a placeholder. */
export type ThumbnailData = Map<string, ChartResult | null>;

function thumbnailChart(attr: AttributeInfo, data: ChartResult | null): Element {
  if (data === null) {
    const placeholder = document.createElement("div");
    placeholder.className = "thumb-placeholder";
    placeholder.textContent = "…";
    return placeholder;
  }
  if (attr.kind === "quantitative") {
    return renderHistogram(data as import("./types.js").HistogramResult, THUMB_OPTS);
  }
  return renderBars(data as RollupResult, THUMB_OPTS);
}

export function renderMultiples(
  catalog: Catalog,
  concernName: string,
  selection: string[],
  index: AttributeIndex,
  thumbnails: ThumbnailData,
  itemSeries: Map<string, PartitionResult | null>,
  handlers: MultiplesHandlers,
): HTMLElement {
  const root = document.createElement("div");
  root.className = "multiples";
  const concern = catalog.concerns.find((c) => c.name === concernName);
  const members = concern ? concern.members : [];

  for (const dataset of catalog.datasets) {
    const sectionMembers = members.filter((id) => index.datasetOf(id) === dataset.id);
    const section = document.createElement("section");
    section.className = "dataset-section";
    section.dataset.dataset = dataset.id;

    const title = document.createElement("h3");
    title.className = "section-title";
    title.textContent = `${dataset.name} (${dataset.row_count})`;
    section.appendChild(title);

    const grid = document.createElement("div");
    grid.className = "thumb-grid";
    section.appendChild(grid);

    // header cell: items over time
    const headerCell = document.createElement("div");
    headerCell.className = "thumb header-thumb";
    const headerName = document.createElement("div");
    headerName.className = "thumb-name";
    headerName.textContent = "items over time";
    headerCell.appendChild(headerName);
    const itemData = itemSeries.get(dataset.id) ?? null;
    if (itemData) {
      headerCell.appendChild(renderLines(itemData, new Map([["items", "#555555"]]), THUMB_OPTS, false));
    } else {
      const placeholder = document.createElement("div");
      placeholder.className = "thumb-placeholder";
      placeholder.textContent = "…";
      headerCell.appendChild(placeholder);
    }
    grid.appendChild(headerCell);

    for (const attributeId of sectionMembers) {
      const attr = index.get(attributeId);
      if (!attr) continue;
      const cell = document.createElement("div");
      cell.className = "thumb";
      cell.dataset.attribute = attributeId;
      cell.style.borderTop = `3px solid ${accentFor(attr)}`;
      if (selection.includes(attributeId)) {
        cell.classList.add("selected");
        const order = document.createElement("span");
        order.className = "selection-order";
        order.textContent = String(selection.indexOf(attributeId) + 1);
        cell.appendChild(order);
      }
      const name = document.createElement("div");
      name.className = "thumb-name";
      name.textContent = attr.name;
      cell.appendChild(name);
      cell.appendChild(thumbnailChart(attr, thumbnails.get(attributeId) ?? null));
      cell.addEventListener("click", () => handlers.onToggle(attributeId));
      grid.appendChild(cell);
    }
    root.appendChild(section);
  }
  return root;
}
