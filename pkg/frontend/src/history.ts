/** The operation history panel: a newest-first provenance table. Selecting
 * a row highlights the operations that depend on it; deleting asks for
 * confirmation with that closure first; undo removes the latest operation. */

import type { OpRecord } from "./types.js";

export interface HistoryHandlers {
  onUndo: () => void;
  onSelect: (seq: number) => void;
  onDeleteRequest: (seq: number) => void;
}

function describe(op: OpRecord): string {
  const params = op.params as Record<string, unknown>;
  switch (op.kind) {
    case "FilterOut":
    case "KeepOnly":
      return `${op.kind} [${(params.levels as string[]).join(", ")}]`;
    case "MergeLevels":
      return `Merge [${(params.levels as string[]).join(", ")}] -> ${params.new_name}`;
    case "RenameLevel":
      return `Rename level ${(params.levels as string[])[0]} -> ${params.new_name}`;
    case "RenameAttribute":
      return `Rename attribute -> ${params.new_name}`;
    case "DuplicateAttribute":
      return "Duplicate attribute";
    case "Explode":
      return `Explode by ${params.second_attribute_id}`;
    default:
      return op.kind;
  }
}

export function renderHistory(
  ops: OpRecord[],
  highlighted: Set<number>,
  handlers: HistoryHandlers,
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "history";

  const header = document.createElement("div");
  header.className = "history-header";
  const title = document.createElement("h2");
  title.textContent = "Operation history";
  header.appendChild(title);
  const undo = document.createElement("button");
  undo.className = "undo-button";
  undo.textContent = "Undo last";
  undo.disabled = ops.length === 0;
  undo.addEventListener("click", handlers.onUndo);
  header.appendChild(undo);
  panel.appendChild(header);

  const table = document.createElement("table");
  table.className = "history-table";
  const head = document.createElement("tr");
  for (const column of ["seq", "operation", "target", "when", ""]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const op of ops) {
    const row = document.createElement("tr");
    row.dataset.seq = String(op.seq);
    if (highlighted.has(op.seq)) {
      row.classList.add("highlighted");
    }
    const cells = [
      String(op.seq),
      describe(op),
      op.target_attribute_id,
      op.timestamp.replace("T", " ").replace("+00:00", ""),
    ];
    for (const text of cells) {
      const td = document.createElement("td");
      td.textContent = text;
      row.appendChild(td);
    }
    const actions = document.createElement("td");
    const del = document.createElement("button");
    del.className = "delete-button";
    del.textContent = "Delete…";
    del.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onDeleteRequest(op.seq);
    });
    actions.appendChild(del);
    row.appendChild(actions);
    row.addEventListener("click", () => handlers.onSelect(op.seq));
    table.appendChild(row);
  }
  panel.appendChild(table);
  return panel;
}
