// Data workbench: the prepopulated or uploaded table with type chips per
// column, cell editing, row/column add/remove, type changes with inline
// validation errors, and the CSV upload dialog with import confirmation.

import { api, ApiFailure, describeError } from "../api";
import { store } from "../store";
import type { DType, DraftDto, TableDto, TableEdit } from "../types";

const DTYPES: DType[] = ["categorical", "numerical", "categorical_ordered"];

// FileReader instead of File.text(): supported everywhere, jsdom included.
function readFileText(file: File): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.onerror = () => reject(reader.error ?? new Error("file read failed"));
    reader.readAsText(file);
  });
}

function activeTable(draft: DraftDto): { table: TableDto; prepopulated: boolean } {
  if (draft.table) return { table: draft.table, prepopulated: false };
  return { table: draft.suggested_table!, prepopulated: true };
}

export function renderTableEditor(
  container: HTMLElement,
  opts: { compact?: boolean } = {},
): void {
  const draft = store.get().draft;
  if (!draft) return;
  const { table, prepopulated } = activeTable(draft);
  container.innerHTML = "";

  const errorBox = document.createElement("p");
  errorBox.className = "error table-error";

  const applyEdit = async (edit: TableEdit) => {
    errorBox.textContent = "";
    try {
      const updated = await api.editTable(draft.id, edit);
      store.set({ draft: updated });
    } catch (err) {
      errorBox.textContent =
        err instanceof ApiFailure
          ? `${err.body.message}${err.body.details.length ? " — " + err.body.details.map((d) => d.message).join("; ") : ""}`
          : describeError(err);
    }
  };

  if (prepopulated && !opts.compact) {
    const note = document.createElement("p");
    note.className = "hint prepopulated-note";
    note.textContent =
      "Sample data matching the entries from your goal section. Edit it or upload a CSV.";
    container.appendChild(note);
  }

  const tableEl = document.createElement("table");
  tableEl.className = "data-table";
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const col of table.columns) {
    const th = document.createElement("th");
    const name = document.createElement("div");
    name.className = "col-name";
    name.textContent = col.name;
    const chip = document.createElement("select");
    chip.className = `dtype-chip dtype-${col.dtype}`;
    for (const dt of DTYPES) {
      const opt = document.createElement("option");
      opt.value = dt;
      opt.textContent = dt.replace("categorical_ordered", "categorical (ordered)");
      chip.appendChild(opt);
    }
    chip.value = col.dtype;
    chip.addEventListener("change", () =>
      void applyEdit({ op: "set_column_type", name: col.name, dtype: chip.value as DType }),
    );
    th.append(name, chip);
    if (!opts.compact) {
      const remove = document.createElement("button");
      remove.className = "remove-col";
      remove.textContent = "✕";
      remove.title = `Remove column ${col.name}`;
      remove.addEventListener("click", () =>
        void applyEdit({ op: "remove_column", name: col.name }),
      );
      th.appendChild(remove);
    }
    headRow.appendChild(th);
  }
  headRow.appendChild(document.createElement("th"));
  thead.appendChild(headRow);
  tableEl.appendChild(thead);

  const tbody = document.createElement("tbody");
  for (let row = 0; row < table.row_count; row++) {
    const tr = document.createElement("tr");
    for (const col of table.columns) {
      const td = document.createElement("td");
      const input = document.createElement("input");
      input.value = col.values[row];
      input.dataset.row = String(row);
      input.dataset.column = col.name;
      input.addEventListener("change", () =>
        void applyEdit({ op: "set_cell", row, column: col.name, text: input.value }),
      );
      td.appendChild(input);
      tr.appendChild(td);
    }
    const actions = document.createElement("td");
    if (!opts.compact) {
      const remove = document.createElement("button");
      remove.className = "remove-row";
      remove.textContent = "✕";
      remove.title = `Remove row ${row + 1}`;
      remove.addEventListener("click", () => void applyEdit({ op: "remove_row", index: row }));
      actions.appendChild(remove);
    }
    tr.appendChild(actions);
    tbody.appendChild(tr);
  }
  tableEl.appendChild(tbody);
  container.appendChild(tableEl);

  const controls = document.createElement("div");
  controls.className = "table-controls";
  const addRow = document.createElement("button");
  addRow.id = "add-row";
  addRow.textContent = "ADD ROW";
  addRow.addEventListener("click", () => void applyEdit({ op: "add_row" }));
  controls.appendChild(addRow);

  if (!opts.compact) {
    const addCol = document.createElement("button");
    addCol.id = "add-column";
    addCol.textContent = "ADD COLUMN";
    addCol.addEventListener("click", () => {
      const name = document.createElement("input");
      name.placeholder = "column name";
      const dtype = document.createElement("select");
      for (const dt of DTYPES) {
        const opt = document.createElement("option");
        opt.value = dt;
        opt.textContent = dt;
        dtype.appendChild(opt);
      }
      const confirm = document.createElement("button");
      confirm.textContent = "Add";
      confirm.addEventListener("click", () =>
        void applyEdit({
          op: "add_column",
          name: name.value,
          dtype: dtype.value as DType,
        }),
      );
      const box = document.createElement("span");
      box.className = "add-col-box";
      box.append(name, dtype, confirm);
      controls.appendChild(box);
    });
    controls.appendChild(addCol);
  }
  container.appendChild(controls);
  container.appendChild(errorBox);
}

export function renderDataEditor(root: HTMLElement): void {
  const draft = store.get().draft;
  if (!draft) {
    store.set({ screen: "goal" });
    return;
  }
  root.innerHTML = `
    <section class="data-editor">
      <div class="data-head">
        <h2>Select data</h2>
        <div>
          <button id="upload-csv">UPLOAD CSV</button>
          <input type="file" id="csv-file" accept=".csv,text/csv" hidden />
        </div>
      </div>
      <div id="upload-dialog" class="upload-dialog" hidden>
        <p>Import data from <strong id="upload-name"></strong>? This replaces the current table.</p>
        <button class="primary" id="import-data">IMPORT DATA</button>
        <button id="cancel-import">Cancel</button>
        <p class="error" id="upload-error"></p>
      </div>
      <div id="table-editor"></div>
    </section>
  `;
  renderTableEditor(root.querySelector<HTMLElement>("#table-editor")!);

  const fileInput = root.querySelector<HTMLInputElement>("#csv-file")!;
  const dialog = root.querySelector<HTMLElement>("#upload-dialog")!;
  const uploadError = root.querySelector<HTMLElement>("#upload-error")!;
  root.querySelector("#upload-csv")!.addEventListener("click", () => fileInput.click());
  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    dialog.hidden = false;
    root.querySelector<HTMLElement>("#upload-name")!.textContent = file.name;
  });
  root.querySelector("#cancel-import")!.addEventListener("click", () => {
    dialog.hidden = true;
    fileInput.value = "";
  });
  root.querySelector("#import-data")!.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    uploadError.textContent = "";
    try {
      const text = await readFileText(file);
      const updated = await api.uploadCsv(draft.id, file.name, text);
      store.set({ draft: updated, notice: `Imported ${file.name}` });
    } catch (err) {
      uploadError.textContent = describeError(err);
    }
  });
}
