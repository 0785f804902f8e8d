// Card preview page: the four-section card layout with the rendered chart
// and, for small tables, the data in tabular form.

import { api, describeError } from "../api";
import { renderChart } from "../chart";
import { store } from "../store";

export function renderPreview(root: HTMLElement): void {
  const cardId = store.get().previewCardId;
  if (!cardId) {
    store.reset();
    return;
  }
  root.innerHTML = `
    <section class="preview">
      <div class="preview-head">
        <button id="back-dashboard">← Dashboard</button>
        <div>
          <a id="dl-json" href="${api.exportUrl(cardId, "json")}" download>Export JSON</a>
          <a id="dl-svg" href="${api.exportUrl(cardId, "svg")}" download>Export SVG</a>
        </div>
      </div>
      <div id="card-doc"><p class="muted">Loading…</p></div>
    </section>
  `;
  root.querySelector("#back-dashboard")!.addEventListener("click", () => store.reset());

  const box = root.querySelector<HTMLElement>("#card-doc")!;
  void api
    .cardDocument(cardId)
    .then((doc) => {
      box.innerHTML = "";
      const card = document.createElement("article");
      card.className = "isc-card";
      for (const section of doc.sections) {
        const el = document.createElement("section");
        el.className = "isc-section";
        const h = document.createElement("h3");
        h.textContent = section.heading;
        const body = document.createElement("p");
        body.className = "section-body";
        body.textContent = section.body;
        el.append(h, body);
        card.appendChild(el);
      }
      const chartBox = document.createElement("div");
      chartBox.className = "preview-chart";
      renderChart(chartBox, doc.chart_spec);
      card.appendChild(chartBox);

      if (doc.table.rows) {
        const tableEl = document.createElement("table");
        tableEl.className = "data-table readonly";
        const head = document.createElement("tr");
        for (const col of doc.table.columns) {
          const th = document.createElement("th");
          th.textContent = `${col.name} (${col.dtype.replace("categorical_ordered", "ordered")})`;
          head.appendChild(th);
        }
        tableEl.appendChild(head);
        for (const row of doc.table.rows) {
          const tr = document.createElement("tr");
          for (const cell of row) {
            const td = document.createElement("td");
            td.textContent = cell;
            tr.appendChild(td);
          }
          tableEl.appendChild(tr);
        }
        card.appendChild(tableEl);
      } else {
        const note = document.createElement("p");
        note.className = "muted";
        note.textContent = `${doc.table.row_count} rows (too large to show inline)`;
        card.appendChild(note);
      }
      box.appendChild(card);
    })
    .catch((err) => {
      box.innerHTML = `<p class="error">${describeError(err)}</p>`;
    });
}
