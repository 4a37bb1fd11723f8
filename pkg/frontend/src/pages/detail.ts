/**
 * Graph detail page: invariant table with status-tagged values (timed-out
 * rows visually distinct, interesting invariants highlighted), comments,
 * a drawing selector, related-graph links, and export buttons.
 */

import { GraphhausClient } from "../api/client.js";
import { GraphRecordView, WireInvariantValue } from "../api/types.js";
import { banner, clear, el } from "./dom.js";

function formatValue(value: WireInvariantValue): string {
  switch (value.status) {
    case "computed":
      if (typeof value.value === "boolean") return value.value ? "true" : "false";
      return String(value.value);
    case "undefined":
      return "undefined";
    case "timed_out":
      return "computation timed out";
    case "pending":
      return "not yet computed";
    case "failed":
      return "computation failed";
  }
}

export class DetailPage {
  readonly root = el("section", { class: "page page-detail" });

  constructor(
    private readonly client: GraphhausClient,
    private readonly record: GraphRecordView,
    private readonly onImproveDrawing: (record: GraphRecordView) => void,
  ) {
    this.render();
  }

  private render(): void {
    const r = this.record;
    this.root.append(el("h2", {}, r.name ?? `Graph ${r.id}`), el(
      "p",
      { class: "meta" },
      `#${r.id} · ${r.order} vertices, ${r.edges} edges · uploaded by ${r.uploader}`,
    ));

    const interesting = new Set(r.interesting_marks);
    const table = el("table", { class: "invariants" });
    table.append(
      el("tr", {}, el("th", {}, "invariant"), el("th", {}, "value")),
      ...r.invariant_values.map((value) => {
        const classes = [
          value.status !== "computed" ? `status-${value.status}` : "",
          interesting.has(value.invariant) ? "interesting" : "",
        ]
          .filter(Boolean)
          .join(" ");
        const row = el(
          "tr",
          classes ? { class: classes } : {},
          el("td", {}, value.invariant + (interesting.has(value.invariant) ? " ★" : "")),
          el("td", {}, formatValue(value)),
        );
        if (value.status === "timed_out") {
          row.title = "This value could not be computed within the time limit.";
        }
        return row;
      }),
    );
    this.root.append(el("h3", {}, "Invariants"), table);

    const related = el("p", { class: "related" });
    for (const [relation, id] of Object.entries(r.related)) {
      related.append(
        el("a", { href: `/graphs/${id}` }, `${relation.replace("_", " ")} (graph ${id})`),
        " ",
      );
    }
    if (related.childNodes.length) this.root.append(el("h3", {}, "Related graphs"), related);

    const comments = el("div", { class: "comments" });
    for (const comment of r.comments) {
      comments.append(
        el(
          "blockquote",
          {},
          el("p", {}, comment.body),
          el("footer", {}, `${comment.author}, ${comment.created_at}`),
        ),
      );
    }
    const commentInput = el("textarea", { placeholder: "add your reason why this graph is interesting" });
    const commentButton = el("button", { type: "button" }, "Add comment");
    const commentStatus = el("span", {});
    commentButton.addEventListener("click", () => {
      void this.client
        .addComment(r.id, commentInput.value)
        .then(() => {
          commentStatus.textContent = "comment added";
          commentInput.value = "";
        })
        .catch((error) => {
          clear(commentStatus);
          commentStatus.append(banner("error", (error as Error).message));
        });
    });
    this.root.append(el("h3", {}, "Comments"), comments, commentInput, commentButton, commentStatus);

    const drawings = el("p", {}, `${r.embeddings.length} drawing(s). `);
    const improve = el("button", { type: "button" }, "Improve drawing");
    improve.addEventListener("click", () => this.onImproveDrawing(r));
    drawings.append(improve);
    this.root.append(el("h3", {}, "Drawings"), drawings);

    const exports = el("div", { class: "exports" });
    for (const [label, text] of Object.entries(r.formats)) {
      const button = el("button", { type: "button" }, `Export ${label.replace("_", " ")}`);
      button.addEventListener("click", () => {
        clear(exportArea);
        exportArea.append(el("pre", {}, text));
      });
      exports.append(button);
    }
    const exportArea = el("div", { class: "export-area" });
    this.root.append(el("h3", {}, "Export"), exports, exportArea);
  }
}
