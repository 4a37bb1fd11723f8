/**
 * Canvas graph editor.
 *
 * Create mode: click empty space to add a vertex, drag between vertices to
 * toggle edges, draw-to-submit or draw-to-lookup (isomorph search). The
 * export button emits the drawing as graph6 text.
 *
 * Reposition-only mode: the structure tools disappear entirely; vertices
 * can only be dragged, and saving sends a positions-only payload.
 */

import { GraphhausClient } from "../api/client.js";
import { GraphRecordView } from "../api/types.js";
import { EditorState } from "../editor/state.js";
import { banner, clear, el } from "./dom.js";

const RADIUS = 10;

export class EditorPage {
  readonly root = el("section", { class: "page page-editor" });
  readonly state: EditorState;
  private readonly canvas = el("canvas", { width: "640", height: "480", class: "editor-canvas" });
  private readonly status = el("div", { class: "status" });
  private dragging: number | null = null;
  private edgeFrom: number | null = null;

  constructor(
    private readonly client: GraphhausClient,
    record?: GraphRecordView,
  ) {
    this.state = record ? EditorState.repositionMode(record) : EditorState.createMode();
    this.root.append(
      el("h2", {}, record ? `Improve the drawing of graph ${record.id}` : "Draw a graph"),
      this.canvas,
      this.toolbar(),
      this.status,
    );
    this.wireCanvas();
    this.draw();
  }

  private toolbar(): HTMLElement {
    const bar = el("div", { class: "toolbar" });
    if (this.state.mode === "create") {
      // structure tools exist only in create mode
      const comment = el("input", { type: "text", placeholder: "why is this graph interesting?" });
      const name = el("input", { type: "text", placeholder: "optional name" });
      const submit = el("button", { type: "button", class: "primary" }, "Submit graph");
      submit.addEventListener("click", () => void this.submit(comment.value, name.value));
      const lookup = el("button", { type: "button" }, "Find isomorphic graph");
      lookup.addEventListener("click", () => void this.lookup());
      const exportBtn = el("button", { type: "button" }, "Export graph6");
      exportBtn.addEventListener("click", () => {
        clear(this.status);
        this.status.append(el("code", {}, this.state.toGraph6()));
      });
      bar.append(comment, name, submit, lookup, exportBtn);
    } else {
      const save = el("button", { type: "button", class: "primary" }, "Save drawing");
      save.addEventListener("click", () => void this.saveDrawing());
      bar.append(save, el("span", { class: "hint" }, "drag vertices to improve the drawing"));
    }
    return bar;
  }

  private canvasPoint(event: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return {
      x: (event.clientX - rect.left) / rect.width,
      y: (event.clientY - rect.top) / rect.height,
    };
  }

  private vertexAt(x: number, y: number): number | null {
    const verts = this.state.vertexList;
    for (let i = 0; i < verts.length; i++) {
      const dx = (verts[i]!.x - x) * this.canvas.width;
      const dy = (verts[i]!.y - y) * this.canvas.height;
      if (dx * dx + dy * dy <= RADIUS * RADIUS * 4) return i;
    }
    return null;
  }

  private wireCanvas(): void {
    this.canvas.addEventListener("mousedown", (event) => {
      const { x, y } = this.canvasPoint(event);
      const hit = this.vertexAt(x, y);
      if (hit !== null) {
        if (event.shiftKey && this.state.mode === "create") {
          this.edgeFrom = hit;
        } else {
          this.dragging = hit;
        }
        return;
      }
      if (this.state.mode === "create") {
        if (event.altKey) return;
        this.state.addVertex(x, y);
        this.draw();
      }
    });
    this.canvas.addEventListener("mousemove", (event) => {
      if (this.dragging === null) return;
      const { x, y } = this.canvasPoint(event);
      this.state.moveVertex(this.dragging, x, y);
      this.draw();
    });
    this.canvas.addEventListener("mouseup", (event) => {
      const { x, y } = this.canvasPoint(event);
      if (this.edgeFrom !== null) {
        const target = this.vertexAt(x, y);
        if (target !== null && target !== this.edgeFrom) {
          this.state.toggleEdge(this.edgeFrom, target);
        }
        this.edgeFrom = null;
        this.draw();
      }
      this.dragging = null;
    });
    this.canvas.addEventListener("dblclick", (event) => {
      if (this.state.mode !== "create") return;
      const { x, y } = this.canvasPoint(event);
      const hit = this.vertexAt(x, y);
      if (hit !== null) {
        this.state.removeVertex(hit);
        this.draw();
      }
    });
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    const verts = this.state.vertexList;
    ctx.strokeStyle = "#444";
    for (const [u, v] of this.state.edgeList) {
      ctx.beginPath();
      ctx.moveTo(verts[u]!.x * this.canvas.width, verts[u]!.y * this.canvas.height);
      ctx.lineTo(verts[v]!.x * this.canvas.width, verts[v]!.y * this.canvas.height);
      ctx.stroke();
    }
    verts.forEach((vertex, index) => {
      ctx.beginPath();
      ctx.fillStyle = index === this.edgeFrom ? "#c33" : "#1a6";
      ctx.arc(vertex.x * this.canvas.width, vertex.y * this.canvas.height, RADIUS, 0, 2 * Math.PI);
      ctx.fill();
    });
  }

  async submit(comment: string, name: string): Promise<void> {
    clear(this.status);
    try {
      const outcome = await this.client.submitGraph(
        this.state.submissionPayload(comment, name || undefined),
      );
      if (outcome.kind === "duplicate") {
        this.status.append(
          banner("info", "This graph is already in the database; add your comment there."),
          el("a", { href: `/graphs/${outcome.id}` }, `graph ${outcome.id}`),
        );
      } else {
        this.status.append(
          banner("info", "Graph submitted."),
          el("a", { href: `/graphs/${outcome.id}` }, `graph ${outcome.id}`),
        );
      }
    } catch (error) {
      this.status.append(banner("error", (error as Error).message));
    }
  }

  /** Draw-to-lookup: is an isomorphic copy already present? */
  async lookup(): Promise<void> {
    clear(this.status);
    try {
      const response = await this.client.search(this.state.isomorphLookupRequest());
      if (response.ids.length > 0) {
        this.status.append(
          banner("info", "An isomorphic graph is already stored:"),
          el("a", { href: `/graphs/${response.ids[0]}` }, `graph ${response.ids[0]}`),
        );
      } else {
        this.status.append(
          banner(
            response.complete ? "info" : "warn",
            response.complete
              ? "No isomorphic graph found; you can submit it."
              : "No isomorphic graph found so far (the scan was incomplete).",
          ),
        );
      }
    } catch (error) {
      this.status.append(banner("error", (error as Error).message));
    }
  }

  async saveDrawing(): Promise<void> {
    clear(this.status);
    try {
      await this.client.updateDrawing(this.state.graphId!, this.state.repositionPayload());
      this.status.append(banner("info", "Drawing saved."));
    } catch (error) {
      this.status.append(banner("error", (error as Error).message));
    }
  }
}
