/**
 * Graph editor state machine.
 *
 * Two modes: "create" (draw a new graph: add/remove vertices and edges,
 * then submit or look up an isomorph) and "reposition-only" (improve the
 * drawing of an existing graph: vertex and edge sets are frozen, and the
 * update sent to the server is a positions array with no edge data, so an
 * invalid drawing is unrepresentable).
 */

import {
  GraphRecordView,
  Position,
  RepositionPayload,
  SearchRequest,
  SubmissionPayload,
} from "../api/types.js";
import { MAX_ORDER, SimpleGraph, decodeGraph6, encodeGraph6 } from "./graph6.js";

export type EditorMode = "create" | "reposition-only";

export class FrozenStructure extends Error {
  constructor(action: string) {
    super(`${action} is not available while improving an existing drawing`);
  }
}

export interface EditorVertex {
  x: number;
  y: number;
}

function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}

export class EditorState {
  private vertices: EditorVertex[] = [];
  private edges = new Set<string>();

  private constructor(readonly mode: EditorMode, readonly graphId: number | null) {}

  static createMode(): EditorState {
    return new EditorState("create", null);
  }

  /** Seed a reposition session from a stored record and one of its drawings. */
  static repositionMode(record: GraphRecordView, embeddingIndex = 0): EditorState {
    const state = new EditorState("reposition-only", record.id);
    const graph = decodeGraph6(record.formats.graph6);
    const embedding = record.embeddings[embeddingIndex];
    if (!embedding || embedding.positions.length !== graph.order) {
      throw new Error("record embedding does not match the graph order");
    }
    for (const pos of embedding.positions) {
      state.vertices.push({ x: pos[0] ?? 0.5, y: pos[1] ?? 0.5 });
    }
    for (const [u, v] of graph.edges) state.edges.add(`${u},${v}`);
    return state;
  }

  get order(): number {
    return this.vertices.length;
  }

  get vertexList(): ReadonlyArray<EditorVertex> {
    return this.vertices;
  }

  get edgeList(): Array<[number, number]> {
    return [...this.edges]
      .map((key) => key.split(",").map(Number) as [number, number])
      .sort((a, b) => (a[0] - b[0]) || (a[1] - b[1]));
  }

  hasEdge(u: number, v: number): boolean {
    const [a, b] = u < v ? [u, v] : [v, u];
    return this.edges.has(`${a},${b}`);
  }

  addVertex(x: number, y: number): number {
    if (this.mode !== "create") throw new FrozenStructure("adding a vertex");
    if (this.vertices.length >= MAX_ORDER) {
      throw new Error(`graphs are limited to ${MAX_ORDER} vertices`);
    }
    this.vertices.push({ x: clamp01(x), y: clamp01(y) });
    return this.vertices.length - 1;
  }

  removeVertex(index: number): void {
    if (this.mode !== "create") throw new FrozenStructure("removing a vertex");
    this.checkIndex(index);
    this.vertices.splice(index, 1);
    const renumbered = new Set<string>();
    for (const [u, v] of this.edgeList) {
      if (u === index || v === index) continue;
      const nu = u > index ? u - 1 : u;
      const nv = v > index ? v - 1 : v;
      renumbered.add(`${Math.min(nu, nv)},${Math.max(nu, nv)}`);
    }
    this.edges = renumbered;
  }

  toggleEdge(u: number, v: number): void {
    if (this.mode !== "create") throw new FrozenStructure("editing edges");
    this.checkIndex(u);
    this.checkIndex(v);
    if (u === v) throw new Error("loops are not allowed");
    const key = `${Math.min(u, v)},${Math.max(u, v)}`;
    if (this.edges.has(key)) this.edges.delete(key);
    else this.edges.add(key);
  }

  /** Dragging vertices is allowed in both modes. */
  moveVertex(index: number, x: number, y: number): void {
    this.checkIndex(index);
    this.vertices[index] = { x: clamp01(x), y: clamp01(y) };
  }

  private checkIndex(index: number): void {
    if (index < 0 || index >= this.vertices.length) {
      throw new Error(`no vertex ${index}`);
    }
  }

  toGraph(): SimpleGraph {
    return { order: this.order, edges: this.edgeList };
  }

  /** Export the drawing in the server's storage format. */
  toGraph6(): string {
    return encodeGraph6(this.toGraph());
  }

  positions(): Position[] {
    return this.vertices.map((v) => [v.x, v.y] as Position);
  }

  /** Positions-only update for an existing graph; contains no edge data. */
  repositionPayload(): RepositionPayload {
    if (this.mode !== "reposition-only") {
      throw new Error("reposition payloads come from reposition-only sessions");
    }
    return { positions: this.positions() };
  }

  /**
   * Draw-to-lookup: an induced embedding into a graph of the same order is
   * an isomorphism, so this finds the drawn graph if it is already stored.
   */
  isomorphLookupRequest(budgetSeconds = 30): SearchRequest {
    return {
      constraints: [
        { type: "invariant_exact", invariant: "number_of_vertices", value: this.order },
        { type: "invariant_exact", invariant: "number_of_edges", value: this.edgeList.length },
        { type: "subgraph", pattern: this.toGraph6(), mode: "induced", operation: "include" },
      ],
      time_budget_seconds: budgetSeconds,
    };
  }

  /** New-graph submission: format + data + the mandatory comment. */
  submissionPayload(comment: string, name?: string, interesting?: string[]): SubmissionPayload {
    if (this.mode !== "create") {
      throw new Error("submissions come from create-mode sessions");
    }
    if (this.order === 0) throw new Error("draw at least one vertex first");
    const payload: SubmissionPayload = {
      format: "graph6",
      data: this.toGraph6(),
      comment,
    };
    if (name) payload.name = name;
    if (interesting && interesting.length) payload.interesting_invariants = interesting;
    return payload;
  }
}
