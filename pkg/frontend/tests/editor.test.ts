import { describe, expect, it } from "vitest";

import { GraphRecordView, RepositionPayload, SubmissionPayload } from "../src/api/types.js";
import { EditorState, FrozenStructure } from "../src/editor/state.js";

function storedRecord(): GraphRecordView {
  // a stored triangle with one drawing
  return {
    id: 7,
    canonical_key: "Bw",
    algorithm_version: 1,
    name: "triangle",
    uploader: "alice",
    order: 3,
    edges: 3,
    formats: { graph6: "Bw", adjacency_matrix: "0 1 1\n1 0 1\n1 1 0", edge_list: "n=3\n0 1\n0 2\n1 2" },
    comments: [],
    embeddings: [{ author: "alice", positions: [[0.1, 0.1], [0.9, 0.1], [0.5, 0.9]] }],
    interesting_marks: [],
    invariant_values: [],
    related: {},
  };
}

describe("create mode", () => {
  it("builds a graph and submits it as graph6", () => {
    const state = EditorState.createMode();
    state.addVertex(0.1, 0.1);
    state.addVertex(0.9, 0.1);
    state.addVertex(0.5, 0.9);
    state.toggleEdge(0, 1);
    state.toggleEdge(0, 2);
    state.toggleEdge(1, 2);
    expect(state.toGraph6()).toBe("Bw");
    const payload = state.submissionPayload("a triangle", "K3");
    expect(SubmissionPayload.parse(payload)).toEqual({
      format: "graph6",
      data: "Bw",
      comment: "a triangle",
      name: "K3",
    });
  });

  it("toggling an edge twice removes it; removing a vertex renumbers", () => {
    const state = EditorState.createMode();
    for (let i = 0; i < 4; i++) state.addVertex(i / 4, 0.5);
    state.toggleEdge(0, 1);
    state.toggleEdge(0, 1);
    expect(state.edgeList).toEqual([]);
    state.toggleEdge(1, 2);
    state.toggleEdge(2, 3);
    state.removeVertex(0);
    expect(state.order).toBe(3);
    expect(state.edgeList).toEqual([
      [0, 1],
      [1, 2],
    ]);
  });

  it("rejects loops and bad indices", () => {
    const state = EditorState.createMode();
    state.addVertex(0.5, 0.5);
    expect(() => state.toggleEdge(0, 0)).toThrow(/loops/);
    expect(() => state.moveVertex(3, 0.5, 0.5)).toThrow(/no vertex/);
  });

  it("builds the isomorph lookup request from the drawing", () => {
    const state = EditorState.createMode();
    state.addVertex(0.2, 0.2);
    state.addVertex(0.8, 0.2);
    state.toggleEdge(0, 1);
    const request = state.isomorphLookupRequest();
    expect(request.constraints).toEqual([
      { type: "invariant_exact", invariant: "number_of_vertices", value: 2 },
      { type: "invariant_exact", invariant: "number_of_edges", value: 1 },
      { type: "subgraph", pattern: "A_", mode: "induced", operation: "include" },
    ]);
  });
});

describe("reposition-only mode", () => {
  it("freezes the vertex and edge sets", () => {
    const state = EditorState.repositionMode(storedRecord());
    expect(state.order).toBe(3);
    expect(state.edgeList).toEqual([
      [0, 1],
      [0, 2],
      [1, 2],
    ]);
    expect(() => state.addVertex(0.5, 0.5)).toThrow(FrozenStructure);
    expect(() => state.removeVertex(0)).toThrow(FrozenStructure);
    expect(() => state.toggleEdge(0, 1)).toThrow(FrozenStructure);
  });

  it("allows dragging vertices and clamps into the unit square", () => {
    const state = EditorState.repositionMode(storedRecord());
    state.moveVertex(0, 1.7, -0.3);
    expect(state.positions()[0]).toEqual([1, 0]);
  });

  it("reposition payload carries positions and no edge data", () => {
    const state = EditorState.repositionMode(storedRecord());
    state.moveVertex(2, 0.4, 0.6);
    const payload = state.repositionPayload();
    // schema assertion: exactly one key, "positions"
    expect(Object.keys(payload)).toEqual(["positions"]);
    expect(RepositionPayload.parse(payload)).toEqual({
      positions: [
        [0.1, 0.1],
        [0.9, 0.1],
        [0.4, 0.6],
      ],
    });
    // the strict schema structurally rejects any payload carrying edges
    expect(() =>
      RepositionPayload.parse({ positions: payload.positions, edges: [[0, 1]] }),
    ).toThrow();
    expect(JSON.stringify(payload)).not.toContain("edge");
  });

  it("cannot produce a new-graph submission", () => {
    const state = EditorState.repositionMode(storedRecord());
    expect(() => state.submissionPayload("nope")).toThrow(/create-mode/);
  });

  it("create mode cannot produce a reposition payload", () => {
    const state = EditorState.createMode();
    state.addVertex(0.5, 0.5);
    expect(() => state.repositionPayload()).toThrow(/reposition-only/);
  });
});
