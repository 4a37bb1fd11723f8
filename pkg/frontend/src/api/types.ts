/**
 * Wire types for the graphhaus REST API, with zod schemas where the client
 * validates payloads it builds or receives.
 */

import { z } from "zod";

export const InvariantKind = z.enum(["integer", "rational", "boolean"]);
export type InvariantKind = z.infer<typeof InvariantKind>;

export const InvariantDescriptor = z.object({
  id: z.string(),
  display_name: z.string(),
  kind: InvariantKind,
  hardness: z.enum(["polynomial", "exponential"]),
});
export type InvariantDescriptor = z.infer<typeof InvariantDescriptor>;

export const InvariantStatus = z.enum([
  "computed",
  "undefined",
  "timed_out",
  "pending",
  "failed",
]);
export type InvariantStatus = z.infer<typeof InvariantStatus>;

export const WireInvariantValue = z.object({
  invariant: z.string(),
  status: InvariantStatus,
  // integers and booleans arrive as JSON values, exact rationals as "p/q"
  value: z.union([z.number(), z.boolean(), z.string()]).nullable(),
});
export type WireInvariantValue = z.infer<typeof WireInvariantValue>;

export const Position = z.tuple([z.number(), z.number()]);
export type Position = z.infer<typeof Position>;

export const GraphRecordView = z.object({
  id: z.number().int(),
  canonical_key: z.string(),
  algorithm_version: z.number().int(),
  name: z.string().nullable(),
  uploader: z.string(),
  order: z.number().int(),
  edges: z.number().int(),
  formats: z.object({
    graph6: z.string(),
    adjacency_matrix: z.string(),
    edge_list: z.string(),
  }),
  comments: z.array(
    z.object({ author: z.string(), created_at: z.string(), body: z.string() }),
  ),
  embeddings: z.array(
    z.object({ author: z.string(), positions: z.array(z.array(z.number()).length(2)) }),
  ),
  interesting_marks: z.array(z.string()),
  invariant_values: z.array(WireInvariantValue),
  related: z.record(z.string(), z.number()),
});
export type GraphRecordView = z.infer<typeof GraphRecordView>;

export const SearchResponse = z.object({
  ids: z.array(z.number().int()),
  complete: z.boolean(),
});
export type SearchResponse = z.infer<typeof SearchResponse>;

/** Reposition submissions carry vertex positions and nothing else. */
export const RepositionPayload = z.strictObject({
  positions: z.array(Position),
});
export type RepositionPayload = z.infer<typeof RepositionPayload>;

export const SubmissionPayload = z.strictObject({
  format: z.enum(["graph6", "adjacency_matrix", "edge_list"]),
  data: z.string(),
  comment: z.string().min(1),
  name: z.string().optional(),
  interesting_invariants: z.array(z.string()).optional(),
});
export type SubmissionPayload = z.infer<typeof SubmissionPayload>;

export type WireConstraint =
  | { type: "invariant_range"; invariant: string; min?: number; max?: number }
  | { type: "invariant_exact"; invariant: string; value: number }
  | { type: "invariant_parity"; invariant: string; parity: "even" | "odd" }
  | { type: "boolean_class"; invariant: string; mode: "include" | "exclude" }
  | { type: "interesting"; invariant: string }
  | { type: "text"; text: string; scope: "name" | "comment" | "both" }
  | { type: "formula"; formula: string }
  | {
      type: "subgraph";
      pattern: string;
      pattern_format?: "graph6" | "adjacency_matrix" | "edge_list";
      mode: "induced" | "subgraph";
      operation: "include" | "exclude";
    };

export interface SearchRequest {
  constraints: WireConstraint[];
  time_budget_seconds: number;
}

export const MetaListView = z.object({
  family: z.string(),
  description: z.string(),
  generator_url: z.string().nullable(),
  entries: z.array(
    z.object({
      order: z.number().int(),
      count: z.number().int().nullable(),
      file_ref: z.string().nullable(),
    }),
  ),
});
export type MetaListView = z.infer<typeof MetaListView>;
