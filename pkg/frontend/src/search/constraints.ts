/**
 * Constraint composer for the search page: drafts edited in the UI are
 * validated locally (mirroring the server's rules, using the invariant
 * registry fetched from the API) and serialized to the wire format.
 */

import { InvariantDescriptor, SearchRequest, WireConstraint } from "../api/types.js";
import { FormulaBlock, serializeBlocks, validateBlocks } from "../formula/blocks.js";

export const MIN_BUDGET_SECONDS = 5;
export const MAX_BUDGET_SECONDS = 120;
export const DEFAULT_BUDGET_SECONDS = 30;

export type ConstraintDraft =
  | { type: "invariant_range"; invariant: string; min?: number; max?: number }
  | { type: "invariant_exact"; invariant: string; value: number }
  | { type: "invariant_parity"; invariant: string; parity: "even" | "odd" }
  | { type: "boolean_class"; invariant: string; mode: "include" | "exclude" }
  | { type: "interesting"; invariant: string }
  | { type: "text"; text: string; scope: "name" | "comment" | "both" }
  | { type: "formula"; blocks: FormulaBlock[] }
  | {
      type: "subgraph";
      pattern: string; // graph6 text, typically exported from the editor
      mode: "induced" | "subgraph";
      operation: "include" | "exclude";
    };

export class DraftError extends Error {}

function kindOf(registry: InvariantDescriptor[], id: string): InvariantDescriptor["kind"] {
  const desc = registry.find((d) => d.id === id);
  if (!desc) throw new DraftError(`unknown invariant ${id}`);
  return desc.kind;
}

function requireNumeric(registry: InvariantDescriptor[], id: string): void {
  if (kindOf(registry, id) === "boolean") {
    throw new DraftError(`${id} is boolean; use a class constraint`);
  }
}

export function draftToWire(
  draft: ConstraintDraft,
  registry: InvariantDescriptor[],
): WireConstraint {
  switch (draft.type) {
    case "invariant_range": {
      requireNumeric(registry, draft.invariant);
      if (draft.min === undefined && draft.max === undefined) {
        throw new DraftError("a range needs at least one bound");
      }
      const wire: WireConstraint = { type: "invariant_range", invariant: draft.invariant };
      if (draft.min !== undefined) wire.min = draft.min;
      if (draft.max !== undefined) wire.max = draft.max;
      return wire;
    }
    case "invariant_exact":
      requireNumeric(registry, draft.invariant);
      return { type: "invariant_exact", invariant: draft.invariant, value: draft.value };
    case "invariant_parity":
      if (kindOf(registry, draft.invariant) !== "integer") {
        throw new DraftError(`parity applies to integer invariants, not ${draft.invariant}`);
      }
      return { type: "invariant_parity", invariant: draft.invariant, parity: draft.parity };
    case "boolean_class":
      if (kindOf(registry, draft.invariant) !== "boolean") {
        throw new DraftError(`${draft.invariant} is not a boolean invariant`);
      }
      return { type: "boolean_class", invariant: draft.invariant, mode: draft.mode };
    case "interesting":
      kindOf(registry, draft.invariant);
      return { type: "interesting", invariant: draft.invariant };
    case "text":
      if (!draft.text) throw new DraftError("text search needs a non-empty needle");
      return { type: "text", text: draft.text, scope: draft.scope };
    case "formula": {
      const numericIds = new Set(
        registry.filter((d) => d.kind !== "boolean").map((d) => d.id),
      );
      const result = validateBlocks(draft.blocks, numericIds);
      if (!result.ok) throw new DraftError(result.reason ?? "invalid formula");
      return { type: "formula", formula: serializeBlocks(draft.blocks) };
    }
    case "subgraph":
      if (!draft.pattern) throw new DraftError("subgraph constraint needs a pattern");
      return {
        type: "subgraph",
        pattern: draft.pattern,
        pattern_format: "graph6",
        mode: draft.mode,
        operation: draft.operation,
      };
  }
}

export function buildSearchRequest(
  drafts: ConstraintDraft[],
  registry: InvariantDescriptor[],
  budgetSeconds: number = DEFAULT_BUDGET_SECONDS,
): SearchRequest {
  if (budgetSeconds < MIN_BUDGET_SECONDS || budgetSeconds > MAX_BUDGET_SECONDS) {
    throw new DraftError(
      `time budget must be within ${MIN_BUDGET_SECONDS}..${MAX_BUDGET_SECONDS} s`,
    );
  }
  return {
    constraints: drafts.map((d) => draftToWire(d, registry)),
    time_budget_seconds: budgetSeconds,
  };
}

export function hasSubgraphConstraint(drafts: ConstraintDraft[]): boolean {
  return drafts.some((d) => d.type === "subgraph");
}
