/**
 * Block model for the visual formula builder.
 *
 * Users assemble formulas from typed blocks (invariants, numbers,
 * comparisons, arithmetic operators, parentheses, connectives) instead of
 * writing text. A block sequence is submittable only when it serializes to
 * text the server grammar accepts, so this module re-implements that
 * grammar as a validator over block sequences:
 *
 *   formula    := or_expr
 *   or_expr    := and_expr ("OR" and_expr)*
 *   and_expr   := not_expr ("AND" not_expr)*
 *   not_expr   := ["NOT"] atom
 *   atom       := comparison | "(" formula ")"
 *   comparison := expr cmp expr
 *   expr       := term (("+"|"-") term)*
 *   term       := factor (("*"|"/") factor)*
 *   factor     := number | invariant_id | "(" expr ")"
 */

import { InvariantDescriptor } from "../api/types.js";

export type ComparisonOp = "<" | "<=" | "=" | "!=" | ">=" | ">";
export type ArithmeticOp = "+" | "-" | "*" | "/";
export type Connective = "AND" | "OR" | "NOT";

export type FormulaBlock =
  | { kind: "invariant"; id: string }
  | { kind: "number"; value: string }
  | { kind: "comparison"; op: ComparisonOp }
  | { kind: "arithmetic-op"; op: ArithmeticOp }
  | { kind: "parenthesis"; side: "open" | "close" }
  | { kind: "connective"; word: Connective };

export const COMPARISON_OPS: ComparisonOp[] = ["<", "<=", "=", "!=", ">=", ">"];
export const ARITHMETIC_OPS: ArithmeticOp[] = ["+", "-", "*", "/"];
export const CONNECTIVES: Connective[] = ["AND", "OR", "NOT"];

const NUMBER_RE = /^\d+(\.\d+)?$/;

/** Palette entries: only numerical invariants may appear in formulas. */
export function paletteInvariants(descriptors: InvariantDescriptor[]): InvariantDescriptor[] {
  return descriptors.filter((d) => d.kind === "integer" || d.kind === "rational");
}

export function blockLabel(block: FormulaBlock): string {
  switch (block.kind) {
    case "invariant":
      return block.id;
    case "number":
      return block.value;
    case "comparison":
    case "arithmetic-op":
      return block.op;
    case "parenthesis":
      return block.side === "open" ? "(" : ")";
    case "connective":
      return block.word;
  }
}

/** Serialize a block sequence to formula text for the search API. */
export function serializeBlocks(blocks: FormulaBlock[]): string {
  return blocks.map(blockLabel).join(" ");
}

export interface ValidationResult {
  ok: boolean;
  reason?: string;
}

class BlockError extends Error {
  constructor(
    message: string,
    readonly position: number,
  ) {
    super(message);
  }
}

class BlockParser {
  private i = 0;

  constructor(
    private readonly blocks: FormulaBlock[],
    private readonly numericIds: Set<string>,
  ) {}

  private peek(): FormulaBlock | undefined {
    return this.blocks[this.i];
  }

  private fail(reason: string): never {
    const at = this.i < this.blocks.length ? `block ${this.i + 1}` : "end";
    throw new BlockError(`${reason} (at ${at})`, this.i);
  }

  parse(): void {
    this.orExpr();
    if (this.i !== this.blocks.length) this.fail("unexpected trailing blocks");
  }

  private isConnective(word: Connective): boolean {
    const b = this.peek();
    return b?.kind === "connective" && b.word === word;
  }

  private orExpr(): void {
    this.andExpr();
    while (this.isConnective("OR")) {
      this.i += 1;
      this.andExpr();
    }
  }

  private andExpr(): void {
    this.notExpr();
    while (this.isConnective("AND")) {
      this.i += 1;
      this.notExpr();
    }
  }

  private notExpr(): void {
    if (this.isConnective("NOT")) this.i += 1;
    this.atom();
  }

  private atom(): void {
    const mark = this.i;
    let comparisonError: BlockError;
    try {
      this.comparison();
      return;
    } catch (error) {
      comparisonError = error as BlockError;
      this.i = mark;
    }
    try {
      const open = this.peek();
      if (!(open?.kind === "parenthesis" && open.side === "open")) {
        this.fail("expected a comparison or an opening parenthesis");
      }
      this.i += 1;
      this.orExpr();
      const close = this.peek();
      if (!(close?.kind === "parenthesis" && close.side === "close")) {
        this.fail("expected a closing parenthesis");
      }
      this.i += 1;
    } catch (error) {
      // report whichever alternative got further
      const parenError = error as BlockError;
      throw comparisonError.position >= parenError.position ? comparisonError : parenError;
    }
  }

  private comparison(): void {
    this.expr();
    const cmp = this.peek();
    if (cmp?.kind !== "comparison") this.fail("expected a comparison operator");
    this.i += 1;
    this.expr();
  }

  private expr(): void {
    this.term();
    let b = this.peek();
    while (b?.kind === "arithmetic-op" && (b.op === "+" || b.op === "-")) {
      this.i += 1;
      this.term();
      b = this.peek();
    }
  }

  private term(): void {
    this.factor();
    let b = this.peek();
    while (b?.kind === "arithmetic-op" && (b.op === "*" || b.op === "/")) {
      this.i += 1;
      this.factor();
      b = this.peek();
    }
  }

  private factor(): void {
    const b = this.peek();
    if (b?.kind === "number") {
      if (!NUMBER_RE.test(b.value)) this.fail(`bad number literal ${b.value}`);
      this.i += 1;
      return;
    }
    if (b?.kind === "invariant") {
      if (!this.numericIds.has(b.id)) {
        this.fail(`${b.id} is not a numerical invariant`);
      }
      this.i += 1;
      return;
    }
    if (b?.kind === "parenthesis" && b.side === "open") {
      this.i += 1;
      this.expr();
      const close = this.peek();
      if (!(close?.kind === "parenthesis" && close.side === "close")) {
        this.fail("expected a closing parenthesis");
      }
      this.i += 1;
      return;
    }
    this.fail("expected a number, invariant, or opening parenthesis");
  }
}

/**
 * Mirror of the server-side grammar over block sequences. A sequence that
 * validates here always serializes to text the API accepts.
 */
export function validateBlocks(
  blocks: FormulaBlock[],
  numericIds: Set<string>,
): ValidationResult {
  if (blocks.length === 0) return { ok: false, reason: "the formula is empty" };
  try {
    new BlockParser(blocks, numericIds).parse();
    return { ok: true };
  } catch (error) {
    return { ok: false, reason: (error as Error).message };
  }
}
