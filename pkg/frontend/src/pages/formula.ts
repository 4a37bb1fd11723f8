/**
 * Search-by-formula page: a block palette (invariants fetched from the
 * registry endpoint, comparisons, arithmetic, parentheses, connectives),
 * an assembly strip, live validation, and submission. Invalid assemblies
 * disable the search button and show the reason.
 */

import { GraphhausClient } from "../api/client.js";
import { InvariantDescriptor } from "../api/types.js";
import {
  ARITHMETIC_OPS,
  COMPARISON_OPS,
  CONNECTIVES,
  FormulaBlock,
  blockLabel,
  paletteInvariants,
  serializeBlocks,
  validateBlocks,
} from "../formula/blocks.js";
import { banner, clear, el } from "./dom.js";

export class FormulaPage {
  readonly root = el("section", { class: "page page-formula" });
  private blocks: FormulaBlock[] = [];
  private readonly strip = el("div", { class: "assembly" });
  private readonly preview = el("code", { class: "preview" });
  private readonly validation = el("div", { class: "validation" });
  private readonly submit = el("button", { type: "button", class: "primary" }, "Search");
  private readonly results = el("div", { class: "results" });
  private readonly numericIds: Set<string>;

  constructor(
    private readonly client: GraphhausClient,
    registry: InvariantDescriptor[],
  ) {
    this.numericIds = new Set(paletteInvariants(registry).map((d) => d.id));
    this.root.append(
      el("h2", {}, "Search by formula"),
      this.renderPalette(registry),
      el("h3", {}, "Your formula"),
      this.strip,
      el("p", {}, "Serialized: ", this.preview),
      this.validation,
      this.submit,
      this.results,
    );
    this.submit.addEventListener("click", () => void this.run());
    this.refresh();
  }

  private renderPalette(registry: InvariantDescriptor[]): HTMLElement {
    const palette = el("div", { class: "palette" });
    const group = (title: string, blocks: FormulaBlock[]) => {
      const section = el("div", { class: "palette-group" }, el("h4", {}, title));
      for (const block of blocks) {
        const chip = el("button", { type: "button", class: "chip", draggable: "true" }, blockLabel(block));
        chip.addEventListener("click", () => this.append(block));
        chip.addEventListener("dragstart", (event) => {
          (event as DragEvent).dataTransfer?.setData("application/json", JSON.stringify(block));
        });
        section.append(chip);
      }
      return section;
    };
    palette.append(
      // boolean invariants are deliberately absent from this palette
      group(
        "Invariants",
        paletteInvariants(registry).map((d) => ({ kind: "invariant", id: d.id })),
      ),
      group("Comparisons", COMPARISON_OPS.map((op) => ({ kind: "comparison", op }))),
      group("Arithmetic", ARITHMETIC_OPS.map((op) => ({ kind: "arithmetic-op", op }))),
      group("Parentheses", [
        { kind: "parenthesis", side: "open" },
        { kind: "parenthesis", side: "close" },
      ]),
      group("Connectives", CONNECTIVES.map((word) => ({ kind: "connective", word }))),
    );
    const numberEntry = el("input", { type: "text", placeholder: "number", class: "number-entry" });
    const addNumber = el("button", { type: "button" }, "add number");
    addNumber.addEventListener("click", () => {
      if (numberEntry.value) this.append({ kind: "number", value: numberEntry.value });
      numberEntry.value = "";
    });
    palette.append(el("div", { class: "palette-group" }, el("h4", {}, "Numbers"), numberEntry, addNumber));
    this.strip.addEventListener("dragover", (event) => event.preventDefault());
    this.strip.addEventListener("drop", (event) => {
      event.preventDefault();
      const data = (event as DragEvent).dataTransfer?.getData("application/json");
      if (data) this.append(JSON.parse(data) as FormulaBlock);
    });
    return palette;
  }

  append(block: FormulaBlock): void {
    this.blocks.push(block);
    this.refresh();
  }

  removeAt(index: number): void {
    this.blocks.splice(index, 1);
    this.refresh();
  }

  get assembly(): ReadonlyArray<FormulaBlock> {
    return this.blocks;
  }

  private refresh(): void {
    clear(this.strip);
    this.blocks.forEach((block, index) => {
      const chip = el("button", { type: "button", class: "chip placed" }, blockLabel(block));
      chip.title = "remove";
      chip.addEventListener("click", () => this.removeAt(index));
      this.strip.append(chip);
    });
    if (this.blocks.length === 0) {
      this.strip.append(el("span", { class: "hint" }, "click palette blocks to add them"));
    }
    this.preview.textContent = serializeBlocks(this.blocks);
    const result = validateBlocks(this.blocks, this.numericIds);
    clear(this.validation);
    if (result.ok) {
      this.submit.disabled = false;
    } else {
      this.submit.disabled = true;
      this.validation.append(banner("warn", result.reason ?? "incomplete formula"));
    }
  }

  async run(): Promise<void> {
    clear(this.results);
    try {
      const response = await this.client.search({
        constraints: [{ type: "formula", formula: serializeBlocks(this.blocks) }],
        time_budget_seconds: 30,
      });
      const list = el("ul", { class: "result-list" });
      for (const id of response.ids) {
        list.append(el("li", {}, el("a", { href: `/graphs/${id}` }, `graph ${id}`)));
      }
      this.results.append(el("p", {}, `${response.ids.length} graph(s)`), list);
    } catch (error) {
      this.results.append(banner("error", (error as Error).message));
    }
  }
}
