/**
 * Search page: stack up constraints of any type, set the subgraph time
 * limit, submit, and render results with a partial-results banner when the
 * search ran out of budget.
 */

import { GraphhausClient } from "../api/client.js";
import { InvariantDescriptor } from "../api/types.js";
import {
  ConstraintDraft,
  DEFAULT_BUDGET_SECONDS,
  DraftError,
  MAX_BUDGET_SECONDS,
  MIN_BUDGET_SECONDS,
  buildSearchRequest,
  hasSubgraphConstraint,
} from "../search/constraints.js";
import { banner, clear, el, option } from "./dom.js";

interface RowState {
  draft: ConstraintDraft;
  node: HTMLElement;
}

export class SearchPage {
  readonly root = el("section", { class: "page page-search" });
  private rows: RowState[] = [];
  private budget = DEFAULT_BUDGET_SECONDS;
  private readonly results = el("div", { class: "results" });
  private readonly status = el("div", { class: "status" });
  private inFlight: AbortController | null = null;

  constructor(
    private readonly client: GraphhausClient,
    private readonly registry: InvariantDescriptor[],
  ) {
    this.render();
  }

  private numericIds(): string[] {
    return this.registry.filter((d) => d.kind !== "boolean").map((d) => d.id);
  }

  private integerIds(): string[] {
    return this.registry.filter((d) => d.kind === "integer").map((d) => d.id);
  }

  private booleanIds(): string[] {
    return this.registry.filter((d) => d.kind === "boolean").map((d) => d.id);
  }

  private render(): void {
    const addButtons = el("div", { class: "add-constraint" });
    const kinds: Array<[string, () => ConstraintDraft]> = [
      ["bounds", () => ({ type: "invariant_range", invariant: this.numericIds()[0]!, min: 0 })],
      ["exact value", () => ({ type: "invariant_exact", invariant: this.numericIds()[0]!, value: 0 })],
      ["parity", () => ({ type: "invariant_parity", invariant: this.integerIds()[0]!, parity: "odd" })],
      ["class", () => ({ type: "boolean_class", invariant: this.booleanIds()[0]!, mode: "include" })],
      ["interesting", () => ({ type: "interesting", invariant: this.registry[0]!.id })],
      ["text", () => ({ type: "text", text: "", scope: "both" })],
      ["subgraph", () => ({ type: "subgraph", pattern: "", mode: "induced", operation: "include" })],
    ];
    for (const [label, make] of kinds) {
      const button = el("button", { type: "button" }, `+ ${label}`);
      button.addEventListener("click", () => this.addRow(make()));
      addButtons.append(button);
    }

    const budgetInput = el("input", {
      type: "range",
      min: String(MIN_BUDGET_SECONDS),
      max: String(MAX_BUDGET_SECONDS),
      value: String(DEFAULT_BUDGET_SECONDS),
    });
    const budgetLabel = el("span", {}, `${DEFAULT_BUDGET_SECONDS} s`);
    budgetInput.addEventListener("input", () => {
      this.budget = Number(budgetInput.value);
      budgetLabel.textContent = `${this.budget} s`;
    });

    const submit = el("button", { type: "button", class: "primary" }, "Search");
    submit.addEventListener("click", () => void this.run());

    this.root.append(
      el("h2", {}, "Search the database"),
      addButtons,
      el("div", { class: "constraint-rows" }),
      el("label", { class: "budget" }, "Subgraph time limit: ", budgetInput, budgetLabel),
      submit,
      this.status,
      this.results,
    );
  }

  private rowsContainer(): HTMLElement {
    return this.root.querySelector(".constraint-rows") as HTMLElement;
  }

  addRow(draft: ConstraintDraft): void {
    const node = this.renderRow(draft);
    this.rows.push({ draft, node });
    this.rowsContainer().append(node);
  }

  private renderRow(draft: ConstraintDraft): HTMLElement {
    const row = el("div", { class: `constraint constraint-${draft.type}` });
    const remove = el("button", { type: "button", class: "remove" }, "×");
    remove.addEventListener("click", () => {
      this.rows = this.rows.filter((r) => r.node !== row);
      row.remove();
    });

    const invariantSelect = (ids: string[], current: string, onChange: (id: string) => void) => {
      const select = el("select", {});
      for (const id of ids) select.append(option(id));
      select.value = current;
      select.addEventListener("change", () => onChange(select.value));
      return select;
    };
    const numberInput = (value: number | undefined, onChange: (v: number | undefined) => void) => {
      const input = el("input", { type: "number", value: value === undefined ? "" : String(value) });
      input.addEventListener("input", () =>
        onChange(input.value === "" ? undefined : Number(input.value)),
      );
      return input;
    };

    switch (draft.type) {
      case "invariant_range":
        row.append(
          invariantSelect(this.numericIds(), draft.invariant, (id) => (draft.invariant = id)),
          " between ",
          numberInput(draft.min, (v) => (draft.min = v)),
          " and ",
          numberInput(draft.max, (v) => (draft.max = v)),
        );
        break;
      case "invariant_exact":
        row.append(
          invariantSelect(this.numericIds(), draft.invariant, (id) => (draft.invariant = id)),
          " = ",
          numberInput(draft.value, (v) => (draft.value = v ?? 0)),
        );
        break;
      case "invariant_parity": {
        const parity = el("select", {}, option("odd"), option("even"));
        parity.value = draft.parity;
        parity.addEventListener("change", () => (draft.parity = parity.value as "even" | "odd"));
        row.append(
          invariantSelect(this.integerIds(), draft.invariant, (id) => (draft.invariant = id)),
          " is ",
          parity,
        );
        break;
      }
      case "boolean_class": {
        const mode = el("select", {}, option("include", "in"), option("exclude", "not in"));
        mode.value = draft.mode;
        mode.addEventListener("change", () => (draft.mode = mode.value as "include" | "exclude"));
        row.append(
          "graph is ",
          mode,
          " class ",
          invariantSelect(this.booleanIds(), draft.invariant, (id) => (draft.invariant = id)),
        );
        break;
      }
      case "interesting":
        row.append(
          invariantSelect(
            this.registry.map((d) => d.id),
            draft.invariant,
            (id) => (draft.invariant = id),
          ),
          " marked interesting",
        );
        break;
      case "text": {
        const needle = el("input", { type: "text", placeholder: "text to find" });
        needle.addEventListener("input", () => (draft.text = needle.value));
        const scope = el("select", {}, option("both"), option("name"), option("comment"));
        scope.value = draft.scope;
        scope.addEventListener("change", () => (draft.scope = scope.value as typeof draft.scope));
        row.append(needle, " in ", scope);
        break;
      }
      case "subgraph": {
        const pattern = el("input", { type: "text", placeholder: "pattern graph6" });
        pattern.addEventListener("input", () => (draft.pattern = pattern.value));
        const mode = el("select", {}, option("induced"), option("subgraph"));
        mode.addEventListener("change", () => (draft.mode = mode.value as typeof draft.mode));
        const operation = el("select", {}, option("include", "contains"), option("exclude", "does not contain"));
        operation.addEventListener(
          "change",
          () => (draft.operation = operation.value as typeof draft.operation),
        );
        row.append(operation, " pattern ", pattern, " as ", mode);
        break;
      }
      case "formula":
        row.append("formula (built on the formula page)");
        break;
    }
    row.append(remove);
    return row;
  }

  async run(): Promise<void> {
    clear(this.status);
    clear(this.results);
    // at most one in-flight search: a new submission cancels the pending one
    this.inFlight?.abort();
    this.inFlight = new AbortController();
    let request;
    try {
      request = buildSearchRequest(
        this.rows.map((r) => r.draft),
        this.registry,
        this.budget,
      );
    } catch (error) {
      if (error instanceof DraftError) {
        this.status.append(banner("error", error.message));
        return;
      }
      throw error;
    }
    this.status.append(banner("info", "searching..."));
    try {
      const response = await this.client.search(request);
      clear(this.status);
      if (!response.complete) {
        this.status.append(
          banner(
            "warn",
            "The time limit expired before the whole database was scanned; " +
              "these results are incomplete. Raise the time limit to find more.",
          ),
        );
      }
      if (response.ids.length === 0) {
        this.results.append(el("p", { class: "empty" }, "No graphs matched."));
        return;
      }
      const list = el("ul", { class: "result-list" });
      for (const id of response.ids) {
        list.append(el("li", {}, el("a", { href: `/graphs/${id}` }, `graph ${id}`)));
      }
      this.results.append(
        el("p", {}, `${response.ids.length} graph(s)${response.complete ? "" : " so far"}`),
        list,
      );
      if (hasSubgraphConstraint(this.rows.map((r) => r.draft)) && response.complete) {
        this.status.append(banner("info", "Subgraph scan finished within the time limit."));
      }
    } catch (error) {
      clear(this.status);
      this.status.append(banner("error", (error as Error).message));
    }
  }
}
