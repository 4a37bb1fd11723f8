/**
 * Single-page client entry point: minimal router over the search page, the
 * formula builder, the editor, and graph detail pages (the server keeps
 * /graphs/{id} URLs stable, including the legacy redirect scheme).
 */

import { GraphhausClient } from "./api/client.js";
import { InvariantDescriptor } from "./api/types.js";
import { banner, clear, el } from "./pages/dom.js";
import { DetailPage } from "./pages/detail.js";
import { EditorPage } from "./pages/editor.js";
import { FormulaPage } from "./pages/formula.js";
import { SearchPage } from "./pages/search.js";

const client = new GraphhausClient("");

async function loginBar(): Promise<HTMLElement> {
  const bar = el("div", { class: "login-bar" });
  const login = el("input", { type: "text", placeholder: "login" });
  const password = el("input", { type: "password", placeholder: "password" });
  const button = el("button", { type: "button" }, "Log in");
  const status = el("span", {});
  button.addEventListener("click", () => {
    void client
      .login(login.value, password.value)
      .then(() => (status.textContent = `logged in as ${login.value}`))
      .catch((error) => (status.textContent = (error as Error).message));
  });
  bar.append(login, password, button, status);
  return bar;
}

async function main(): Promise<void> {
  const app = document.getElementById("app");
  if (!app) return;
  let registry: InvariantDescriptor[];
  try {
    registry = await client.invariants();
  } catch (error) {
    app.append(banner("error", `cannot reach the server: ${(error as Error).message}`));
    return;
  }

  const content = el("main", {});
  const show = (node: HTMLElement) => {
    clear(content);
    content.append(node);
  };

  const showDetail = async (id: number) => {
    try {
      const record = await client.getGraph(id);
      show(
        new DetailPage(client, record, (r) => show(new EditorPage(client, r).root)).root,
      );
    } catch (error) {
      show(banner("error", (error as Error).message));
    }
  };

  const nav = el("nav", {});
  const tabs: Array<[string, () => void]> = [
    ["Search", () => show(new SearchPage(client, registry).root)],
    ["Formula", () => show(new FormulaPage(client, registry).root)],
    ["Draw", () => show(new EditorPage(client).root)],
  ];
  for (const [label, activate] of tabs) {
    const link = el("button", { type: "button" }, label);
    link.addEventListener("click", activate);
    nav.append(link);
  }

  app.append(el("h1", {}, "graphhaus"), await loginBar(), nav, content);

  const detailMatch = window.location.pathname.match(/^\/graphs\/(\d+)$/);
  if (detailMatch) {
    await showDetail(Number(detailMatch[1]));
  } else {
    show(new SearchPage(client, registry).root);
  }
}

void main();
