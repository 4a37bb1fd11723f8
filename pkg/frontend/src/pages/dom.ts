/** Tiny DOM helpers shared by the pages. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Array<Node | string>
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function option(value: string, label = value): HTMLOptionElement {
  return el("option", { value }, label);
}

export function banner(kind: "info" | "warn" | "error", text: string): HTMLElement {
  return el("div", { class: `banner banner-${kind}` }, text);
}
