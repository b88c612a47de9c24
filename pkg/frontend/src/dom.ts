/** Tiny DOM builders. Interactive elements must be constructed through
 * these helpers, which demand an accessible name at the type level. */

type Child = Node | string | null | undefined;

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "text") node.textContent = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    if (child == null) continue;
    node.append(child);
  }
  return node;
}

/** A button always gets a visible label (its accessible name). */
export function button(
  label: string,
  onClick: (ev: MouseEvent) => void,
  attrs: Record<string, string> = {},
): HTMLButtonElement {
  const b = el("button", { type: "button", ...attrs }, label);
  b.addEventListener("click", onClick);
  return b;
}

let fieldSeq = 0;

/** Label + control wired together via a generated id. */
export function labeled<T extends HTMLElement>(
  labelText: string,
  control: T,
  attrs: Record<string, string> = {},
): HTMLDivElement {
  const id = `field-${++fieldSeq}`;
  control.setAttribute("id", id);
  const label = el("label", { for: id }, labelText);
  return el("div", { class: "field", ...attrs }, label, control);
}

export function textInput(attrs: Record<string, string> = {}): HTMLInputElement {
  return el("input", { type: "text", ...attrs });
}

export function textarea(attrs: Record<string, string> = {}): HTMLTextAreaElement {
  return el("textarea", attrs);
}

export function select(
  options: Array<{ value: string; label: string }>,
  attrs: Record<string, string> = {},
): HTMLSelectElement {
  const s = el("select", attrs);
  for (const o of options) s.append(el("option", { value: o.value }, o.label));
  return s;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

/** Status line for async outcomes; role=status so screen readers announce. */
export function statusLine(kind: "ok" | "error" | "info", message: string): HTMLParagraphElement {
  return el("p", { class: `status status-${kind}`, role: "status" }, message);
}
