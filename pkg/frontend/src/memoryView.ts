import type { MemoryDocument, NodeDoc } from "./types";

export interface MemoryViewOptions {
  /** root-to-node path of the current top match */
  highlight: string[];
  selected: string | null;
  collapsed: Set<string>;
  versionFilter: string | null;
  onSelect: (nodeId: string) => void;
  onToggle: (nodeId: string) => void;
}

function nodeLabel(node: NodeDoc): string {
  const values = Object.values(node.attributes).join(" ");
  return values ? `${node.type} · ${values}` : node.type;
}

function renderNode(doc: Document, node: NodeDoc, opts: MemoryViewOptions): HTMLElement {
  const item = doc.createElement("li");
  item.dataset.id = node.id;

  const line = doc.createElement("div");
  line.className = "node-line";
  if (opts.highlight.includes(node.id)) line.classList.add("highlight");
  if (opts.selected === node.id) line.classList.add("selected");

  if (node.children.length) {
    const caret = doc.createElement("button");
    caret.className = "caret";
    caret.textContent = opts.collapsed.has(node.id) ? "▸" : "▾";
    caret.addEventListener("click", (event) => {
      event.stopPropagation();
      opts.onToggle(node.id);
    });
    line.appendChild(caret);
  } else {
    const spacer = doc.createElement("span");
    spacer.className = "caret-spacer";
    line.appendChild(spacer);
  }

  const label = doc.createElement("span");
  label.className = "node-label";
  label.textContent = nodeLabel(node);
  line.appendChild(label);
  line.addEventListener("click", () => opts.onSelect(node.id));
  item.appendChild(line);

  // clicking a node reveals its attributes in place
  if (opts.selected === node.id) {
    const attrs = doc.createElement("dl");
    attrs.className = "attributes";
    attrs.appendChild(row(doc, "id", node.id));
    attrs.appendChild(row(doc, "type", node.type));
    for (const [name, value] of Object.entries(node.attributes)) {
      attrs.appendChild(row(doc, name, value));
    }
    item.appendChild(attrs);
  }

  if (node.children.length && !opts.collapsed.has(node.id)) {
    const list = doc.createElement("ul");
    for (const child of node.children) {
      list.appendChild(renderNode(doc, child, opts));
    }
    item.appendChild(list);
  }
  return item;
}

function row(doc: Document, name: string, value: string): HTMLElement {
  const wrap = doc.createElement("div");
  const dt = doc.createElement("dt");
  dt.textContent = name;
  const dd = doc.createElement("dd");
  dd.textContent = value;
  wrap.append(dt, dd);
  return wrap;
}

/** Rebuild the collapsible tree inside container from the latest document. */
export function renderMemoryView(
  container: HTMLElement,
  memory: MemoryDocument,
  opts: MemoryViewOptions,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  let root = memory.root;
  if (opts.versionFilter) {
    const branch = memory.root.children.find((child) => child.id === opts.versionFilter);
    if (branch) {
      root = { ...memory.root, children: [branch] };
    }
  }
  const list = doc.createElement("ul");
  list.className = "memory-tree";
  list.appendChild(renderNode(doc, root, opts));
  container.appendChild(list);
}
