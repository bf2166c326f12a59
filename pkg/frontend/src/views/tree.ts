import { CATEGORY_COLORS, codeCategory, scoreColor } from "../palette.js";
import { arcPath } from "./donut.js";
import type { CodeEntry, HighlightDoc, TreeDoc, TreeEdgeDoc, TreeNodeDoc } from "../types.js";

// Layout of the interaction tree: node depth positions accumulate the
// per-edge horizontal extents (longer link = higher mean information gain),
// rows come from a leaf-first traversal, and stroke width/opacity encode
// mean response length via the server-provided weights.

export type HighlightState = "normal" | "highlighted" | "dimmed";

export interface PieSlice {
  code: string;
  color: string;
  path: string;
}

export interface NodeModel {
  id: string;
  x: number;
  y: number;
  radius: number;
  codes: string[];
  count: number;
  slices: PieSlice[];
  state: HighlightState;
}

export interface EdgeModel {
  id: string;
  from: string;
  to: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  strokeWidth: number;
  opacity: number;
  state: HighlightState;
}

export interface LeafModel {
  student: string;
  task: string;
  score: number;
  scoreColor: string;
  x: number;
  y: number;
  state: HighlightState;
}

export interface ElidedModel {
  parent: string;
  count: number;
  x: number;
  y: number;
}

export interface TreeLayout {
  nodes: NodeModel[];
  edges: EdgeModel[];
  leaves: LeafModel[];
  elided: ElidedModel[];
  width: number;
  height: number;
}

export interface TreeLayoutOptions {
  xScale: number;
  rowHeight: number;
  minStroke: number;
  maxStroke: number;
  minOpacity: number;
  minRadius: number;
  radiusScale: number;
  leafOffset: number;
}

export const DEFAULT_LAYOUT: TreeLayoutOptions = {
  xScale: 60,
  rowHeight: 26,
  minStroke: 1,
  maxStroke: 7,
  minOpacity: 0.25,
  minRadius: 5,
  radiusScale: 3.5,
  leafOffset: 28,
};

export function edgeKey(from: string, to: string): string {
  return `${from}-${to}`;
}

export function leafKey(student: string, task: string): string {
  return JSON.stringify([student, task]);
}

function pieSlices(
  node: TreeNodeDoc,
  radius: number,
  schema: Map<string, CodeEntry>,
): PieSlice[] {
  const codes = node.codes;
  if (codes.length <= 1) return [];
  let angle = 0;
  return codes.map((code) => {
    const fraction = node.pie[code] ?? 1 / codes.length;
    const sweep = fraction * 360;
    const entry = schema.get(code);
    const color = entry ? CATEGORY_COLORS[codeCategory(entry)] : "#999999";
    const path = arcPath(0, 0, radius, 0, angle, Math.min(angle + sweep, 359.999));
    angle += sweep;
    return { code, color, path };
  });
}

/** Compute positions for every node, edge, leaf tag and elided marker. */
export function layoutTree(
  doc: TreeDoc,
  schema: Map<string, CodeEntry>,
  options: Partial<TreeLayoutOptions> = {},
): TreeLayout {
  const opts = { ...DEFAULT_LAYOUT, ...options };
  const nodesById = new Map(doc.nodes.map((n) => [n.id, n]));
  const childEdges = new Map<string, TreeEdgeDoc[]>();
  for (const edge of doc.edges) {
    const list = childEdges.get(edge.from) ?? [];
    list.push(edge);
    childEdges.set(edge.from, list);
  }
  const elidedByParent = new Map(doc.elided.map((e) => [e.parent, e.count]));

  if (!doc.nodes.length) {
    return { nodes: [], edges: [], leaves: [], elided: [], width: 0, height: 0 };
  }
  const root = doc.nodes[0]!;

  const x = new Map<string, number>([[root.id, 0]]);
  const y = new Map<string, number>();
  const leaves: LeafModel[] = [];
  const elided: ElidedModel[] = [];
  let row = 0;
  let maxX = 0;

  // rows: own leaf tags first, then each child subtree, then the elided
  // marker; a node sits at the midpoint of the rows its subtree occupies
  const assign = (node: TreeNodeDoc): void => {
    const startRow = row;
    const nodeX = x.get(node.id) ?? 0;
    for (const tag of node.leaves) {
      leaves.push({
        student: tag.student,
        task: tag.task,
        score: tag.score,
        scoreColor: scoreColor(tag.score),
        x: nodeX + opts.leafOffset,
        y: row * opts.rowHeight,
        state: "normal",
      });
      row += 1;
    }
    for (const edge of childEdges.get(node.id) ?? []) {
      const child = nodesById.get(edge.to);
      if (!child) continue;
      const childX = nodeX + edge.x_extent * opts.xScale;
      x.set(child.id, childX);
      maxX = Math.max(maxX, childX);
      assign(child);
    }
    if (elidedByParent.has(node.id)) {
      elided.push({
        parent: node.id,
        count: elidedByParent.get(node.id)!,
        x: nodeX + opts.leafOffset,
        y: row * opts.rowHeight,
      });
      row += 1;
    }
    const endRow = Math.max(row, startRow + 1);
    y.set(node.id, ((startRow + endRow - 1) / 2) * opts.rowHeight);
  };
  assign(root);

  const nodes: NodeModel[] = doc.nodes.map((node) => {
    const radius = opts.minRadius + opts.radiusScale * Math.sqrt(Math.max(0, node.count - 1));
    return {
      id: node.id,
      x: x.get(node.id) ?? 0,
      y: y.get(node.id) ?? 0,
      radius,
      codes: node.codes,
      count: node.count,
      slices: pieSlices(node, radius, schema),
      state: "normal",
    };
  });

  const edges: EdgeModel[] = doc.edges.map((edge) => ({
    id: edgeKey(edge.from, edge.to),
    from: edge.from,
    to: edge.to,
    x1: x.get(edge.from) ?? 0,
    y1: y.get(edge.from) ?? 0,
    x2: x.get(edge.to) ?? 0,
    y2: y.get(edge.to) ?? 0,
    strokeWidth: opts.minStroke + edge.width_weight * (opts.maxStroke - opts.minStroke),
    opacity: opts.minOpacity + edge.opacity_weight * (1 - opts.minOpacity),
    state: "normal",
  }));

  return {
    nodes,
    edges,
    leaves,
    elided,
    width: maxX + opts.leafOffset + 120,
    height: Math.max(1, row) * opts.rowHeight + opts.rowHeight,
  };
}

/**
 * Mark every element against a highlight set: members of the reported
 * root-to-leaf paths are highlighted, everything else dims. A null
 * highlight restores full opacity everywhere.
 */
export function applyHighlight(layout: TreeLayout, highlight: HighlightDoc | null): TreeLayout {
  if (highlight === null) {
    return {
      ...layout,
      nodes: layout.nodes.map((n) => ({ ...n, state: "normal" as const })),
      edges: layout.edges.map((e) => ({ ...e, state: "normal" as const })),
      leaves: layout.leaves.map((l) => ({ ...l, state: "normal" as const })),
    };
  }
  const nodeSet = new Set(highlight.nodes);
  const edgeSet = new Set(highlight.edges);
  const leafSet = new Set(highlight.leaves.map(([student, task]) => leafKey(student, task)));
  return {
    ...layout,
    nodes: layout.nodes.map((n) => ({
      ...n,
      state: nodeSet.has(n.id) ? "highlighted" : "dimmed",
    })),
    edges: layout.edges.map((e) => ({
      ...e,
      state: edgeSet.has(e.id) ? "highlighted" : "dimmed",
    })),
    leaves: layout.leaves.map((l) => ({
      ...l,
      state: leafSet.has(leafKey(l.student, l.task)) ? "highlighted" : "dimmed",
    })),
  };
}

/** Leaf keys currently rendered as highlighted (for linked-view checks). */
export function highlightedLeaves(layout: TreeLayout): [string, string][] {
  return layout.leaves
    .filter((leaf) => leaf.state === "highlighted")
    .map((leaf) => [leaf.student, leaf.task]);
}
