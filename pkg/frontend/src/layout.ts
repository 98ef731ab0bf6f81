// Deterministic force-directed layout. Seeded from a hash of the result
// graph, so the same ResultSet always renders the same picture (screenshots
// and tests are reproducible).

import type { EdgePayload, NodePayload } from "./types.js";

export interface LayoutPoint {
  id: number;
  x: number;
  y: number;
}

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function graphSeed(nodes: NodePayload[], edges: EdgePayload[]): number {
  const ids = nodes.map((n) => n.node_id).sort((a, b) => a - b);
  const pairs = edges
    .map((e) => `${e.src}>${e.dst}:${e.relation_type}`)
    .sort();
  return fnv1a(JSON.stringify([ids, pairs]));
}

export function forceLayout(
  nodes: NodePayload[],
  edges: EdgePayload[],
  width = 640,
  height = 420,
  iterations = 120,
): LayoutPoint[] {
  if (nodes.length === 0) {
    return [];
  }
  const rand = mulberry32(graphSeed(nodes, edges));
  const ordered = [...nodes].sort((a, b) => a.node_id - b.node_id);
  const index = new Map(ordered.map((n, i) => [n.node_id, i]));
  const radius = Math.min(width, height) / 3;
  const xs = ordered.map((_, i) => {
    const angle = (2 * Math.PI * i) / ordered.length + rand() * 0.1;
    return width / 2 + radius * Math.cos(angle);
  });
  const ys = ordered.map((_, i) => {
    const angle = (2 * Math.PI * i) / ordered.length + rand() * 0.1;
    return height / 2 + radius * Math.sin(angle);
  });

  const springLength = radius / 1.5;
  for (let step = 0; step < iterations; step++) {
    const cool = 1 - step / iterations;
    const fx = new Array(ordered.length).fill(0);
    const fy = new Array(ordered.length).fill(0);
    for (let i = 0; i < ordered.length; i++) {
      for (let j = i + 1; j < ordered.length; j++) {
        const dx = xs[i] - xs[j];
        const dy = ys[i] - ys[j];
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const push = (springLength * springLength) / d2;
        const d = Math.sqrt(d2);
        fx[i] += (dx / d) * push;
        fy[i] += (dy / d) * push;
        fx[j] -= (dx / d) * push;
        fy[j] -= (dy / d) * push;
      }
    }
    for (const edge of edges) {
      const i = index.get(edge.src);
      const j = index.get(edge.dst);
      if (i === undefined || j === undefined) continue;
      const dx = xs[j] - xs[i];
      const dy = ys[j] - ys[i];
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const pull = (d - springLength) / d / 8;
      fx[i] += dx * pull;
      fy[i] += dy * pull;
      fx[j] -= dx * pull;
      fy[j] -= dy * pull;
    }
    for (let i = 0; i < ordered.length; i++) {
      xs[i] = Math.min(width - 20, Math.max(20, xs[i] + fx[i] * cool));
      ys[i] = Math.min(height - 20, Math.max(20, ys[i] + fy[i] * cool));
    }
  }
  return ordered.map((n, i) => ({
    id: n.node_id,
    x: Math.round(xs[i] * 100) / 100,
    y: Math.round(ys[i] * 100) / 100,
  }));
}
