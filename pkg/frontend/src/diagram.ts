// SVG diagram rendering. The whole diagram is one SVG document: nodes are
// rects with their name labels, channels are lines (self-loops are arcs).
// Each shape carries its server type tag as a CSS class next to a stable
// semantic class, so styling can target either.

import { isNodeWire } from './types.js';
import type { GGraphWire, GNodeWire } from './types.js';
import type { ElementSpec } from './vdom.js';
import { svgEl } from './vdom.js';

export interface DiagramRenderOptions {
  selection: string | null;
  markers: Set<string>;
}

export function renderGraph(graph: GGraphWire, options: DiagramRenderOptions): ElementSpec[] {
  const nodes = graph.children.filter(isNodeWire);
  const byId = new Map(nodes.map((node) => [node.id, node]));
  const specs: ElementSpec[] = [defsSpec()];

  for (const child of graph.children) {
    if (isNodeWire(child)) continue;
    const source = byId.get(child.sourceId);
    const target = byId.get(child.targetId);
    if (source === undefined || target === undefined) continue;
    specs.push(edgeSpec(child.id, child.type, source, target));
  }
  for (const node of nodes) {
    specs.push(nodeSpec(node, options));
  }
  return specs;
}

function defsSpec(): ElementSpec {
  return svgEl('defs', {}, [
    svgEl(
      'marker',
      {
        id: 'arrow',
        viewBox: '0 0 10 10',
        refX: '9',
        refY: '5',
        markerWidth: '7',
        markerHeight: '7',
        orient: 'auto-start-reverse',
      },
      [svgEl('path', { d: 'M 0 0 L 10 5 L 0 10 z' })],
    ),
  ]);
}

function center(node: GNodeWire): { x: number; y: number } {
  return { x: node.position.x + node.size.width / 2, y: node.position.y + node.size.height / 2 };
}

function edgeSpec(id: string, typeTag: string, source: GNodeWire, target: GNodeWire): ElementSpec {
  if (source.id === target.id) {
    const c = center(source);
    const top = source.position.y;
    const d = `M ${c.x - 12} ${top} C ${c.x - 24} ${top - 34}, ${c.x + 24} ${top - 34}, ${c.x + 12} ${top}`;
    return svgEl('path', {
      class: `gedge selfloop ${typeTag}`,
      'data-id': id,
      d,
      'marker-end': 'url(#arrow)',
    });
  }
  const from = center(source);
  const to = center(target);
  // trim the line at the target rect border so the arrowhead stays visible
  const trimmed = trimToRect(from, to, target);
  return svgEl('line', {
    class: `gedge ${typeTag}`,
    'data-id': id,
    x1: String(from.x),
    y1: String(from.y),
    x2: String(trimmed.x),
    y2: String(trimmed.y),
    'marker-end': 'url(#arrow)',
  });
}

function trimToRect(
  from: { x: number; y: number },
  to: { x: number; y: number },
  node: GNodeWire,
): { x: number; y: number } {
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const halfWidth = node.size.width / 2;
  const halfHeight = node.size.height / 2;
  let scale = 1;
  if (dx !== 0) scale = Math.min(scale, (Math.abs(dx) - halfWidth) / Math.abs(dx));
  if (dy !== 0) scale = Math.min(scale, (Math.abs(dy) - halfHeight) / Math.abs(dy));
  if (!Number.isFinite(scale) || scale < 0) scale = 0;
  return { x: from.x + dx * scale, y: from.y + dy * scale };
}

function nodeSpec(node: GNodeWire, options: DiagramRenderOptions): ElementSpec {
  const selected = options.selection === node.id;
  const flagged = options.markers.has(node.id);
  const classes = ['gnode', node.type];
  if (selected) classes.push('selected');
  if (flagged) classes.push('flagged');

  const children: ElementSpec[] = [
    svgEl('rect', {
      x: '0',
      y: '0',
      width: String(node.size.width),
      height: String(node.size.height),
      rx: '6',
    }),
  ];
  for (const label of node.children) {
    children.push(
      svgEl(
        'text',
        {
          class: `glabel ${label.type}`,
          'data-id': label.id,
          x: String(node.size.width / 2),
          y: String(node.size.height / 2),
          'text-anchor': 'middle',
          'dominant-baseline': 'central',
        },
        [],
        label.text,
      ),
    );
  }
  if (flagged) {
    children.push(
      svgEl('g', { class: 'marker-badge' }, [
        svgEl('circle', { cx: String(node.size.width - 8), cy: '8', r: '9' }),
        svgEl(
          'text',
          {
            x: String(node.size.width - 8),
            y: '9',
            'text-anchor': 'middle',
            'dominant-baseline': 'central',
          },
          [],
          '!',
        ),
      ]),
    );
  }
  return svgEl(
    'g',
    {
      class: classes.join(' '),
      'data-id': node.id,
      transform: `translate(${node.position.x},${node.position.y})`,
    },
    children,
  );
}

/** Error markers: a node is flagged when an error diagnostic anchors on it or
 *  names it (cycle findings list every member id in their message). */
export function markerSet(
  graph: GGraphWire,
  diagnostics: { severity: string; elementId: string; message: string }[],
): Set<string> {
  const markers = new Set<string>();
  const errors = diagnostics.filter((d) => d.severity === 'error');
  for (const child of graph.children) {
    if (!isNodeWire(child)) continue;
    for (const diagnostic of errors) {
      if (diagnostic.elementId === child.id || diagnostic.message.includes(child.id)) {
        markers.add(child.id);
      }
    }
  }
  return markers;
}
