// Application bootstrap: startup check, view wiring, event handling.

import { ApiClient, ApiError } from './api.js';
import { renderGraph } from './diagram.js';
import { buildNavigatorTree, findElement, renderNavigator } from './navigator.js';
import { buildPropertyFields, parseFieldInput, renderProperties } from './properties.js';
import { ClientSession, StartupError } from './session.js';
import { installToasts, toast } from './toast.js';
import { mount, replaceChildren } from './vdom.js';
import { renderWelcome } from './welcome.js';

const SERVER_BASE = 'http://localhost:8081';

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node;
}

function fatalBanner(message: string): void {
  const banner = document.createElement('div');
  banner.className = 'fatal-banner';
  banner.setAttribute('role', 'alert');
  banner.textContent = message;
  document.body.replaceChildren(banner);
}

function reportError(error: unknown): void {
  if (error instanceof ApiError) {
    toast(`${error.code}: ${error.message}`);
  } else {
    toast(String(error));
  }
}

type EdgeToolState = { active: boolean; sourceId: string | null };

async function boot(): Promise<void> {
  installToasts(byId('toasts'));
  const api = new ApiClient(SERVER_BASE);

  let uris: string[];
  try {
    uris = (await api.modelUris()).uris;
  } catch (error) {
    fatalBanner(`server unreachable at ${SERVER_BASE}: ${String(error)}`);
    return;
  }
  if (uris.length === 0) {
    fatalBanner('the workspace contains no models; run: webmodel init-example --workspace <dir>');
    return;
  }

  const session = new ClientSession(api, uris[0]);
  try {
    await session.start();
  } catch (error) {
    fatalBanner(error instanceof StartupError ? error.message : `startup failed: ${String(error)}`);
    return;
  }

  const edgeTool: EdgeToolState = { active: false, sourceId: null };
  let dragging: { id: string; startX: number; startY: number; dx: number; dy: number } | null = null;

  const navigatorHost = byId('navigator');
  const propertiesHost = byId('properties');
  const diagramSvg = byId('diagram') as unknown as SVGSVGElement;
  const diagramTitle = byId('diagram-title');
  const welcomeHost = byId('welcome');

  replaceChildren(welcomeHost, [renderWelcome()]);
  byId('model-uri').textContent = session.modelUri;

  function svgPoint(event: MouseEvent): { x: number; y: number } {
    const rect = diagramSvg.getBoundingClientRect();
    return { x: Math.round(event.clientX - rect.left), y: Math.round(event.clientY - rect.top) };
  }

  function renderAll(): void {
    const tree = buildNavigatorTree(session.document, session.typeIds);
    replaceChildren(navigatorHost, [
      renderNavigator(tree, session.selection, session.diagramScopeTypes(), {
        onSelect: (elementId) => session.select(elementId),
        onAdd: (parentId, typeName) => void session.addChild(parentId, typeName).catch(reportError),
        onRemove: (elementId) => void session.remove(elementId).catch(reportError),
        onOpenDiagram: (elementId) => void session.openDiagram(elementId).catch(reportError),
      }),
    ]);

    const selected = session.selectedElement();
    if (selected === null) {
      propertiesHost.replaceChildren();
      propertiesHost.appendChild(
        mount({ tag: 'div', attrs: { class: 'prop-empty' }, text: 'select an element to edit its properties' }),
      );
    } else {
      const fields = buildPropertyFields(selected, session.typeIds, session.diagnostics);
      replaceChildren(propertiesHost, [
        renderProperties(selected.attributes['name'] === '' ? selected.type : String(selected.attributes['name'] ?? selected.type), fields, {
          onCommit: (attributeName, valueType, raw) => {
            const value = parseFieldInput(valueType, raw);
            if (value === null) {
              toast(`${attributeName}: not a valid ${valueType}`);
              return;
            }
            if (selected !== null && findElement(session.document.root, selected.id) !== null) {
              void session.setAttribute(selected.id, attributeName, value).catch(reportError);
            }
          },
        }),
      ]);
    }

    if (session.graph !== null) {
      diagramTitle.textContent = `diagram: ${scopeLabel()}`;
      replaceChildren(
        diagramSvg as unknown as Element,
        renderGraph(session.graph, { selection: session.selection, markers: session.markers }),
      );
      wireDiagramInteractions();
    } else {
      diagramTitle.textContent = 'no diagram open';
      (diagramSvg as unknown as Element).replaceChildren();
    }
  }

  function scopeLabel(): string {
    if (session.diagramScopeId === null) return '';
    const scope = findElement(session.document.root, session.diagramScopeId);
    if (scope === null) return '';
    const name = scope.attributes['name'];
    return typeof name === 'string' && name !== '' ? name : scope.type;
  }

  function wireDiagramInteractions(): void {
    for (const nodeElement of Array.from(diagramSvg.querySelectorAll('.gnode'))) {
      const id = nodeElement.getAttribute('data-id');
      if (id === null) continue;
      nodeElement.addEventListener('mousedown', (event) => {
        const mouse = event as MouseEvent;
        if (edgeTool.active) return;
        const point = svgPoint(mouse);
        const transform = nodeElement.getAttribute('transform') ?? '';
        const match = /translate\(([-\d.]+),([-\d.]+)\)/.exec(transform);
        const origin = match === null ? { x: 0, y: 0 } : { x: Number(match[1]), y: Number(match[2]) };
        dragging = { id, startX: point.x, startY: point.y, dx: point.x - origin.x, dy: point.y - origin.y };
        mouse.preventDefault();
      });
      nodeElement.addEventListener('dblclick', (event) => {
        event.stopPropagation();
        void session.openDiagram(id).catch(reportError);
      });
      nodeElement.addEventListener('click', (event) => {
        event.stopPropagation();
        if (edgeTool.active) {
          if (edgeTool.sourceId === null) {
            edgeTool.sourceId = id;
            nodeElement.classList.add('edge-source');
          } else {
            const sourceId = edgeTool.sourceId;
            edgeTool.active = false;
            edgeTool.sourceId = null;
            byId('tool-edge').classList.remove('active-tool');
            void session.connectNodes(sourceId, id).catch(reportError);
          }
          return;
        }
        session.select(id);
      });
    }
  }

  diagramSvg.addEventListener('mousemove', (event) => {
    if (dragging === null) return;
    const point = svgPoint(event);
    const nodeElement = diagramSvg.querySelector(`.gnode[data-id="${dragging.id}"]`);
    nodeElement?.setAttribute('transform', `translate(${point.x - dragging.dx},${point.y - dragging.dy})`);
  });

  diagramSvg.addEventListener('mouseup', (event) => {
    if (dragging === null) return;
    const drag = dragging;
    dragging = null;
    const point = svgPoint(event);
    const node = session.graph?.children.find((c) => c.id === drag.id);
    if (node === undefined || !('size' in node)) return;
    const moved = Math.abs(point.x - drag.startX) + Math.abs(point.y - drag.startY) > 3;
    if (!moved) return;
    void session
      .moveNode(drag.id, {
        x: point.x - drag.dx,
        y: point.y - drag.dy,
        width: node.size.width,
        height: node.size.height,
      })
      .catch(reportError);
  });

  diagramSvg.addEventListener('click', (event) => {
    if (event.target !== diagramSvg) return;
    if (session.diagramScopeId === null) return;
    const point = svgPoint(event);
    if (paletteCreate) {
      void session.createNodeAt(point.x, point.y).catch(reportError);
    } else {
      session.select(null);
    }
  });

  let paletteCreate = false;
  byId('tool-component').addEventListener('click', () => {
    paletteCreate = !paletteCreate;
    byId('tool-component').classList.toggle('active-tool', paletteCreate);
  });
  byId('tool-edge').addEventListener('click', () => {
    edgeTool.active = !edgeTool.active;
    edgeTool.sourceId = null;
    byId('tool-edge').classList.toggle('active-tool', edgeTool.active);
  });
  byId('tool-check').addEventListener('click', () => void session.runCheckMark().catch(reportError));
  byId('tool-delete').addEventListener('click', () => {
    if (session.selection !== null && session.graph !== null) {
      void session.deleteDiagramElement(session.selection).catch(reportError);
    }
  });

  byId('btn-save').addEventListener('click', () => void session.save().then(() => toast('saved')).catch(reportError));
  byId('btn-undo').addEventListener('click', () => void session.undo().catch(reportError));
  byId('btn-redo').addEventListener('click', () => void session.redo().catch(reportError));

  session.onChange(renderAll);
  session.connect();
  renderAll();
}

void boot();
