// Client session: the single state holder driving all views.
//
// Change propagation: a WebSocket patch stream when available, otherwise
// polling every 2 seconds. Mutations are serialized (at most one in flight);
// every applied mutation or observed patch bumps the revision and triggers a
// coherent refetch, so navigator, properties and diagram always reflect the
// same revision. Stale notifications (revision <= last seen) are discarded.

import { ApiClient } from './api.js';
import { checkTypeIds, describeProblems } from './startup.js';
import { markerSet } from './diagram.js';
import { findElement, removalRequest } from './navigator.js';
import { ARCHITECTURE_TYPE, COMPONENT_TYPE, NODE_COMPONENT_TAG } from './idents.js';
import type {
  CommandWire,
  Diagnostic,
  DiagramOperationWire,
  GGraphWire,
  ModelDocument,
  ModelElement,
  PatchWire,
  TypeIds,
} from './types.js';

export const POLL_INTERVAL_MS = 2000;

export class StartupError extends Error {}

export type SessionListener = () => void;

export class ClientSession {
  readonly api: ApiClient;
  readonly modelUri: string;

  typeIds!: TypeIds;
  document!: ModelDocument;
  diagnostics: Diagnostic[] = [];
  revision = 0;
  selection: string | null = null;

  diagramScopeId: string | null = null;
  graph: GGraphWire | null = null;
  markers = new Set<string>();

  private listeners: SessionListener[] = [];
  private mutationChain: Promise<unknown> = Promise.resolve();
  private socket: { close(): void } | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(api: ApiClient, modelUri: string) {
    this.api = api;
    this.modelUri = modelUri;
  }

  onChange(listener: SessionListener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Fetch type ids, run the identifier sanity check, then load the model. */
  async start(): Promise<void> {
    this.typeIds = await this.api.typeIds();
    const problems = checkTypeIds(this.typeIds);
    if (problems.length > 0) {
      throw new StartupError(describeProblems(problems));
    }
    await this.refresh();
  }

  async refresh(): Promise<void> {
    this.document = await this.api.model(this.modelUri);
    this.diagnostics = (await this.api.validation(this.modelUri)).diagnostics;
    if (this.diagramScopeId !== null) {
      try {
        this.graph = await this.api.diagram(this.modelUri, this.diagramScopeId);
        this.markers = markerSet(this.graph, this.markers.size > 0 ? this.diagnostics : []);
      } catch {
        this.diagramScopeId = null;
        this.graph = null;
        this.markers = new Set();
      }
    }
    this.notify();
  }

  selectedElement(): ModelElement | null {
    return this.selection === null ? null : findElement(this.document.root, this.selection);
  }

  select(elementId: string | null): void {
    this.selection = elementId;
    this.notify();
  }

  // -- change notification channel ------------------------------------------

  connect(): void {
    const WebSocketImpl = (globalThis as Record<string, unknown>).WebSocket as
      | (new (url: string) => WebSocket)
      | undefined;
    if (WebSocketImpl !== undefined) {
      try {
        const socket = new WebSocketImpl(this.api.subscribeUrl(this.modelUri));
        socket.onmessage = (event: MessageEvent) => {
          const patch = JSON.parse(String(event.data)) as PatchWire;
          if (patch.revision > this.revision) {
            this.revision = patch.revision;
            void this.refresh();
          }
        };
        socket.onerror = () => this.startPolling();
        socket.onclose = () => this.startPolling();
        this.socket = socket;
        return;
      } catch {
        // fall through to polling
      }
    }
    this.startPolling();
  }

  private startPolling(): void {
    if (this.pollTimer !== null) return;
    this.pollTimer = setInterval(() => {
      void this.pollOnce();
    }, POLL_INTERVAL_MS);
  }

  async pollOnce(): Promise<void> {
    try {
      const snapshot = await fetch(`${this.api.base}/api/v1/introspection`).then((r) => r.json());
      const open = (snapshot.openModels as { uri: string; revision: number }[]).find(
        (m) => m.uri === this.modelUri,
      );
      if (open !== undefined && open.revision > this.revision) {
        this.revision = open.revision;
        await this.refresh();
      }
    } catch {
      // server temporarily unreachable; keep polling
    }
  }

  disconnect(): void {
    this.socket?.close();
    this.socket = null;
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  // -- mutations (serialized, one in flight) -----------------------------------

  private enqueue<T>(work: () => Promise<T>): Promise<T> {
    const next = this.mutationChain.then(work, work);
    this.mutationChain = next.catch(() => undefined);
    return next;
  }

  private command(command: CommandWire): Promise<void> {
    return this.enqueue(async () => {
      const { revision } = await this.api.command(this.modelUri, command);
      this.revision = Math.max(this.revision, revision);
      await this.refresh();
    });
  }

  addChild(parentId: string, typeName: string): Promise<void> {
    return this.command({ kind: 'addChild', parentId, typeName });
  }

  remove(elementId: string): Promise<void> {
    const request = removalRequest(this.document, elementId);
    if (
      request.kind === 'removeAllocation' &&
      request.tableId !== undefined &&
      request.requirementId !== undefined &&
      request.componentId !== undefined
    ) {
      if (this.selection === elementId) this.selection = null;
      return this.command({
        kind: 'removeAllocation',
        elementId: request.tableId,
        sourceId: request.requirementId,
        targetId: request.componentId,
      });
    }
    if (this.selection === elementId) this.selection = null;
    return this.command({ kind: 'removeElement', elementId });
  }

  setAttribute(elementId: string, attributeName: string, value: string | number | boolean): Promise<void> {
    return this.command({ kind: 'setAttribute', elementId, attributeName, value });
  }

  undo(): Promise<void> {
    return this.enqueue(async () => {
      const { revision } = await this.api.undo(this.modelUri);
      this.revision = Math.max(this.revision, revision);
      await this.refresh();
    });
  }

  redo(): Promise<void> {
    return this.enqueue(async () => {
      const { revision } = await this.api.redo(this.modelUri);
      this.revision = Math.max(this.revision, revision);
      await this.refresh();
    });
  }

  save(): Promise<void> {
    return this.enqueue(async () => {
      await this.api.save(this.modelUri);
      this.notify();
    });
  }

  // -- diagram ----------------------------------------------------------------------

  /** Scope types that can host the component diagram. */
  diagramScopeTypes(): Set<string> {
    return new Set([COMPONENT_TYPE, ARCHITECTURE_TYPE]);
  }

  async openDiagram(scopeId: string): Promise<void> {
    this.graph = await this.api.diagram(this.modelUri, scopeId);
    this.diagramScopeId = scopeId;
    this.markers = new Set();
    this.notify();
  }

  private operation(operation: DiagramOperationWire): Promise<void> {
    return this.enqueue(async () => {
      if (this.diagramScopeId === null) return;
      this.graph = await this.api.diagramOperation(this.modelUri, this.diagramScopeId, operation);
      await this.refreshAfterOperation();
    });
  }

  private async refreshAfterOperation(): Promise<void> {
    this.document = await this.api.model(this.modelUri);
    this.diagnostics = (await this.api.validation(this.modelUri)).diagnostics;
    if (this.markers.size > 0 && this.graph !== null) {
      this.markers = markerSet(this.graph, this.diagnostics);
    }
    this.notify();
  }

  createNodeAt(x: number, y: number): Promise<void> {
    return this.operation({ kind: 'createNode', nodeType: NODE_COMPONENT_TAG, position: { x, y } });
  }

  moveNode(elementId: string, bounds: { x: number; y: number; width: number; height: number }): Promise<void> {
    return this.operation({ kind: 'changeBounds', elementId, bounds });
  }

  connectNodes(sourceId: string, targetId: string): Promise<void> {
    return this.operation({ kind: 'createEdge', sourceId, targetId });
  }

  deleteDiagramElement(elementId: string): Promise<void> {
    return this.operation({ kind: 'deleteElement', elementId });
  }

  /** The check-mark: fetch validation and overlay markers on flagged nodes. */
  async runCheckMark(): Promise<void> {
    this.diagnostics = (await this.api.validation(this.modelUri)).diagnostics;
    if (this.graph !== null) {
      this.markers = markerSet(this.graph, this.diagnostics);
    }
    this.notify();
  }
}
