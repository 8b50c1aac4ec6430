// Wire types for the model server API. Shapes mirror the server's JSON
// byte-for-byte; field names must not drift (the startup check guards the
// identifier vocabulary, golden tests on the server side pin the rest).

export interface ModelElement {
  attributes: Record<string, string | number | boolean>;
  children: ModelElement[];
  crossRefs?: Record<string, string[]>;
  id: string;
  type: string;
}

export interface BoundsWire {
  height: number;
  width: number;
  x: number;
  y: number;
}

export interface ModelDocument {
  layout: Record<string, BoundsWire>;
  root: ModelElement;
}

export interface AttributeInfo {
  name: string;
  validatorId?: string;
  valueType: 'text' | 'integer' | 'real' | 'boolean';
}

export interface HandlerInfo {
  descriptionAttribute?: string;
  iconId: string;
  labelAttribute: string;
}

export interface ContainmentInfo {
  many: boolean;
  type: string;
}

export interface CrossReferenceInfo {
  many: boolean;
  name: string;
  type: string;
}

export interface MetaClassInfo {
  attributes: AttributeInfo[];
  containments: ContainmentInfo[];
  crossReferences: CrossReferenceInfo[];
  handler?: HandlerInfo;
  name: string;
}

export interface TypeIds {
  metaclasses: MetaClassInfo[];
  typeTags: Record<string, string>;
  compositors: [string, string][];
}

export interface Diagnostic {
  severity: 'error' | 'warning' | 'info';
  elementId: string;
  message: string;
  validatorId: string;
}

export interface GLabelWire {
  id: string;
  type: string;
  text: string;
}

export interface GNodeWire {
  id: string;
  type: string;
  position: { x: number; y: number };
  size: { width: number; height: number };
  children: GLabelWire[];
}

export interface GEdgeWire {
  id: string;
  type: string;
  sourceId: string;
  targetId: string;
}

export interface GGraphWire {
  id: string;
  type: string;
  children: (GNodeWire | GEdgeWire)[];
}

export interface PatchWire {
  affectedIds: string[];
  command: { kind: string } & Record<string, unknown>;
  modelUri: string;
  revision: number;
}

export type CommandWire =
  | { kind: 'addChild'; parentId: string; typeName: string }
  | { kind: 'removeElement'; elementId: string }
  | { kind: 'setAttribute'; elementId: string; attributeName: string; value: string | number | boolean }
  | { kind: 'addAllocation'; elementId: string; sourceId: string; targetId: string }
  | { kind: 'removeAllocation'; elementId: string; sourceId: string; targetId: string }
  | { kind: 'setBounds'; elementId: string; bounds: { x: number; y: number; width: number; height: number } }
  | { kind: 'addChannel'; sourceId: string; targetId: string };

export type DiagramOperationWire =
  | { kind: 'createNode'; nodeType: string; position: { x: number; y: number } }
  | { kind: 'changeBounds'; elementId: string; bounds: { x: number; y: number; width: number; height: number } }
  | { kind: 'deleteElement'; elementId: string }
  | { kind: 'createEdge'; sourceId: string; targetId: string };

export function isNodeWire(child: GNodeWire | GEdgeWire): child is GNodeWire {
  return 'position' in child;
}
