// Hand-built wire fixtures mirroring the server's example workspace shapes.

import type { GGraphWire, ModelDocument, TypeIds } from '../src/types.js';

export const TYPE_IDS: TypeIds = {
  metaclasses: [
    {
      name: 'Project',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [
        { many: false, type: 'RequirementsPackage' },
        { many: false, type: 'ComponentArchitecture' },
        { many: false, type: 'AllocationTable' },
      ],
      crossReferences: [],
      handler: { iconId: 'project', labelAttribute: 'name' },
    },
    {
      name: 'RequirementsPackage',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [{ many: true, type: 'Requirement' }],
      crossReferences: [],
      handler: { iconId: 'folder', labelAttribute: 'name' },
    },
    {
      name: 'Requirement',
      attributes: [
        { name: 'name', valueType: 'text' },
        { name: 'description', valueType: 'text' },
        { name: 'authorEmail', valueType: 'text', validatorId: 'email' },
      ],
      containments: [],
      crossReferences: [],
      handler: { iconId: 'requirement', labelAttribute: 'name', descriptionAttribute: 'description' },
    },
    {
      name: 'ComponentArchitecture',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [{ many: true, type: 'Component' }],
      crossReferences: [],
      handler: { iconId: 'architecture', labelAttribute: 'name' },
    },
    {
      name: 'Component',
      attributes: [
        { name: 'name', valueType: 'text' },
        { name: 'comment', valueType: 'text' },
        { name: 'stronglyCausal', valueType: 'boolean' },
      ],
      containments: [
        { many: true, type: 'Component' },
        { many: true, type: 'Channel' },
      ],
      crossReferences: [],
      handler: { iconId: 'component', labelAttribute: 'name', descriptionAttribute: 'comment' },
    },
    {
      name: 'Channel',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [],
      crossReferences: [
        { many: false, name: 'source', type: 'Component' },
        { many: false, name: 'target', type: 'Component' },
      ],
      handler: { iconId: 'channel', labelAttribute: 'name' },
    },
    {
      name: 'AllocationTable',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [{ many: true, type: 'AllocationEntry' }],
      crossReferences: [],
      handler: { iconId: 'table', labelAttribute: 'name' },
    },
    {
      name: 'AllocationEntry',
      attributes: [{ name: 'name', valueType: 'text' }],
      containments: [],
      crossReferences: [
        { many: false, name: 'requirement', type: 'Requirement' },
        { many: false, name: 'component', type: 'Component' },
      ],
      handler: { iconId: 'allocation', labelAttribute: 'name' },
    },
  ],
  typeTags: {
    'edge:channel': 'Channel',
    'label:name': 'name',
    'node:component': 'Component',
  },
  compositors: [
    ['Component', 'Channel'],
    ['Component', 'Component'],
    ['ComponentArchitecture', 'Component'],
    ['RequirementsPackage', 'Requirement'],
  ],
};

export const MODEL_DOC: ModelDocument = {
  layout: {
    'id-sys': { height: 320, width: 560, x: 20, y: 20 },
    'id-ctl': { height: 60, width: 120, x: 40, y: 60 },
    'id-act': { height: 60, width: 120, x: 260, y: 60 },
  },
  root: {
    id: 'id-root',
    type: 'Project',
    attributes: { name: 'Demo' },
    children: [
      {
        id: 'id-pkg',
        type: 'RequirementsPackage',
        attributes: { name: 'Requirements' },
        children: [
          {
            id: 'id-req',
            type: 'Requirement',
            attributes: { name: 'R1', description: 'd', authorEmail: 'bad' },
            children: [],
          },
        ],
      },
      {
        id: 'id-arch',
        type: 'ComponentArchitecture',
        attributes: { name: 'Architecture' },
        children: [
          {
            id: 'id-sys',
            type: 'Component',
            attributes: { name: 'System', comment: '', stronglyCausal: false },
            children: [
              {
                id: 'id-ctl',
                type: 'Component',
                attributes: { name: 'Controller', comment: '', stronglyCausal: false },
                children: [],
              },
              {
                id: 'id-act',
                type: 'Component',
                attributes: { name: '', comment: '', stronglyCausal: false },
                children: [],
              },
              {
                id: 'id-ch1',
                type: 'Channel',
                attributes: { name: 'cmd' },
                children: [],
                crossRefs: { source: ['id-ctl'], target: ['id-act'] },
              },
              {
                id: 'id-ch2',
                type: 'Channel',
                attributes: { name: 'loop' },
                children: [],
                crossRefs: { source: ['id-act'], target: ['id-act'] },
              },
            ],
          },
        ],
      },
      {
        id: 'id-table',
        type: 'AllocationTable',
        attributes: { name: 'Allocation' },
        children: [
          {
            id: 'id-entry',
            type: 'AllocationEntry',
            attributes: { name: '' },
            children: [],
            crossRefs: { requirement: ['id-req'], component: ['id-ctl'] },
          },
        ],
      },
    ],
  },
};

export const GRAPH: GGraphWire = {
  id: 'id-sys',
  type: 'graph',
  children: [
    {
      id: 'id-ctl',
      type: 'node:component',
      position: { x: 40, y: 60 },
      size: { width: 120, height: 60 },
      children: [{ id: 'id-ctl_label', type: 'label:name', text: 'Controller' }],
    },
    {
      id: 'id-act',
      type: 'node:component',
      position: { x: 260, y: 60 },
      size: { width: 120, height: 60 },
      children: [{ id: 'id-act_label', type: 'label:name', text: '' }],
    },
    { id: 'id-ch1', type: 'edge:channel', sourceId: 'id-ctl', targetId: 'id-act' },
    { id: 'id-ch2', type: 'edge:channel', sourceId: 'id-act', targetId: 'id-act' },
  ],
};
