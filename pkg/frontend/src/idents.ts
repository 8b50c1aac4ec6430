// The ONLY place where server-shared identifier literals may appear.
// Everything listed here is verified against /api/v1/typeids before any view
// renders; a lint test rejects such literals anywhere else in the client.

export const NODE_COMPONENT_TAG = 'node:component';
export const EDGE_CHANNEL_TAG = 'edge:channel';
export const LABEL_NAME_TAG = 'label:name';

export const COMPONENT_TYPE = 'Component';
export const CHANNEL_TYPE = 'Channel';
export const ARCHITECTURE_TYPE = 'ComponentArchitecture';
export const ALLOCATION_ENTRY_TYPE = 'AllocationEntry';
export const ALLOCATION_TABLE_TYPE = 'AllocationTable';

export const REF_REQUIREMENT = 'requirement';
export const REF_COMPONENT = 'component';

/** Type tags the client renders or posts; must all exist in typeids.typeTags. */
export const REQUIRED_TYPE_TAGS = [NODE_COMPONENT_TAG, EDGE_CHANNEL_TAG, LABEL_NAME_TAG];

/** Metaclasses the client references by name; must all exist in typeids.metaclasses. */
export const REQUIRED_METACLASSES = [
  COMPONENT_TYPE,
  CHANNEL_TYPE,
  ARCHITECTURE_TYPE,
  ALLOCATION_ENTRY_TYPE,
  ALLOCATION_TABLE_TYPE,
];

/** Glyphs for the server-published handler icon ids; unknown ids fall back. */
export const ICON_GLYPHS: Record<string, string> = {
  project: '◈',
  folder: '▸',
  requirement: '★',
  architecture: '▤',
  component: '□',
  channel: '→',
  table: '☷',
  allocation: '↔',
};

export const FALLBACK_GLYPH = '○';
