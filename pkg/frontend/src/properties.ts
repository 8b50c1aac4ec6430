// Form-based properties view. Field building is pure; values commit on blur
// or Enter and validation findings render as inline errors under the field
// (the server stores the value regardless, validation warns, never blocks).

import type { ElementSpec } from './vdom.js';
import { el } from './vdom.js';
import type { Diagnostic, MetaClassInfo, ModelElement, TypeIds } from './types.js';

export interface PropertyField {
  attributeName: string;
  valueType: 'text' | 'integer' | 'real' | 'boolean';
  value: string | number | boolean;
  errorMessage?: string;
}

export function buildPropertyFields(
  element: ModelElement,
  typeIds: TypeIds,
  diagnostics: Diagnostic[],
): PropertyField[] {
  const info = typeIds.metaclasses.find((m) => m.name === element.type);
  if (info === undefined) return [];
  return info.attributes.map((attribute) => ({
    attributeName: attribute.name,
    valueType: attribute.valueType,
    value: element.attributes[attribute.name] ?? defaultFor(attribute.valueType),
    errorMessage: inlineError(element.id, attribute.name, info, diagnostics),
  }));
}

function defaultFor(valueType: PropertyField['valueType']): string | number | boolean {
  switch (valueType) {
    case 'text':
      return '';
    case 'integer':
      return 0;
    case 'real':
      return 0;
    case 'boolean':
      return false;
  }
}

function inlineError(
  elementId: string,
  attributeName: string,
  info: MetaClassInfo,
  diagnostics: Diagnostic[],
): string | undefined {
  const validatorId = info.attributes.find((a) => a.name === attributeName)?.validatorId;
  if (validatorId === undefined) return undefined;
  const prefix = `${attributeName}: `;
  const found = diagnostics.find(
    (d) =>
      d.elementId === elementId && d.validatorId === validatorId && d.message.startsWith(prefix),
  );
  return found === undefined ? undefined : found.message.slice(prefix.length);
}

/** Parse a committed input string back into the attribute's value type. */
export function parseFieldInput(
  valueType: PropertyField['valueType'],
  raw: string,
): string | number | boolean | null {
  switch (valueType) {
    case 'text':
      return raw;
    case 'boolean':
      return raw === 'true';
    case 'integer': {
      const value = Number(raw);
      return Number.isInteger(value) && raw.trim() !== '' ? value : null;
    }
    case 'real': {
      const value = Number(raw);
      return Number.isFinite(value) && raw.trim() !== '' ? value : null;
    }
  }
}

export interface PropertiesCallbacks {
  onCommit(attributeName: string, valueType: PropertyField['valueType'], raw: string): void;
}

export function renderProperties(
  elementLabel: string,
  fields: PropertyField[],
  callbacks: PropertiesCallbacks,
): ElementSpec {
  const rows = fields.map((field) => {
    const commit = (event: Event) => {
      const target = event.target as HTMLInputElement | HTMLSelectElement;
      const raw = field.valueType === 'boolean'
        ? String((target as HTMLInputElement).checked)
        : target.value;
      callbacks.onCommit(field.attributeName, field.valueType, raw);
    };
    let input: ElementSpec;
    if (field.valueType === 'boolean') {
      input = {
        tag: 'input',
        attrs: {
          type: 'checkbox',
          class: 'prop-input',
          'data-attribute': field.attributeName,
          ...(field.value === true ? { checked: '' } : {}),
        },
        on: { change: commit },
      };
    } else {
      input = {
        tag: 'input',
        attrs: {
          type: 'text',
          class: 'prop-input',
          'data-attribute': field.attributeName,
          value: String(field.value),
        },
        on: {
          blur: commit,
          keydown: (event) => {
            if ((event as KeyboardEvent).key === 'Enter') commit(event);
          },
        },
      };
    }
    const parts: ElementSpec[] = [
      el('label', { class: 'prop-label' }, [], field.attributeName),
      input,
    ];
    if (field.errorMessage !== undefined) {
      parts.push(el('div', { class: 'prop-error', role: 'alert' }, [], field.errorMessage));
    }
    return el('div', { class: 'prop-row', 'data-attribute': field.attributeName }, parts);
  });

  return el('div', { class: 'prop-form' }, [
    el('div', { class: 'prop-title' }, [], elementLabel),
    ...rows,
  ]);
}
