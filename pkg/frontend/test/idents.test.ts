// Zero duplicated identifiers: server-shared literals (type tags, metaclass
// names, reference names) may appear only in src/idents.ts, where the startup
// check verifies them against /api/v1/typeids. This test scans the rest of
// the client for strays.

import { readFileSync, readdirSync } from 'node:fs';
import { join } from 'node:path';

import { describe, expect, it } from 'vitest';

import {
  REQUIRED_METACLASSES,
  REQUIRED_TYPE_TAGS,
  REF_COMPONENT,
  REF_REQUIREMENT,
} from '../src/idents.js';

const SRC = join(__dirname, '..', 'src');

const FORBIDDEN = [
  ...REQUIRED_TYPE_TAGS,
  ...REQUIRED_METACLASSES,
  REF_REQUIREMENT,
  REF_COMPONENT,
];

function sourceFiles(): string[] {
  return readdirSync(SRC)
    .filter((name) => name.endsWith('.ts') && name !== 'idents.ts')
    .map((name) => join(SRC, name));
}

describe('identifier hygiene', () => {
  it('no server identifier literal outside idents.ts', () => {
    const offenders: string[] = [];
    for (const file of [...sourceFiles(), join(__dirname, '..', 'index.html'), join(__dirname, '..', 'style.css')]) {
      const text = readFileSync(file, 'utf-8');
      for (const literal of FORBIDDEN) {
        for (const quoted of [`'${literal}'`, `"${literal}"`, `\`${literal}\``]) {
          if (text.includes(quoted)) {
            offenders.push(`${file}: ${quoted}`);
          }
        }
      }
    }
    expect(offenders).toEqual([]);
  });

  it('the verified vocabulary is non-trivial', () => {
    expect(REQUIRED_TYPE_TAGS.length).toBeGreaterThanOrEqual(3);
    expect(REQUIRED_METACLASSES.length).toBeGreaterThanOrEqual(4);
  });
});
