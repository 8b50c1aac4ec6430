import { describe, expect, it } from 'vitest';

import { checkTypeIds, describeProblems } from '../src/startup.js';
import { TYPE_IDS } from './fixtures.js';

describe('startup identifier check', () => {
  it('accepts the published vocabulary', () => {
    expect(checkTypeIds(TYPE_IDS)).toEqual([]);
  });

  it('reports a missing type tag by name', () => {
    const typeIds = { ...TYPE_IDS, typeTags: { 'label:name': 'name' } };
    const problems = checkTypeIds(typeIds);
    expect(problems).toContainEqual({ kind: 'missing-type-tag', identifier: 'node:component' });
    expect(describeProblems(problems)).toContain('node:component');
  });

  it('reports a missing metaclass by name', () => {
    const typeIds = {
      ...TYPE_IDS,
      metaclasses: TYPE_IDS.metaclasses.filter((m) => m.name !== 'Channel'),
    };
    const problems = checkTypeIds(typeIds);
    expect(problems).toEqual([{ kind: 'missing-metaclass', identifier: 'Channel' }]);
  });
});
