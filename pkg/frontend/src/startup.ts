// Startup sanity check: every identifier this client hardcodes must exist on
// the server, otherwise the app shows a fatal banner instead of views.
// Backend and frontend are deployed independently; this is the drift guard.

import { REQUIRED_METACLASSES, REQUIRED_TYPE_TAGS } from './idents.js';
import type { TypeIds } from './types.js';

export interface StartupProblem {
  kind: 'missing-type-tag' | 'missing-metaclass';
  identifier: string;
}

export function checkTypeIds(typeIds: TypeIds): StartupProblem[] {
  const problems: StartupProblem[] = [];
  for (const tag of REQUIRED_TYPE_TAGS) {
    if (!(tag in typeIds.typeTags)) {
      problems.push({ kind: 'missing-type-tag', identifier: tag });
    }
  }
  const known = new Set(typeIds.metaclasses.map((m) => m.name));
  for (const name of REQUIRED_METACLASSES) {
    if (!known.has(name)) {
      problems.push({ kind: 'missing-metaclass', identifier: name });
    }
  }
  return problems;
}

export function describeProblems(problems: StartupProblem[]): string {
  const parts = problems.map((p) =>
    p.kind === 'missing-type-tag'
      ? `type tag "${p.identifier}" is not published by the server`
      : `metaclass "${p.identifier}" is not published by the server`,
  );
  return `client/server identifier mismatch: ${parts.join('; ')}`;
}
