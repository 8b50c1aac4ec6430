import type { ElementSpec } from './vdom.js';
import { el } from './vdom.js';

export function renderWelcome(): ElementSpec {
  return el('div', { class: 'welcome' }, [
    el('h2', {}, [], 'Welcome'),
    el('p', {}, [], 'This workspace hosts hierarchic system models served by the model server.'),
    el('ul', {}, [
      el('li', {}, [], 'Browse and edit the model tree in the navigator on the left.'),
      el('li', {}, [], 'Open a component diagram with the ▣ button next to a component.'),
      el('li', {}, [], 'Create components from the palette, drag them around, connect them.'),
      el('li', {}, [], 'Edit element properties in the form below; invalid input is flagged inline.'),
      el('li', {}, [], 'Run the check-mark to validate the model; cycle members get markers.'),
      el('li', {}, [], 'Save with the floppy button; undo and redo work across all edits.'),
    ]),
  ]);
}
