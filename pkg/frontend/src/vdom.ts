// Minimal element-spec tree. View builders stay pure (testable without a
// browser); mount() is the only place that touches the real DOM.

export interface ElementSpec {
  tag: string;
  ns?: 'svg';
  attrs?: Record<string, string>;
  text?: string;
  children?: ElementSpec[];
  on?: Record<string, (event: Event) => void>;
}

export function el(
  tag: string,
  attrs: Record<string, string> = {},
  children: ElementSpec[] = [],
  text?: string,
): ElementSpec {
  return { tag, attrs, children, text };
}

export function svgEl(
  tag: string,
  attrs: Record<string, string> = {},
  children: ElementSpec[] = [],
  text?: string,
): ElementSpec {
  return { tag, ns: 'svg', attrs, children, text };
}

const SVG_NS = 'http://www.w3.org/2000/svg';

export function mount(spec: ElementSpec): Element {
  const node =
    spec.ns === 'svg'
      ? document.createElementNS(SVG_NS, spec.tag)
      : document.createElement(spec.tag);
  for (const [name, value] of Object.entries(spec.attrs ?? {})) {
    node.setAttribute(name, value);
  }
  if (spec.text !== undefined) {
    node.textContent = spec.text;
  }
  for (const [event, handler] of Object.entries(spec.on ?? {})) {
    node.addEventListener(event, handler);
  }
  for (const child of spec.children ?? []) {
    node.appendChild(mount(child));
  }
  return node;
}

export function replaceChildren(host: Element, specs: ElementSpec[]): void {
  host.replaceChildren(...specs.map(mount));
}
