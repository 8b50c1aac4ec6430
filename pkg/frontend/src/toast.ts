// Transient error toasts for failed server calls.

let host: HTMLElement | null = null;

export function installToasts(container: HTMLElement): void {
  host = container;
}

export function toast(message: string): void {
  if (host === null) return;
  const node = document.createElement('div');
  node.className = 'toast';
  node.textContent = message;
  host.appendChild(node);
  setTimeout(() => node.remove(), 4000);
}
