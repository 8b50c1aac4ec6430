import type {
  CommandWire,
  Diagnostic,
  DiagramOperationWire,
  GGraphWire,
  ModelDocument,
  TypeIds,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<never> {
  let code = 'Unknown';
  let message = response.statusText;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.base}${path}`);
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  private async postJson<T>(path: string, payload?: unknown): Promise<T> {
    const response = await fetch(`${this.base}${path}`, {
      method: 'POST',
      headers: payload === undefined ? {} : { 'Content-Type': 'application/json' },
      body: payload === undefined ? null : JSON.stringify(payload),
    });
    if (!response.ok) await parseError(response);
    return response.json() as Promise<T>;
  }

  modelUris(): Promise<{ uris: string[] }> {
    return this.getJson('/api/v1/modeluris');
  }

  typeIds(): Promise<TypeIds> {
    return this.getJson('/api/v1/typeids');
  }

  health(): Promise<{ status: string }> {
    return this.getJson('/api/v1/health');
  }

  model(uri: string): Promise<ModelDocument> {
    return this.getJson(`/api/v1/models/${uri}`);
  }

  command(uri: string, command: CommandWire): Promise<{ revision: number }> {
    return this.postJson(`/api/v1/models/${uri}/commands`, command);
  }

  undo(uri: string): Promise<{ revision: number }> {
    return this.postJson(`/api/v1/models/${uri}/undo`);
  }

  redo(uri: string): Promise<{ revision: number }> {
    return this.postJson(`/api/v1/models/${uri}/redo`);
  }

  save(uri: string): Promise<{ saved: boolean }> {
    return this.postJson(`/api/v1/models/${uri}/save`);
  }

  validation(uri: string): Promise<{ diagnostics: Diagnostic[] }> {
    return this.getJson(`/api/v1/models/${uri}/validation`);
  }

  diagram(uri: string, scopeId: string): Promise<GGraphWire> {
    return this.getJson(`/api/v1/models/${uri}/diagrams/${scopeId}`);
  }

  diagramOperation(
    uri: string,
    scopeId: string,
    operation: DiagramOperationWire,
  ): Promise<GGraphWire> {
    return this.postJson(`/api/v1/models/${uri}/diagrams/${scopeId}/operations`, operation);
  }

  subscribeUrl(uri: string): string {
    return `${this.base.replace(/^http/, 'ws')}/api/v1/subscribe/${uri}`;
  }
}
