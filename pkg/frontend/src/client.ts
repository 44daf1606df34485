/** Typed client for the cnlkit HTTP/JSON service. */

export interface LookaheadPayload {
  categories: string[];
  words: string[];
  by_category?: Record<string, string[]>;
  complete: boolean;
  errors?: string[];
}

export interface SentencePayload {
  sentence_id: string;
  mode: string;
  exception: string[];
  cancel_targets: string[];
  drs: string;
}

export interface ProvenanceEntry {
  rule: string;
  kind?: string;
  sentence?: string;
}

export interface QueryPayload {
  status: string;
  answers: Record<string, string>[];
  provenance: ProvenanceEntry[];
  inconsistent: boolean;
  rendered: string;
}

/** A 4xx from the service, carrying its machine-readable error body. */
export class ServiceRejection extends Error {
  readonly code: string;
  readonly suggestions: string[];

  constructor(code: string, message: string, suggestions: string[] = []) {
    super(message);
    this.code = code;
    this.suggestions = suggestions;
  }
}

export interface ServiceClient {
  lookahead(tokens: string[]): Promise<LookaheadPayload>;
  sentence(text: string, opts?: { annotation?: string; label?: string }): Promise<SentencePayload>;
  translate(): Promise<string>;
  query(goal: string): Promise<QueryPayload>;
  health(): Promise<boolean>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HttpClient implements ServiceClient {
  constructor(
    private readonly base: string,
    private readonly session: string = "editor",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async post<T>(path: string, body: Record<string, unknown>): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ ...body, session: this.session }),
    });
    const payload = (await resp.json()) as Record<string, unknown>;
    if (!resp.ok) {
      const err = (payload.error ?? {}) as { code?: string; message?: string; suggestions?: string[] };
      throw new ServiceRejection(err.code ?? "error", err.message ?? resp.statusText, err.suggestions ?? []);
    }
    return payload as T;
  }

  lookahead(tokens: string[]): Promise<LookaheadPayload> {
    return this.post<LookaheadPayload>("/lookahead", { tokens });
  }

  sentence(text: string, opts: { annotation?: string; label?: string } = {}): Promise<SentencePayload> {
    const body: Record<string, unknown> = { text };
    if (opts.annotation) body.annotation = opts.annotation;
    if (opts.label) body.label = opts.label;
    return this.post<SentencePayload>("/sentence", body);
  }

  async translate(): Promise<string> {
    const payload = await this.post<{ program: string }>("/translate", {});
    return payload.program;
  }

  query(goal: string): Promise<QueryPayload> {
    return this.post<QueryPayload>("/query", { goal });
  }

  async health(): Promise<boolean> {
    try {
      const resp = await this.fetchImpl(this.base + "/health");
      return resp.ok;
    } catch {
      return false;
    }
  }
}
