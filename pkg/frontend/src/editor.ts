/**
 * Editor state machine for token-by-token CNL composition.
 *
 * Users extend the sentence only through suggested tokens (or free typing
 * that filters the suggestions), so the grammar manual stays closed.  The
 * suggestion list always matches the current token list: every lookahead
 * request carries a sequence number and responses that are not the latest
 * issued request are discarded, so out-of-order arrivals can never show
 * stale suggestions.
 */

import {
  LookaheadPayload,
  QueryPayload,
  SentencePayload,
  ServiceClient,
  ServiceRejection,
} from "./client.js";

export type Annotation =
  | { kind: "defeasible" }
  | { kind: "strict" }
  | { kind: "except" }
  | { kind: "exception_to"; targets: string[] }
  | { kind: "conflict_constraint" };

export interface CommittedSentence {
  id: string;
  text: string;
  annotation: Annotation;
  badge: string;
}

export interface EditorState {
  tokens: string[];
  typed: string;
  suggestions: LookaheadPayload | null;
  committed: CommittedSentence[];
  annotation: Annotation;
  label: string | null;
  inlineError: string | null;
  errorSuggestions: string[];
  serviceDown: boolean;
  lastAnswer: QueryPayload | null;
  busy: boolean;
}

export type Listener = (state: EditorState) => void;

function annotationText(a: Annotation): string | undefined {
  switch (a.kind) {
    case "defeasible":
      return undefined;
    case "strict":
      return "strict";
    case "except":
      return "except";
    case "exception_to":
      return "exception to " + a.targets.join(", ");
    case "conflict_constraint":
      return "conflict constraint";
  }
}

function badgeFor(annotation: Annotation, payload: SentencePayload): string {
  if (payload.exception.length > 0) {
    return "overrides " + payload.exception.join(", ");
  }
  if (payload.cancel_targets.length > 0) {
    return "cancels " + payload.cancel_targets.join(", ");
  }
  if (payload.mode === "strict") return "strict";
  if (payload.mode === "conflict_constraint") return "conflict constraint";
  return "defeasible";
}

export class Editor {
  readonly state: EditorState = {
    tokens: [],
    typed: "",
    suggestions: null,
    committed: [],
    annotation: { kind: "defeasible" },
    label: null,
    inlineError: null,
    errorSuggestions: [],
    serviceDown: false,
    lastAnswer: null,
    busy: false,
  };

  private seq = 0;
  private listeners: Listener[] = [];

  constructor(private readonly client: ServiceClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const l of this.listeners) l(this.state);
  }

  /** Words from the current suggestions that extend what the user typed. */
  filteredWords(): string[] {
    const words = this.state.suggestions?.words ?? [];
    const prefix = this.state.typed.toLowerCase();
    return prefix ? words.filter((w) => w.toLowerCase().startsWith(prefix)) : words;
  }

  canCommit(): boolean {
    return !this.state.serviceDown && (this.state.suggestions?.complete ?? false) && this.state.tokens.length > 0;
  }

  canQuery(): boolean {
    return this.state.committed.length > 0;
  }

  setTyped(text: string): void {
    this.state.typed = text;
    this.emit();
  }

  setAnnotation(annotation: Annotation): void {
    this.state.annotation = annotation;
    this.emit();
  }

  setLabel(label: string | null): void {
    this.state.label = label;
    this.emit();
  }

  async addToken(word: string): Promise<void> {
    this.state.tokens.push(word);
    this.state.typed = "";
    this.state.inlineError = null;
    this.emit();
    await this.refreshSuggestions();
  }

  async removeLastToken(): Promise<void> {
    this.state.tokens.pop();
    this.emit();
    await this.refreshSuggestions();
  }

  /**
   * Ask the service what can follow the current tokens.  Only the latest
   * issued request may update the suggestion list.
   */
  async refreshSuggestions(): Promise<void> {
    const mySeq = ++this.seq;
    let payload: LookaheadPayload;
    try {
      payload = await this.client.lookahead([...this.state.tokens]);
    } catch {
      if (mySeq === this.seq) {
        this.state.serviceDown = true;
        this.emit();
      }
      return;
    }
    if (mySeq !== this.seq) {
      return; // a newer request exists; this response is stale
    }
    this.state.suggestions = payload;
    this.state.serviceDown = false;
    this.emit();
  }

  async commitSentence(): Promise<CommittedSentence | null> {
    if (this.state.tokens.length === 0) return null;
    const text = this.state.tokens.join(" ") + " .";
    this.state.busy = true;
    this.emit();
    try {
      const payload = await this.client.sentence(text, {
        annotation: annotationText(this.state.annotation),
        label: this.state.label ?? undefined,
      });
      const entry: CommittedSentence = {
        id: payload.sentence_id,
        text,
        annotation: this.state.annotation,
        badge: badgeFor(this.state.annotation, payload),
      };
      const last = this.state.committed[this.state.committed.length - 1];
      if (last && !idAfter(last.id, entry.id)) {
        throw new Error("sentence ids must strictly increase: " + last.id + " then " + entry.id);
      }
      this.state.committed.push(entry);
      this.state.tokens = [];
      this.state.typed = "";
      this.state.label = null;
      this.state.annotation = { kind: "defeasible" };
      this.state.inlineError = null;
      this.state.errorSuggestions = [];
      await this.refreshSuggestions();
      return entry;
    } catch (err) {
      if (err instanceof ServiceRejection) {
        this.state.inlineError = err.message;
        this.state.errorSuggestions = err.suggestions;
      } else {
        this.state.serviceDown = true; // token buffer is preserved
      }
      return null;
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  async runQuery(goal: string): Promise<QueryPayload | null> {
    if (!this.canQuery()) return null;
    try {
      const payload = await this.client.query(goal);
      this.state.lastAnswer = payload;
      this.emit();
      return payload;
    } catch (err) {
      if (err instanceof ServiceRejection) {
        this.state.inlineError = err.message;
      } else {
        this.state.serviceDown = true;
      }
      this.emit();
      return null;
    }
  }

  translate(): Promise<string> {
    return this.client.translate();
  }
}

/** Committed ids must strictly increase; custom labels are only checked
 * against themselves when both ends are positional pN.sM ids. */
export function idAfter(previous: string, next: string): boolean {
  const a = parsePositional(previous);
  const b = parsePositional(next);
  if (a && b) {
    return b[0] > a[0] || (b[0] === a[0] && b[1] > a[1]);
  }
  return previous !== next;
}

function parsePositional(id: string): [number, number] | null {
  const m = /^p(\d+)\.s(\d+)$/.exec(id);
  return m ? [parseInt(m[1], 10), parseInt(m[2], 10)] : null;
}
