import { describe, expect, it } from "vitest";

import {
  LookaheadPayload,
  QueryPayload,
  SentencePayload,
  ServiceClient,
  ServiceRejection,
} from "../src/client.js";
import { Editor, idAfter } from "../src/editor.js";

function payloadFor(tokens: string[]): LookaheadPayload {
  return {
    categories: ["noun"],
    words: ["w_" + tokens.join("_")],
    complete: tokens.length >= 2,
  };
}

/** A client whose lookahead promises resolve only when the test says so. */
class ManualClient implements ServiceClient {
  pending: { tokens: string[]; resolve: (p: LookaheadPayload) => void; reject: (e: Error) => void }[] = [];
  committed: string[] = [];
  nextId = 0;

  lookahead(tokens: string[]): Promise<LookaheadPayload> {
    return new Promise((resolve, reject) => {
      this.pending.push({ tokens, resolve, reject });
    });
  }

  release(index: number): void {
    const req = this.pending[index];
    req.resolve(payloadFor(req.tokens));
  }

  fail(index: number): void {
    this.pending[index].reject(new Error("network down"));
  }

  sentence(text: string): Promise<SentencePayload> {
    this.committed.push(text);
    this.nextId += 1;
    return Promise.resolve({
      sentence_id: "p1.s" + this.nextId,
      mode: "defeasible",
      exception: [],
      cancel_targets: [],
      drs: "",
    });
  }

  translate(): Promise<string> {
    return Promise.resolve("");
  }

  query(): Promise<QueryPayload> {
    return Promise.resolve({ status: "no", answers: [], provenance: [], inconsistent: false, rendered: "no" });
  }

  health(): Promise<boolean> {
    return Promise.resolve(true);
  }
}

describe("suggestion freshness", () => {
  it("shows the payload of the latest token list at every step", async () => {
    const client = new ManualClient();
    const editor = new Editor(client);

    const r0 = editor.refreshSuggestions(); // tokens []
    client.release(0);
    await r0;
    expect(editor.state.suggestions?.words).toEqual(["w_"]);

    const r1 = editor.addToken("tom"); // request 1 for [tom]
    const r2 = editor.addToken("walks"); // request 2 for [tom, walks]
    // out-of-order: the newer response lands first ...
    client.release(2);
    await r2;
    expect(editor.state.suggestions?.words).toEqual(["w_tom_walks"]);
    // ... and the stale one must be discarded when it finally arrives
    client.release(1);
    await r1;
    expect(editor.state.suggestions?.words).toEqual(["w_tom_walks"]);
    expect(editor.state.suggestions?.complete).toBe(true);
  });

  it("ignores a stale response even when it arrives in order after a newer one was issued", async () => {
    const client = new ManualClient();
    const editor = new Editor(client);
    const r1 = editor.addToken("tom"); // pending[0] for [tom]
    const r2 = editor.addToken("walks"); // pending[1] for [tom, walks]
    client.release(0); // the old request resolves first, but a newer one exists
    await r1;
    expect(editor.state.suggestions).toBeNull();
    client.release(1);
    await r2;
    expect(editor.state.suggestions?.words).toEqual(["w_tom_walks"]);
  });

  it("marks the service down on failure but keeps the tokens", async () => {
    const client = new ManualClient();
    const editor = new Editor(client);
    const r1 = editor.addToken("tom");
    client.fail(0);
    await r1;
    expect(editor.state.serviceDown).toBe(true);
    expect(editor.state.tokens).toEqual(["tom"]);
    expect(editor.canCommit()).toBe(false);
  });
});

describe("typing filters the word list client-side", () => {
  it("filters by prefix without issuing requests", async () => {
    const client = new ManualClient();
    const editor = new Editor(client);
    const r = editor.refreshSuggestions();
    client.pending[0].resolve({ categories: ["noun"], words: ["bird", "birds", "dog"], complete: false });
    await r;
    const before = client.pending.length;
    editor.setTyped("bir");
    expect(editor.filteredWords()).toEqual(["bird", "birds"]);
    editor.setTyped("");
    expect(editor.filteredWords()).toEqual(["bird", "birds", "dog"]);
    expect(client.pending.length).toBe(before);
  });
});

describe("committing", () => {
  it("appends sentences with strictly increasing ids and clears the buffer", async () => {
    const client = new ManualClient();
    const editor = new Editor(client);
    for (const tok of ["tom", "walks"]) {
      const p = editor.addToken(tok);
      client.release(client.pending.length - 1);
      await p;
    }
    expect(editor.canCommit()).toBe(true);
    const commitP = editor.commitSentence();
    // the post-commit refresh needs releasing
    await Promise.resolve();
    client.release(client.pending.length - 1);
    const entry = await commitP;
    expect(entry?.id).toBe("p1.s1");
    expect(editor.state.tokens).toEqual([]);
    expect(editor.state.committed.map((c) => c.id)).toEqual(["p1.s1"]);
  });

  it("surfaces a rejection inline and keeps the buffer", async () => {
    const client = new ManualClient();
    client.sentence = () => Promise.reject(new ServiceRejection("rejected", "does not parse", ["verb"]));
    const editor = new Editor(client);
    editor.state.tokens.push("tom");
    editor.state.suggestions = { categories: [], words: [], complete: true };
    const entry = await editor.commitSentence();
    expect(entry).toBeNull();
    expect(editor.state.inlineError).toContain("does not parse");
    expect(editor.state.errorSuggestions).toEqual(["verb"]);
    expect(editor.state.tokens).toEqual(["tom"]);
  });

  it("disables querying before the first commit", () => {
    const editor = new Editor(new ManualClient());
    expect(editor.canQuery()).toBe(false);
  });
});

describe("positional id ordering", () => {
  it("orders pN.sM ids and tolerates custom labels", () => {
    expect(idAfter("p1.s1", "p1.s2")).toBe(true);
    expect(idAfter("p1.s2", "p1.s1")).toBe(false);
    expect(idAfter("p1.s9", "p2.s1")).toBe(true);
    expect(idAfter("9.a", "9.b")).toBe(true);
  });
});
