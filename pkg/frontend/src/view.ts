/** Minimal DOM view: suggestion buttons, token chips, committed list,
 * query console with provenance links that scroll to their sentence. */

import { Editor, Annotation } from "./editor.js";

const ANNOTATIONS: { value: string; label: string }[] = [
  { value: "defeasible", label: "defeasible" },
  { value: "strict", label: "(strict)" },
  { value: "except", label: "(except)" },
  { value: "conflict_constraint", label: "(conflict constraint)" },
];

export function mount(root: HTMLElement, editor: Editor): void {
  root.innerHTML = `
    <div class="banner" id="banner" hidden>service unreachable; committing is disabled, your tokens are kept</div>
    <div class="compose">
      <div id="tokens" class="tokens"></div>
      <input id="typed" placeholder="type to filter suggestions" autocomplete="off">
      <select id="annotation"></select>
      <input id="label" placeholder="label (optional)" size="8">
      <button id="commit" disabled>commit sentence</button>
      <button id="backspace">⌫ token</button>
      <div id="inline-error" class="error" hidden></div>
      <div id="suggestions" class="suggestions"></div>
    </div>
    <ol id="committed" class="committed"></ol>
    <div class="query">
      <input id="goal" placeholder="discount(John, coke, ?A) or: How much discount ..." size="48">
      <button id="ask" disabled>ask</button>
      <button id="show-program">show program</button>
      <div id="inconsistent" class="error" hidden>warning: the knowledge base is inconsistent</div>
      <div id="answers"></div>
      <pre id="program" hidden></pre>
    </div>
  `;

  const el = <T extends HTMLElement>(id: string): T => root.querySelector("#" + id) as T;
  const annotationSelect = el<HTMLSelectElement>("annotation");
  for (const a of ANNOTATIONS) {
    const opt = document.createElement("option");
    opt.value = a.value;
    opt.textContent = a.label;
    annotationSelect.appendChild(opt);
  }

  el<HTMLInputElement>("typed").addEventListener("input", (ev) => {
    editor.setTyped((ev.target as HTMLInputElement).value);
  });
  annotationSelect.addEventListener("change", () => {
    const v = annotationSelect.value;
    const annotation: Annotation =
      v === "strict" ? { kind: "strict" }
      : v === "except" ? { kind: "except" }
      : v === "conflict_constraint" ? { kind: "conflict_constraint" }
      : { kind: "defeasible" };
    editor.setAnnotation(annotation);
  });
  el<HTMLInputElement>("label").addEventListener("change", (ev) => {
    const v = (ev.target as HTMLInputElement).value.trim();
    editor.setLabel(v || null);
  });
  el<HTMLButtonElement>("commit").addEventListener("click", () => void editor.commitSentence());
  el<HTMLButtonElement>("backspace").addEventListener("click", () => void editor.removeLastToken());
  el<HTMLButtonElement>("ask").addEventListener("click", () => {
    const goal = el<HTMLInputElement>("goal").value.trim();
    if (goal) void editor.runQuery(goal);
  });
  el<HTMLButtonElement>("show-program").addEventListener("click", async () => {
    const pre = el<HTMLPreElement>("program");
    pre.textContent = await editor.translate();
    pre.hidden = false;
  });

  editor.subscribe((state) => {
    el("banner").hidden = !state.serviceDown;

    const tokens = el("tokens");
    tokens.innerHTML = "";
    for (const t of state.tokens) {
      const chip = document.createElement("span");
      chip.className = "chip";
      chip.textContent = t;
      tokens.appendChild(chip);
    }

    const sugg = el("suggestions");
    sugg.innerHTML = "";
    for (const word of editor.filteredWords()) {
      const btn = document.createElement("button");
      btn.className = "word";
      btn.textContent = word;
      btn.addEventListener("click", () => void editor.addToken(word));
      sugg.appendChild(btn);
    }
    if (state.suggestions?.complete) {
      const done = document.createElement("span");
      done.className = "complete";
      done.textContent = "sentence complete ✓";
      sugg.appendChild(done);
    }

    el<HTMLButtonElement>("commit").disabled = !editor.canCommit() || state.busy;
    el<HTMLButtonElement>("ask").disabled = !editor.canQuery();

    const errBox = el("inline-error");
    errBox.hidden = !state.inlineError;
    errBox.textContent = state.inlineError ?? "";

    const committed = el("committed");
    committed.innerHTML = "";
    for (const s of state.committed) {
      const li = document.createElement("li");
      li.id = "sentence-" + s.id;
      li.innerHTML = `<code>[${s.id}]</code> ${s.text} <span class="badge">${s.badge}</span>`;
      committed.appendChild(li);
    }

    const answers = el("answers");
    answers.innerHTML = "";
    const ans = state.lastAnswer;
    el("inconsistent").hidden = !(ans && ans.inconsistent);
    if (ans) {
      const line = document.createElement("div");
      line.textContent = "answer: " + ans.rendered;
      answers.appendChild(line);
      for (const p of ans.provenance) {
        const link = document.createElement("a");
        link.href = "#sentence-" + (p.sentence ?? "");
        link.textContent = `via ${p.rule}` + (p.sentence ? ` (sentence ${p.sentence})` : "");
        link.addEventListener("click", (ev) => {
          ev.preventDefault();
          const target = document.getElementById("sentence-" + p.sentence);
          if (target) {
            target.scrollIntoView({ behavior: "smooth", block: "center" });
            target.classList.add("flash");
            setTimeout(() => target.classList.remove("flash"), 1200);
          }
        });
        answers.appendChild(link);
        answers.appendChild(document.createElement("br"));
      }
    }
  });

  void editor.refreshSuggestions();
}
