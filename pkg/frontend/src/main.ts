/**
 * DOM wiring for the playground page. All behavior lives in
 * EditorSession; this file moves strings between it and the page.
 */

import { CompilerCore, Target } from "./compiler.js";
import { EditorSession, EditorState } from "./editorSession.js";
import { PyodideCompilerCore } from "./pyodideCore.js";
import { SubstitutionTable } from "./substitution.js";

declare global {
  interface Window {
    MathJax?: { typesetPromise?: (nodes?: Element[]) => Promise<void> };
  }
}

const PANES: Target[] = ["latex", "py", "cpp"];

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing #${id}`);
  return el as T;
}

async function start(): Promise<void> {
  const table = (await (await fetch("./substitutions.json")).json()) as
    SubstitutionTable;
  const core: CompilerCore = new PyodideCompilerCore("./lina-0.1.0-py3-none-any.whl");

  const editor = byId<HTMLTextAreaElement>("editor");
  const diagnosticsEl = byId<HTMLDivElement>("diagnostics");
  const latexPane = byId<HTMLDivElement>("pane-latex");
  const latexSource = byId<HTMLPreElement>("latex-source");
  const panes: Record<string, HTMLPreElement> = {
    py: byId<HTMLPreElement>("pane-py"),
    cpp: byId<HTMLPreElement>("pane-cpp"),
  };

  const render = (state: EditorState): void => {
    if (editor.value !== state.buffer) {
      const pos = state.cursor;
      editor.value = state.buffer;
      editor.setSelectionRange(pos, pos);
    }
    document.body.classList.toggle("stale", state.stale || state.pending);
    const result = state.lastCompile;
    if (result === null) return;

    if (result.diagnostics.length > 0) {
      diagnosticsEl.textContent = result.diagnostics
        .map((d) => `${d.span.line}:${d.span.col} ${d.code} ${d.message}`)
        .join("\n");
      for (const u of state.underlines) {
        editor.setSelectionRange(u.start, u.end);
      }
    } else {
      diagnosticsEl.textContent = "";
    }

    for (const target of ["py", "cpp"] as const) {
      const text = result.units[target];
      if (text !== undefined) panes[target].textContent = text;
      else if (result.ok) panes[target].textContent = "";
    }
    const latex = result.units.latex;
    if (latex !== undefined) {
      latexSource.textContent = latex;
      latexPane.innerHTML = "\\[" + latex.replace(/\n/g, " ") + "\\]";
      void window.MathJax?.typesetPromise?.([latexPane]);
    } else if (result.ok) {
      latexSource.textContent = "";
      latexPane.textContent = "";
    }
    window.location.hash = encodeURIComponent(state.buffer);
  };

  const session = new EditorSession(core, table, { onChange: render });

  editor.addEventListener("input", () => {
    // diff against the session buffer to find what was typed
    const value = editor.value;
    const prev = session.state.buffer;
    if (value.length === prev.length + 1 && value.startsWith(prev.slice(0, -1))) {
      const at = editor.selectionStart - 1;
      session.state.buffer = value.slice(0, at) + value.slice(at + 1);
      session.state.cursor = at;
      session.insert(value[at]);
    } else {
      session.state.cursor = editor.selectionStart;
      session.setBuffer(value);
    }
  });

  for (const btn of Array.from(document.querySelectorAll("[data-copy]"))) {
    btn.addEventListener("click", () => {
      const id = (btn as HTMLElement).dataset.copy as string;
      const text = byId<HTMLElement>(id).textContent ?? "";
      void navigator.clipboard.writeText(text);
    });
  }

  const fromHash = decodeURIComponent(window.location.hash.slice(1));
  if (fromHash) {
    session.setBuffer(fromHash);
  }
  const _: Target[] = PANES; // documented pane order
  void _;
}

void start();
