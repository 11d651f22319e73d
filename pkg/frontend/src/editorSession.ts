/**
 * The editor's state machine, kept free of DOM so it can be driven by
 * tests with a fake clock. Keystrokes apply cursor substitutions and
 * schedule a compile 250 ms after the last edit; one compile is in
 * flight at a time and a newer buffer snapshot supersedes older results.
 * Panes from the last success stay visible but are marked stale until
 * the next completed compile.
 */

import {
  CompilerCore,
  CompileResult,
  Diagnostic,
  Target,
  diagnosticRange,
} from "./compiler.js";
import { SubstitutionTable, substituteAtCursor } from "./substitution.js";

export interface Underline {
  start: number;
  end: number;
  diagnostic: Diagnostic;
}

export interface EditorState {
  buffer: string;
  cursor: number;
  pending: boolean;
  stale: boolean;
  lastCompile: CompileResult | null;
  underlines: Underline[];
}

export type CancelTimer = () => void;
export type Scheduler = (fn: () => void, ms: number) => CancelTimer;

const defaultScheduler: Scheduler = (fn, ms) => {
  const id = setTimeout(fn, ms);
  return () => clearTimeout(id);
};

export interface SessionOptions {
  debounceMs?: number;
  scheduler?: Scheduler;
  targets?: Target[];
  onChange?: (state: EditorState) => void;
}

export class EditorSession {
  readonly state: EditorState = {
    buffer: "",
    cursor: 0,
    pending: false,
    stale: false,
    lastCompile: null,
    underlines: [],
  };

  private readonly core: CompilerCore;
  private readonly table: SubstitutionTable;
  private readonly debounceMs: number;
  private readonly schedule: Scheduler;
  private readonly targets: Target[];
  private readonly onChange: (state: EditorState) => void;
  private cancelTimer: CancelTimer | null = null;
  private generation = 0;

  constructor(core: CompilerCore, table: SubstitutionTable,
              options: SessionOptions = {}) {
    this.core = core;
    this.table = table;
    this.debounceMs = options.debounceMs ?? 250;
    this.schedule = options.scheduler ?? defaultScheduler;
    this.targets = options.targets ?? ["latex", "py", "cpp"];
    this.onChange = options.onChange ?? (() => undefined);
  }

  /** Insert text at the cursor, as if typed. */
  insert(text: string): void {
    for (const ch of text) {
      this.insertOne(ch);
    }
    this.scheduleCompile();
    this.emit();
  }

  /** Replace the whole buffer (paste, hash restore). */
  setBuffer(text: string): void {
    this.state.buffer = text;
    this.state.cursor = text.length;
    this.state.stale = true;
    this.scheduleCompile();
    this.emit();
  }

  deleteBackwards(): void {
    const { buffer, cursor } = this.state;
    if (cursor === 0) return;
    this.state.buffer = buffer.slice(0, cursor - 1) + buffer.slice(cursor);
    this.state.cursor = cursor - 1;
    this.state.stale = true;
    this.scheduleCompile();
    this.emit();
  }

  private insertOne(ch: string): void {
    const { buffer, cursor } = this.state;
    this.state.buffer = buffer.slice(0, cursor) + ch + buffer.slice(cursor);
    this.state.cursor = cursor + 1;
    const edit = substituteAtCursor(this.state.buffer, this.state.cursor,
                                    this.table);
    if (edit !== null) {
      this.state.buffer = edit.text;
      this.state.cursor = edit.cursor;
    }
    this.state.stale = true;
  }

  private scheduleCompile(): void {
    if (this.cancelTimer !== null) {
      this.cancelTimer();
    }
    this.state.pending = true;
    this.cancelTimer = this.schedule(() => {
      this.cancelTimer = null;
      void this.compileNow();
    }, this.debounceMs);
  }

  /** Compile the current buffer snapshot; superseded results are dropped. */
  async compileNow(): Promise<void> {
    if (this.cancelTimer !== null) {
      this.cancelTimer(); // this call does the scheduled compile's work
      this.cancelTimer = null;
    }
    const snapshot = this.state.buffer;
    const generation = ++this.generation;
    if (snapshot.trim() === "") {
      this.applyResult(generation, snapshot,
                       { ok: true, diagnostics: [], units: {} });
      return;
    }
    let result: CompileResult;
    try {
      result = await this.core.compile(snapshot, this.targets);
    } catch (err) {
      result = {
        ok: false,
        diagnostics: [{
          code: "E_IO",
          message: String(err),
          span: { line: 1, col: 1, end_line: 1, end_col: 2 },
        }],
        units: {},
      };
    }
    this.applyResult(generation, snapshot, result);
  }

  private applyResult(generation: number, snapshot: string,
                      result: CompileResult): void {
    if (generation !== this.generation) {
      return; // superseded by a newer snapshot
    }
    this.state.lastCompile = result;
    this.state.pending = this.cancelTimer !== null;
    this.state.stale = snapshot !== this.state.buffer;
    this.state.underlines = result.diagnostics.map((d) => ({
      ...diagnosticRange(snapshot, d),
      diagnostic: d,
    }));
    this.emit();
  }

  private emit(): void {
    this.onChange(this.state);
  }
}
