import { describe, expect, it } from "vitest";

import { CompilerCore, CompileResult, Target } from "../src/compiler.js";
import { EditorSession, Scheduler } from "../src/editorSession.js";
import { SubstitutionTable } from "../src/substitution.js";

const table: SubstitutionTable = {
  version: 1,
  entries: { "\\in": "∈", "\\R": "ℝ", "\\sum": "Σ", "\\int": "∫" },
};

/** Manual clock: timers fire only when the test advances time. */
class FakeClock {
  now = 0;
  private timers: { at: number; fn: () => void; id: number }[] = [];
  private counter = 0;

  scheduler: Scheduler = (fn, ms) => {
    const id = ++this.counter;
    this.timers.push({ at: this.now + ms, fn, id });
    return () => {
      this.timers = this.timers.filter((t) => t.id !== id);
    };
  };

  async advance(ms: number): Promise<void> {
    this.now += ms;
    const due = this.timers.filter((t) => t.at <= this.now);
    this.timers = this.timers.filter((t) => t.at > this.now);
    for (const t of due) t.fn();
    await Promise.resolve();
    await Promise.resolve();
  }
}

class ScriptedCore implements CompilerCore {
  calls: string[] = [];
  private resolvers: ((r: CompileResult) => void)[] = [];
  auto: ((source: string) => CompileResult) | null = null;

  compile(source: string, _targets: Target[]): Promise<CompileResult> {
    this.calls.push(source);
    if (this.auto) {
      return Promise.resolve(this.auto(source));
    }
    return new Promise((resolve) => this.resolvers.push(resolve));
  }

  resolveNext(result: CompileResult): void {
    const r = this.resolvers.shift();
    if (!r) throw new Error("no pending compile");
    r(result);
  }
}

const okResult = (tag: string): CompileResult => ({
  ok: true,
  diagnostics: [],
  units: { latex: tag, py: tag, cpp: tag },
});

describe("editor session", () => {
  it("applies cursor substitutions while typing", () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    core.auto = () => okResult("x");
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.insert("q = \\sum");
    expect(s.state.buffer).toBe("q = Σ");
    expect(s.state.cursor).toBe(5);
  });

  it("debounces: one compile 250 ms after the last keystroke", async () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    core.auto = () => okResult("one");
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.insert("a");
    await clock.advance(200);
    expect(core.calls.length).toBe(0);
    s.insert(" = 1");
    await clock.advance(200);
    expect(core.calls.length).toBe(0); // keystroke reset the timer
    await clock.advance(50);
    expect(core.calls).toEqual(["a = 1"]);
    expect(s.state.lastCompile?.units.py).toBe("one");
    expect(s.state.stale).toBe(false);
    expect(s.state.pending).toBe(false);
  });

  it("marks panes stale while edits outrun compiles, then refreshes", async () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.insert("a = 1");
    await clock.advance(250);
    core.resolveNext(okResult("first"));
    await clock.advance(0);
    expect(s.state.stale).toBe(false);

    s.insert(" + 2"); // stale until the next completed compile
    expect(s.state.stale).toBe(true);
    expect(s.state.lastCompile?.units.py).toBe("first");
    await clock.advance(250);
    core.resolveNext(okResult("second"));
    await clock.advance(0);
    expect(s.state.stale).toBe(false);
    expect(s.state.lastCompile?.units.py).toBe("second");
  });

  it("a newer snapshot supersedes an in-flight compile", async () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.insert("a = 1");
    await clock.advance(250); // compile of "a = 1" in flight
    s.insert("0"); // newer buffer "a = 10"
    await clock.advance(250); // second compile in flight
    core.resolveNext(okResult("old"));
    await clock.advance(0);
    expect(s.state.lastCompile).toBeNull(); // old result dropped
    core.resolveNext(okResult("new"));
    await clock.advance(0);
    expect(s.state.lastCompile?.units.py).toBe("new");
    expect(core.calls).toEqual(["a = 1", "a = 10"]);
  });

  it("clears panes for an empty buffer without calling the compiler", async () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.setBuffer("");
    await clock.advance(250);
    expect(core.calls.length).toBe(0);
    expect(s.state.lastCompile).toEqual({ ok: true, diagnostics: [], units: {} });
  });

  it("maps diagnostic spans to underline offsets in the buffer", async () => {
    const clock = new FakeClock();
    const core = new ScriptedCore();
    const source = "given\nA ∈ ℝ^(3×n)\nC ∈ ℝ^(m×2)\n\nF = AC\n";
    core.auto = () => ({
      ok: false,
      diagnostics: [{
        code: "E_DIM_MISMATCH",
        message: "cannot multiply",
        span: { line: 5, col: 5, end_line: 5, end_col: 7 },
      }],
      units: {},
    });
    const s = new EditorSession(core, table, { scheduler: clock.scheduler });
    s.setBuffer(source);
    await clock.advance(250);
    expect(s.state.underlines.length).toBe(1);
    const u = s.state.underlines[0];
    expect(source.slice(u.start, u.end)).toBe("AC");
    expect(u.diagnostic.code).toBe("E_DIM_MISMATCH");
  });
});
