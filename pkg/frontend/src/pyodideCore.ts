/**
 * CompilerCore for the static site: runs the compiler in-browser on
 * Pyodide. The page must load pyodide.js first and serve a wheel of the
 * compiler package next to the site (see README). All language behavior
 * still lives in the Python package; this adapter only moves strings.
 */

import { CompilerCore, CompileResult, Diagnostic, Target } from "./compiler.js";

declare global {
  interface Window {
    loadPyodide?: (opts?: { indexURL?: string }) => Promise<PyodideLike>;
  }
}

interface PyodideLike {
  loadPackage(name: string | string[]): Promise<void>;
  runPythonAsync(code: string): Promise<string>;
  globals: { set(name: string, value: unknown): void };
}

const BOOTSTRAP = `
import json
import micropip
await micropip.install(wheel_url)
`;

const COMPILE = `
import json
from lina import analyze, prepare_source
from lina.cli import render_diagnostics
from lina.emit import OutputTarget, emit
from lina.errors import LinaError

def _compile(source, targets, entry):
    src = prepare_source(source, "<playground>")
    try:
        program = analyze(src)
    except LinaError as ex:
        return json.dumps({
            "ok": False,
            "diagnostics": json.loads(
                render_diagnostics(ex.diagnostics, True, src)),
            "units": {},
        })
    units = {}
    for name in targets:
        try:
            unit = emit(program, OutputTarget(name), entry,
                        latex_framing="mathjax")
        except LinaError:
            continue
        units[name] = unit.text
    return json.dumps({"ok": True, "diagnostics": [], "units": units})

json.dumps(_compile(source_text, json.loads(targets_json), entry_name))
`;

export class PyodideCompilerCore implements CompilerCore {
  private ready: Promise<PyodideLike> | null = null;

  constructor(private readonly wheelUrl: string) {}

  private boot(): Promise<PyodideLike> {
    if (this.ready === null) {
      this.ready = (async () => {
        if (!window.loadPyodide) {
          throw new Error("pyodide.js is not loaded");
        }
        const py = await window.loadPyodide();
        await py.loadPackage(["numpy", "micropip"]);
        py.globals.set("wheel_url", this.wheelUrl);
        await py.runPythonAsync(BOOTSTRAP);
        return py;
      })();
    }
    return this.ready;
  }

  async compile(source: string, targets: Target[],
                entryName = "program"): Promise<CompileResult> {
    const py = await this.boot();
    py.globals.set("source_text", source);
    py.globals.set("targets_json", JSON.stringify(targets));
    py.globals.set("entry_name", entryName);
    const raw = await py.runPythonAsync(COMPILE);
    const parsed = JSON.parse(JSON.parse(raw)) as {
      ok: boolean;
      diagnostics: Diagnostic[];
      units: Partial<Record<Target, string>>;
    };
    return parsed;
  }
}
