/**
 * CompilerCore backed by the `lina` command-line tool, for Node hosts
 * (integration tests and local development servers). Source text goes in
 * on stdin; emitted text comes back exactly as the CLI wrote it. The
 * happy path is a single `lina compile` invocation for all panes so the
 * editor stays inside its latency budget.
 */

import { execFile } from "node:child_process";
import { mkdtemp, readFile, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CompilerCore, CompileResult, Diagnostic, Target } from "./compiler.js";

const SUFFIX: Record<Target, string> = { latex: ".tex", py: ".py", cpp: ".cpp" };

function runCli(bin: string, args: string[], stdin: string):
    Promise<{ code: number; stdout: string; stderr: string }> {
  return new Promise((resolve, reject) => {
    const child = execFile(bin, args, { maxBuffer: 1 << 24 },
      (error, stdout, stderr) => {
        const anyErr = error as (Error & { code?: number | string }) | null;
        if (anyErr && typeof anyErr.code !== "number") {
          reject(anyErr);
          return;
        }
        resolve({ code: anyErr ? Number(anyErr.code) : 0, stdout, stderr });
      });
    child.stdin?.write(stdin);
    child.stdin?.end();
  });
}

export class CliCompilerCore implements CompilerCore {
  constructor(private readonly bin: string = "lina") {}

  async compile(source: string, targets: Target[],
                entryName = "program"): Promise<CompileResult> {
    const dir = await mkdtemp(join(tmpdir(), "lina-playground-"));
    try {
      const combined = await runCli(this.bin, [
        "compile", "-", "--target", targets.join(","), "-o", dir,
        "--latex", "mathjax", "--entry", entryName,
      ], source);
      if (combined.code === 0) {
        const units: Partial<Record<Target, string>> = {};
        for (const target of targets) {
          units[target] = await readFile(
            join(dir, entryName + SUFFIX[target]), "utf8");
        }
        return { ok: true, diagnostics: [], units };
      }
      if (combined.code !== 1) {
        throw new Error(combined.stderr.trim() || "lina invocation failed");
      }

      // either real diagnostics or a target the program rejects (argmin)
      const check = await runCli(this.bin, ["check", "-", "--json"], source);
      if (check.code === 1) {
        const diagnostics = JSON.parse(check.stderr) as Diagnostic[];
        return { ok: false, diagnostics, units: {} };
      }
      if (check.code !== 0) {
        throw new Error(check.stderr.trim() || "lina invocation failed");
      }
      const units: Partial<Record<Target, string>> = {};
      for (const target of targets) {
        const one = await runCli(this.bin, [
          "compile", "-", "--target", target, "-o", dir,
          "--latex", "mathjax", "--entry", entryName,
        ], source);
        if (one.code === 0) {
          units[target] = await readFile(
            join(dir, entryName + SUFFIX[target]), "utf8");
        }
      }
      return { ok: true, diagnostics: [], units };
    } finally {
      await rm(dir, { recursive: true, force: true });
    }
  }
}
