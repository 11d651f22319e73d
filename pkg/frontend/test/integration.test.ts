/**
 * Integration against the real compiler CLI. The playground must never
 * reimplement language logic, so its output here is compared byte for
 * byte against direct `lina compile` invocations for every corpus file.
 */

import { execFileSync } from "node:child_process";
import { readFileSync, readdirSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { beforeAll, describe, expect, it } from "vitest";

import { Target } from "../src/compiler.js";
import { CliCompilerCore } from "../src/cliCore.js";
import { EditorSession } from "../src/editorSession.js";
import { SubstitutionTable } from "../src/substitution.js";

const corpusDir = fileURLToPath(new URL("../../corpus", import.meta.url));
const table = JSON.parse(readFileSync(
  new URL("../public/substitutions.json", import.meta.url), "utf8",
)) as SubstitutionTable;

function cliAvailable(): boolean {
  try {
    execFileSync("lina", ["--help"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

const available = cliAvailable();
const maybe = available ? describe : describe.skip;

function cliCompile(path: string, target: Target): string | null {
  const args = ["compile", path, "--target", target];
  if (target === "latex") args.push("--latex", "mathjax");
  try {
    return execFileSync("lina", args, { encoding: "utf8" });
  } catch {
    return null; // that target is rejected (argmin programs)
  }
}

maybe("playground against the CLI", () => {
  const core = new CliCompilerCore();
  const corpus = readdirSync(corpusDir).filter((f) => f.endsWith(".la")).sort();

  beforeAll(() => {
    expect(corpus.length).toBeGreaterThanOrEqual(12);
  });

  it("emits byte-identical text to the CLI for every corpus file", async () => {
    for (const name of corpus) {
      const source = readFileSync(`${corpusDir}/${name}`, "utf8");
      const stem = name.replace(/\.la$/, "");
      const result = await core.compile(source, ["latex", "py", "cpp"], stem);
      expect(result.ok, name).toBe(true);
      for (const target of ["latex", "py", "cpp"] as Target[]) {
        const direct = cliCompile(`${corpusDir}/${name}`, target);
        if (direct === null) {
          expect(result.units[target], `${name} ${target}`).toBeUndefined();
        } else {
          expect(result.units[target], `${name} ${target}`).toBe(direct);
        }
      }
    }
  }, 120000);

  it("populates all three panes within a second of typing stopping", async () => {
    const source = readFileSync(`${corpusDir}/three_matrix.la`, "utf8");
    const session = new EditorSession(core, table);
    const start = Date.now();
    const settled = new Promise<void>((resolve) => {
      const tick = () => {
        const units = session.state.lastCompile?.units;
        if (units && units.latex && units.py && units.cpp) resolve();
        else setTimeout(tick, 10);
      };
      tick();
    });
    session.setBuffer(source);
    await settled;
    const elapsed = Date.now() - start;
    expect(elapsed).toBeLessThan(1000);
    expect(session.state.lastCompile?.units.cpp).toContain(
      "Eigen::Matrix<double, 3, 2>");
  });

  it("underlines the product in the AC mismatch program", async () => {
    const source = "given\nA ∈ ℝ^(3×n)\nB ∈ ℝ^(n×m)\nC ∈ ℝ^(m×2)\n\nF = AC\n";
    const session = new EditorSession(core, table);
    session.setBuffer(source);
    await session.compileNow();
    const result = session.state.lastCompile;
    expect(result?.ok).toBe(false);
    expect(result?.diagnostics[0].code).toBe("E_DIM_MISMATCH");
    const u = session.state.underlines[0];
    expect(source.slice(u.start, u.end)).toBe("AC");
  });

  it("typing a program through the session produces CLI bytes", async () => {
    const session = new EditorSession(core, table);
    session.insert("given\nA \\in \\R^(3\\timesn)\nx \\in \\R^3\n\ny = Aᵀx\n");
    expect(session.state.buffer).toContain("A ∈ ℝ^(3×n)");
    await session.compileNow();
    expect(session.state.lastCompile?.ok).toBe(true);
    const py = session.state.lastCompile?.units.py ?? "";
    expect(py).toContain("A.T @ x");
  });
});
