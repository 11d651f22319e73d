import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import {
  SubstitutionTable,
  applySubstitutions,
  substituteAtCursor,
} from "../src/substitution.js";

const here = fileURLToPath(new URL(".", import.meta.url));

function loadTable(): SubstitutionTable {
  return JSON.parse(
    readFileSync(new URL("../public/substitutions.json", import.meta.url), "utf8"),
  ) as SubstitutionTable;
}

describe("substitution table", () => {
  it("is byte-identical to the table the compiler publishes", () => {
    const ours = readFileSync(
      new URL("../public/substitutions.json", import.meta.url), "utf8");
    const published = readFileSync(
      new URL("../../src/lina/data/substitutions.json", import.meta.url), "utf8");
    expect(ours).toBe(published);
  });

  it("whole-text substitution matches the compiler semantics", () => {
    const table = loadTable();
    expect(applySubstitutions("x \\in \\R^3", table)).toBe("x ∈ ℝ^3");
    expect(applySubstitutions("`w_smoothness`", table)).toBe("`w_smoothness`");
    expect(applySubstitutions("no triggers here", table)).toBe(
      "no triggers here");
    expect(applySubstitutions("\\int_0^1", table)).toBe("∫_0^1");
  });

  it("is idempotent", () => {
    const table = loadTable();
    const once = applySubstitutions("\\sum_i \\R \\in \\| \\T", table);
    expect(applySubstitutions(once, table)).toBe(once);
  });
});

function typeInto(text: string, table: SubstitutionTable): {
  buffer: string;
  cursor: number;
} {
  let buffer = "";
  let cursor = 0;
  for (const ch of text) {
    buffer = buffer.slice(0, cursor) + ch + buffer.slice(cursor);
    cursor += 1;
    const edit = substituteAtCursor(buffer, cursor, table);
    if (edit) {
      buffer = edit.text;
      cursor = edit.cursor;
    }
  }
  return { buffer, cursor };
}

describe("substitution at the cursor", () => {
  const table = loadTable();

  it("turns \\sum into Σ at the cursor", () => {
    expect(typeInto("\\sum", table)).toEqual({ buffer: "Σ", cursor: 1 });
  });

  it("turns \\R and \\in into ℝ and ∈ while typing a declaration", () => {
    const out = typeInto("x \\in \\R^3", table);
    expect(out.buffer).toBe("x ∈ ℝ^3");
  });

  it("defers \\in so \\int stays typable", () => {
    expect(typeInto("\\int", table).buffer).toBe("∫");
    expect(typeInto("\\in ", table).buffer).toBe("∈ ");
    expect(typeInto("\\in E", table).buffer).toBe("∈ E");
  });

  it("does not fire inside backtick spans", () => {
    const out = typeInto("`w\\in`", table);
    expect(out.buffer).toBe("`w\\in`");
  });

  it("leaves tokenizer-level aliases like x^2 alone", () => {
    expect(typeInto("x^2", table).buffer).toBe("x^2");
  });
});
