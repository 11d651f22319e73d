/**
 * The compiler seen from the playground. The playground implements no
 * language logic of its own: every implementation of CompilerCore hands
 * source text to the real compiler and returns its bytes untouched.
 */

export type Target = "latex" | "py" | "cpp";

export interface DiagnosticSpan {
  line: number;
  col: number;
  end_line: number;
  end_col: number;
}

export interface Diagnostic {
  code: string;
  message: string;
  severity?: string;
  span: DiagnosticSpan;
}

export interface CompileResult {
  ok: boolean;
  diagnostics: Diagnostic[];
  /** Emitted text per target; byte-identical to CLI output. */
  units: Partial<Record<Target, string>>;
}

export interface CompilerCore {
  compile(source: string, targets: Target[],
          entryName?: string): Promise<CompileResult>;
}

/** Map a 1-based line/col position to an offset into the buffer. */
export function positionToOffset(text: string, line: number, col: number): number {
  let offset = 0;
  let current = 1;
  while (current < line) {
    const next = text.indexOf("\n", offset);
    if (next < 0) return text.length;
    offset = next + 1;
    current += 1;
  }
  return Math.min(offset + col - 1, text.length);
}

export function diagnosticRange(
  text: string,
  d: Diagnostic,
): { start: number; end: number } {
  const start = positionToOffset(text, d.span.line, d.span.col);
  const end = positionToOffset(text, d.span.end_line, d.span.end_col);
  return { start, end: Math.max(end, start + 1) };
}
