"""Command-line driver: check, compile, eval.

Exit codes: 0 clean, 1 diagnostics reported, 2 usage or I/O problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analyze, prepare_source
from .emit import OutputTarget, emit
from .errors import Diagnostic, LinaError
from .interp import evaluate
from .source import SourceFile
from .values import encode_value, load_value_document
from .emit.mangle import ascii_base

_IO_CODES = {"E_IO", "E_JSON"}


def render_diagnostics(diags: list[Diagnostic], json_mode: bool,
                       src: SourceFile | None = None) -> str:
    """Human or machine formatting for a list of diagnostics."""
    if json_mode:
        out = []
        for d in diags:
            if src is not None:
                line, col = src.position(d.span[0])
                end_line, end_col = src.position(max(d.span[1] - 1, d.span[0]))
                end_col += 1
            else:
                line = col = end_line = end_col = 1
            out.append({"code": d.code, "message": d.message,
                        "severity": d.severity,
                        "span": {"line": line, "col": col,
                                 "end_line": end_line, "end_col": end_col}})
        return json.dumps(out, ensure_ascii=False)
    lines = []
    for d in diags:
        if src is not None:
            line, col = src.position(d.span[0])
            path = src.path
            lines.append(f"{path}:{line}:{col}: {d.code} {d.message}")
            text_line = _source_line(src, line)
            if text_line:
                line_start = src.line_starts[line - 1]
                end_in_line = min(d.span[1] - line_start, len(text_line))
                width = max(1, end_in_line - (col - 1))
                lines.append(text_line)
                lines.append(" " * (col - 1) + "^" + "~" * (width - 1))
        else:
            lines.append(f"{d.code} {d.message}")
    return "\n".join(lines)


def _source_line(src: SourceFile, line: int) -> str:
    start = src.line_starts[line - 1]
    end = src.line_starts[line] - 1 if line < len(src.line_starts) \
        else len(src.text)
    return src.text[start:end]


def _read_input(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8"), str(p)
    except OSError as ex:
        raise LinaError(Diagnostic("E_IO", f"cannot read {path}: {ex}")) \
            from None


def _entry_name(path: str) -> str:
    stem = "program" if path in ("-", "<stdin>") else Path(path).stem
    return ascii_base(stem)


def _parse_targets(text: str) -> list[OutputTarget]:
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            out.append(OutputTarget(part))
        except ValueError:
            raise SystemExit(
                f"error: unknown target {part!r} (use latex, py, cpp)")
    return out


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lina",
        description="Compile plain-text linear-algebra notation to LaTeX, "
                    "Python and C++, or evaluate it directly.")
    sub = ap.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="parse and type-check a program")
    p_check.add_argument("input")
    p_check.add_argument("--json", action="store_true", dest="json_mode")

    p_compile = sub.add_parser("compile", help="emit code for one or more targets")
    p_compile.add_argument("input")
    p_compile.add_argument("--target", required=True,
                           help="comma list drawn from latex,py,cpp")
    p_compile.add_argument("-o", "--out-dir", default=None)
    p_compile.add_argument("--latex", choices=("standalone", "mathjax"),
                           default="standalone", dest="latex_framing")
    p_compile.add_argument("--entry", default=None,
                           help="entry-point name (defaults to the input "
                                "file stem)")
    p_compile.add_argument("--json", action="store_true", dest="json_mode")

    p_eval = sub.add_parser("eval", help="run the reference interpreter")
    p_eval.add_argument("input")
    p_eval.add_argument("--values", required=True)
    p_eval.add_argument("--json", action="store_true", dest="json_mode")
    return ap


def run(argv: list[str]) -> int:
    try:
        args = build_arg_parser().parse_args(argv)
    except SystemExit as ex:
        return 0 if ex.code == 0 else 2

    src: SourceFile | None = None
    try:
        text, path = _read_input(args.input)
        src = prepare_source(text, path)
        if args.command == "check":
            analyze(src)
            if args.json_mode:
                print("[]")
            return 0

        if args.command == "compile":
            targets = _parse_targets(args.target)
            program = analyze(src)
            entry = ascii_base(args.entry) if args.entry else _entry_name(path)
            units = [emit(program, t, entry, latex_framing=args.latex_framing)
                     for t in targets]
            if args.out_dir is None:
                if len(units) == 1:
                    sys.stdout.write(units[0].text)
                    return 0
                raise SystemExit(
                    "error: multiple targets need -o/--out-dir")
            out_dir = Path(args.out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            for unit in units:
                target_path = out_dir / unit.file_name
                target_path.write_text(unit.text, encoding="utf-8")
                print(target_path)
            return 0

        assert args.command == "eval"
        program = analyze(src)
        try:
            values_text = Path(args.values).read_text(encoding="utf-8") \
                if args.values != "-" else sys.stdin.read()
        except OSError as ex:
            raise LinaError(Diagnostic(
                "E_IO", f"cannot read {args.values}: {ex}")) from None
        inputs = load_value_document(values_text, program.params)
        result = evaluate(program, inputs)
        doc = {name: encode_value(v) for name, v in result.items()}
        doc["ret"] = doc[program.ret_name]
        print(json.dumps(doc, ensure_ascii=False))
        return 0

    except LinaError as ex:
        sys.stderr.write(render_diagnostics(ex.diagnostics,
                                            getattr(args, "json_mode", False),
                                            src) + "\n")
        return 2 if ex.code in _IO_CODES else 1
    except SystemExit as ex:
        if isinstance(ex.code, str):
            sys.stderr.write(ex.code + "\n")
            return 2
        return 0 if ex.code in (0, None) else 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
