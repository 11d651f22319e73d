"""lina: a compiler toolkit for plain-text linear-algebra notation.

Parses chalkboard-style Unicode math, statically checks symbolic matrix
and vector dimensions, and emits LaTeX plus Python and C++ sources from a
single input, with a reference interpreter for semantic verification.
"""

from __future__ import annotations

from .errors import Diagnostic, LinaError
from .source import SourceFile, normalize, substitute_ascii, default_table
from .lexer import tokenize
from .parser import parse, parse_source, scan_declarations
from .sema import TypedProgram, check
from .unparse import unparse
from .interp import evaluate
from .emit import EmittedUnit, OutputTarget, emit

__version__ = "0.1.0"


def prepare_source(text: str, path: str = "<input>") -> SourceFile:
    """Normalize and apply the ASCII-alias substitution table."""
    src = normalize(text, path)
    substituted = substitute_ascii(src.text)
    return normalize(substituted, path)


def analyze(src: SourceFile) -> TypedProgram:
    """Tokenize, parse and type-check an already prepared source."""
    ast, symbols = parse_source(src)
    return check(ast, symbols)


def frontend(text: str, path: str = "<input>") -> tuple[SourceFile, TypedProgram]:
    """Normalize, substitute ASCII aliases, tokenize, parse and check."""
    src = prepare_source(text, path)
    return src, analyze(src)


def compile_text(text: str, targets: list[OutputTarget], entry_name: str,
                 path: str = "<input>",
                 latex_framing: str = "standalone") -> list[EmittedUnit]:
    """One-call pipeline used by the CLI and the playground bridge."""
    _, program = frontend(text, path)
    return [emit(program, t, entry_name, latex_framing=latex_framing)
            for t in targets]
