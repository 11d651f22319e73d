"""Diagnostics: error codes, source spans, and the carrier exception.

Every failure mode in the toolkit maps to one code from CATALOG so that
tools (and tests) can match on codes instead of message text.
"""

from __future__ import annotations

from dataclasses import dataclass

Span = tuple[int, int]  # half-open byte offsets into the normalized source

CATALOG: dict[str, str] = {
    # source / lexing
    "E_ENCODING": "input is not valid Unicode text",
    "E_BADCHAR": "character cannot appear in a program",
    "E_UNTERMINATED_BACKTICK": "backtick-quoted name is never closed",
    # parsing
    "E_PARSE": "syntax error",
    "E_ASTERISK": "'*' is not a multiplication operator",
    "E_DUPLICATE_DECL": "name declared more than once",
    "E_UNKNOWN_NAMESPACE": "import names an unknown namespace",
    "E_RAGGED_ROWS": "matrix rows have different element counts",
    # type and dimension checking
    "E_DIM_MISMATCH": "symbolic dimensions are incompatible",
    "E_REDEFINED": "variable is assigned more than once",
    "E_UNDECLARED": "name is neither declared nor defined",
    "E_NOT_A_FUNCTION": "called name is not function-typed",
    "E_TYPE": "operand types do not fit the operator",
    "E_BLOCK_UNDERDETERMINED": "identity/zero block has no determining neighbor",
    "E_BLOCK_INCONSISTENT": "block sizes contradict each other",
    "E_SUM_UNBOUND": "summation index is not used in the summand",
    "E_SUM_AMBIGUOUS": "summation index has conflicting iteration domains",
    # evaluation
    "E_SHAPE": "runtime value does not match its declared shape",
    "E_SINGULAR": "matrix is numerically singular",
    "E_EVAL_FN": "function-typed parameters cannot be evaluated from input documents",
    "E_UNSUPPORTED_TARGET": "construct is not supported for this target",
    "E_QUAD_DEPTH": "quadrature tolerance unreachable at maximum depth",
    "E_DOMAIN": "argument outside the mathematical domain of the function",
    "E_OVERFLOW": "integer arithmetic overflowed 64 bits",
    # driver
    "E_IO": "file could not be read or written",
    "E_JSON": "values document is malformed",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: Span = (0, 0)
    severity: str = "error"

    def __post_init__(self) -> None:
        if self.code not in CATALOG:
            raise ValueError(f"unknown diagnostic code {self.code!r}")

    def __str__(self) -> str:
        return f"{self.code} {self.message}"


class LinaError(Exception):
    """Raised by pipeline stages; carries one or more diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic] | Diagnostic):
        if isinstance(diagnostics, Diagnostic):
            diagnostics = [diagnostics]
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))

    @property
    def code(self) -> str:
        return self.diagnostics[0].code


def err(code: str, message: str, span: Span = (0, 0)) -> LinaError:
    return LinaError(Diagnostic(code, message, span))
