"""Surface AST: expressions, conditions, declarations, statements.

Every node carries a source span that is excluded from structural
equality, so round-trip tests compare shape, not positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Span

_NOSPAN: Span = (0, 0)


@dataclass(frozen=True, kw_only=True)
class Node:
    span: Span = field(default=_NOSPAN, compare=False, repr=False)


# ---------------------------------------------------------------- expressions

class Expr(Node):
    pass


@dataclass(frozen=True)
class Ident(Expr):
    name: str


@dataclass(frozen=True)
class Number(Expr):
    text: str

    @property
    def value(self) -> float:
        return float(self.text)

    @property
    def is_integer(self) -> bool:
        return Fraction(self.text).denominator == 1


@dataclass(frozen=True)
class Mul(Expr):
    """Juxtaposition product."""
    left: Expr
    right: Expr


@dataclass(frozen=True)
class DotOp(Expr):
    """Explicit dot operator; a dot product or a multiplication by type."""
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Solve(Expr):
    """Backslash: solve(matrix, rhs)."""
    matrix: Expr
    rhs: Expr


@dataclass(frozen=True)
class Cross(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Kron(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Hadamard(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Transpose(Expr):
    base: Expr


@dataclass(frozen=True)
class Inverse(Expr):
    base: Expr


@dataclass(frozen=True)
class Neg(Expr):
    base: Expr


@dataclass(frozen=True)
class Subscript(Expr):
    base: Expr
    indices: tuple[Expr, ...]  # Ident or Number leaves


@dataclass(frozen=True)
class Norm(Expr):
    body: Expr
    flavor: str = ""  # "", "1", "2", "∞", "F"


@dataclass(frozen=True)
class Sum(Expr):
    index: str
    body: Expr
    cond: "Cond | None" = None


@dataclass(frozen=True)
class Integral(Expr):
    var: str
    lower: Expr
    upper: Expr
    body: Expr
    bracket_bounds: bool = False  # written as _[lo, hi] instead of _lo^hi


@dataclass(frozen=True)
class MatrixLit(Expr):
    rows: tuple[tuple[Expr, ...], ...]


@dataclass(frozen=True)
class Piecewise(Expr):
    arms: tuple[tuple[Expr, "Cond"], ...]
    otherwise: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class IdentityMat(Expr):
    size: Expr | None = None


@dataclass(frozen=True)
class ZeroMat(Expr):
    """Zero block; produced during checking when a 0 literal fills a block."""
    rows: Expr | None = None
    cols: Expr | None = None


@dataclass(frozen=True)
class ArgMin(Expr):
    var: str
    var_type: "TypeAnnotation"
    objective: Expr
    constraints: tuple["Cond", ...] = ()
    kind: str = "argmin"  # or "min"


# ----------------------------------------------------------------- conditions

class Cond(Node):
    pass


@dataclass(frozen=True)
class Compare(Cond):
    op: str  # ∈ ≠ == < > ≤ ≥
    left: tuple[Expr, ...]  # a tuple only for (i,j) ∈ E memberships
    right: Expr


@dataclass(frozen=True)
class AndCond(Cond):
    left: Cond
    right: Cond


# --------------------------------------------------------------- declarations

@dataclass(frozen=True)
class TypeAnnotation(Node):
    """Surface type: scalar/vector/matrix/set/function, dims as DimExprs."""
    kind: str  # scalarR scalarZ vector matrix set function
    rows: object | None = None  # DimExpr
    cols: object | None = None  # DimExpr
    set_kinds: tuple[str, ...] = ()
    func_params: tuple["TypeAnnotation", ...] = ()
    func_ret: "TypeAnnotation | None" = None
    sparse: bool = False


@dataclass(frozen=True)
class ParamDecl(Node):
    name: str
    annot: TypeAnnotation
    seq_index: str | None = None  # declared with a subscript: a sequence
    description: str = ""


@dataclass(frozen=True)
class ImportDecl(Node):
    namespace: str
    names: tuple[str, ...]


# ----------------------------------------------------------------- statements

class Stmt(Node):
    pass


@dataclass(frozen=True)
class AssignStmt(Stmt):
    name: str
    expr: Expr


@dataclass(frozen=True)
class ElementAssignStmt(Stmt):
    name: str
    indices: tuple[str, ...]
    rhs: Expr  # possibly a Piecewise


@dataclass(frozen=True)
class ExprStmt(Stmt):
    expr: Expr


@dataclass(frozen=True)
class ProgramAst(Node):
    imports: tuple[ImportDecl, ...]
    params: tuple[ParamDecl, ...]
    stmts: tuple[Stmt, ...]


def walk(node) -> "list":
    """All Expr/Cond descendants of any AST node, including itself."""
    out = []
    stack = [node]

    def push(val) -> None:
        if hasattr(val, "__dataclass_fields__"):
            stack.append(val)
        elif isinstance(val, tuple):
            for item in val:
                push(item)

    while stack:
        cur = stack.pop()
        if isinstance(cur, (Expr, Cond)):
            out.append(cur)
        if hasattr(cur, "__dataclass_fields__"):
            for f in cur.__dataclass_fields__:
                push(getattr(cur, f))
    return out
