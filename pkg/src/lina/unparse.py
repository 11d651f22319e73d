"""Canonical printer: AST back to Unicode surface syntax.

parse(tokenize(unparse(p))) must equal p structurally, so the printer is
precedence-aware, re-checks juxtaposition gluing against keywords and
registered multi-letter names, and switches to a tight (space-free) style
inside matrix literals where whitespace separates elements.
"""

from __future__ import annotations

from .ast_nodes import (
    Add, AndCond, ArgMin, AssignStmt, Call, Compare, Cond, Cross, Div, DotOp,
    ElementAssignStmt, Expr, ExprStmt, Hadamard, Ident, IdentityMat,
    Integral, Inverse, Kron, MatrixLit, Mul, Neg, Norm, Number,
    ParamDecl, Piecewise, Pow, ProgramAst, Stmt, Sub, Subscript, Sum, Solve,
    Transpose, TypeAnnotation,
)
from .dims import DimExpr
from .lexer import KEYWORDS

_ADD, _MUL, _SUM, _NEG, _INTEGRAL, _POSTFIX, _ATOM = 50, 60, 55, 80, 70, 90, 100

_SUP_DIGITS = {"0": "⁰", "1": "¹", "2": "²", "3": "³", "4": "⁴",
               "5": "⁵", "6": "⁶", "7": "⁷", "8": "⁸", "9": "⁹"}
_SUB_DIGITS = {"0": "₀", "1": "₁", "2": "₂", "3": "₃", "4": "₄",
               "5": "₅", "6": "₆", "7": "₇", "8": "₈", "9": "₉"}

_BINARY_MUL = {DotOp: "⋅", Cross: "×", Kron: "⊗", Hadamard: "∘",
               Div: "/", Solve: "\\"}


def _is_letterish(ch: str) -> bool:
    import unicodedata
    return unicodedata.category(ch) in ("Lu", "Ll", "Lt", "Lo", "Mn", "Me")


class _Printer:
    def __init__(self, known_names: set[str]):
        self.known_multi = {n for n in known_names if len(n) > 1}

    # ------------------------------------------------------------- programs

    def program(self, ast: ProgramAst) -> str:
        lines: list[str] = []
        for imp in ast.imports:
            lines.append(f"from {imp.namespace}: {', '.join(imp.names)}")
        if ast.params:
            lines.append("given")
            for p in ast.params:
                lines.append(self.declaration(p))
            lines.append("")
        for stmt in ast.stmts:
            lines.append(self.statement(stmt))
        return "\n".join(lines) + "\n"

    def declaration(self, p: ParamDecl) -> str:
        name = self.surface_name(p.name)
        if p.seq_index is not None:
            name = f"{name}_{p.seq_index}"
        sep = " : " if p.annot.kind == "function" else " ∈ "
        text = name + sep + self.annotation(p.annot)
        if p.description:
            text += f" : {p.description}"
        return text

    def annotation(self, a: TypeAnnotation) -> str:
        if a.kind == "scalarR":
            return "ℝ"
        if a.kind == "scalarZ":
            return "ℤ"
        if a.kind == "vector":
            return "ℝ" + self._dim_sup(a.rows)
        if a.kind == "matrix":
            base = f"ℝ^({self._dim(a.rows)}×{self._dim(a.cols)})"
            return base + (" sparse" if a.sparse else "")
        if a.kind == "set":
            return "{ " + "×".join(a.set_kinds) + " }"
        if a.kind == "function":
            dom = ", ".join(self.annotation(t) for t in a.func_params)
            return f"{dom} → {self.annotation(a.func_ret)}"
        raise ValueError(a.kind)

    @staticmethod
    def _dim(d: DimExpr) -> str:
        return d.render().replace(" ", "")

    def _dim_sup(self, d: DimExpr) -> str:
        text = self._dim(d)
        if text.isdigit():
            return "".join(_SUP_DIGITS[c] for c in text)
        if len(text) == 1:
            return f"^{text}"
        return f"^({text})"

    def surface_name(self, name: str) -> str:
        units = _split_units(name)
        if units is not None and len(units) == 1:
            return name
        if "_" in name:
            base, _, deco = name.partition("_")
            if _split_units(base) is not None and len(_split_units(base)) == 1 \
                    and deco and all(c.isalnum() for c in deco):
                return f"{base}_{deco}"
        if name.isalnum():
            return name
        return f"`{name}`"

    # ------------------------------------------------------------ statements

    def statement(self, stmt: Stmt) -> str:
        if isinstance(stmt, AssignStmt):
            return self._assign(self.surface_name(stmt.name), stmt.expr)
        if isinstance(stmt, ElementAssignStmt):
            lhs = f"{self.surface_name(stmt.name)}_{''.join(stmt.indices)}"
            return self._assign(lhs, stmt.rhs)
        if isinstance(stmt, ExprStmt):
            return self._stmt_expr(stmt.expr)
        raise ValueError(stmt)

    def _assign(self, lhs: str, rhs: Expr) -> str:
        return f"{lhs} = {self._stmt_expr(rhs)}"

    def _stmt_expr(self, e: Expr) -> str:
        if isinstance(e, Piecewise):
            parts = []
            for value, cond in e.arms:
                parts.append(f"{self.expr(value, _ADD)} if {self.cond(cond)}")
            parts.append(f"{self.expr(e.otherwise, _ADD)} otherwise")
            return "{ " + "\n".join(parts)
        if isinstance(e, ArgMin):
            head = (f"{e.kind}_({e.var} ∈ {self.annotation(e.var_type)}) "
                    f"{self.expr(e.objective, _ADD)}")
            if e.constraints:
                conds = "\n".join(self.cond(c) for c in e.constraints)
                head += f"\ns.t.\n{conds}"
            return head
        return self.expr(e, 0)

    # ----------------------------------------------------------- conditions

    def cond(self, c: Cond) -> str:
        if isinstance(c, Compare):
            if len(c.left) > 1:
                lhs = "(" + ", ".join(self.expr(x, 0) for x in c.left) + ")"
            else:
                lhs = self.expr(c.left[0], _ADD)
            return f"{lhs} {c.op} {self.expr(c.right, _ADD)}"
        if isinstance(c, AndCond):
            return f"{self.cond(c.left)} and {self.cond(c.right)}"
        raise ValueError(c)

    # ---------------------------------------------------------- expressions

    def expr(self, e: Expr, min_prec: int, tight: bool = False) -> str:
        text, prec = self._render(e, tight)
        if prec < min_prec:
            return f"({text})"
        return text

    def _render(self, e: Expr, tight: bool) -> tuple[str, int]:
        sp = "" if tight else " "

        if isinstance(e, Number):
            return e.text, _ATOM
        if isinstance(e, Ident):
            return self.surface_name(e.name), _ATOM
        if isinstance(e, IdentityMat):
            if e.size is None:
                return "I", _ATOM
            if isinstance(e.size, Number) and e.size.text.isdigit():
                return "I" + "".join(_SUB_DIGITS[c] for c in e.size.text), _ATOM
            return f"I_{self.expr(e.size, _ATOM)}", _ATOM

        if isinstance(e, Mul):
            left = self.expr(e.left, _MUL, tight)
            if _ends_open(e.left):
                left = f"({self.expr(e.left, 0, tight)})"
            right = self.expr(e.right, _MUL + 1, tight)
            if (isinstance(e.right, Number) or _starts_with_digit_atom(e.right)
                    or right.startswith("-")):
                right = f"({self.expr(e.right, 0, tight)})"
            return left + self._juxta_sep(left, right, tight) + right, _MUL

        for cls, op in _BINARY_MUL.items():
            if isinstance(e, cls):
                lchild = e.matrix if cls is Solve else e.left
                rchild = e.rhs if cls is Solve else e.right
                left = self.expr(lchild, _MUL, tight)
                if _ends_open(lchild):
                    left = f"({self.expr(lchild, 0, tight)})"
                right = self.expr(rchild, _MUL + 1, tight)
                if right.startswith("-"):
                    right = f"({right})"
                return f"{left}{sp}{op}{sp}{right}", _MUL

        if isinstance(e, (Add, Sub)):
            op = "+" if isinstance(e, Add) else "-"
            left = self.expr(e.left, _ADD, tight)
            right = self.expr(e.right, _ADD + 1, tight)
            if tight and right.startswith("-"):
                right = f"({right})"
            return f"{left}{sp}{op}{sp}{right}", _ADD

        if isinstance(e, Neg):
            return "-" + self.expr(e.base, _NEG, tight), _NEG

        if isinstance(e, Transpose):
            return self.expr(e.base, _POSTFIX, tight) + "ᵀ", _POSTFIX
        if isinstance(e, Inverse):
            return self.expr(e.base, _POSTFIX, tight) + "⁻¹", _POSTFIX
        if isinstance(e, Pow):
            base = self.expr(e.base, _POSTFIX, tight)
            if isinstance(e.exponent, Number) and e.exponent.text.isdigit():
                return base + "".join(_SUP_DIGITS[c] for c in e.exponent.text), _POSTFIX
            return base + f"^({self.expr(e.exponent, 0, tight)})", _POSTFIX

        if isinstance(e, Subscript):
            base = self.expr(e.base, _POSTFIX, tight)
            parts = []
            for idx in e.indices:
                if isinstance(idx, Number):
                    parts.append(idx.text)
                else:
                    parts.append(idx.name)
            if all(len(p) == 1 and p.isalpha() for p in parts):
                return base + "_" + "".join(parts), _POSTFIX
            if len(parts) == 1:
                return base + "_" + parts[0], _POSTFIX
            return base + "_(" + ",".join(parts) + ")", _POSTFIX

        if isinstance(e, Norm):
            body = self.expr(e.body, 0, tight)
            flavor = ""
            if e.flavor:
                flavor = "_" + e.flavor if e.flavor in ("∞", "F") \
                    else _SUB_DIGITS[e.flavor]
            return f"‖{body}‖{flavor}", _ATOM

        if isinstance(e, Sum):
            head = f"∑_{e.index}"
            if e.cond is not None:
                head += f"({e.index} for {self.cond(e.cond)})"
            body = self.expr(e.body, _MUL, tight)
            return f"{head} {body}", _SUM

        if isinstance(e, Integral):
            if e.bracket_bounds:
                bounds = f"_[{self.expr(e.lower, 0)}, {self.expr(e.upper, 0)}]"
            else:
                lo = self.expr(e.lower, 0)
                hi = self.expr(e.upper, 0)
                lo = f"_{lo}" if _is_simple_bound(lo) else f"_({lo})"
                hi = f"^{hi}" if _is_simple_bound(hi) else f"^({hi})"
                bounds = lo + hi
            body = self.expr(e.body, _ADD, tight)
            return f"∫{bounds} {body} d{e.var}", _INTEGRAL

        if isinstance(e, MatrixLit):
            rows = []
            for row in e.rows:
                rows.append(" ".join(self._matrix_element(x) for x in row))
            return "[" + "\n ".join(rows) + "]", _ATOM

        if isinstance(e, Call):
            args = ", ".join(self.expr(a, 0, tight) for a in e.args)
            return f"{self.surface_name(e.func)}({args})", _ATOM

        if isinstance(e, (Piecewise, ArgMin)):
            raise ValueError(f"{type(e).__name__} prints at statement level")

        raise ValueError(f"cannot print {e!r}")

    def _matrix_element(self, e: Expr) -> str:
        return self.expr(e, _ADD, tight=True)

    def _juxta_sep(self, left: str, right: str, tight: bool) -> str:
        if not left or not right:
            return " "
        if left[-1] == ")" or right[0] == "(":
            return "" if tight else " "
        if left.isdigit() and (right[0].isalpha() or right[0] == "("):
            return ""
        if all(_is_letterish(c) for c in left) and right and right[0].isalpha():
            run = []
            for ch in right:
                if _is_letterish(ch):
                    run.append(ch)
                else:
                    break
            combined = left + "".join(run)
            collide = any(k in combined for k in KEYWORDS) or any(
                m in combined for m in self.known_multi)
            if not collide:
                return ""
        if tight:
            return ""  # caller guarantees structure via parens when unsafe
        return " "


def _split_units(name: str):
    """Split a name into letter units; None if other characters appear."""
    import unicodedata
    units = []
    i = 0
    while i < len(name):
        ch = name[i]
        if unicodedata.category(ch) not in ("Lu", "Ll", "Lt", "Lo"):
            return None
        j = i + 1
        while j < len(name) and unicodedata.category(name[j]) in ("Mn", "Me"):
            j += 1
        units.append(name[i:j])
        i = j
    return units


def _ends_open(e: Expr) -> bool:
    """True when the rendering would swallow a following factor into a sum."""
    if isinstance(e, Sum):
        return True
    if isinstance(e, (Mul, DotOp, Cross, Kron, Hadamard, Div)):
        return _ends_open(e.right)
    if isinstance(e, Solve):
        return _ends_open(e.rhs)
    if isinstance(e, Neg):
        return _ends_open(e.base)
    return False


def _starts_with_digit_atom(e: Expr) -> bool:
    while isinstance(e, (Mul, DotOp, Cross, Kron, Hadamard, Div, Solve,
                         Pow, Transpose, Inverse, Subscript)):
        e = getattr(e, "left", None) or getattr(e, "matrix", None) \
            or getattr(e, "base", None)
        if e is None:
            return False
    return isinstance(e, Number)


def _is_simple_bound(text: str) -> bool:
    # must re-lex as a single sub/superscript unit
    return text.isdigit() or (len(text) == 1 and text.isalpha())


def unparse(ast: ProgramAst) -> str:
    """Render the canonical Unicode surface form of a program."""
    known: set[str] = {p.name for p in ast.params}
    for stmt in ast.stmts:
        if isinstance(stmt, (AssignStmt, ElementAssignStmt)):
            known.add(stmt.name)
    for imp in ast.imports:
        known.update(imp.names)
    return _Printer(known).program(ast)
