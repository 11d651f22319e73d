"""LaTeX generator: typeset math from the typed IR.

Comes in two framings: a standalone compilable document and a bare
MathJax-ready fragment. Multi-letter variable names are escaped verbatim
rather than interpreted as LaTeX, so a name like kappa_angle typesets
literally; only single-letter bases with digit decorations become
subscripts.
"""

from __future__ import annotations

import unicodedata

from ..dims import DimExpr
from ..latypes import (
    FunctionT, LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT,
)
from ..sema import TAssign, TCond, TElementAssign, TExpr, TypedProgram
from .mangle import GREEK

_ATOM, _POSTFIX, _NEG, _MUL, _ADD = 100, 90, 80, 60, 50
_SUM_PREC = 55

_FUNC_MACROS = {
    "sin": r"\sin", "cos": r"\cos", "tan": r"\tan",
    "asin": r"\arcsin", "acos": r"\arccos", "atan": r"\arctan",
    "sinh": r"\sinh", "cosh": r"\cosh", "tanh": r"\tanh",
    "exp": r"\exp", "log": r"\log", "det": r"\det",
    "tr": r"\operatorname{tr}", "atan2": r"\operatorname{atan2}",
    "vec": r"\operatorname{vec}",
}

_CMP = {"==": "=", "≠": r"\neq", "<": "<", ">": ">", "≤": r"\leq",
        "≥": r"\geq", "∈": r"\in"}


def name_to_latex(name: str) -> str:
    """Escape a source identifier for math mode."""
    base, _, deco = name.partition("_")
    if deco and deco.isdigit() and _is_single_unit(base):
        return f"{_unit_to_latex(base)}_{{{deco}}}"
    if _is_single_unit(name):
        return _unit_to_latex(name)
    escaped = "".join((GREEK.get(c, c) if not c.isascii() else c) for c in name)
    escaped = escaped.replace("\\", "").replace("_", r"\_") \
        .replace("{", r"\{").replace("}", r"\}").replace("&", r"\&") \
        .replace("#", r"\#").replace("%", r"\%")
    return r"\textit{" + escaped + "}"


def _is_single_unit(text: str) -> bool:
    if not text:
        return False
    if unicodedata.category(text[0]) not in ("Lu", "Ll", "Lt", "Lo"):
        return False
    return all(unicodedata.category(c) in ("Mn", "Me") for c in text[1:])


_MARK_MACROS = {
    "\u0302": r"\hat", "\u0303": r"\tilde", "\u0304": r"\bar",
    "\u0307": r"\dot", "\u0308": r"\ddot", "\u20d7": r"\vec",
    "\u030a": r"\mathring",
}


def _unit_to_latex(unit: str) -> str:
    base = unit[0]
    text = "\\" + GREEK[base] if base in GREEK else base
    for mark in unit[1:]:
        macro = _MARK_MACROS.get(mark)
        if macro is None:
            continue
        text = f"{macro}{{{text}}}"
    return text


def type_to_latex(t: LaType) -> str:
    if isinstance(t, ScalarR):
        return r"\mathbb{R}"
    if isinstance(t, ScalarZ):
        return r"\mathbb{Z}"
    if isinstance(t, VectorT):
        return r"\mathbb{R}^{" + _dim_tex(t.dim) + "}"
    if isinstance(t, MatrixT):
        body = r"\mathbb{R}^{" + _dim_tex(t.rows) + r" \times " + \
            _dim_tex(t.cols) + "}"
        if t.sparse:
            body += r" \text{ sparse}"
        return body
    if isinstance(t, SequenceT):
        return type_to_latex(t.elem)
    if isinstance(t, SetT):
        return r"\{ " + r" \times ".join(
            (r"\mathbb{Z}" if k == "ℤ" else r"\mathbb{R}") for k in t.kinds) \
            + r" \}"
    if isinstance(t, FunctionT):
        dom = ", ".join(type_to_latex(p) for p in t.params)
        return dom + r" \rightarrow " + type_to_latex(t.ret)
    raise ValueError(t)


def _dim_tex(d: DimExpr) -> str:
    text = d.render()
    out = []
    for ch in text:
        out.append("\\" + GREEK[ch] if ch in GREEK else ch)
    return "".join(out).replace("·", " ")


class _LatexExpr:
    def render(self, e: TExpr, min_prec: int = 0) -> str:
        text, prec = self._render(e)
        if prec < min_prec:
            return f"( {text} )"
        return text

    def _render(self, e: TExpr) -> tuple[str, int]:
        k = e.kind
        if k == "num":
            return e.text, _ATOM
        if k == "pi":
            return r"\pi", _ATOM
        if k in ("ident", "index"):
            return name_to_latex(e.name), _ATOM
        if k == "identity":
            if e.text == "explicit":
                return f"I_{{{_dim_tex(e.dim)}}}", _ATOM
            return "I", _ATOM
        if k == "zeros":
            return "0", _ATOM
        if k == "mul":
            a = self.render(e.children[0], _MUL)
            b = self.render(e.children[1], _MUL)
            return f"{a} {b}", _MUL
        if k == "dot":
            a = self.render(e.children[0], _MUL)
            b = self.render(e.children[1], _MUL + 1)
            return f"{a} \\cdot {b}", _MUL
        if k in ("add", "sub"):
            op = "+" if k == "add" else "-"
            a = self.render(e.children[0], _ADD)
            b = self.render(e.children[1], _ADD + 1)
            return f"{a} {op} {b}", _ADD
        if k == "div":
            a = self.render(e.children[0])
            b = self.render(e.children[1])
            return f"\\frac{{{a}}}{{{b}}}", _ATOM
        if k == "solve":
            # rendered as the inverse-product the author wrote
            a = self.render(e.children[0], _ATOM)
            b = self.render(e.children[1], _MUL + 1)
            return f"{a}^{{-1}} {b}", _MUL
        if k == "cross":
            a = self.render(e.children[0], _MUL)
            b = self.render(e.children[1], _MUL + 1)
            return f"{a} \\times {b}", _MUL
        if k == "kron":
            a = self.render(e.children[0], _MUL)
            b = self.render(e.children[1], _MUL + 1)
            return f"{a} \\otimes {b}", _MUL
        if k == "hadamard":
            a = self.render(e.children[0], _MUL)
            b = self.render(e.children[1], _MUL + 1)
            return f"{a} \\circ {b}", _MUL
        if k == "neg":
            return "-" + self.render(e.children[0], _NEG), _NEG
        if k == "pow":
            base = self.render(e.children[0], _ATOM)
            expo = self.render(e.children[1])
            return f"{base}^{{{expo}}}", _POSTFIX
        if k == "transpose":
            return self.render(e.children[0], _ATOM) + r"^{\top}", _POSTFIX
        if k == "inverse":
            return self.render(e.children[0], _ATOM) + "^{-1}", _POSTFIX
        if k == "subscript":
            base = self.render(e.children[0], _ATOM)
            parts = [self.render(ix) for ix in e.children[1:]]
            joined = "".join(parts) if all(len(p) == 1 for p in parts) \
                else ", ".join(parts)
            return f"{base}_{{{joined}}}", _POSTFIX
        if k == "norm":
            body = self.render(e.children[0])
            flavor = {"": "", "1": "_1", "2": "_2", "∞": r"_\infty",
                      "F": "_F"}[e.flavor]
            return rf"\left\| {body} \right\|{flavor}", _ATOM
        if k == "sum":
            sub = name_to_latex(e.name)
            if e.domain is not None and e.domain.cond is not None:
                sub = self.cond(e.domain.cond)
            body = self.render(e.children[0], _MUL)
            return rf"\sum_{{{sub}}} {body}", _SUM_PREC
        if k == "integral":
            lo = self.render(e.children[0])
            hi = self.render(e.children[1])
            body = self.render(e.children[2], _ADD)
            var = name_to_latex(e.name)
            return rf"\int_{{{lo}}}^{{{hi}}} {body} \, d{var}", _SUM_PREC
        if k == "matrix":
            rows_n, cols_n = e.block.shape
            rows = []
            for r in range(rows_n):
                cells = e.children[r * cols_n:(r + 1) * cols_n]
                rows.append(" & ".join(self.render(c) for c in cells))
            return (r"\begin{bmatrix} " + r" \\ ".join(rows)
                    + r" \end{bmatrix}"), _ATOM
        if k == "piecewise":
            arms = []
            for value, cond in e.arms:
                arms.append(self.render(value) + r" & \text{if } "
                            + self.cond(cond))
            arms.append(self.render(e.children[0]) + r" & \text{otherwise}")
            return (r"\begin{cases} " + r" \\ ".join(arms)
                    + r" \end{cases}"), _ATOM
        if k == "call":
            macro = _FUNC_MACROS.get(e.name)
            args = ", ".join(self.render(a) for a in e.children)
            if e.name == "sqrt":
                return rf"\sqrt{{{args}}}", _ATOM
            if macro is None:
                macro = name_to_latex(e.name)
            return rf"{macro}\left( {args} \right)", _ATOM
        if k == "argmin":
            op = r"\mathop{\mathrm{argmin}}" if e.text == "argmin" \
                else r"\min"
            binder = name_to_latex(e.name) + r" \in " + type_to_latex(e.type)
            body = self.render(e.children[0], _ADD)
            text = rf"{op}_{{{binder}}} {body}"
            if e.constraints:
                conds = r" \quad ".join(self.cond(c) for c in e.constraints)
                text += r" \quad \text{s.t.} \quad " + conds
            return text, _SUM_PREC
        raise ValueError(f"latex: cannot render {k}")

    def cond(self, c: TCond) -> str:
        if c.kind == "and":
            return self.cond(c.children[0]) + r" \text{ and } " + \
                self.cond(c.children[1])
        if c.kind == "member":
            names = ", ".join(self.render(x) for x in c.children[1:])
            if len(c.children) > 2:
                names = f"({names})"
            return names + r" \in " + self.render(c.children[0])
        lhs = self.render(c.children[0], _ADD)
        rhs = self.render(c.children[1], _ADD)
        return f"{lhs} {_CMP[c.op]} {rhs}"


def render_expr(expr: TExpr) -> str:
    """Math-mode text for one typed expression."""
    return _LatexExpr().render(expr)


def generate(program: TypedProgram, entry_name: str,
             framing: str = "standalone") -> str:
    ex = _LatexExpr()
    lines: list[str] = []
    lines.append(r"\begin{align*}")
    stmt_lines = []
    for stmt in program.stmts:
        if isinstance(stmt, TAssign):
            lhs = name_to_latex(stmt.name) if stmt.name != "ret" else ""
            rhs = ex.render(stmt.expr)
            stmt_lines.append(f"{lhs} & = {rhs}" if lhs else f" & {rhs}")
        else:
            assert isinstance(stmt, TElementAssign)
            idx = "".join(stmt.indices)
            lhs = name_to_latex(stmt.name) + f"_{{{idx}}}"
            stmt_lines.append(f"{lhs} & = {ex.render(stmt.rhs)}")
    lines.append(" \\\\\n".join(stmt_lines))
    lines.append(r"\end{align*}")

    if program.params:
        lines.append("")
        lines.append(r"\text{where}")
        lines.append("")
        lines.append(r"\begin{align*}")
        decl_lines = []
        for p in program.params:
            name = name_to_latex(p.name)
            if isinstance(p.type, SequenceT):
                name += "_{i}"
            row = f"{name} & \\in {type_to_latex(p.type)}"
            if p.description:
                desc = p.description.replace("\\", "").replace("_", r"\_")
                row += r" && \text{" + desc + "}"
            decl_lines.append(row)
        lines.append(" \\\\\n".join(decl_lines))
        lines.append(r"\end{align*}")

    body = "\n".join(lines) + "\n"
    if framing == "mathjax":
        return body
    return (
        "\\documentclass{article}\n"
        "\\usepackage{amsmath}\n"
        "\\usepackage{amssymb}\n"
        "\\begin{document}\n\n" + body + "\n\\end{document}\n"
    )
