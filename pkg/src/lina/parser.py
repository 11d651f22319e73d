"""Two-pass, context-sensitive parser.

Pass 1 (scan_declarations) reads the given/where blocks, import lines and
assignment left-hand sides to build the symbol table. Pass 2 (parse) uses
that table while parsing expressions, which is what lets `A(y)` become a
call or a product depending on A, and lets registered multi-letter names
reassemble from single-letter identifier runs.

Whitespace matters in exactly two places: it separates tokens, and inside
matrix literals a gap at bracket depth zero separates elements. The
element parser therefore threads a stop predicate through the expression
loops instead of pre-splitting token lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .ast_nodes import (
    Add, AndCond, ArgMin, AssignStmt, Call, Compare, Cond, Cross, Div, DotOp,
    ElementAssignStmt, Expr, ExprStmt, Hadamard, Ident, IdentityMat,
    ImportDecl, Integral, Inverse, Kron, MatrixLit, Mul, Neg, Norm, Number,
    ParamDecl, Piecewise, Pow, ProgramAst, Stmt, Sub, Subscript, Sum, Solve,
    Transpose, TypeAnnotation,
)
from .dims import DimExpr
from .errors import Span, err
from .lexer import Token, TokenKind, lex_fragment, tokenize
from .source import SourceFile

NAMESPACES = {
    "trigonometry": (
        "sin", "cos", "tan", "asin", "acos", "atan",
        "sinh", "cosh", "tanh", "atan2", "exp", "log", "sqrt",
    ),
    "linearalgebra": ("tr", "det", "vec"),
}

RELATIONAL_OPS = {"∈", "≠", "==", "<", ">", "≤", "≥"}

_LOWER = "abcdefghijklmnopqrstuvwxyz"


# ------------------------------------------------------------------ symbols

@dataclass
class SymbolTable:
    params: dict[str, ParamDecl] = field(default_factory=dict)
    imports: list[ImportDecl] = field(default_factory=list)
    import_set: set[tuple[str, str]] = field(default_factory=set)
    lhs_names: dict[str, Span] = field(default_factory=dict)
    functions: set[str] = field(default_factory=set)

    def known(self, name: str) -> bool:
        return name in self.params or name in self.lhs_names

    def mergeable_names(self) -> set[str]:
        """Multi-character names that may appear as unquoted letter runs."""
        pool = set(self.params) | set(self.lhs_names) | {
            fn for _, fn in self.import_set}
        return {n for n in pool
                if len(n) > 1 and all(c.isalnum() for c in n)}


# ------------------------------------------------------------ line structure

def _split_lines(tokens: list[Token]) -> list[list[Token]]:
    """Split on newlines (and statement-separating semicolons) outside
    square brackets; drop blank lines."""
    lines: list[list[Token]] = []
    cur: list[Token] = []
    bracket_depth = 0
    for tok in tokens:
        if tok.kind == TokenKind.DELIM and tok.lexeme == "[":
            bracket_depth += 1
        elif tok.kind == TokenKind.DELIM and tok.lexeme == "]":
            bracket_depth = max(0, bracket_depth - 1)
        is_break = (tok.kind == TokenKind.NEWLINE
                    or (tok.kind == TokenKind.DELIM and tok.lexeme == ";"))
        if is_break and bracket_depth == 0:
            if cur:
                lines.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        lines.append(cur)
    return lines


def _top_level_assign_index(line: list[Token]) -> int | None:
    depth = 0
    for i, tok in enumerate(line):
        if tok.kind == TokenKind.DELIM and tok.lexeme in "([{":
            depth += 1
        elif tok.kind == TokenKind.DELIM and tok.lexeme in ")]}":
            depth -= 1
        elif depth == 0 and tok.kind == TokenKind.OPERATOR and tok.lexeme == "=":
            return i
    return None


def _is_heading(line: list[Token]) -> bool:
    return (len(line) == 1 and line[0].kind == TokenKind.KEYWORD
            and line[0].lexeme in ("given", "where"))


def _is_import(line: list[Token]) -> bool:
    return bool(line) and line[0].kind == TokenKind.KEYWORD and line[0].lexeme == "from"


def _is_st(line: list[Token]) -> bool:
    return len(line) == 1 and line[0].kind == TokenKind.KEYWORD and line[0].lexeme == "s.t."


def _contains_otherwise(line: list[Token]) -> bool:
    return any(t.kind == TokenKind.KEYWORD and t.lexeme == "otherwise" for t in line)


def _looks_like_declaration(line: list[Token]) -> bool:
    """A declaration starts with a name and has a top-level ∈ or : marker."""
    if not line or line[0].kind != TokenKind.IDENT:
        return False
    depth = 0
    for tok in line:
        if tok.kind == TokenKind.DELIM and tok.lexeme in "([{":
            depth += 1
        elif tok.kind == TokenKind.DELIM and tok.lexeme in ")]}":
            depth -= 1
        elif depth == 0 and (
                (tok.kind == TokenKind.OPERATOR and tok.lexeme == "∈")
                or (tok.kind == TokenKind.DELIM and tok.lexeme == ":")):
            return True
    return False


def _classify_lines(lines: list[list[Token]]) -> list[str]:
    """Shared line classification for both passes.

    Kinds: heading, import, decl, assign, arm, st, constraint, bare.
    Piecewise arms and s.t. constraints are recognized statefully because
    both may contain '=' used as equality.
    """
    kinds: list[str] = []
    decl_mode = False
    in_piecewise = False
    in_st = False
    for line in lines:
        if in_piecewise:
            kinds.append("arm")
            if _contains_otherwise(line):
                in_piecewise = False
            continue
        if _is_heading(line):
            kinds.append("heading")
            decl_mode = True
            in_st = False
            continue
        if _is_import(line):
            kinds.append("import")
            in_st = False
            continue
        if _is_st(line):
            kinds.append("st")
            in_st = True
            continue
        assign_at = _top_level_assign_index(line)
        if assign_at is not None:
            decl_mode = False
            in_st = False
            kinds.append("assign")
            rhs = line[assign_at + 1:]
            if rhs and rhs[0].kind == TokenKind.DELIM and rhs[0].lexeme == "{":
                if not _contains_otherwise(line):
                    in_piecewise = True
            continue
        if in_st:
            kinds.append("constraint")
            continue
        if decl_mode and _looks_like_declaration(line):
            kinds.append("decl")
            continue
        decl_mode = False
        kinds.append("bare")
    return kinds


# ----------------------------------------------------------------- cursor

class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, off: int = 0) -> Token | None:
        i = self.pos + off
        return self.tokens[i] if i < len(self.tokens) else None

    def take(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise err("E_PARSE", "unexpected end of line", self.last_span())
        self.pos += 1
        return tok

    def expect(self, kind: TokenKind, lexeme: str | None = None) -> Token:
        tok = self.peek()
        want = lexeme if lexeme is not None else kind.name
        if tok is None:
            raise err("E_PARSE", f"expected {want!r}", self.last_span())
        if tok.kind != kind or (lexeme is not None and tok.lexeme != lexeme):
            raise err("E_PARSE", f"expected {want!r}, found {tok.lexeme!r}", tok.span)
        self.pos += 1
        return tok

    @property
    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def last_span(self) -> Span:
        if self.tokens:
            last = self.tokens[min(self.pos, len(self.tokens) - 1)]
            return last.span
        return (0, 0)

    def is_delim(self, lexeme: str, off: int = 0) -> bool:
        tok = self.peek(off)
        return tok is not None and tok.kind == TokenKind.DELIM and tok.lexeme == lexeme

    def is_op(self, lexeme: str, off: int = 0) -> bool:
        tok = self.peek(off)
        return tok is not None and tok.kind == TokenKind.OPERATOR and tok.lexeme == lexeme

    def is_kw(self, lexeme: str, off: int = 0) -> bool:
        tok = self.peek(off)
        return tok is not None and tok.kind == TokenKind.KEYWORD and tok.lexeme == lexeme


def _span_join(a: Span, b: Span) -> Span:
    return (min(a[0], b[0]), max(a[1], b[1]))


def _expr_span(e: Expr) -> Span:
    return e.span


# ----------------------------------------------------------- declarations

def _name_from_lhs_tokens(toks: list[Token]) -> tuple[str, tuple[str, ...] | None]:
    """Classify assignment targets.

    Returns (name, None) for a plain target or (name, indices) for an
    element-wise target. A subscript whose parts are all single lowercase
    latin letters is an index pattern; anything else decorates the name.
    """
    if not toks:
        raise err("E_PARSE", "missing assignment target", (0, 0))
    span = toks[0].span
    if len(toks) == 1 and toks[0].kind == TokenKind.IDENT:
        return toks[0].lexeme, None
    if (len(toks) == 2 and toks[0].kind == TokenKind.IDENT
            and toks[1].kind == TokenKind.SUBSCRIPT):
        base, content = toks[0].lexeme, toks[1].lexeme
        parts = content.split(",") if "," in content else list(content)
        if parts and all(len(p) == 1 and p in _LOWER for p in parts):
            return base, tuple(parts)
        return f"{base}_{content}", None
    if all(t.kind in (TokenKind.IDENT, TokenKind.NUMBER) and not (i and t.gap_before)
           for i, t in enumerate(toks)):
        return "".join(t.lexeme for t in toks), None
    raise err("E_PARSE", "invalid assignment target", span)


def _parse_dim_terms(cur: _Cursor) -> DimExpr:
    """Dimension expression inside an annotation: k, n, 2n, mn, n+3."""
    total: DimExpr | None = None
    while True:
        coeff = 1
        monos: list[str] = []
        tok = cur.peek()
        if tok is not None and tok.kind == TokenKind.NUMBER:
            cur.take()
            if "." in tok.lexeme:
                raise err("E_PARSE", "dimensions must be integers", tok.span)
            coeff = int(tok.lexeme)
        while (cur.peek() is not None and cur.peek().kind == TokenKind.IDENT):
            monos.append(cur.take().lexeme)
        if not monos and coeff == 1 and (tok is None or tok.kind != TokenKind.NUMBER):
            raise err("E_PARSE", "expected dimension", cur.last_span())
        term = DimExpr.constant(coeff)
        for v in monos:
            term = term * DimExpr.var(v)
        total = term if total is None else total + term
        if cur.is_op("+"):
            cur.take()
            continue
        return total


def _parse_scalar_or_tensor(cur: _Cursor) -> TypeAnnotation:
    tok = cur.peek()
    if tok is None:
        raise err("E_PARSE", "expected type", cur.last_span())
    if tok.kind == TokenKind.DELIM and tok.lexeme == "{":
        cur.take()
        kinds = []
        while True:
            k = cur.take()
            if k.kind != TokenKind.KEYWORD or k.lexeme not in ("ℝ", "ℤ"):
                raise err("E_PARSE", "expected ℝ or ℤ in set type", k.span)
            kinds.append(k.lexeme)
            if cur.is_op("×"):
                cur.take()
                continue
            break
        cur.expect(TokenKind.DELIM, "}")
        return TypeAnnotation(kind="set", set_kinds=tuple(kinds), span=tok.span)
    if tok.kind == TokenKind.KEYWORD and tok.lexeme in ("ℝ", "ℤ"):
        cur.take()
        scalar_kind = "scalarR" if tok.lexeme == "ℝ" else "scalarZ"
        nxt = cur.peek()
        if nxt is not None and nxt.kind == TokenKind.SUPERSCRIPT:
            cur.take()
            frag = _Cursor(lex_fragment(nxt.lexeme))
            rows = _parse_dim_terms(frag)
            if frag.is_op("×"):
                frag.take()
                cols = _parse_dim_terms(frag)
                if not frag.at_end:
                    raise err("E_PARSE", "bad dimension annotation", nxt.span)
                return TypeAnnotation(kind="matrix", rows=rows, cols=cols, span=tok.span)
            if not frag.at_end:
                raise err("E_PARSE", "bad dimension annotation", nxt.span)
            if scalar_kind == "scalarZ":
                raise err("E_PARSE", "ℤ vectors are not supported", nxt.span)
            return TypeAnnotation(kind="vector", rows=rows, span=tok.span)
        return TypeAnnotation(kind=scalar_kind, span=tok.span)
    raise err("E_PARSE", f"expected type, found {tok.lexeme!r}", tok.span)


def _parse_type(cur: _Cursor) -> TypeAnnotation:
    first = _parse_scalar_or_tensor(cur)
    if cur.is_delim(",") or cur.is_op("→"):
        params = [first]
        while cur.is_delim(","):
            cur.take()
            params.append(_parse_scalar_or_tensor(cur))
        cur.expect(TokenKind.OPERATOR, "→")
        ret = _parse_scalar_or_tensor(cur)
        return TypeAnnotation(kind="function", func_params=tuple(params),
                              func_ret=ret, span=first.span)
    return first


def _parse_declaration(line: list[Token], src: SourceFile | None) -> ParamDecl:
    cur = _Cursor(line)
    head = cur.take()
    if head.kind != TokenKind.IDENT:
        raise err("E_PARSE", f"expected a declared name, found {head.lexeme!r}", head.span)
    name = head.lexeme
    seq_index: str | None = None
    nxt = cur.peek()
    if nxt is not None and nxt.kind == TokenKind.SUBSCRIPT:
        cur.take()
        content = nxt.lexeme
        if len(content) == 1 and content in _LOWER:
            seq_index = content
        else:
            name = f"{name}_{content}"
    elif nxt is not None and nxt.kind == TokenKind.IDENT and not nxt.gap_before:
        # gap-free letter run: a multi-letter declared name such as dist
        parts = [name]
        while (cur.peek() is not None
               and cur.peek().kind in (TokenKind.IDENT, TokenKind.NUMBER)
               and not cur.peek().gap_before):
            parts.append(cur.take().lexeme)
        name = "".join(parts)

    tok = cur.peek()
    if tok is None:
        raise err("E_PARSE", "incomplete declaration", head.span)
    if tok.kind == TokenKind.OPERATOR and tok.lexeme == "∈":
        cur.take()
        annot = _parse_type(cur)
    elif tok.kind == TokenKind.DELIM and tok.lexeme == ":":
        cur.take()
        annot = _parse_type(cur)
        if annot.kind != "function":
            raise err("E_PARSE", "':' declarations must be function-typed", tok.span)
    else:
        raise err("E_PARSE", f"expected '∈' or ':', found {tok.lexeme!r}", tok.span)

    if seq_index is not None and annot.kind == "function":
        # a function-typed name keeps its subscript as decoration
        name = f"{name}_{seq_index}"
        seq_index = None

    if cur.is_kw("sparse"):
        cur.take()
        if annot.kind != "matrix":
            raise err("E_PARSE", "'sparse' applies to matrix types", head.span)
        annot = replace(annot, sparse=True)

    description = ""
    if cur.is_delim(":"):
        colon = cur.take()
        rest = cur.tokens[cur.pos:]
        if src is not None:
            start = rest[0].span[0] if rest else colon.span[1]
            end = rest[-1].span[1] if rest else colon.span[1]
            description = src.text[start:end].strip()
        else:
            description = " ".join(t.lexeme for t in rest)
        cur.pos = len(cur.tokens)
    if not cur.at_end:
        raise err("E_PARSE", f"unexpected {cur.peek().lexeme!r} in declaration",
                  cur.peek().span)
    end_span = line[-1].span
    return ParamDecl(name=name, annot=annot, seq_index=seq_index,
                     description=description, span=_span_join(head.span, end_span))


def _parse_import(line: list[Token]) -> ImportDecl:
    cur = _Cursor(line)
    kw = cur.expect(TokenKind.KEYWORD, "from")
    ns_parts: list[str] = []
    while not cur.is_delim(":"):
        tok = cur.take()
        if tok.kind not in (TokenKind.IDENT, TokenKind.KEYWORD):
            raise err("E_PARSE", "expected namespace name", tok.span)
        ns_parts.append(tok.lexeme)
    namespace = "".join(ns_parts)
    if namespace not in NAMESPACES:
        raise err("E_UNKNOWN_NAMESPACE", f"unknown namespace {namespace!r}", kw.span)
    cur.expect(TokenKind.DELIM, ":")
    names: list[str] = []
    while not cur.at_end:
        parts = [cur.expect(TokenKind.IDENT).lexeme]
        while (cur.peek() is not None
               and cur.peek().kind in (TokenKind.IDENT, TokenKind.NUMBER)
               and not cur.peek().gap_before):
            parts.append(cur.take().lexeme)
        fn = "".join(parts)
        if fn not in NAMESPACES[namespace]:
            raise err("E_PARSE", f"{fn!r} is not provided by {namespace}", kw.span)
        names.append(fn)
        if cur.is_delim(","):
            cur.take()
    if not names:
        raise err("E_PARSE", "import names nothing", kw.span)
    return ImportDecl(namespace=namespace, names=tuple(names),
                      span=_span_join(line[0].span, line[-1].span))


def scan_declarations(tokens: list[Token], src: SourceFile | None = None) -> SymbolTable:
    """Pass 1: harvest declarations, imports and assignment targets."""
    table = SymbolTable()
    lines = _split_lines(tokens)
    kinds = _classify_lines(lines)
    for line, kind in zip(lines, kinds):
        if kind == "import":
            decl = _parse_import(line)
            table.imports.append(decl)
            for fn in decl.names:
                table.import_set.add((decl.namespace, fn))
                table.functions.add(fn)
        elif kind == "decl":
            decl = _parse_declaration(line, src)
            if decl.name in table.params:
                raise err("E_DUPLICATE_DECL",
                          f"{decl.name!r} is declared twice", decl.span)
            table.params[decl.name] = decl
            if decl.annot.kind == "function":
                table.functions.add(decl.name)
        elif kind == "assign":
            at = _top_level_assign_index(line)
            name, _indices = _name_from_lhs_tokens(line[:at])
            table.lhs_names.setdefault(name, line[0].span)
    return table


# ------------------------------------------------------------- expressions

Stop = "callable | None"


class _ExprParser:
    def __init__(self, symbols: SymbolTable):
        self.symbols = symbols
        self._mergeable = symbols.mergeable_names()

    # stop predicates receive the cursor and fire before a loop continues

    def parse_expr(self, cur: _Cursor, stop=None) -> Expr:
        return self.parse_add(cur, stop)

    def parse_add(self, cur: _Cursor, stop=None) -> Expr:
        left = self.parse_mul(cur, stop)
        while True:
            tok = cur.peek()
            if tok is None or (stop is not None and stop(cur)):
                return left
            if tok.kind == TokenKind.OPERATOR and tok.lexeme in ("+", "-"):
                cur.take()
                right = self.parse_mul(cur, stop)
                cls = Add if tok.lexeme == "+" else Sub
                left = cls(left, right,
                           span=_span_join(left.span, right.span))
            else:
                return left

    _MUL_OPS = {"/": Div, "⋅": DotOp, "×": Cross, "⊗": Kron, "∘": Hadamard,
                "\\": Solve}

    def parse_mul(self, cur: _Cursor, stop=None) -> Expr:
        left = self.parse_unary(cur, stop)
        while True:
            tok = cur.peek()
            if tok is None or (stop is not None and stop(cur)):
                return left
            if tok.kind == TokenKind.OPERATOR and tok.lexeme == "*":
                raise err("E_ASTERISK",
                          "'*' is not multiplication here; "
                          "use juxtaposition or ⋅", tok.span)
            if tok.kind == TokenKind.OPERATOR and tok.lexeme in self._MUL_OPS:
                cur.take()
                right = self.parse_unary(cur, stop)
                cls = self._MUL_OPS[tok.lexeme]
                left = cls(left, right, span=_span_join(left.span, right.span))
            elif self._starts_factor(tok):
                right = self.parse_unary(cur, stop)
                left = Mul(left, right, span=_span_join(left.span, right.span))
            else:
                return left

    @staticmethod
    def _starts_factor(tok: Token) -> bool:
        if tok.kind in (TokenKind.IDENT, TokenKind.NUMBER):
            return True
        if tok.kind == TokenKind.DELIM and tok.lexeme in ("(", "[", "‖"):
            return True
        if tok.kind == TokenKind.KEYWORD and tok.lexeme in ("sum", "int"):
            return True
        return False

    def parse_unary(self, cur: _Cursor, stop=None) -> Expr:
        tok = cur.peek()
        if tok is not None and tok.kind == TokenKind.OPERATOR and tok.lexeme == "-":
            cur.take()
            base = self.parse_unary(cur, stop)
            return Neg(base, span=_span_join(tok.span, base.span))
        return self.parse_postfix(cur, stop)

    def parse_postfix(self, cur: _Cursor, stop=None) -> Expr:
        base = self.parse_atom(cur, stop)
        while True:
            tok = cur.peek()
            if tok is None or (stop is not None and stop(cur)):
                return base
            if tok.kind == TokenKind.SUPERSCRIPT:
                cur.take()
                base = self._apply_superscript(base, tok)
            elif tok.kind == TokenKind.SUBSCRIPT:
                cur.take()
                base = self._apply_subscript(base, tok)
                if (isinstance(base, Ident)
                        and base.name in self.symbols.functions
                        and cur.is_delim("(")):
                    base = self._finish_call(base.name, base.span, cur)
            else:
                return base

    def _apply_superscript(self, base: Expr, tok: Token) -> Expr:
        content = tok.lexeme
        span = _span_join(base.span, tok.span)
        if content == "T":
            return Transpose(base, span=span)
        if content == "-1":
            return Inverse(base, span=span)
        if content.isdigit():
            return Pow(base, Number(content, span=tok.span), span=span)
        frag = _Cursor(lex_fragment(content))
        exponent = self.parse_expr(frag)
        if not frag.at_end:
            raise err("E_PARSE", f"bad superscript {content!r}", tok.span)
        return Pow(base, exponent, span=span)

    def _apply_subscript(self, base: Expr, tok: Token) -> Expr:
        span = _span_join(base.span, tok.span)
        if isinstance(base, Ident):
            combined = f"{base.name}_{tok.lexeme}"
            if self.symbols.known(combined):
                return Ident(combined, span=span)
        if not isinstance(base, (Ident, Subscript)):
            raise err("E_PARSE", "subscript must follow a name", tok.span)
        indices = _subscript_indices(tok)
        return Subscript(base, indices, span=span)

    def parse_atom(self, cur: _Cursor, stop=None) -> Expr:
        tok = cur.peek()
        if tok is None:
            raise err("E_PARSE", "expected an expression", cur.last_span())

        if tok.kind == TokenKind.NUMBER:
            cur.take()
            return Number(tok.lexeme, span=tok.span)

        if tok.kind == TokenKind.DELIM and tok.lexeme == "(":
            cur.take()
            inner = self.parse_expr(cur, None)
            close = cur.expect(TokenKind.DELIM, ")")
            return replace(inner, span=_span_join(tok.span, close.span))

        if tok.kind == TokenKind.DELIM and tok.lexeme == "[":
            return self._parse_matrix(cur)

        if tok.kind == TokenKind.DELIM and tok.lexeme == "‖":
            return self._parse_norm(cur)

        if tok.kind == TokenKind.KEYWORD and tok.lexeme == "sum":
            return self._parse_sum(cur, stop)

        if tok.kind == TokenKind.KEYWORD and tok.lexeme == "int":
            return self._parse_integral(cur, stop)

        if tok.kind == TokenKind.KEYWORD and tok.lexeme in ("argmin", "min"):
            return self._parse_argmin(cur, stop)

        if tok.kind == TokenKind.IDENT:
            return self._parse_ident_atom(cur, stop)

        raise err("E_PARSE", f"expected an expression, found {tok.lexeme!r}", tok.span)

    # -------------------------------------------------------------- idents

    def _parse_ident_atom(self, cur: _Cursor, stop=None) -> Expr:
        merged = self._try_merge_run(cur)
        if merged is not None:
            name, span = merged
        else:
            tok = cur.take()
            name, span = tok.lexeme, tok.span

        if name == "I" and not self.symbols.known("I"):
            nxt = cur.peek()
            size: Expr | None = None
            if nxt is not None and nxt.kind == TokenKind.SUBSCRIPT:
                cur.take()
                content = nxt.lexeme
                if content.isdigit():
                    size = Number(content, span=nxt.span)
                else:
                    size = Ident(content, span=nxt.span)
                span = _span_join(span, nxt.span)
            return IdentityMat(size, span=span)

        if name in self.symbols.functions:
            nxt = cur.peek()
            if nxt is not None and nxt.kind == TokenKind.DELIM and nxt.lexeme == "(":
                return self._finish_call(name, span, cur)
            # cos² θ: exponent applies to the one-argument call
            if (nxt is not None and nxt.kind == TokenKind.SUPERSCRIPT
                    and nxt.lexeme.isdigit() and cur.peek(1) is not None
                    and self._starts_factor(cur.peek(1))):
                cur.take()
                arg = self.parse_postfix(cur, stop)
                call = Call(name, (arg,), span=_span_join(span, arg.span))
                return Pow(call, Number(nxt.lexeme, span=nxt.span), span=call.span)
            # cos θ: unary call without parentheses, tighter than juxtaposition
            if nxt is not None and self._starts_factor(nxt) and not (
                    stop is not None and stop(cur)):
                arg = self.parse_postfix(cur, stop)
                return Call(name, (arg,), span=_span_join(span, arg.span))

        return Ident(name, span=span)

    def _finish_call(self, name: str, span: Span, cur: _Cursor) -> Expr:
        cur.expect(TokenKind.DELIM, "(")
        args = [self.parse_expr(cur, None)]
        while cur.is_delim(","):
            cur.take()
            args.append(self.parse_expr(cur, None))
        close = cur.expect(TokenKind.DELIM, ")")
        return Call(name, tuple(args), span=_span_join(span, close.span))

    def _try_merge_run(self, cur: _Cursor) -> tuple[str, Span] | None:
        """Reassemble a gap-free letter/digit run into a registered name."""
        if not self._mergeable:
            return None
        first = cur.peek()
        if first is None or first.kind != TokenKind.IDENT:
            return None
        run: list[Token] = [first]
        off = 1
        while True:
            tok = cur.peek(off)
            if (tok is None or tok.kind not in (TokenKind.IDENT, TokenKind.NUMBER)
                    or tok.gap_before):
                break
            run.append(tok)
            off += 1
        for length in range(len(run), 1, -1):
            candidate = "".join(t.lexeme for t in run[:length])
            if candidate in self._mergeable:
                for _ in range(length):
                    cur.take()
                return candidate, _span_join(run[0].span, run[length - 1].span)
        return None

    # ----------------------------------------------------------- operators

    def _parse_matrix(self, cur: _Cursor) -> Expr:
        open_tok = cur.expect(TokenKind.DELIM, "[")
        rows: list[tuple[Expr, ...]] = []
        row: list[Expr] = []

        def gap_stop(c: _Cursor) -> bool:
            tok = c.peek()
            return tok is not None and tok.gap_before

        while True:
            tok = cur.peek()
            if tok is None:
                raise err("E_PARSE", "matrix literal is never closed", open_tok.span)
            if tok.kind == TokenKind.DELIM and tok.lexeme == "]":
                cur.take()
                if row:
                    rows.append(tuple(row))
                break
            if (tok.kind == TokenKind.NEWLINE
                    or (tok.kind == TokenKind.DELIM and tok.lexeme == ";")):
                cur.take()
                if row:
                    rows.append(tuple(row))
                row = []
                continue
            row.append(self.parse_add(cur, gap_stop))
        if not rows:
            raise err("E_PARSE", "empty matrix literal", open_tok.span)
        return MatrixLit(tuple(rows),
                         span=_span_join(open_tok.span, cur.tokens[cur.pos - 1].span))

    def _parse_norm(self, cur: _Cursor) -> Expr:
        open_tok = cur.expect(TokenKind.DELIM, "‖")

        def norm_stop(c: _Cursor) -> bool:
            return c.is_delim("‖")

        body = self.parse_expr(cur, norm_stop)
        close = cur.expect(TokenKind.DELIM, "‖")
        flavor = ""
        nxt = cur.peek()
        if nxt is not None and nxt.kind == TokenKind.SUBSCRIPT:
            if nxt.lexeme not in ("1", "2", "∞", "F"):
                raise err("E_PARSE", f"unknown norm flavor {nxt.lexeme!r}", nxt.span)
            cur.take()
            flavor = nxt.lexeme
            close = nxt
        return Norm(body, flavor, span=_span_join(open_tok.span, close.span))

    def _parse_sum(self, cur: _Cursor, stop=None) -> Expr:
        kw = cur.expect(TokenKind.KEYWORD, "sum")
        sub = cur.peek()
        if sub is None or sub.kind != TokenKind.SUBSCRIPT:
            raise err("E_PARSE", "summation needs an index subscript", kw.span)
        cur.take()
        if not (len(sub.lexeme) == 1 and sub.lexeme.isalpha()):
            raise err("E_PARSE", f"bad summation index {sub.lexeme!r}", sub.span)
        index = sub.lexeme
        cond: Cond | None = None
        if (cur.is_delim("(") and cur.peek(1) is not None
                and cur.peek(1).kind == TokenKind.IDENT
                and cur.peek(1).lexeme == index
                and cur.peek(2) is not None and cur.peek(2).kind == TokenKind.KEYWORD
                and cur.peek(2).lexeme == "for"):
            cur.take()
            cur.take()
            cur.take()
            cond = self.parse_condition(cur)
            cur.expect(TokenKind.DELIM, ")")
        body = self.parse_mul(cur, stop)
        return Sum(index, body, cond, span=_span_join(kw.span, body.span))

    def _parse_integral(self, cur: _Cursor, stop=None) -> Expr:
        kw = cur.expect(TokenKind.KEYWORD, "int")
        sub = cur.peek()
        if sub is None or sub.kind != TokenKind.SUBSCRIPT:
            raise err("E_PARSE", "integral needs bounds", kw.span)
        cur.take()
        bracket = sub.lexeme.startswith("[")
        if bracket:
            inner = sub.lexeme[1:-1]
            frag = _Cursor(lex_fragment(inner))
            lower = self.parse_expr(frag, lambda c: c.is_delim(","))
            frag.expect(TokenKind.DELIM, ",")
            upper = self.parse_expr(frag)
            if not frag.at_end:
                raise err("E_PARSE", f"bad integral bounds {sub.lexeme!r}", sub.span)
        else:
            frag = _Cursor(lex_fragment(sub.lexeme))
            lower = self.parse_expr(frag)
            if not frag.at_end:
                raise err("E_PARSE", f"bad lower bound {sub.lexeme!r}", sub.span)
            sup = cur.peek()
            if sup is None or sup.kind != TokenKind.SUPERSCRIPT:
                raise err("E_PARSE", "integral needs an upper bound", kw.span)
            cur.take()
            frag = _Cursor(lex_fragment(sup.lexeme))
            upper = self.parse_expr(frag)
            if not frag.at_end:
                raise err("E_PARSE", f"bad upper bound {sup.lexeme!r}", sup.span)

        def d_marker(c: _Cursor) -> bool:
            tok = c.peek()
            nxt = c.peek(1)
            return (tok is not None and tok.kind == TokenKind.IDENT
                    and tok.lexeme == "d" and nxt is not None
                    and nxt.kind == TokenKind.IDENT and not nxt.gap_before)

        combined = (lambda c: d_marker(c) or stop(c)) if stop is not None else d_marker
        body = self.parse_expr(cur, combined)
        if not d_marker(cur):
            raise err("E_PARSE", "integral body must end with d<var>", kw.span)
        cur.take()
        var_tok = cur.take()
        end = var_tok.span
        return Integral(var_tok.lexeme, lower, upper, body, bracket,
                        span=_span_join(kw.span, end))

    def _parse_argmin(self, cur: _Cursor, stop=None) -> Expr:
        kw = cur.take()
        sub = cur.peek()
        if sub is None or sub.kind != TokenKind.SUBSCRIPT:
            raise err("E_PARSE", f"{kw.lexeme} needs '_(x ∈ T)'", kw.span)
        cur.take()
        frag = _Cursor(lex_fragment(sub.lexeme))
        var_tok = frag.expect(TokenKind.IDENT)
        frag.expect(TokenKind.OPERATOR, "∈")
        var_type = _parse_type(frag)
        if not frag.at_end:
            raise err("E_PARSE", f"bad {kw.lexeme} binder {sub.lexeme!r}", sub.span)
        objective = self.parse_expr(cur, stop)
        return ArgMin(var_tok.lexeme, var_type, objective, (), kw.lexeme,
                      span=_span_join(kw.span, objective.span))

    # ---------------------------------------------------------- conditions

    def parse_condition(self, cur: _Cursor, stop=None) -> Cond:
        start = cur.peek()
        left: tuple[Expr, ...]
        if (cur.is_delim("(") and cur.peek(1) is not None
                and cur.peek(1).kind == TokenKind.IDENT
                and cur.is_delim(",", 2)):
            cur.take()
            items = [self._parse_ident_atom(cur)]
            while cur.is_delim(","):
                cur.take()
                items.append(self._parse_ident_atom(cur))
            cur.expect(TokenKind.DELIM, ")")
            left = tuple(items)
        else:
            items = [self.parse_add(cur, stop)]
            while cur.is_delim(","):
                cur.take()
                items.append(self.parse_add(cur, stop))
            left = tuple(items)
        op_tok = cur.peek()
        if (op_tok is None or op_tok.kind != TokenKind.OPERATOR
                or (op_tok.lexeme not in RELATIONAL_OPS and op_tok.lexeme != "=")):
            raise err("E_PARSE", "expected a comparison operator",
                      op_tok.span if op_tok else cur.last_span())
        cur.take()
        op = "==" if op_tok.lexeme == "=" else op_tok.lexeme
        if len(left) > 1 and op != "∈":
            raise err("E_PARSE", "tuples only compare with ∈", op_tok.span)
        right = self.parse_add(cur, stop)
        cond: Cond = Compare(op, left, right,
                             span=_span_join(start.span, right.span))
        if cur.is_kw("and"):
            cur.take()
            rest = self.parse_condition(cur, stop)
            cond = AndCond(cond, rest, span=_span_join(cond.span, rest.span))
        return cond


def _subscript_indices(tok: Token) -> tuple[Expr, ...]:
    content = tok.lexeme
    parts = content.split(",") if "," in content else None
    if parts is None:
        if content.isdigit():
            parts = [content]
        else:
            parts = list(content)
    out: list[Expr] = []
    for p in parts:
        p = p.strip()
        if p.isdigit():
            out.append(Number(p, span=tok.span))
        elif len(p) >= 1 and all(not c.isdigit() for c in p) and len(p) == 1:
            out.append(Ident(p, span=tok.span))
        else:
            raise err("E_PARSE",
                      f"subscript {content!r} is not a simple index "
                      "(subscript arithmetic is not supported)", tok.span)
    return tuple(out)


# ------------------------------------------------------------- statements

def parse(tokens: list[Token], symbols: SymbolTable,
          src: SourceFile | None = None) -> ProgramAst:
    """Pass 2: build the full AST using pass-1 symbol information."""
    lines = _split_lines(tokens)
    kinds = _classify_lines(lines)
    ep = _ExprParser(symbols)
    stmts: list[Stmt] = []
    i = 0
    while i < len(lines):
        line, kind = lines[i], kinds[i]
        if kind in ("heading", "import", "decl"):
            i += 1
            continue
        if kind == "arm":
            raise err("E_PARSE", "stray piecewise arm", line[0].span)
        if kind == "st":
            raise err("E_PARSE", "'s.t.' without a minimization", line[0].span)
        if kind == "constraint":
            raise err("E_PARSE", "stray constraint line", line[0].span)

        if kind == "assign":
            at = _top_level_assign_index(line)
            name, indices = _name_from_lhs_tokens(line[:at])
            lhs_span = _span_join(line[0].span, line[at - 1].span)
            cur = _Cursor(line[at + 1:])
            if cur.is_delim("{"):
                rhs, i = _parse_piecewise(ep, cur, lines, kinds, i)
            else:
                rhs = ep.parse_expr(cur)
                if not cur.at_end:
                    raise err("E_PARSE",
                              f"unexpected {cur.peek().lexeme!r} after expression",
                              cur.peek().span)
            span = _span_join(lhs_span, rhs.span)
            if isinstance(rhs, ArgMin):
                rhs, i = _attach_constraints(ep, rhs, lines, kinds, i)
            if indices is None:
                stmts.append(AssignStmt(name, rhs, span=span))
            else:
                stmts.append(ElementAssignStmt(name, indices, rhs, span=span))
            i += 1
            continue

        # bare expression statement
        cur = _Cursor(line)
        expr = ep.parse_expr(cur)
        if not cur.at_end:
            raise err("E_PARSE",
                      f"unexpected {cur.peek().lexeme!r} after expression",
                      cur.peek().span)
        if isinstance(expr, ArgMin):
            expr, i = _attach_constraints(ep, expr, lines, kinds, i)
        stmts.append(ExprStmt(expr, span=expr.span))
        i += 1

    if not stmts:
        raise err("E_PARSE", "program has no statements")
    for s in stmts[:-1]:
        if isinstance(s, ExprStmt):
            raise err("E_PARSE",
                      "only the final statement may be a bare expression", s.span)

    params = tuple(symbols.params.values())
    imports = tuple(symbols.imports)
    return ProgramAst(imports=imports, params=params, stmts=tuple(stmts))


def _parse_piecewise(ep: _ExprParser, cur: _Cursor, lines, kinds,
                     line_idx: int) -> tuple[Piecewise, int]:
    open_tok = cur.expect(TokenKind.DELIM, "{")
    arms: list[tuple[Expr, Cond]] = []
    otherwise: Expr | None = None
    end_span = open_tok.span
    while True:
        value = ep.parse_add(cur)
        tok = cur.peek()
        if tok is not None and tok.kind == TokenKind.KEYWORD and tok.lexeme == "if":
            cur.take()
            cond = ep.parse_condition(cur)
            arms.append((value, cond))
            end_span = cond.span
        elif tok is not None and tok.kind == TokenKind.KEYWORD and tok.lexeme == "otherwise":
            cur.take()
            otherwise = value
            end_span = tok.span
            if cur.is_delim("}"):
                end_span = cur.take().span
            if not cur.at_end:
                raise err("E_PARSE", "unexpected tokens after 'otherwise'",
                          cur.peek().span)
            break
        else:
            raise err("E_PARSE", "piecewise arm needs 'if' or 'otherwise'",
                      tok.span if tok else cur.last_span())
        if not cur.at_end:
            raise err("E_PARSE", "one piecewise arm per line", cur.peek().span)
        line_idx += 1
        if line_idx >= len(lines) or kinds[line_idx] != "arm":
            raise err("E_PARSE", "piecewise needs a final 'otherwise' arm",
                      open_tok.span)
        cur = _Cursor(lines[line_idx])
    if not arms:
        raise err("E_PARSE", "piecewise needs at least one conditional arm",
                  open_tok.span)
    return Piecewise(tuple(arms), otherwise,
                     span=_span_join(open_tok.span, end_span)), line_idx


def _attach_constraints(ep: _ExprParser, node: ArgMin, lines, kinds,
                        line_idx: int) -> tuple[ArgMin, int]:
    if line_idx + 1 >= len(lines) or kinds[line_idx + 1] != "st":
        return node, line_idx
    line_idx += 1  # the s.t. line
    constraints: list[Cond] = []
    while line_idx + 1 < len(lines) and kinds[line_idx + 1] == "constraint":
        line_idx += 1
        cur = _Cursor(lines[line_idx])
        cond = ep.parse_condition(cur)
        if not cur.at_end:
            raise err("E_PARSE", "unexpected tokens after constraint",
                      cur.peek().span)
        constraints.append(cond)
    if not constraints:
        raise err("E_PARSE", "'s.t.' with no constraints",
                  lines[line_idx][0].span)
    return replace(node, constraints=tuple(constraints)), line_idx


# -------------------------------------------------------------- pipeline

def parse_source(src: SourceFile) -> tuple[ProgramAst, SymbolTable]:
    tokens = tokenize(src)
    symbols = scan_declarations(tokens, src)
    ast = parse(tokens, symbols, src)
    return ast, symbols
