"""Type and dimension checking; produces the typed IR.

The checker walks statements in order, enforcing single assignment and
resolving every expression to a LaType with canonical symbolic dimensions.
Summation bounds and element-wise definition domains are inferred from how
the bound index subscripts sequences, vectors and matrices. Block matrix
literals are solved as a small constraint system so I and 0 cells take
their sizes from rigid neighbors.

All emitters and the interpreter consume the TypedProgram produced here;
none of them re-derive types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast_nodes as A
from .dims import DimExpr, unify_dims
from .errors import Span, err
from .latypes import (
    FunctionT, LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT,
    is_scalar, numeric_scalar,
)
from .parser import SymbolTable

# ------------------------------------------------------------------ typed IR


@dataclass(frozen=True)
class TCond:
    kind: str  # "member" | "cmp" | "and"
    children: tuple = ()
    op: str = ""
    member_names: tuple[str, ...] = ()


@dataclass(frozen=True)
class SumDomain:
    dim: DimExpr
    cond: TCond | None = None


@dataclass(frozen=True)
class BlockInfo:
    row_heights: tuple[DimExpr, ...]
    col_widths: tuple[DimExpr, ...]
    shape: tuple[int, int]  # grid rows, grid cols


@dataclass(frozen=True)
class TExpr:
    kind: str
    type: LaType
    children: tuple["TExpr", ...] = ()
    name: str = ""
    text: str = ""
    flavor: str = ""
    dim: DimExpr | None = None
    dim2: DimExpr | None = None
    domain: SumDomain | None = None
    block: BlockInfo | None = None
    arms: tuple[tuple["TExpr", TCond], ...] = ()
    constraints: tuple[TCond, ...] = ()
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class TParam:
    name: str
    type: LaType
    description: str = ""


@dataclass(frozen=True)
class DimSource:
    var: str
    param: str
    accessor: str  # value len rows cols dim elem_rows elem_cols elem_dim


@dataclass(frozen=True)
class TAssign:
    name: str
    expr: TExpr
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class TElementAssign:
    name: str
    target_type: LaType
    indices: tuple[str, ...]
    domains: tuple[DimExpr, ...]
    rhs: TExpr
    diagonal: bool = False
    first_for_name: bool = True
    span: Span = field(default=(0, 0), compare=False)


TStmt = "TAssign | TElementAssign"


@dataclass(frozen=True)
class TypedProgram:
    params: tuple[TParam, ...]
    dim_sources: tuple[DimSource, ...]
    stmts: tuple[object, ...]
    defined: tuple[str, ...]
    ret_name: str
    has_argmin: bool = False


# ------------------------------------------------------------------ builtins

_TRIG = ("sin", "cos", "tan", "asin", "acos", "atan",
         "sinh", "cosh", "tanh", "exp", "log", "sqrt")


def builtin_signature(name: str) -> str:
    """Shape class of a builtin: unary scalar, binary scalar, or matrix op."""
    if name in _TRIG:
        return "scalar1"
    if name == "atan2":
        return "scalar2"
    if name in ("tr", "det"):
        return "square"
    if name == "vec":
        return "vec"
    raise KeyError(name)


# ------------------------------------------------------------------- checker


def annotation_to_type(annot: A.TypeAnnotation, seq_index: str | None = None) -> LaType:
    if annot.kind == "scalarR":
        t: LaType = ScalarR()
    elif annot.kind == "scalarZ":
        t = ScalarZ()
    elif annot.kind == "vector":
        t = VectorT(annot.rows)
    elif annot.kind == "matrix":
        t = MatrixT(annot.rows, annot.cols, annot.sparse)
    elif annot.kind == "set":
        t = SetT(annot.set_kinds)
    elif annot.kind == "function":
        t = FunctionT(tuple(annotation_to_type(p) for p in annot.func_params),
                      annotation_to_type(annot.func_ret))
    else:
        raise ValueError(annot.kind)
    if seq_index is not None:
        t = SequenceT(t, DimExpr.var(f"#{seq_index}"))
    return t


def _type_dims(t: LaType):
    """(accessor, DimExpr) slots of a type, in a fixed order."""
    if isinstance(t, VectorT):
        return [("dim", t.dim)]
    if isinstance(t, MatrixT):
        return [("rows", t.rows), ("cols", t.cols)]
    if isinstance(t, SequenceT):
        inner = [("elem_" + acc if not acc.startswith("elem_") else acc, d)
                 for acc, d in _type_dims(t.elem)]
        return [("len", t.length)] + inner
    return []


class Checker:
    def __init__(self, ast: A.ProgramAst, symbols: SymbolTable):
        self.ast = ast
        self.symbols = symbols
        self.env: dict[str, LaType] = {}
        self.output_decls: dict[str, LaType] = {}
        self.defined: list[str] = []
        self.element_patterns: dict[str, set[str]] = {}
        self.functions: dict[str, LaType | str] = {}
        self.has_argmin = False
        # index scopes: innermost last; each frame maps a bound var to the
        # set of candidate iteration dims collected while typing its body
        self.scopes: list[dict[str, list[DimExpr]]] = []
        self.bound: list[dict[str, LaType]] = []

    # -------------------------------------------------------------- programs

    def run(self) -> TypedProgram:
        assigned = {s.name for s in self.ast.stmts
                    if isinstance(s, (A.AssignStmt, A.ElementAssignStmt))}
        params: list[TParam] = []
        for p in self.ast.params:
            t = annotation_to_type(p.annot, p.seq_index)
            if p.name in assigned:
                self.output_decls[p.name] = t
                continue
            self.env[p.name] = t
            params.append(TParam(p.name, t, p.description))
            if isinstance(t, FunctionT):
                self.functions[p.name] = t
        for imp in self.ast.imports:
            for fn in imp.names:
                self.functions[fn] = "builtin"

        dim_sources = self._determine_dims(params)

        stmts: list[object] = []
        for stmt in self.ast.stmts:
            stmts.append(self._check_stmt(stmt))

        last = stmts[-1]
        ret_name = last.name
        return TypedProgram(
            params=tuple(params),
            dim_sources=tuple(dim_sources),
            stmts=tuple(stmts),
            defined=tuple(self.defined),
            ret_name=ret_name,
            has_argmin=self.has_argmin,
        )

    def _determine_dims(self, params: list[TParam]) -> list[DimSource]:
        wanted: list[str] = []

        def note(d: DimExpr):
            for v in sorted(d.vars()):
                if v not in wanted:
                    wanted.append(v)

        for p in params:
            for _, d in _type_dims(p.type):
                note(d)
        for t in self.output_decls.values():
            for _, d in _type_dims(t):
                note(d)

        sources: list[DimSource] = []
        determined: set[str] = set()
        for v in wanted:
            src = None
            for p in params:
                if isinstance(p.type, ScalarZ) and p.name == v:
                    src = DimSource(v, p.name, "value")
                    break
                for acc, d in _type_dims(p.type):
                    if d.coeff_of_var(v) == 1 and d.drop_var(v).constant_value() == 0:
                        src = DimSource(v, p.name, acc)
                        break
                if src is not None:
                    break
            if src is None:
                pretty = v if not v.startswith("#") else f"|{v[1:]}|"
                raise err("E_TYPE",
                          f"dimension variable {pretty} is not determined "
                          "by any parameter")
            determined.add(v)
            sources.append(src)
        return sources

    # ------------------------------------------------------------ statements

    def _check_stmt(self, stmt: A.Stmt):
        if isinstance(stmt, A.AssignStmt):
            return self._check_assign(stmt)
        if isinstance(stmt, A.ElementAssignStmt):
            return self._check_element_assign(stmt)
        if isinstance(stmt, A.ExprStmt):
            texpr = self.type_expr(stmt.expr)
            self._define("ret", texpr.type, stmt.span)
            return TAssign("ret", texpr, span=stmt.span)
        raise ValueError(stmt)

    def _define(self, name: str, t: LaType, span: Span) -> None:
        if name in self.env:
            raise err("E_REDEFINED", f"{name!r} is already defined", span)
        self.env[name] = t
        self.defined.append(name)

    def _check_assign(self, stmt: A.AssignStmt) -> TAssign:
        if stmt.name in self.element_patterns:
            raise err("E_REDEFINED",
                      f"{stmt.name!r} is already defined element-wise", stmt.span)
        texpr = self.type_expr(stmt.expr)
        if isinstance(stmt.expr, A.ArgMin):
            self.has_argmin = True
        declared = self.output_decls.get(stmt.name)
        if declared is not None:
            self._require_same_type(declared, texpr.type, stmt.span,
                                    f"declared type of {stmt.name!r}")
        self._define(stmt.name, texpr.type, stmt.span)
        return TAssign(stmt.name, texpr, span=stmt.span)

    def _check_element_assign(self, stmt: A.ElementAssignStmt) -> TElementAssign:
        name, idxs = stmt.name, stmt.indices
        diagonal = len(set(idxs)) < len(idxs)
        pattern = "diag" if diagonal else "general"
        pats = self.element_patterns.setdefault(name, set())
        first = not pats and name not in self.defined
        if name in self.env and name not in self.element_patterns:
            raise err("E_REDEFINED", f"{name!r} is already defined", stmt.span)
        if pattern in pats:
            raise err("E_REDEFINED",
                      f"{name!r} already has a {pattern} element definition",
                      stmt.span)
        pats.add(pattern)

        declared = self.output_decls.get(name)
        uniq = list(dict.fromkeys(idxs))
        frame = {v: [] for v in uniq}
        self.scopes.append(frame)
        self.bound.append({v: ScalarZ() for v in uniq})
        try:
            rhs = self.type_expr(stmt.rhs)
        finally:
            self.bound.pop()
            self.scopes.pop()

        conditional = isinstance(stmt.rhs, A.Piecewise)
        if declared is None and not first:
            declared = self.env.get(name)  # established by an earlier statement
        if declared is None and conditional:
            raise err("E_TYPE",
                      f"conditionally defined {name!r} needs a type declaration; "
                      "its dimensions cannot be inferred", stmt.span)

        # per-index iteration domains
        domains: dict[str, DimExpr] = {}
        if declared is not None:
            decl_dims = self._element_decl_dims(declared, idxs, stmt.span)
            for v, d in zip(idxs, decl_dims):
                if v in domains:
                    self._require_dims(domains[v], d, stmt.span, "index domain")
                domains[v] = d
        for v in uniq:
            candidates = frame[v]
            for c in candidates:
                if v in domains:
                    if unify_dims(domains[v], c) != "equal":
                        raise err("E_SUM_AMBIGUOUS",
                                  f"index {v!r} ranges over both "
                                  f"{domains[v].render()} and {c.render()}",
                                  stmt.span)
                else:
                    domains[v] = c
            if v not in domains:
                raise err("E_SUM_UNBOUND",
                          f"cannot infer the range of index {v!r}", stmt.span)

        target = self._element_target_type(name, idxs, rhs.type, declared,
                                           domains, conditional, stmt.span)
        if first:
            self._define(name, target, stmt.span)
        else:
            established = self.env[name]
            if isinstance(established, MatrixT) and isinstance(target, MatrixT) \
                    and (established.sparse or target.sparse):
                target = MatrixT(established.rows, established.cols, True)
            else:
                target = established
            self.env[name] = target
        return TElementAssign(
            name=name, target_type=target, indices=idxs,
            domains=tuple(domains[v] for v in idxs), rhs=rhs,
            diagonal=diagonal, first_for_name=first, span=stmt.span)

    def _element_decl_dims(self, declared: LaType, idxs, span) -> list[DimExpr]:
        if isinstance(declared, MatrixT) and len(idxs) == 2:
            return [declared.rows, declared.cols]
        if isinstance(declared, VectorT) and len(idxs) == 1:
            return [declared.dim]
        if isinstance(declared, SequenceT) and len(idxs) == 1:
            return [declared.length]
        raise err("E_TYPE",
                  f"element definition with {len(idxs)} indices does not fit "
                  f"declared type {declared.render()}", span)

    def _element_target_type(self, name, idxs, elem_type, declared, domains,
                             conditional, span) -> LaType:
        if declared is not None:
            base = declared
            if isinstance(base, MatrixT):
                want: LaType = ScalarR()
                if not is_scalar(elem_type):
                    raise err("E_TYPE",
                              f"matrix elements of {name!r} must be scalars, "
                              f"got {elem_type.render()}", span)
                return MatrixT(base.rows, base.cols,
                               base.sparse or conditional)
            if isinstance(base, (VectorT, SequenceT)):
                return base
            raise err("E_TYPE", f"cannot define {declared.render()} element-wise",
                      span)
        if len(idxs) == 2:
            if not is_scalar(elem_type):
                raise err("E_TYPE", "two-index definitions build matrices of "
                          f"scalars, got {elem_type.render()}", span)
            return MatrixT(domains[idxs[0]], domains[idxs[1]], conditional)
        if is_scalar(elem_type):
            return VectorT(domains[idxs[0]])
        return SequenceT(elem_type, domains[idxs[0]])

    # ------------------------------------------------------- shared helpers

    def _require_dims(self, a: DimExpr, b: DimExpr, span: Span, what: str) -> None:
        if unify_dims(a, b) != "equal":
            raise err("E_DIM_MISMATCH",
                      f"{what}: {a.render()} ≠ {b.render()}", span)

    def _require_same_type(self, want: LaType, got: LaType, span: Span,
                           what: str) -> None:
        ok = True
        if isinstance(want, MatrixT) and isinstance(got, MatrixT):
            ok = (unify_dims(want.rows, got.rows) == "equal"
                  and unify_dims(want.cols, got.cols) == "equal")
        elif isinstance(want, VectorT) and isinstance(got, VectorT):
            ok = unify_dims(want.dim, got.dim) == "equal"
        elif is_scalar(want) and is_scalar(got):
            ok = True
        else:
            ok = type(want) is type(got)
        if not ok:
            raise err("E_DIM_MISMATCH",
                      f"{what} is {want.render()} but the value has type "
                      f"{got.render()}", span)

    def _lookup(self, name: str, span: Span) -> LaType:
        for frame in reversed(self.bound):
            if name in frame:
                return frame[name]
        if name in self.env:
            return self.env[name]
        if name == "π":
            return ScalarR()
        raise err("E_UNDECLARED", f"{name!r} is not declared or defined", span)

    def _is_bound_index(self, name: str) -> bool:
        return any(name in frame for frame in self.bound)

    def _note_index_use(self, var: str, dim: DimExpr) -> None:
        for frame in reversed(self.scopes):
            if var in frame:
                frame[var].append(dim)
                return

    # ------------------------------------------------------------- expr walk

    def type_expr(self, e: A.Expr) -> TExpr:
        method = getattr(self, "_t_" + type(e).__name__.lower(), None)
        if method is None:
            raise err("E_TYPE", f"cannot type {type(e).__name__}", e.span)
        return method(e)

    def _t_number(self, e: A.Number) -> TExpr:
        t = ScalarZ() if e.is_integer and "." not in e.text else ScalarR()
        return TExpr("num", t, text=e.text, span=e.span)

    def _t_ident(self, e: A.Ident) -> TExpr:
        if e.name == "π" and "π" not in self.env and not self._is_bound_index("π"):
            return TExpr("pi", ScalarR(), span=e.span)
        t = self._lookup(e.name, e.span)
        kind = "index" if self._is_bound_index(e.name) else "ident"
        return TExpr(kind, t, name=e.name, span=e.span)

    def _t_identitymat(self, e: A.IdentityMat) -> TExpr:
        if e.size is None:
            raise err("E_BLOCK_UNDERDETERMINED",
                      "identity matrix needs an explicit size here", e.span)
        dim = self._dim_from_expr(e.size)
        return TExpr("identity", MatrixT(dim, dim), dim=dim, span=e.span)

    def _dim_from_expr(self, e: A.Expr) -> DimExpr:
        if isinstance(e, A.Number):
            if not e.is_integer:
                raise err("E_TYPE", "sizes must be integers", e.span)
            return DimExpr.constant(int(e.text))
        if isinstance(e, A.Ident):
            t = self._lookup(e.name, e.span)
            if not isinstance(t, ScalarZ):
                raise err("E_TYPE", f"size {e.name!r} must be an integer "
                          "parameter", e.span)
            return DimExpr.var(e.name)
        raise err("E_TYPE", "unsupported size expression", e.span)

    def _t_mul(self, e: A.Mul) -> TExpr:
        routed = self._route_inverse_product(e)
        if routed is not None:
            return routed
        lhs, rhs = self._resolve_identity_pair(e.left, e.right, e.span,
                                               additive=False)
        t = self._mul_type(lhs.type, rhs.type, e.span)
        return TExpr("mul", t, (lhs, rhs), span=e.span)

    def _route_inverse_product(self, e: A.Mul) -> TExpr | None:
        """Rewrite A⁻¹y (and X A⁻¹ y, the left-associated form) as a linear
        solve so no explicit inverse is formed."""
        inv: A.Inverse | None = None
        prefix: A.Expr | None = None
        if isinstance(e.left, A.Inverse):
            inv = e.left
        elif isinstance(e.left, A.Mul) and isinstance(e.left.right, A.Inverse):
            inv = e.left.right
            prefix = e.left.left
        if inv is None:
            return None
        base = self.type_expr(inv.base)
        if not isinstance(base.type, MatrixT):
            return None
        rhs = self.type_expr(e.right)
        if not isinstance(rhs.type, (MatrixT, VectorT)):
            return None
        solved = self._make_solve(base, rhs, e.span)
        if prefix is None:
            return solved
        lhs0 = self.type_expr(prefix)
        t = self._mul_type(lhs0.type, solved.type, e.span)
        return TExpr("mul", t, (lhs0, solved), span=e.span)

    def _t_dotop(self, e: A.DotOp) -> TExpr:
        lhs = self.type_expr(e.left)
        rhs = self.type_expr(e.right)
        if isinstance(lhs.type, VectorT) and isinstance(rhs.type, VectorT):
            self._require_dims(lhs.type.dim, rhs.type.dim, e.span, "dot product")
            return TExpr("dot", ScalarR(), (lhs, rhs), span=e.span)
        t = self._mul_type(lhs.type, rhs.type, e.span)
        return TExpr("mul", t, (lhs, rhs), span=e.span)

    def _mul_type(self, lt: LaType, rt: LaType, span: Span) -> LaType:
        if is_scalar(lt) and is_scalar(rt):
            return numeric_scalar(lt, rt)
        if is_scalar(lt):
            return self._scaled(rt, span)
        if is_scalar(rt):
            return self._scaled(lt, span)
        if isinstance(lt, MatrixT) and isinstance(rt, MatrixT):
            if unify_dims(lt.cols, rt.rows) != "equal":
                raise err("E_DIM_MISMATCH",
                          f"cannot multiply {lt.render()} by {rt.render()}: "
                          f"{lt.cols.render()} ≠ {rt.rows.render()}", span)
            return MatrixT(lt.rows, rt.cols, lt.sparse and rt.sparse)
        if isinstance(lt, MatrixT) and isinstance(rt, VectorT):
            if unify_dims(lt.cols, rt.dim) != "equal":
                raise err("E_DIM_MISMATCH",
                          f"cannot multiply {lt.render()} by {rt.render()}: "
                          f"{lt.cols.render()} ≠ {rt.dim.render()}", span)
            if lt.rows.constant_value() == 1:
                return ScalarR()
            return VectorT(lt.rows)
        if isinstance(lt, VectorT) and isinstance(rt, MatrixT):
            if rt.rows.constant_value() == 1:
                return MatrixT(lt.dim, rt.cols)
            raise err("E_TYPE",
                      "a vector can only left-multiply a row matrix "
                      f"(got {lt.render()} times {rt.render()})", span)
        if isinstance(lt, VectorT) and isinstance(rt, VectorT):
            raise err("E_TYPE",
                      "cannot juxtapose two vectors; use ⋅ for a dot product "
                      "or ᵀ for an outer product", span)
        raise err("E_TYPE",
                  f"cannot multiply {lt.render()} and {rt.render()}", span)

    @staticmethod
    def _scaled(t: LaType, span: Span) -> LaType:
        if isinstance(t, (MatrixT, VectorT)):
            return t
        if is_scalar(t):
            return t
        raise err("E_TYPE", f"cannot scale {t.render()}", span)

    def _resolve_identity_pair(self, left: A.Expr, right: A.Expr, span: Span,
                               additive: bool) -> tuple[TExpr, TExpr]:
        """Type a pair, letting a bare I (or 0 in additive position) take its
        dimensions from the other operand."""
        def is_bare_identity(x: A.Expr) -> bool:
            return isinstance(x, A.IdentityMat) and x.size is None

        if is_bare_identity(left) and is_bare_identity(right):
            raise err("E_BLOCK_UNDERDETERMINED",
                      "cannot size identity matrices from each other", span)
        if is_bare_identity(right):
            lhs = self.type_expr(left)
            rhs = self._identity_like(lhs.type, right.span, additive, span)
            return lhs, rhs
        if is_bare_identity(left):
            rhs = self.type_expr(right)
            lhs = self._identity_like(rhs.type, left.span, additive, span)
            return lhs, rhs
        return self.type_expr(left), self.type_expr(right)

    def _identity_like(self, other: LaType, span: Span, additive: bool,
                       ctx_span: Span) -> TExpr:
        if not additive:
            raise err("E_BLOCK_UNDERDETERMINED",
                      "a bare I is only sized inside +, - or a block matrix",
                      span)
        if not isinstance(other, MatrixT):
            raise err("E_TYPE", "I must combine with a matrix", span)
        if unify_dims(other.rows, other.cols) != "equal":
            raise err("E_DIM_MISMATCH",
                      f"I must be square but context has shape "
                      f"{other.rows.render()}×{other.cols.render()}", ctx_span)
        return TExpr("identity", MatrixT(other.rows, other.rows),
                     dim=other.rows, span=span)

    def _t_add(self, e: A.Add) -> TExpr:
        return self._additive(e, "add")

    def _t_sub(self, e: A.Sub) -> TExpr:
        return self._additive(e, "sub")

    def _additive(self, e, kind: str) -> TExpr:
        lhs, rhs = self._resolve_identity_pair(e.left, e.right, e.span,
                                               additive=True)
        lt, rt = lhs.type, rhs.type
        if is_scalar(lt) and is_scalar(rt):
            t: LaType = numeric_scalar(lt, rt)
        elif isinstance(lt, VectorT) and isinstance(rt, VectorT):
            self._require_dims(lt.dim, rt.dim, e.span, "cannot add vectors")
            t = VectorT(lt.dim)
        elif isinstance(lt, MatrixT) and isinstance(rt, MatrixT):
            if unify_dims(lt.rows, rt.rows) != "equal" or \
                    unify_dims(lt.cols, rt.cols) != "equal":
                raise err("E_DIM_MISMATCH",
                          f"cannot add {lt.render()} and {rt.render()}", e.span)
            t = MatrixT(lt.rows, lt.cols, lt.sparse or rt.sparse)
        else:
            raise err("E_TYPE",
                      f"cannot add {lt.render()} and {rt.render()}", e.span)
        return TExpr(kind, t, (lhs, rhs), span=e.span)

    def _t_div(self, e: A.Div) -> TExpr:
        lhs = self.type_expr(e.left)
        rhs = self.type_expr(e.right)
        if not is_scalar(rhs.type):
            raise err("E_TYPE", f"cannot divide by {rhs.type.render()}", e.span)
        if is_scalar(lhs.type):
            t: LaType = ScalarR()
        elif isinstance(lhs.type, (VectorT, MatrixT)):
            t = lhs.type
        else:
            raise err("E_TYPE", f"cannot divide {lhs.type.render()}", e.span)
        return TExpr("div", t, (lhs, rhs), span=e.span)

    def _t_solve(self, e: A.Solve) -> TExpr:
        lhs = self.type_expr(e.matrix)
        rhs = self.type_expr(e.rhs)
        return self._make_solve(lhs, rhs, e.span)

    def _make_solve(self, a: TExpr, b: TExpr, span: Span) -> TExpr:
        if not isinstance(a.type, MatrixT):
            raise err("E_TYPE", f"cannot solve with {a.type.render()}", span)
        self._require_dims(a.type.rows, a.type.cols, span,
                           "solve needs a square matrix")
        if isinstance(b.type, VectorT):
            self._require_dims(a.type.rows, b.type.dim, span, "solve shapes")
            t: LaType = VectorT(b.type.dim)
        elif isinstance(b.type, MatrixT):
            self._require_dims(a.type.rows, b.type.rows, span, "solve shapes")
            t = MatrixT(b.type.rows, b.type.cols)
        else:
            raise err("E_TYPE", f"cannot solve for {b.type.render()}", span)
        return TExpr("solve", t, (a, b), span=span)

    def _t_cross(self, e: A.Cross) -> TExpr:
        lhs = self.type_expr(e.left)
        rhs = self.type_expr(e.right)
        three = DimExpr.constant(3)
        for side in (lhs, rhs):
            if not isinstance(side.type, VectorT) or \
                    unify_dims(side.type.dim, three) != "equal":
                raise err("E_TYPE",
                          f"cross product needs 3-vectors, got {side.type.render()}",
                          e.span)
        return TExpr("cross", VectorT(three), (lhs, rhs), span=e.span)

    def _t_kron(self, e: A.Kron) -> TExpr:
        lhs = self.type_expr(e.left)
        rhs = self.type_expr(e.right)
        la = self._as_matrix_shape(lhs.type, e.span)
        rb = self._as_matrix_shape(rhs.type, e.span)
        t = MatrixT(la[0] * rb[0], la[1] * rb[1],
                    getattr(lhs.type, "sparse", False)
                    and getattr(rhs.type, "sparse", False))
        return TExpr("kron", t, (lhs, rhs), span=e.span)

    def _t_hadamard(self, e: A.Hadamard) -> TExpr:
        lhs = self.type_expr(e.left)
        rhs = self.type_expr(e.right)
        lt, rt = lhs.type, rhs.type
        if isinstance(lt, VectorT) and isinstance(rt, VectorT):
            self._require_dims(lt.dim, rt.dim, e.span, "elementwise product")
            return TExpr("hadamard", VectorT(lt.dim), (lhs, rhs), span=e.span)
        if isinstance(lt, MatrixT) and isinstance(rt, MatrixT):
            self._require_dims(lt.rows, rt.rows, e.span, "elementwise product")
            self._require_dims(lt.cols, rt.cols, e.span, "elementwise product")
            return TExpr("hadamard",
                         MatrixT(lt.rows, lt.cols, lt.sparse and rt.sparse),
                         (lhs, rhs), span=e.span)
        raise err("E_TYPE", f"cannot take elementwise product of {lt.render()} "
                  f"and {rt.render()}", e.span)

    @staticmethod
    def _as_matrix_shape(t: LaType, span: Span) -> tuple[DimExpr, DimExpr]:
        if isinstance(t, MatrixT):
            return t.rows, t.cols
        if isinstance(t, VectorT):
            return t.dim, DimExpr.constant(1)
        raise err("E_TYPE", f"{t.render()} is not a matrix", span)

    def _t_pow(self, e: A.Pow) -> TExpr:
        base = self.type_expr(e.base)
        expo = self.type_expr(e.exponent)
        if is_scalar(base.type):
            if not is_scalar(expo.type):
                raise err("E_TYPE", "exponent must be a scalar", e.span)
            t: LaType = numeric_scalar(base.type, expo.type) \
                if isinstance(expo.type, ScalarZ) else ScalarR()
            return TExpr("pow", t, (base, expo), span=e.span)
        if isinstance(base.type, MatrixT):
            if not (expo.kind == "num" and isinstance(expo.type, ScalarZ)
                    and int(expo.text) >= 1):
                raise err("E_TYPE",
                          "matrix powers need a positive integer exponent",
                          e.span)
            self._require_dims(base.type.rows, base.type.cols, e.span,
                               "matrix power needs a square matrix")
            return TExpr("pow", base.type, (base, expo), span=e.span)
        raise err("E_TYPE", f"cannot raise {base.type.render()} to a power",
                  e.span)

    def _t_transpose(self, e: A.Transpose) -> TExpr:
        base = self.type_expr(e.base)
        if isinstance(base.type, VectorT):
            t: LaType = MatrixT(DimExpr.constant(1), base.type.dim)
        elif isinstance(base.type, MatrixT):
            t = MatrixT(base.type.cols, base.type.rows, base.type.sparse)
        else:
            raise err("E_TYPE", f"cannot transpose {base.type.render()}", e.span)
        return TExpr("transpose", t, (base,), span=e.span)

    def _t_inverse(self, e: A.Inverse) -> TExpr:
        base = self.type_expr(e.base)
        if is_scalar(base.type):
            return TExpr("inverse", ScalarR(), (base,), span=e.span)
        if isinstance(base.type, MatrixT):
            self._require_dims(base.type.rows, base.type.cols, e.span,
                               "inverse needs a square matrix")
            return TExpr("inverse", MatrixT(base.type.rows, base.type.cols),
                         (base,), span=e.span)
        raise err("E_TYPE", f"cannot invert {base.type.render()}", e.span)

    def _t_neg(self, e: A.Neg) -> TExpr:
        base = self.type_expr(e.base)
        if not isinstance(base.type, (ScalarR, ScalarZ, VectorT, MatrixT)):
            raise err("E_TYPE", f"cannot negate {base.type.render()}", e.span)
        return TExpr("neg", base.type, (base,), span=e.span)

    def _t_subscript(self, e: A.Subscript) -> TExpr:
        base = self.type_expr(e.base)
        idx: list[TExpr] = []
        for k, ix in enumerate(e.indices):
            child = self.type_expr(ix)
            if not isinstance(child.type, ScalarZ):
                raise err("E_TYPE", "subscripts must be integers", ix.span)
            idx.append(child)
        bt = base.type
        if isinstance(bt, SequenceT):
            if len(idx) != 1:
                raise err("E_TYPE", "sequences take one subscript", e.span)
            self._record_domain(idx[0], bt.length)
            return TExpr("subscript", bt.elem, (base, *idx), span=e.span)
        if isinstance(bt, VectorT):
            if len(idx) != 1:
                raise err("E_TYPE", "vectors take one subscript", e.span)
            self._record_domain(idx[0], bt.dim)
            return TExpr("subscript", ScalarR(), (base, *idx), span=e.span)
        if isinstance(bt, MatrixT):
            if len(idx) != 2:
                raise err("E_TYPE", "matrix elements take two subscripts "
                          "(e.g. A_ij)", e.span)
            self._record_domain(idx[0], bt.rows)
            self._record_domain(idx[1], bt.cols)
            return TExpr("subscript", ScalarR(), (base, *idx), span=e.span)
        raise err("E_TYPE", f"cannot subscript {bt.render()}", e.span)

    def _record_domain(self, index: TExpr, dim: DimExpr) -> None:
        if index.kind == "index":
            self._note_index_use(index.name, dim)

    def _t_norm(self, e: A.Norm) -> TExpr:
        body = self.type_expr(e.body)
        t = body.type
        if isinstance(t, VectorT):
            if e.flavor == "F":
                raise err("E_TYPE", "Frobenius norm applies to matrices", e.span)
        elif isinstance(t, MatrixT):
            if e.flavor not in ("", "F"):
                raise err("E_TYPE",
                          f"matrix norm flavor {e.flavor!r} is not supported",
                          e.span)
        else:
            raise err("E_TYPE", f"cannot take a norm of {t.render()}", e.span)
        return TExpr("norm", ScalarR(), (body,), flavor=e.flavor, span=e.span)

    def _t_sum(self, e: A.Sum) -> TExpr:
        frame: dict[str, list[DimExpr]] = {e.index: []}
        self.scopes.append(frame)
        self.bound.append({e.index: ScalarZ()})
        try:
            cond = self._type_cond(e.cond) if e.cond is not None else None
            body = self.type_expr(e.body)
        finally:
            self.bound.pop()
            self.scopes.pop()
        candidates = frame[e.index]
        if not candidates:
            raise err("E_SUM_UNBOUND",
                      f"summation index {e.index!r} is not used in the summand",
                      e.span)
        domain = candidates[0]
        for c in candidates[1:]:
            if unify_dims(domain, c) != "equal":
                raise err("E_SUM_AMBIGUOUS",
                          f"index {e.index!r} ranges over both "
                          f"{domain.render()} and {c.render()}", e.span)
        if not isinstance(body.type, (ScalarR, ScalarZ, VectorT, MatrixT)):
            raise err("E_TYPE", f"cannot sum {body.type.render()}", e.span)
        t = ScalarR() if is_scalar(body.type) else body.type
        return TExpr("sum", t, (body,), name=e.index,
                     domain=SumDomain(domain, cond), span=e.span)

    def _t_integral(self, e: A.Integral) -> TExpr:
        lower = self.type_expr(e.lower)
        upper = self.type_expr(e.upper)
        for b in (lower, upper):
            if not is_scalar(b.type):
                raise err("E_TYPE", "integral bounds must be scalars", e.span)
        self.bound.append({e.var: ScalarR()})
        try:
            body = self.type_expr(e.body)
        finally:
            self.bound.pop()
        if not is_scalar(body.type):
            raise err("E_TYPE", "only scalar integrands are supported", e.span)
        return TExpr("integral", ScalarR(), (lower, upper, body), name=e.var,
                     span=e.span)

    def _t_matrixlit(self, e: A.MatrixLit) -> TExpr:
        return self._infer_block(e)

    def _t_call(self, e: A.Call) -> TExpr:
        fn = self.functions.get(e.func)
        if fn is None:
            raise err("E_NOT_A_FUNCTION", f"{e.func!r} is not a function", e.span)
        args = tuple(self.type_expr(a) for a in e.args)
        if fn == "builtin":
            return self._type_builtin_call(e, args)
        assert isinstance(fn, FunctionT)
        if len(args) != len(fn.params):
            raise err("E_TYPE",
                      f"{e.func!r} takes {len(fn.params)} arguments, "
                      f"got {len(args)}", e.span)
        for want, got in zip(fn.params, args):
            self._require_same_type(want, got.type, e.span,
                                    f"argument of {e.func!r}")
        return TExpr("call", fn.ret, args, name=e.func, span=e.span)

    def _type_builtin_call(self, e: A.Call, args: tuple[TExpr, ...]) -> TExpr:
        sig = builtin_signature(e.func)
        if sig == "scalar1":
            if len(args) != 1 or not is_scalar(args[0].type):
                raise err("E_TYPE", f"{e.func} takes one scalar", e.span)
            return TExpr("call", ScalarR(), args, name=e.func, span=e.span)
        if sig == "scalar2":
            if len(args) != 2 or not all(is_scalar(a.type) for a in args):
                raise err("E_TYPE", f"{e.func} takes two scalars", e.span)
            return TExpr("call", ScalarR(), args, name=e.func, span=e.span)
        if sig == "square":
            if len(args) != 1 or not isinstance(args[0].type, MatrixT):
                raise err("E_TYPE", f"{e.func} takes a square matrix", e.span)
            self._require_dims(args[0].type.rows, args[0].type.cols, e.span,
                               f"{e.func} needs a square matrix")
            return TExpr("call", ScalarR(), args, name=e.func, span=e.span)
        if sig == "vec":
            if len(args) != 1 or not isinstance(args[0].type, MatrixT):
                raise err("E_TYPE", "vec takes a matrix", e.span)
            mt = args[0].type
            return TExpr("call", VectorT(mt.rows * mt.cols), args,
                         name=e.func, span=e.span)
        raise err("E_NOT_A_FUNCTION", f"unknown builtin {e.func!r}", e.span)

    def _t_piecewise(self, e: A.Piecewise) -> TExpr:
        arms: list[tuple[TExpr, TCond]] = []
        common: LaType | None = None
        for value, cond in e.arms:
            tv = self.type_expr(value)
            tc = self._type_cond(cond)
            arms.append((tv, tc))
            common = tv.type if common is None else common
            self._require_same_type(common, tv.type, e.span, "piecewise arm")
        other = self.type_expr(e.otherwise)
        if common is None:
            common = other.type
        self._require_same_type(common, other.type, e.span, "piecewise arm")
        if isinstance(common, ScalarZ) or isinstance(other.type, ScalarR):
            common = numeric_scalar(common, other.type) if is_scalar(common) \
                else common
        return TExpr("piecewise", common, (other,), arms=tuple(arms),
                     span=e.span)

    def _t_argmin(self, e: A.ArgMin) -> TExpr:
        var_type = annotation_to_type(e.var_type)
        self.bound.append({e.var: var_type})
        try:
            objective = self.type_expr(e.objective)
            if not is_scalar(objective.type):
                raise err("E_TYPE", "minimization objectives must be scalars",
                          e.span)
            constraints = tuple(self._type_cond(c) for c in e.constraints)
        finally:
            self.bound.pop()
        self.has_argmin = True
        return TExpr("argmin", var_type, (objective,), name=e.var,
                     text=e.kind, constraints=constraints, span=e.span)

    # ----------------------------------------------------------- conditions

    def _type_cond(self, c: A.Cond) -> TCond:
        if isinstance(c, A.AndCond):
            return TCond("and", (self._type_cond(c.left), self._type_cond(c.right)))
        assert isinstance(c, A.Compare)
        if c.op == "∈":
            rhs = self.type_expr(c.right)
            if not isinstance(rhs.type, SetT):
                raise err("E_TYPE", "∈ conditions need a set on the right",
                          c.span)
            if len(c.left) != rhs.type.arity:
                raise err("E_TYPE",
                          f"set {rhs.type.render()} holds {rhs.type.arity}-tuples, "
                          f"the condition names {len(c.left)}", c.span)
            names = []
            typed = []
            for part in c.left:
                tp = self.type_expr(part)
                if not isinstance(tp.type, ScalarZ):
                    raise err("E_TYPE", "set members are integer tuples", c.span)
                typed.append(tp)
                names.append(tp.name if tp.kind in ("index", "ident") else "")
            return TCond("member", (rhs, *typed), member_names=tuple(names))
        lhs = self.type_expr(c.left[0])
        rhs = self.type_expr(c.right)
        if not (is_scalar(lhs.type) and is_scalar(rhs.type)):
            raise err("E_TYPE", f"cannot compare {lhs.type.render()} with "
                      f"{rhs.type.render()}", c.span)
        return TCond("cmp", (lhs, rhs), op=c.op)

    # -------------------------------------------------------- block matrices

    def _infer_block(self, e: A.MatrixLit) -> TExpr:
        grid_rows = len(e.rows)
        width = len(e.rows[0])
        if any(len(r) != width for r in e.rows):
            raise err("E_RAGGED_ROWS",
                      "matrix rows have different element counts", e.span)

        # role "" carries a typed cell with rigid dims; I and 0 cells defer
        cells: list[list[TExpr | None]] = []
        rigid: list[list[tuple[DimExpr, DimExpr] | None]] = []
        roles: list[list[str]] = []  # "", "identity", "zero"
        for row in e.rows:
            crow: list[TExpr | None] = []
            rrow: list[tuple[DimExpr, DimExpr] | None] = []
            frow: list[str] = []
            for cell in row:
                if isinstance(cell, A.IdentityMat) and cell.size is None:
                    crow.append(None)
                    rrow.append(None)
                    frow.append("identity")
                elif isinstance(cell, A.Number) and cell.text == "0":
                    crow.append(None)
                    rrow.append(None)
                    frow.append("zero")
                else:
                    t = self.type_expr(cell)
                    crow.append(t)
                    if is_scalar(t.type):
                        rrow.append((DimExpr.constant(1), DimExpr.constant(1)))
                    elif isinstance(t.type, VectorT):
                        rrow.append((t.type.dim, DimExpr.constant(1)))
                    elif isinstance(t.type, MatrixT):
                        rrow.append((t.type.rows, t.type.cols))
                    else:
                        raise err("E_TYPE",
                                  f"{t.type.render()} cannot be a matrix cell",
                                  cell.span)
                    frow.append("")
            cells.append(crow)
            rigid.append(rrow)
            roles.append(frow)

        heights: list[DimExpr | None] = [None] * grid_rows
        widths: list[DimExpr | None] = [None] * width
        ident_dim: dict[tuple[int, int], DimExpr | None] = {
            (r, c): None for r in range(grid_rows) for c in range(width)
            if roles[r][c] == "identity"}

        def set_slot(slots: list, idx: int, value: DimExpr, what: str) -> bool:
            if slots[idx] is None:
                slots[idx] = value
                return True
            if unify_dims(slots[idx], value) != "equal":
                raise err("E_BLOCK_INCONSISTENT",
                          f"block {what} {slots[idx].render()} conflicts "
                          f"with {value.render()}", e.span)
            return False

        changed = True
        while changed:
            changed = False
            for r in range(grid_rows):
                for c in range(width):
                    if rigid[r][c] is not None:
                        h, w = rigid[r][c]
                        changed |= set_slot(heights, r, h, "row height")
                        changed |= set_slot(widths, c, w, "column width")
            for (r, c), d in list(ident_dim.items()):
                if d is None:
                    if heights[r] is not None:
                        ident_dim[(r, c)] = heights[r]
                        changed = True
                    elif widths[c] is not None:
                        ident_dim[(r, c)] = widths[c]
                        changed = True
                else:
                    changed |= set_slot(heights, r, d, "row height")
                    changed |= set_slot(widths, c, d, "column width")

        for r, h in enumerate(heights):
            if h is None:
                raise err("E_BLOCK_UNDERDETERMINED",
                          f"row {r + 1} of the block matrix has no "
                          "determining cell", e.span)
        for c, w in enumerate(widths):
            if w is None:
                raise err("E_BLOCK_UNDERDETERMINED",
                          f"column {c + 1} of the block matrix has no "
                          "determining cell", e.span)
        for (r, c) in ident_dim:
            if unify_dims(heights[r], widths[c]) != "equal":
                raise err("E_BLOCK_INCONSISTENT",
                          f"identity block at row {r + 1}, column {c + 1} "
                          f"would be {heights[r].render()}×{widths[c].render()}",
                          e.span)

        out_cells: list[TExpr] = []
        any_sparse = False
        for r in range(grid_rows):
            for c in range(width):
                role = roles[r][c]
                if role == "identity":
                    out_cells.append(TExpr("identity",
                                           MatrixT(heights[r], heights[r]),
                                           dim=heights[r], span=e.span))
                elif role == "zero":
                    if heights[r].constant_value() == 1 and \
                            widths[c].constant_value() == 1:
                        out_cells.append(TExpr("num", ScalarZ(), text="0",
                                               span=e.span))
                    else:
                        out_cells.append(TExpr("zeros",
                                               MatrixT(heights[r], widths[c]),
                                               dim=heights[r], dim2=widths[c],
                                               span=e.span))
                else:
                    cell = cells[r][c]
                    any_sparse |= getattr(cell.type, "sparse", False)
                    out_cells.append(cell)

        total_rows = heights[0]
        for h in heights[1:]:
            total_rows = total_rows + h
        total_cols = widths[0]
        for w in widths[1:]:
            total_cols = total_cols + w
        t = MatrixT(total_rows, total_cols, any_sparse)
        info = BlockInfo(tuple(heights), tuple(widths), (grid_rows, width))
        return TExpr("matrix", t, tuple(out_cells), block=info, span=e.span)


def check(ast: A.ProgramAst, symbols: SymbolTable) -> TypedProgram:
    """Type-check a parsed program and build the typed IR."""
    return Checker(ast, symbols).run()
