"""Reference interpreter over the typed IR.

evaluate() is the semantic oracle the code generators are tested against.
Sequences and matrices are 1-indexed in the language; everything converts
to 0-based indexing internally. ℝ arithmetic is binary64; ℤ stays in
64-bit range with overflow reported, not wrapped.
"""

from __future__ import annotations

import math

import numpy as np

from . import numeric
from .dims import DimExpr
from .errors import err
from .latypes import (
    FunctionT, LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT,
    is_scalar,
)
from .sema import TAssign, TCond, TElementAssign, TExpr, TypedProgram
from .values import SparseMatrix

_INT_LIMIT = 2 ** 63


def _int_guard(v: int):
    if isinstance(v, int) and not -_INT_LIMIT <= v < _INT_LIMIT:
        raise err("E_OVERFLOW", "integer arithmetic overflowed 64 bits")
    return v


BUILTIN_IMPLS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "asin": math.asin, "acos": math.acos, "atan": math.atan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "sqrt": math.sqrt, "atan2": math.atan2,
}


def builtin(name: str, args: list):
    """Evaluate a built-in function call on runtime values."""
    try:
        if name == "log":
            x = float(args[0])
            if x <= 0.0:
                raise err("E_DOMAIN", "log of a non-positive number")
            return math.log(x)
        if name in BUILTIN_IMPLS:
            return float(BUILTIN_IMPLS[name](*[float(a) for a in args]))
    except ValueError:
        raise err("E_DOMAIN",
                  f"{name} argument outside its mathematical domain") from None
    a = args[0]
    dense = a.to_dense() if isinstance(a, SparseMatrix) else np.asarray(a, float)
    if name == "tr":
        return float(np.trace(dense))
    if name == "det":
        return numeric.determinant(dense)
    if name == "vec":
        return dense.flatten(order="F").copy()
    raise err("E_NOT_A_FUNCTION", f"unknown builtin {name!r}")


def eval_integral(f, lo: float, hi: float) -> float:
    return numeric.adaptive_simpson(f, lo, hi)


def solve_linear(a, b):
    dense = a.to_dense() if isinstance(a, SparseMatrix) else np.asarray(a, float)
    return numeric.solve_linear(dense, b)


# ------------------------------------------------------------ shape binding

def bind_dims(p: TypedProgram, inputs: dict) -> dict[str, int]:
    bindings: dict[str, int] = {}
    for src in p.dim_sources:
        v = inputs[src.param]
        acc = src.accessor
        try:
            if acc == "value":
                n = int(v)
            elif acc == "len":
                n = len(v)
            elif acc == "dim":
                n = int(np.asarray(v).shape[0])
            elif acc == "rows":
                n = v.rows if isinstance(v, SparseMatrix) else int(v.shape[0])
            elif acc == "cols":
                n = v.cols if isinstance(v, SparseMatrix) else int(v.shape[1])
            elif acc in ("elem_dim", "elem_rows"):
                n = int(np.asarray(v[0]).shape[0])
            elif acc == "elem_cols":
                n = int(np.asarray(v[0]).shape[1])
            else:
                raise KeyError(acc)
        except (IndexError, AttributeError, TypeError):
            raise err("E_SHAPE",
                      f"cannot read dimension {src.var!r} from input "
                      f"{src.param!r}") from None
        if n < 0:
            raise err("E_SHAPE", f"dimension {src.var!r} is negative")
        bindings[src.var] = n
    return bindings


def _shape_of_type(t: LaType, dims: dict[str, int]):
    if isinstance(t, VectorT):
        return (t.dim.value(dims),)
    if isinstance(t, MatrixT):
        return (t.rows.value(dims), t.cols.value(dims))
    return ()


def validate_inputs(p: TypedProgram, inputs: dict) -> dict[str, int]:
    for tp in p.params:
        if isinstance(tp.type, FunctionT):
            raise err("E_EVAL_FN",
                      f"parameter {tp.name!r} is function-typed; evaluation "
                      "does not support function inputs")
    missing = [tp.name for tp in p.params if tp.name not in inputs]
    extra = [k for k in inputs if k not in {tp.name for tp in p.params}]
    if missing or extra:
        parts = []
        if missing:
            parts.append("missing inputs: " + ", ".join(missing))
        if extra:
            parts.append("unexpected inputs: " + ", ".join(extra))
        raise err("E_SHAPE", "; ".join(parts))
    dims = bind_dims(p, inputs)
    for tp in p.params:
        _validate_one(tp.name, tp.type, inputs[tp.name], dims)
    return dims


def _validate_one(name: str, t: LaType, v, dims: dict[str, int]):
    def fail(expected: str, actual: str):
        raise err("E_SHAPE",
                  f"input {name!r}: expected {expected}, got {actual}")

    if isinstance(t, ScalarZ):
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            fail("an integer", type(v).__name__)
        _int_guard(int(v))
    elif isinstance(t, ScalarR):
        if not isinstance(v, (int, float, np.floating, np.integer)) \
                or isinstance(v, bool):
            fail("a number", type(v).__name__)
    elif isinstance(t, VectorT):
        want = _shape_of_type(t, dims)
        got = np.asarray(v).shape
        if got != want:
            fail(f"{t.render()} with shape {want}", f"shape {got}")
    elif isinstance(t, MatrixT):
        want = _shape_of_type(t, dims)
        got = (v.rows, v.cols) if isinstance(v, SparseMatrix) \
            else np.asarray(v).shape
        if got != want:
            fail(f"{t.render()} with shape {want}", f"shape {got}")
    elif isinstance(t, SequenceT):
        want_len = t.length.value(dims)
        if len(v) != want_len:
            fail(f"a sequence of length {want_len}", f"length {len(v)}")
        for k, item in enumerate(v):
            _validate_one(f"{name}[{k + 1}]", t.elem, item, dims)
    elif isinstance(t, SetT):
        for tup in v:
            if len(tup) != t.arity:
                fail(f"{t.arity}-tuples", f"a {len(tup)}-tuple")


# ---------------------------------------------------------------- evaluator

class _Evaluator:
    def __init__(self, program: TypedProgram, inputs: dict, dims: dict[str, int]):
        self.program = program
        self.dims = dims
        self.env: dict[str, object] = dict(inputs)
        self.idx: dict[str, float | int] = {}

    def dim_value(self, d: DimExpr) -> int:
        return d.value(self.dims)

    # ------------------------------------------------------------ statements

    def run(self) -> dict[str, object]:
        for stmt in self.program.stmts:
            if isinstance(stmt, TAssign):
                self.env[stmt.name] = self.eval(stmt.expr)
            else:
                self._element_assign(stmt)
        out: dict[str, object] = {}
        for name in self.program.defined:
            out[name] = self.env[name]
        return out

    def _element_assign(self, stmt: TElementAssign):
        t = stmt.target_type
        if isinstance(t, MatrixT) and t.sparse:
            self._fill_sparse(stmt, t)
        elif isinstance(t, MatrixT):
            self._fill_dense(stmt, t)
        elif isinstance(t, VectorT):
            n = self.dim_value(t.dim)
            if stmt.first_for_name:
                self.env[stmt.name] = np.zeros(n)
            vec = self.env[stmt.name]
            v = stmt.indices[0]
            for i in range(1, n + 1):
                self.idx[v] = i
                vec[i - 1] = float(self.eval(stmt.rhs))
            del self.idx[v]
        elif isinstance(t, SequenceT):
            n = self.dim_value(t.length)
            items = []
            v = stmt.indices[0]
            for i in range(1, n + 1):
                self.idx[v] = i
                items.append(self.eval(stmt.rhs))
            del self.idx[v]
            self.env[stmt.name] = items
        else:
            raise err("E_TYPE", f"cannot build {t.render()} element-wise")

    def _fill_dense(self, stmt: TElementAssign, t: MatrixT):
        rows = self.dim_value(t.rows)
        cols = self.dim_value(t.cols)
        if stmt.first_for_name:
            self.env[stmt.name] = np.zeros((rows, cols))
        mat = self.env[stmt.name]
        vi = stmt.indices[0]
        if stmt.diagonal:
            for i in range(1, min(rows, cols) + 1):
                self.idx[vi] = i
                mat[i - 1, i - 1] = float(self.eval(stmt.rhs))
            del self.idx[vi]
            return
        vj = stmt.indices[1]
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                self.idx[vi], self.idx[vj] = i, j
                mat[i - 1, j - 1] = float(self.eval(stmt.rhs))
        del self.idx[vi], self.idx[vj]

    def _fill_sparse(self, stmt: TElementAssign, t: MatrixT):
        rows = self.dim_value(t.rows)
        cols = self.dim_value(t.cols)
        if stmt.first_for_name:
            self.env[stmt.name] = SparseMatrix(rows, cols)
        elif isinstance(self.env[stmt.name], np.ndarray):
            self.env[stmt.name] = SparseMatrix.from_dense(self.env[stmt.name])
        mat: SparseMatrix = self.env[stmt.name]
        if stmt.diagonal:
            vi = stmt.indices[0]
            for i in range(1, min(rows, cols) + 1):
                self.idx[vi] = i
                mat.set(i - 1, i - 1, float(self.eval(stmt.rhs)))
            del self.idx[vi]
            return
        vi, vj = stmt.indices
        rhs = stmt.rhs
        memberships = _membership_plan(rhs, (vi, vj)) if rhs.kind == "piecewise" \
            else None
        if memberships is not None:
            for value, cond in rhs.arms:
                set_val = self.eval(cond.children[0])
                for tup in sorted(set_val):
                    self.idx[vi], self.idx[vj] = tup[0], tup[1]
                    if not (1 <= tup[0] <= rows and 1 <= tup[1] <= cols):
                        raise err("E_SHAPE",
                                  f"set member {tup} is outside the "
                                  f"{rows}×{cols} matrix")
                    if self._cond(cond):
                        mat.set(tup[0] - 1, tup[1] - 1, float(self.eval(value)))
            self.idx.pop(vi, None)
            self.idx.pop(vj, None)
            return
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                self.idx[vi], self.idx[vj] = i, j
                mat.set(i - 1, j - 1, float(self.eval(rhs)))
        del self.idx[vi], self.idx[vj]

    # ----------------------------------------------------------- expressions

    def eval(self, e: TExpr):
        return getattr(self, "_e_" + e.kind)(e)

    def _e_num(self, e: TExpr):
        return int(e.text) if isinstance(e.type, ScalarZ) else float(e.text)

    def _e_pi(self, e: TExpr):
        return math.pi

    def _e_ident(self, e: TExpr):
        return self.env[e.name]

    def _e_index(self, e: TExpr):
        return self.idx[e.name]

    def _e_identity(self, e: TExpr):
        return np.eye(self.dim_value(e.dim))

    def _e_zeros(self, e: TExpr):
        return np.zeros((self.dim_value(e.dim), self.dim_value(e.dim2)))

    def _e_mul(self, e: TExpr):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        ta, tb = e.children[0].type, e.children[1].type
        if is_scalar(ta) and is_scalar(tb):
            return _int_guard(a * b)
        if is_scalar(ta):
            return b.scaled(float(a)) if isinstance(b, SparseMatrix) \
                else float(a) * b
        if is_scalar(tb):
            return a.scaled(float(b)) if isinstance(a, SparseMatrix) \
                else a * float(b)
        want_sparse = isinstance(e.type, MatrixT) and e.type.sparse
        if isinstance(a, SparseMatrix) and isinstance(b, SparseMatrix):
            out = a.matmul(b)
            return out if want_sparse else out.to_dense()
        a_dense = a.to_dense() if isinstance(a, SparseMatrix) else a
        b_dense = b.to_dense() if isinstance(b, SparseMatrix) else b
        if isinstance(ta, MatrixT) and isinstance(tb, VectorT) \
                and isinstance(e.type, ScalarR):
            return float(np.asarray(a_dense @ b_dense).item())  # row times vec
        if isinstance(ta, VectorT) and isinstance(tb, MatrixT):
            return np.outer(a_dense, b_dense[0, :])
        out = a_dense @ b_dense
        return SparseMatrix.from_dense(out) if want_sparse else out

    def _e_dot(self, e: TExpr):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        return float(np.dot(a, b))

    def _e_add(self, e: TExpr):
        return self._additive(e, 1.0)

    def _e_sub(self, e: TExpr):
        return self._additive(e, -1.0)

    def _additive(self, e: TExpr, sign: float):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        if is_scalar(e.type):
            if isinstance(a, int) and isinstance(b, int):
                return _int_guard(a + b if sign > 0 else a - b)
            return float(a) + sign * float(b)
        want_sparse = isinstance(e.type, MatrixT) and e.type.sparse
        if isinstance(a, SparseMatrix) or isinstance(b, SparseMatrix):
            if not isinstance(a, SparseMatrix):
                a = SparseMatrix.from_dense(a)
            out = a.add(b, sign)
            return out if want_sparse else out.to_dense()
        out = a + sign * b
        return SparseMatrix.from_dense(out) if want_sparse else out

    def _e_div(self, e: TExpr):
        a = self.eval(e.children[0])
        b = float(self.eval(e.children[1]))
        if isinstance(a, SparseMatrix):
            return a.scaled(1.0 / b)
        if isinstance(a, (int, float)):
            return a / b
        return a / b

    def _e_solve(self, e: TExpr):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        b_dense = b.to_dense() if isinstance(b, SparseMatrix) else b
        return solve_linear(a, b_dense)

    def _e_cross(self, e: TExpr):
        return np.cross(self.eval(e.children[0]), self.eval(e.children[1]))

    def _e_kron(self, e: TExpr):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        a = a.to_dense() if isinstance(a, SparseMatrix) else np.atleast_2d(a).T \
            if np.asarray(a).ndim == 1 else a
        b = b.to_dense() if isinstance(b, SparseMatrix) else np.atleast_2d(b).T \
            if np.asarray(b).ndim == 1 else b
        out = np.kron(a, b)
        if isinstance(e.type, MatrixT) and e.type.sparse:
            return SparseMatrix.from_dense(out)
        return out

    def _e_hadamard(self, e: TExpr):
        a = self.eval(e.children[0])
        b = self.eval(e.children[1])
        want_sparse = isinstance(e.type, MatrixT) and e.type.sparse
        a_dense = a.to_dense() if isinstance(a, SparseMatrix) else a
        b_dense = b.to_dense() if isinstance(b, SparseMatrix) else b
        out = a_dense * b_dense
        return SparseMatrix.from_dense(out) if want_sparse else out

    def _e_pow(self, e: TExpr):
        base = self.eval(e.children[0])
        expo = self.eval(e.children[1])
        if isinstance(e.children[0].type, MatrixT):
            dense = base.to_dense() if isinstance(base, SparseMatrix) else base
            out = dense
            for _ in range(int(expo) - 1):
                out = out @ dense
            if isinstance(e.type, MatrixT) and e.type.sparse:
                return SparseMatrix.from_dense(out)
            return out
        if isinstance(base, int) and isinstance(expo, int) and expo >= 0:
            return _int_guard(base ** expo)
        return float(base) ** float(expo)

    def _e_transpose(self, e: TExpr):
        v = self.eval(e.children[0])
        if isinstance(v, SparseMatrix):
            out = v.transpose()
            if isinstance(e.type, MatrixT) and not e.type.sparse:
                return out.to_dense()
            return out
        arr = np.asarray(v, dtype=float)
        if arr.ndim == 1:
            return arr.reshape(1, -1).copy()
        return arr.T.copy()

    def _e_inverse(self, e: TExpr):
        v = self.eval(e.children[0])
        if isinstance(e.type, MatrixT):
            dense = v.to_dense() if isinstance(v, SparseMatrix) else v
            return numeric.solve_linear(dense, np.eye(dense.shape[0]))
        return 1.0 / float(v)

    def _e_neg(self, e: TExpr):
        v = self.eval(e.children[0])
        if isinstance(v, SparseMatrix):
            return v.scaled(-1.0)
        return -v

    def _e_subscript(self, e: TExpr):
        base = self.eval(e.children[0])
        indices = [int(self.eval(ix)) for ix in e.children[1:]]
        bt = e.children[0].type
        if isinstance(bt, SequenceT):
            self._index_check(indices[0], len(base), e)
            item = base[indices[0] - 1]
            return item
        if isinstance(bt, VectorT):
            self._index_check(indices[0], base.shape[0], e)
            return float(base[indices[0] - 1])
        i, j = indices
        if isinstance(base, SparseMatrix):
            self._index_check(i, base.rows, e)
            self._index_check(j, base.cols, e)
            return base.get(i - 1, j - 1)
        self._index_check(i, base.shape[0], e)
        self._index_check(j, base.shape[1], e)
        return float(base[i - 1, j - 1])

    @staticmethod
    def _index_check(i: int, n: int, e: TExpr):
        if not 1 <= i <= n:
            raise err("E_SHAPE", f"index {i} outside 1..{n}", e.span)

    def _e_norm(self, e: TExpr):
        v = self.eval(e.children[0])
        if isinstance(v, SparseMatrix):
            v = v.to_dense()
        arr = np.asarray(v, dtype=float)
        if arr.ndim == 2:
            return float(np.sqrt(np.sum(arr * arr)))  # Frobenius
        if e.flavor == "1":
            return float(np.sum(np.abs(arr)))
        if e.flavor == "∞":
            return float(np.max(np.abs(arr)))
        return float(np.sqrt(np.dot(arr, arr)))

    def _e_sum(self, e: TExpr):
        n = self.dim_value(e.domain.dim)
        body = e.children[0]
        total = self._zero_like(e.type)
        var = e.name
        outer = self.idx.get(var)
        for i in range(1, n + 1):
            self.idx[var] = i
            if e.domain.cond is not None and not self._cond(e.domain.cond):
                continue
            v = self.eval(body)
            if isinstance(v, SparseMatrix):
                v = v if isinstance(total, SparseMatrix) else v.to_dense()
            if isinstance(total, SparseMatrix):
                total = total.add(v)
            else:
                total = total + v
        if outer is None:
            self.idx.pop(var, None)
        else:
            self.idx[var] = outer
        if is_scalar(e.type) and isinstance(total, (int, float)):
            return float(total)
        return total

    def _zero_like(self, t: LaType):
        if is_scalar(t):
            return 0.0
        if isinstance(t, VectorT):
            return np.zeros(self.dim_value(t.dim))
        assert isinstance(t, MatrixT)
        rows, cols = self.dim_value(t.rows), self.dim_value(t.cols)
        if t.sparse:
            return SparseMatrix(rows, cols)
        return np.zeros((rows, cols))

    def _e_integral(self, e: TExpr):
        lo = float(self.eval(e.children[0]))
        hi = float(self.eval(e.children[1]))
        body = e.children[2]
        var = e.name
        outer = self.idx.get(var)

        def f(t: float) -> float:
            self.idx[var] = t
            return float(self.eval(body))

        try:
            return eval_integral(f, lo, hi)
        finally:
            if outer is None:
                self.idx.pop(var, None)
            else:
                self.idx[var] = outer

    def _e_matrix(self, e: TExpr):
        info = e.block
        heights = [self.dim_value(h) for h in info.row_heights]
        widths = [self.dim_value(w) for w in info.col_widths]
        total = (sum(heights), sum(widths))
        out = np.zeros(total)
        k = 0
        r0 = 0
        for r, h in enumerate(heights):
            c0 = 0
            for c, w in enumerate(widths):
                cell = e.children[k]
                k += 1
                v = self.eval(cell)
                if isinstance(v, SparseMatrix):
                    v = v.to_dense()
                if is_scalar(cell.type):
                    out[r0, c0] = float(v)
                elif isinstance(cell.type, VectorT):
                    out[r0:r0 + h, c0] = v
                else:
                    out[r0:r0 + h, c0:c0 + w] = v
                c0 += w
            r0 += h
        if isinstance(e.type, MatrixT) and e.type.sparse:
            return SparseMatrix.from_dense(out)
        return out

    def _e_piecewise(self, e: TExpr):
        for value, cond in e.arms:
            if self._cond(cond):
                return self.eval(value)
        return self.eval(e.children[0])

    def _e_call(self, e: TExpr):
        args = [self.eval(a) for a in e.children]
        return builtin(e.name, args)

    def _e_argmin(self, e: TExpr):
        raise err("E_UNSUPPORTED_TARGET",
                  "minimization cannot be evaluated by the reference "
                  "interpreter", e.span)

    # ----------------------------------------------------------- conditions

    def _cond(self, c: TCond) -> bool:
        if c.kind == "and":
            return self._cond(c.children[0]) and self._cond(c.children[1])
        if c.kind == "member":
            set_val = self.eval(c.children[0])
            tup = tuple(int(self.eval(x)) for x in c.children[1:])
            return tup in set_val
        lhs = float(self.eval(c.children[0]))
        rhs = float(self.eval(c.children[1]))
        return {
            "==": lhs == rhs, "≠": lhs != rhs, "<": lhs < rhs,
            ">": lhs > rhs, "≤": lhs <= rhs, "≥": lhs >= rhs,
        }[c.op]


def _membership_plan(rhs: TExpr, indices: tuple[str, str]):
    """Sparse fill plan: every conditional arm is driven by set membership
    over exactly the two element indices, and the otherwise arm is zero."""
    if rhs.kind != "piecewise":
        return None
    other = rhs.children[0]
    if not (other.kind == "num" and float(other.text) == 0.0):
        return None
    for _value, cond in rhs.arms:
        if cond.kind != "member" or cond.member_names != indices:
            return None
    return True


def evaluate(program: TypedProgram, inputs: dict) -> dict[str, object]:
    """Run a typed program on inputs; returns an ordered name -> value map."""
    if program.has_argmin:
        raise err("E_UNSUPPORTED_TARGET",
                  "programs with argmin/min cannot be evaluated")
    dims = validate_inputs(program, inputs)
    return _Evaluator(program, inputs, dims).run()
