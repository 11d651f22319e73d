"""Python/NumPy/SciPy code generator.

Each program becomes one function plus a small result class. The emitted
function validates every input dimension, extracts dimension variables
from input shapes, and returns an object with one attribute per defined
variable plus `ret`.

Expressions build an explicit PyNode tree before rendering; tests assert
on that tree (for instance the Table 1 product/solve shape and the
0-based index arithmetic) instead of scraping text.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dims import DimExpr
from ..latypes import (
    LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT, is_scalar,
)
from ..sema import TAssign, TCond, TElementAssign, TExpr, TypedProgram
from .mangle import Mangler

_INTEGRATE_HELPER = '''\
def _integrate(f, lo, hi, tol=1e-9, max_depth=40):
    """Adaptive Simpson quadrature to an absolute tolerance."""
    if lo == hi:
        return 0.0
    if lo > hi:
        return -_integrate(f, hi, lo, tol, max_depth)

    def simpson(a, fa, fm, fb, b):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(a, fa, flm, fm, m)
        right = simpson(m, fm, frm, fb, b)
        delta = left + right - whole
        if abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= max_depth:
            raise ArithmeticError("quadrature tolerance unreachable")
        return (recurse(a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2.0, depth + 1))

    fa, fb = f(lo), f(hi)
    m = 0.5 * (lo + hi)
    fm = f(m)
    return recurse(lo, hi, fa, fm, fb, simpson(lo, fa, fm, fb, hi), tol, 0)
'''


# ------------------------------------------------------------- expr tree

@dataclass(frozen=True)
class PyNode:
    op: str
    args: tuple = ()
    text: str = ""


def _name(text: str) -> PyNode:
    return PyNode("name", text=text)


def _num(text: str) -> PyNode:
    return PyNode("num", text=text)


_PREC = {
    "or": 4, "and": 5, "not": 6, "cmp": 7, "in": 7,
    "add": 10, "sub": 10, "mul": 20, "matmul": 20, "div": 20,
    "neg": 25, "pow": 30,
    "call": 40, "attr": 40, "item": 40, "name": 50, "num": 50, "tuple": 1,
    "ternary": 2,
}


def render(node: PyNode, min_prec: int = 0) -> str:
    text, prec = _render(node)
    if prec < min_prec:
        return f"({text})"
    return text


def _render(node: PyNode) -> tuple[str, int]:
    op = node.op
    if op in ("name", "num"):
        return node.text, _PREC[op]
    if op == "attr":
        return f"{render(node.args[0], _PREC['attr'])}.{node.text}", _PREC["attr"]
    if op == "call":
        args = ", ".join(render(a) for a in node.args[1:])
        return f"{render(node.args[0], _PREC['call'])}({args})", _PREC["call"]
    if op == "item":
        idx = ", ".join(render(a) for a in node.args[1:])
        return f"{render(node.args[0], _PREC['item'])}[{idx}]", _PREC["item"]
    if op in ("add", "sub", "mul", "matmul", "div"):
        sym = {"add": "+", "sub": "-", "mul": "*", "matmul": "@",
               "div": "/"}[op]
        p = _PREC[op]
        a = render(node.args[0], p)
        b = render(node.args[1], p + 1)
        return f"{a} {sym} {b}", p
    if op == "pow":
        a = render(node.args[0], _PREC["pow"] + 1)
        b = render(node.args[1], _PREC["pow"])
        return f"{a} ** {b}", _PREC["pow"]
    if op == "neg":
        return f"-{render(node.args[0], _PREC['neg'])}", _PREC["neg"]
    if op == "cmp":
        a = render(node.args[0], _PREC["cmp"] + 1)
        b = render(node.args[1], _PREC["cmp"] + 1)
        return f"{a} {node.text} {b}", _PREC["cmp"]
    if op == "in":
        a = render(node.args[0], _PREC["in"] + 1)
        b = render(node.args[1], _PREC["in"] + 1)
        return f"{a} in {b}", _PREC["in"]
    if op == "and":
        a = render(node.args[0], _PREC["and"])
        b = render(node.args[1], _PREC["and"])
        return f"{a} and {b}", _PREC["and"]
    if op == "tuple":
        inner = ", ".join(render(a) for a in node.args)
        return f"({inner})", _PREC["call"]
    if op == "ternary":
        then, cond, other = node.args
        return (f"{render(then, 3)} if {render(cond, 3)} "
                f"else {render(other, 2)}"), _PREC["ternary"]
    if op == "genexp":
        body, var, stop, cond = node.args
        text = f"{render(body, 3)} for {render(var)} in range(1, {render(stop)} + 1)"
        if cond is not None:
            text += f" if {render(cond, 3)}"
        return text, 1
    raise ValueError(op)


@dataclass
class IndexAccess:
    source: str  # 1-based index as written: a variable name or a literal
    emitted: str  # the 0-based index expression emitted


# ------------------------------------------------------------- generator

class PyGenerator:
    def __init__(self, program: TypedProgram, entry: str):
        self.p = program
        self.entry = entry
        self.m = Mangler("py")
        self.lines: list[str] = []
        self.indent = 1
        self.index_accesses: list[IndexAccess] = []
        self.expr_trees: dict[str, PyNode] = {}
        self.building: dict[str, str] = {}  # source name -> dict local
        self.uses_sparse = False
        self.uses_integral = False

    # ------------------------------------------------------------- plumbing

    def out(self, text: str = "") -> None:
        self.lines.append(("    " * self.indent + text) if text else "")

    def dim(self, d: DimExpr) -> PyNode:
        if d.is_constant:
            return _num(str(d.const))
        parts: list[PyNode] = []
        if d.const:
            parts.append(_num(str(d.const)))
        for mono, coeff in d.terms:
            node: PyNode | None = _num(str(coeff)) if coeff != 1 else None
            for v in mono:
                nv = _name(self.m.dim_name(v))
                node = nv if node is None else PyNode("mul", (node, nv))
            parts.append(node)
        total = parts[0]
        for part in parts[1:]:
            total = PyNode("add", (total, part))
        return total

    def dim_str(self, d: DimExpr) -> str:
        return render(self.dim(d))

    # ------------------------------------------------------------ top level

    def generate(self) -> str:
        body: list[str] = []
        self.lines = body
        self._prologue()
        for stmt in self.p.stmts:
            self._statement(stmt)
        self._finalize_open_builders()
        result_cls = self._result_class_name()
        args = ", ".join(self.m.mangle(name) for name in self.p.defined)
        self.out(f"return {result_cls}({args})")

        head: list[str] = []
        head.append(f'"""{self.entry}: generated linear algebra kernel."""')
        head.append("")
        head.append("import numpy as np")
        if self.uses_sparse:
            head.append("import scipy.sparse as sp")
        head.append("")
        head.append("")
        if self.uses_integral:
            head.append(_INTEGRATE_HELPER)
            head.append("")
        head.append(f"class {result_cls}:")
        fields = [self.m.mangle(name) for name in self.p.defined]
        head.append(f"    def __init__(self, {', '.join(fields)}):")
        for f_ in fields:
            head.append(f"        self.{f_} = {f_}")
        ret = self.m.mangle(self.p.ret_name)
        if ret != "ret":
            head.append(f"        self.ret = {ret}")
        head.append("")
        head.append("")
        params = ", ".join(self.m.mangle(tp.name) for tp in self.p.params)
        head.append(f"def {self.entry}({params}):")
        return "\n".join(head + body) + "\n"

    def _result_class_name(self) -> str:
        return f"{self.entry}_result"

    def _prologue(self) -> None:
        if any(self._type_uses_sparse(s) for s in self._all_types()):
            self.uses_sparse = True
        for tp in self.p.params:
            name = self.m.mangle(tp.name)
            t = tp.type
            if isinstance(t, ScalarZ):
                self.out(f"{name} = int({name})")
            elif isinstance(t, ScalarR):
                self.out(f"{name} = float({name})")
            elif isinstance(t, VectorT):
                self.out(f"{name} = np.asarray({name}, dtype=float)")
            elif isinstance(t, MatrixT) and not t.sparse:
                self.out(f"{name} = np.asarray({name}, dtype=float)")
            elif isinstance(t, MatrixT) and t.sparse:
                self.out(f"{name} = sp.csr_matrix({name})")
            elif isinstance(t, SequenceT):
                self.out(f"{name} = [np.asarray(_e, dtype=float) "
                         f"for _e in {name}]" if not is_scalar(t.elem)
                         else f"{name} = [float(_e) for _e in {name}]")
            elif isinstance(t, SetT):
                self.out(f"{name} = {{tuple(int(_c) for _c in _e) "
                         f"for _e in {name}}}")
        for src in self.p.dim_sources:
            dn = self.m.dim_name(src.var)
            pn = self.m.mangle(src.param)
            if src.accessor == "value":
                if dn != pn:
                    self.out(f"{dn} = {pn}")
            elif src.accessor == "len":
                self.out(f"{dn} = len({pn})")
            elif src.accessor == "dim":
                self.out(f"{dn} = {pn}.shape[0]")
            elif src.accessor == "rows":
                self.out(f"{dn} = {pn}.shape[0]")
            elif src.accessor == "cols":
                self.out(f"{dn} = {pn}.shape[1]")
            elif src.accessor == "elem_dim":
                self.out(f"{dn} = {pn}[0].shape[0]")
            elif src.accessor == "elem_rows":
                self.out(f"{dn} = {pn}[0].shape[0]")
            elif src.accessor == "elem_cols":
                self.out(f"{dn} = {pn}[0].shape[1]")
        for tp in self.p.params:
            self._shape_assert(tp.name, tp.type)
        self.out()

    def _all_types(self):
        for tp in self.p.params:
            yield tp.type
        for stmt in self.p.stmts:
            if isinstance(stmt, TAssign):
                yield stmt.expr.type
            else:
                yield stmt.target_type

    @staticmethod
    def _type_uses_sparse(t: LaType) -> bool:
        if isinstance(t, MatrixT):
            return t.sparse
        if isinstance(t, SequenceT):
            return PyGenerator._type_uses_sparse(t.elem)
        return False

    def _shape_assert(self, source_name: str, t: LaType) -> None:
        name = self.m.mangle(source_name)
        if isinstance(t, VectorT):
            self.out(f"assert {name}.shape == ({self.dim_str(t.dim)},), "
                     f"\"{source_name}: expected {t.render()}\"")
        elif isinstance(t, MatrixT):
            shape = f"({self.dim_str(t.rows)}, {self.dim_str(t.cols)})"
            self.out(f"assert {name}.shape == {shape}, "
                     f"\"{source_name}: expected {t.render()}\"")
        elif isinstance(t, SequenceT):
            self.out(f"assert len({name}) == {self.dim_str(t.length)}, "
                     f"\"{source_name}: sequence length\"")
            if isinstance(t.elem, VectorT):
                self.out(f"assert all(_e.shape == ({self.dim_str(t.elem.dim)},) "
                         f"for _e in {name})")
            elif isinstance(t.elem, MatrixT):
                shape = (f"({self.dim_str(t.elem.rows)}, "
                         f"{self.dim_str(t.elem.cols)})")
                self.out(f"assert all(_e.shape == {shape} for _e in {name})")
        elif isinstance(t, SetT):
            self.out(f"assert all(len(_e) == {t.arity} for _e in {name})")

    # ----------------------------------------------------------- statements

    def _statement(self, stmt) -> None:
        if isinstance(stmt, TAssign):
            self._finalize_open_builders()
            node = self.expr(stmt.expr)
            self.expr_trees[stmt.name] = node
            self.out(f"{self.m.mangle(stmt.name)} = {render(node)}")
            return
        assert isinstance(stmt, TElementAssign)
        self._element_statement(stmt)

    def _finalize_open_builders(self) -> None:
        for source, local in list(self.building.items()):
            name = self.m.mangle(source)
            t = None
            for stmt in self.p.stmts:
                if isinstance(stmt, TElementAssign) and stmt.name == source:
                    t = stmt.target_type
            assert isinstance(t, MatrixT)
            shape = f"({self.dim_str(t.rows)}, {self.dim_str(t.cols)})"
            self.out(f"_ij = sorted(_k for _k in {local} if {local}[_k] != 0.0)")
            self.out(f"{name} = sp.csr_matrix(([{local}[_k] for _k in _ij], "
                     f"([_k[0] for _k in _ij], [_k[1] for _k in _ij])), "
                     f"shape={shape})")
            del self.building[source]

    def _element_statement(self, stmt: TElementAssign) -> None:
        t = stmt.target_type
        name = self.m.mangle(stmt.name)
        if isinstance(t, MatrixT) and t.sparse:
            self._element_sparse(stmt, t)
            return
        self._finalize_open_builders()
        if isinstance(t, SequenceT):
            var = self.m.index_name(stmt.indices[0])
            n = self.dim_str(t.length)
            self.out(f"{name} = []")
            self.out(f"for {var} in range(1, {n} + 1):")
            self.indent += 1
            self.out(f"{name}.append({render(self.expr(stmt.rhs))})")
            self.indent -= 1
            return
        if isinstance(t, VectorT):
            var = self.m.index_name(stmt.indices[0])
            n = self.dim_str(t.dim)
            if stmt.first_for_name:
                self.out(f"{name} = np.zeros({n})")
            self.out(f"for {var} in range(1, {n} + 1):")
            self.indent += 1
            self.out(f"{name}[{var} - 1] = {render(self.expr(stmt.rhs))}")
            self.indent -= 1
            return
        assert isinstance(t, MatrixT)
        rows, cols = self.dim_str(t.rows), self.dim_str(t.cols)
        if stmt.first_for_name:
            self.out(f"{name} = np.zeros(({rows}, {cols}))")
        if stmt.diagonal:
            var = self.m.index_name(stmt.indices[0])
            stop = rows if rows == cols else f"min({rows}, {cols})"
            self.out(f"for {var} in range(1, {stop} + 1):")
            self.indent += 1
            self.out(f"{name}[{var} - 1, {var} - 1] = "
                     f"{render(self.expr(stmt.rhs))}")
            self.indent -= 1
            return
        vi = self.m.index_name(stmt.indices[0])
        vj = self.m.index_name(stmt.indices[1])
        self.out(f"for {vi} in range(1, {rows} + 1):")
        self.indent += 1
        self.out(f"for {vj} in range(1, {cols} + 1):")
        self.indent += 1
        self.out(f"{name}[{vi} - 1, {vj} - 1] = {render(self.expr(stmt.rhs))}")
        self.indent -= 2

    def _element_sparse(self, stmt: TElementAssign, t: MatrixT) -> None:
        self.uses_sparse = True
        local = f"_{self.m.mangle(stmt.name)}_vals"
        rows, cols = self.dim_str(t.rows), self.dim_str(t.cols)
        if stmt.first_for_name:
            self.out(f"{local} = {{}}")
            self.building[stmt.name] = local
        if stmt.diagonal:
            var = self.m.index_name(stmt.indices[0])
            stop = rows if rows == cols else f"min({rows}, {cols})"
            self.out(f"for {var} in range(1, {stop} + 1):")
            self.indent += 1
            self.out(f"{local}[({var} - 1, {var} - 1)] = "
                     f"{render(self.expr(stmt.rhs))}")
            self.indent -= 1
            return
        vi = self.m.index_name(stmt.indices[0])
        vj = self.m.index_name(stmt.indices[1])
        plan = self._membership_plan(stmt)
        if plan is not None:
            for value, cond in stmt.rhs.arms:
                set_node = self.expr(cond.children[0])
                self.out(f"for ({vi}, {vj}) in sorted({render(set_node)}):")
                self.indent += 1
                self.out(f"{local}[({vi} - 1, {vj} - 1)] = "
                         f"{render(self.expr(value))}")
                self.indent -= 1
            return
        self.out(f"for {vi} in range(1, {rows} + 1):")
        self.indent += 1
        self.out(f"for {vj} in range(1, {cols} + 1):")
        self.indent += 1
        self.out(f"{local}[({vi} - 1, {vj} - 1)] = "
                 f"{render(self.expr(stmt.rhs))}")
        self.indent -= 2

    @staticmethod
    def _membership_plan(stmt: TElementAssign):
        rhs = stmt.rhs
        if rhs.kind != "piecewise":
            return None
        other = rhs.children[0]
        if not (other.kind == "num" and float(other.text) == 0.0):
            return None
        for _value, cond in rhs.arms:
            if cond.kind != "member" or cond.member_names != stmt.indices:
                return None
        return True

    # ---------------------------------------------------------- expressions

    def expr(self, e: TExpr) -> PyNode:
        method = getattr(self, "_x_" + e.kind)
        return method(e)

    def _x_num(self, e: TExpr) -> PyNode:
        if isinstance(e.type, ScalarZ):
            return _num(e.text)
        return _num(e.text if "." in e.text else e.text + ".0")

    def _x_pi(self, e: TExpr) -> PyNode:
        return PyNode("attr", (_name("np"),), text="pi")

    def _x_ident(self, e: TExpr) -> PyNode:
        if e.name in self.building:
            return _name(self.building[e.name])
        return _name(self.m.mangle(e.name))

    def _x_index(self, e: TExpr) -> PyNode:
        return _name(self.m.index_name(e.name))

    def _x_identity(self, e: TExpr) -> PyNode:
        return PyNode("call", (PyNode("attr", (_name("np"),), text="eye"),
                               self.dim(e.dim)))

    def _x_zeros(self, e: TExpr) -> PyNode:
        shape = PyNode("tuple", (self.dim(e.dim), self.dim(e.dim2)))
        return PyNode("call", (PyNode("attr", (_name("np"),), text="zeros"),
                               shape))

    def _x_mul(self, e: TExpr) -> PyNode:
        a, b = e.children
        na, nb = self.expr(a), self.expr(b)
        if is_scalar(a.type) or is_scalar(b.type):
            return PyNode("mul", (na, nb))
        if isinstance(a.type, VectorT) and isinstance(b.type, MatrixT):
            # outer product: strip the transpose so np.outer sees the vector
            if b.kind == "transpose":
                nb = self.expr(b.children[0])
            return PyNode("call",
                          (PyNode("attr", (_name("np"),), text="outer"), na, nb))
        if isinstance(a.type, MatrixT) and isinstance(b.type, VectorT) \
                and is_scalar(e.type):
            # (1,n) @ (n,) stays an array unless the left side is a
            # transposed 1-D vector, so coerce explicitly
            transposed_vec = (a.kind == "transpose"
                              and isinstance(a.children[0].type, VectorT))
            prod = PyNode("matmul", (na, nb))
            if transposed_vec:
                return prod
            return PyNode("call", (_name("float"), prod))
        return PyNode("matmul", (na, nb))

    def _x_dot(self, e: TExpr) -> PyNode:
        return PyNode("call", (PyNode("attr", (_name("np"),), text="dot"),
                               self.expr(e.children[0]),
                               self.expr(e.children[1])))

    def _x_add(self, e: TExpr) -> PyNode:
        return PyNode("add", (self.expr(e.children[0]),
                              self.expr(e.children[1])))

    def _x_sub(self, e: TExpr) -> PyNode:
        return PyNode("sub", (self.expr(e.children[0]),
                              self.expr(e.children[1])))

    def _x_div(self, e: TExpr) -> PyNode:
        return PyNode("div", (self.expr(e.children[0]),
                              self.expr(e.children[1])))

    def _x_solve(self, e: TExpr) -> PyNode:
        a, b = e.children
        na = self.expr(a)
        if isinstance(a.type, MatrixT) and a.type.sparse:
            na = PyNode("call", (PyNode("attr", (na,), text="toarray"),))
        return PyNode("call",
                      (PyNode("attr", (PyNode("attr", (_name("np"),),
                                              text="linalg"),), text="solve"),
                       na, self.expr(b)))

    def _x_inverse(self, e: TExpr) -> PyNode:
        base = e.children[0]
        nb = self.expr(base)
        if is_scalar(base.type):
            return PyNode("div", (_num("1.0"), nb))
        if isinstance(base.type, MatrixT) and base.type.sparse:
            nb = PyNode("call", (PyNode("attr", (nb,), text="toarray"),))
        eye = PyNode("call", (PyNode("attr", (_name("np"),), text="eye"),
                              self.dim(base.type.rows)))
        return PyNode("call",
                      (PyNode("attr", (PyNode("attr", (_name("np"),),
                                              text="linalg"),), text="solve"),
                       nb, eye))

    def _x_cross(self, e: TExpr) -> PyNode:
        return PyNode("call", (PyNode("attr", (_name("np"),), text="cross"),
                               self.expr(e.children[0]),
                               self.expr(e.children[1])))

    def _x_kron(self, e: TExpr) -> PyNode:
        return PyNode("call", (PyNode("attr", (_name("np"),), text="kron"),
                               self.expr(e.children[0]),
                               self.expr(e.children[1])))

    def _x_hadamard(self, e: TExpr) -> PyNode:
        return PyNode("mul", (self.expr(e.children[0]),
                              self.expr(e.children[1])))

    def _x_pow(self, e: TExpr) -> PyNode:
        base, expo = e.children
        if isinstance(base.type, MatrixT):
            return PyNode("call",
                          (PyNode("attr", (PyNode("attr", (_name("np"),),
                                                  text="linalg"),),
                                  text="matrix_power"),
                           self.expr(base), self.expr(expo)))
        return PyNode("pow", (self.expr(base), self.expr(expo)))

    def _x_transpose(self, e: TExpr) -> PyNode:
        return PyNode("attr", (self.expr(e.children[0]),), text="T")

    def _x_neg(self, e: TExpr) -> PyNode:
        return PyNode("neg", (self.expr(e.children[0]),))

    def _x_subscript(self, e: TExpr) -> PyNode:
        base = e.children[0]
        indices = e.children[1:]
        emitted: list[PyNode] = []
        for ix in indices:
            node, source, text = self._index_zero_based(ix)
            emitted.append(node)
            self.index_accesses.append(IndexAccess(source, text))
        if base.kind == "ident" and base.name in self.building:
            local = self.building[base.name]
            key = PyNode("tuple", tuple(emitted))
            return PyNode("call", (PyNode("attr", (_name(local),), text="get"),
                                   key, _num("0.0")))
        nb = self.expr(base)
        if isinstance(base.type, SequenceT) or isinstance(base.type, VectorT):
            return PyNode("item", (nb, emitted[0]))
        return PyNode("item", (nb, *emitted))

    def _index_zero_based(self, ix: TExpr) -> tuple[PyNode, str, str]:
        if ix.kind == "num":
            value = int(ix.text)
            node = _num(str(value - 1))
            return node, ix.text, str(value - 1)
        if ix.kind == "index":
            name = self.m.index_name(ix.name)
            node = PyNode("sub", (_name(name), _num("1")))
            return node, name, f"{name} - 1"
        node = PyNode("sub", (self.expr(ix), _num("1")))
        return node, "<expr>", render(node)

    def _x_norm(self, e: TExpr) -> PyNode:
        body = e.children[0]
        nb = self.expr(body)
        if isinstance(body.type, MatrixT) and body.type.sparse:
            nb = PyNode("call", (PyNode("attr", (nb,), text="toarray"),))
        norm = PyNode("attr", (PyNode("attr", (_name("np"),), text="linalg"),),
                      text="norm")
        if e.flavor == "1":
            return PyNode("call", (norm, nb, _num("1")))
        if e.flavor == "∞":
            return PyNode("call", (norm, nb,
                                   PyNode("attr", (_name("np"),), text="inf")))
        if isinstance(body.type, MatrixT):
            return PyNode("call", (norm, nb, PyNode("name", text="'fro'")))
        return PyNode("call", (norm, nb))

    def _x_sum(self, e: TExpr) -> PyNode:
        var = self.m.index_name(e.name)
        body = self.expr(e.children[0])
        cond = self.cond(e.domain.cond) if e.domain.cond is not None else None
        gen = PyNode("genexp", (body, _name(var), self.dim(e.domain.dim), cond))
        return PyNode("call", (_name("sum"), gen))

    def _x_integral(self, e: TExpr) -> PyNode:
        self.uses_integral = True
        var = self.m.index_name(e.name)
        body = self.expr(e.children[2])
        lam = PyNode("name", text=f"lambda {var}: {render(body)}")
        return PyNode("call", (_name("_integrate"), lam,
                               self.expr(e.children[0]),
                               self.expr(e.children[1])))

    def _x_matrix(self, e: TExpr) -> PyNode:
        info = e.block
        rows_n, cols_n = info.shape
        all_scalar = all(is_scalar(c.type) for c in e.children)
        rows: list[PyNode] = []
        for r in range(rows_n):
            cells = e.children[r * cols_n:(r + 1) * cols_n]
            row = ", ".join(render(self.expr(c)) for c in cells)
            rows.append(row)
        if all_scalar:
            inner = "], [".join(rows)
            return PyNode("call",
                          (PyNode("attr", (_name("np"),), text="array"),
                           PyNode("name", text=f"[[{inner}]]"),
                           PyNode("name", text="dtype=float")))
        blocks = "], [".join(
            ", ".join(render(self._block_cell(c)) for c in
                      e.children[r * cols_n:(r + 1) * cols_n])
            for r in range(rows_n))
        return PyNode("call", (PyNode("attr", (_name("np"),), text="block"),
                               PyNode("name", text=f"[[{blocks}]]")))

    def _block_cell(self, c: TExpr) -> PyNode:
        node = self.expr(c)
        if isinstance(c.type, VectorT):
            # column block: np.block needs 2-D cells
            return PyNode("call",
                          (PyNode("attr", (node,), text="reshape"),
                           _num("-1"), _num("1")))
        if is_scalar(c.type):
            return node
        if isinstance(c.type, MatrixT) and c.type.sparse:
            return PyNode("call", (PyNode("attr", (node,), text="toarray"),))
        return node

    def _x_piecewise(self, e: TExpr) -> PyNode:
        node = self.expr(e.children[0])
        for value, cond in reversed(e.arms):
            node = PyNode("ternary", (self.expr(value), self.cond(cond), node))
        return node

    _NP_FUNCS = {
        "sin": "sin", "cos": "cos", "tan": "tan", "asin": "arcsin",
        "acos": "arccos", "atan": "arctan", "sinh": "sinh", "cosh": "cosh",
        "tanh": "tanh", "exp": "exp", "log": "log", "sqrt": "sqrt",
        "atan2": "arctan2",
    }

    def _x_call(self, e: TExpr) -> PyNode:
        args = tuple(self.expr(a) for a in e.children)
        name = e.name
        if name in self._NP_FUNCS:
            fn = PyNode("attr", (_name("np"),), text=self._NP_FUNCS[name])
            return PyNode("call", (fn, *args))
        if name == "tr":
            return PyNode("call", (PyNode("attr", (_name("np"),), text="trace"),
                                   *args))
        if name == "det":
            fn = PyNode("attr", (PyNode("attr", (_name("np"),), text="linalg"),),
                        text="det")
            return PyNode("call", (fn, *args))
        if name == "vec":
            return PyNode("call",
                          (PyNode("attr", (args[0],), text="flatten"),
                           PyNode("name", text="order='F'")))
        return PyNode("call", (_name(self.m.mangle(name)), *args))

    # ----------------------------------------------------------- conditions

    def cond(self, c: TCond) -> PyNode:
        if c.kind == "and":
            return PyNode("and", (self.cond(c.children[0]),
                                  self.cond(c.children[1])))
        if c.kind == "member":
            tup = PyNode("tuple", tuple(self.expr(x) for x in c.children[1:]))
            return PyNode("in", (tup, self.expr(c.children[0])))
        ops = {"==": "==", "≠": "!=", "<": "<", ">": ">", "≤": "<=", "≥": ">="}
        return PyNode("cmp", (self.expr(c.children[0]),
                              self.expr(c.children[1])), text=ops[c.op])


def generate(program: TypedProgram, entry_name: str) -> str:
    return PyGenerator(program, entry_name).generate()


def generator_for(program: TypedProgram, entry_name: str) -> PyGenerator:
    """Build and run a generator, returning it for structural inspection."""
    gen = PyGenerator(program, entry_name)
    gen.generated_text = gen.generate()
    return gen
