"""C++17/Eigen code generator.

Matrices with constant dimensions get statically sized Eigen types;
anything with a symbolic dimension uses MatrixXd/VectorXd. Sparse results
assemble through triplets into Eigen::SparseMatrix. Summations become
immediately-invoked lambdas so they stay usable in expression position.
"""

from __future__ import annotations

from ..dims import DimExpr
from ..latypes import (
    FunctionT, LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT,
    is_scalar,
)
from ..sema import TAssign, TCond, TElementAssign, TExpr, TypedProgram
from .mangle import Mangler
from .pygen import IndexAccess

_ATOM, _POSTFIX, _UNARY, _MULP, _ADDP, _CMP, _TERN = 50, 40, 25, 20, 10, 9, 3

_INTEGRATE_HELPER = '''\
inline double lina_integrate_step(const std::function<double(double)>& f,
                                  double a, double b, double fa, double fm,
                                  double fb, double whole, double tol,
                                  int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    assert(depth < 40 && "quadrature tolerance unreachable");
    return lina_integrate_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
         + lina_integrate_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

inline double lina_integrate(const std::function<double(double)>& f,
                             double lo, double hi) {
    if (lo == hi) {
        return 0.0;
    }
    if (lo > hi) {
        return -lina_integrate(f, hi, lo);
    }
    const double fa = f(lo), fb = f(hi);
    const double m = 0.5 * (lo + hi);
    const double fm = f(m);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return lina_integrate_step(f, lo, hi, fa, fm, fb, whole, 1e-9, 0);
}
'''

_STD_FUNCS = {
    "sin": "std::sin", "cos": "std::cos", "tan": "std::tan",
    "asin": "std::asin", "acos": "std::acos", "atan": "std::atan",
    "sinh": "std::sinh", "cosh": "std::cosh", "tanh": "std::tanh",
    "exp": "std::exp", "log": "std::log", "sqrt": "std::sqrt",
    "atan2": "std::atan2",
}


class CppGenerator:
    def __init__(self, program: TypedProgram, entry: str):
        self.p = program
        self.entry = entry
        self.m = Mangler("cpp")
        self.lines: list[str] = []
        self.indent = 1
        self.index_accesses: list[IndexAccess] = []
        self.building: dict[str, str] = {}
        self.uses_sparse = False
        self.uses_integral = False
        self.uses_function = False
        self.uses_set = False
        self.tmp_counter = 0

    # -------------------------------------------------------------- helpers

    def out(self, text: str = "") -> None:
        self.lines.append(("    " * self.indent + text) if text else "")

    def dim_str(self, d: DimExpr) -> str:
        if d.is_constant:
            return str(d.const)
        parts: list[str] = []
        if d.const:
            parts.append(str(d.const))
        for mono, coeff in d.terms:
            factors = [self.m.dim_name(v) for v in mono]
            if coeff != 1:
                factors.insert(0, str(coeff))
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def cpp_type(self, t: LaType) -> str:
        if isinstance(t, ScalarR):
            return "double"
        if isinstance(t, ScalarZ):
            return "long"
        if isinstance(t, VectorT):
            n = t.dim.constant_value()
            if n is not None:
                return f"Eigen::Matrix<double, {n}, 1>"
            return "Eigen::VectorXd"
        if isinstance(t, MatrixT):
            if t.sparse:
                self.uses_sparse = True
                return "Eigen::SparseMatrix<double>"
            r, c = t.rows.constant_value(), t.cols.constant_value()
            if r is not None and c is not None:
                return f"Eigen::Matrix<double, {r}, {c}>"
            return "Eigen::MatrixXd"
        if isinstance(t, SequenceT):
            return f"std::vector<{self.cpp_type(t.elem)}>"
        if isinstance(t, SetT):
            self.uses_set = True
            return f"std::set<std::array<long, {t.arity}>>"
        if isinstance(t, FunctionT):
            self.uses_function = True
            args = ", ".join(self._fn_arg_type(a) for a in t.params)
            return f"std::function<{self.cpp_type(t.ret)}({args})>"
        raise ValueError(t)

    def _fn_arg_type(self, t: LaType) -> str:
        if is_scalar(t):
            return self.cpp_type(t)
        return f"const {self.cpp_type(t)}&"

    def _param_decl(self, t: LaType, name: str) -> str:
        if is_scalar(t):
            return f"{self.cpp_type(t)} {name}"
        return f"const {self.cpp_type(t)}& {name}"

    def _tmp(self, base: str) -> str:
        self.tmp_counter += 1
        return f"_{base}{self.tmp_counter}"

    # ------------------------------------------------------------ top level

    def generate(self) -> str:
        body: list[str] = []
        self.lines = body
        self._prologue()
        for stmt in self.p.stmts:
            self._statement(stmt)
        self._finalize_open_builders()
        names = [self.m.mangle(n) for n in self.p.defined]
        ret = self.m.mangle(self.p.ret_name)
        if ret != "ret":
            names.append(ret)
        self.out(f"return {self.entry}_result{{{', '.join(names)}}};")

        head: list[str] = []
        head.append(f"// {self.entry}: generated linear algebra kernel.")
        head.append("")
        head.append("#include <Eigen/Dense>")
        if self.uses_sparse:
            head.append("#include <Eigen/SparseCore>")
        head.append("#include <cassert>")
        head.append("#include <cmath>")
        if self.uses_function or self.uses_integral:
            head.append("#include <functional>")
        if self.uses_sparse:
            head.append("#include <map>")
            head.append("#include <utility>")
        if self.uses_set:
            head.append("#include <array>")
            head.append("#include <set>")
        if self._uses_vector_container() or self.uses_sparse:
            head.append("#include <vector>")
        head.append("")
        if self.uses_integral:
            head.append(_INTEGRATE_HELPER)
            head.append("")
        head.append(f"struct {self.entry}_result {{")
        for name in self.p.defined:
            t = self._defined_type(name)
            head.append(f"    {self.cpp_type(t)} {self.m.mangle(name)};")
        if self.m.mangle(self.p.ret_name) != "ret":
            ret_t = self.cpp_type(self._defined_type(self.p.ret_name))
            head.append(f"    {ret_t} ret;")
        head.append("};")
        head.append("")
        params = ", ".join(self._param_decl(tp.type, self.m.mangle(tp.name))
                           for tp in self.p.params)
        head.append(f"inline {self.entry}_result {self.entry}({params}) {{")
        return "\n".join(head + body + ["}"]) + "\n"

    def _uses_vector_container(self) -> bool:
        return any(isinstance(t, SequenceT) for t in self._all_types())

    def _all_types(self):
        for tp in self.p.params:
            yield tp.type
        for stmt in self.p.stmts:
            yield stmt.expr.type if isinstance(stmt, TAssign) \
                else stmt.target_type

    def _defined_type(self, name: str) -> LaType:
        for stmt in self.p.stmts:
            if isinstance(stmt, TAssign) and stmt.name == name:
                return stmt.expr.type
            if isinstance(stmt, TElementAssign) and stmt.name == name:
                return stmt.target_type
        raise KeyError(name)

    def _prologue(self) -> None:
        for t in self._all_types():
            self.cpp_type(t)  # prime feature flags for includes
        for stmt in self.p.stmts:
            self._scan_features(stmt.expr if isinstance(stmt, TAssign)
                                else stmt.rhs)
        for src in self.p.dim_sources:
            dn = self.m.dim_name(src.var)
            pn = self.m.mangle(src.param)
            acc = src.accessor
            if acc == "value":
                if dn != pn:
                    self.out(f"const long {dn} = {pn};")
            elif acc == "len":
                self.out(f"const long {dn} = (long) {pn}.size();")
            elif acc in ("dim", "rows"):
                self.out(f"const long {dn} = {pn}.rows();")
            elif acc == "cols":
                self.out(f"const long {dn} = {pn}.cols();")
            elif acc in ("elem_dim", "elem_rows"):
                self.out(f"assert(!{pn}.empty());")
                self.out(f"const long {dn} = {pn}[0].rows();")
            elif acc == "elem_cols":
                self.out(f"assert(!{pn}.empty());")
                self.out(f"const long {dn} = {pn}[0].cols();")
        for tp in self.p.params:
            self._shape_assert(tp.name, tp.type)
        self.out()

    def _scan_features(self, e: TExpr) -> None:
        if e.kind == "integral":
            self.uses_integral = True
        for c in e.children:
            self._scan_features(c)
        for value, cond in e.arms:
            self._scan_features(value)
            for cc in cond.children:
                if isinstance(cc, TExpr):
                    self._scan_features(cc)

    def _shape_assert(self, source_name: str, t: LaType) -> None:
        name = self.m.mangle(source_name)
        if isinstance(t, VectorT):
            self.out(f"assert({name}.rows() == {self.dim_str(t.dim)});")
        elif isinstance(t, MatrixT):
            self.out(f"assert({name}.rows() == {self.dim_str(t.rows)} && "
                     f"{name}.cols() == {self.dim_str(t.cols)});")
        elif isinstance(t, SequenceT):
            self.out(f"assert((long) {name}.size() == {self.dim_str(t.length)});")
            if isinstance(t.elem, VectorT):
                self.out(f"for (const auto& _e : {name}) {{ "
                         f"assert(_e.rows() == {self.dim_str(t.elem.dim)}); }}")
            elif isinstance(t.elem, MatrixT):
                self.out(f"for (const auto& _e : {name}) {{ "
                         f"assert(_e.rows() == {self.dim_str(t.elem.rows)} && "
                         f"_e.cols() == {self.dim_str(t.elem.cols)}); }}")

    # ----------------------------------------------------------- statements

    def _statement(self, stmt) -> None:
        if isinstance(stmt, TAssign):
            self._finalize_open_builders()
            text = self.expr(stmt.expr)
            self.out(f"const {self.cpp_type(stmt.expr.type)} "
                     f"{self.m.mangle(stmt.name)} = {text};")
            return
        assert isinstance(stmt, TElementAssign)
        self._element_statement(stmt)

    def _finalize_open_builders(self) -> None:
        for source, local in list(self.building.items()):
            name = self.m.mangle(source)
            t = self._defined_type(source)
            assert isinstance(t, MatrixT)
            self.out(f"std::vector<Eigen::Triplet<double>> {local}_trip;")
            self.out(f"for (const auto& _kv : {local}) {{")
            self.indent += 1
            self.out("if (_kv.second != 0.0) {")
            self.indent += 1
            self.out(f"{local}_trip.emplace_back(_kv.first.first, "
                     "_kv.first.second, _kv.second);")
            self.indent -= 1
            self.out("}")
            self.indent -= 1
            self.out("}")
            self.out(f"Eigen::SparseMatrix<double> {name}"
                     f"({self.dim_str(t.rows)}, {self.dim_str(t.cols)});")
            self.out(f"{name}.setFromTriplets({local}_trip.begin(), "
                     f"{local}_trip.end());")
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
            self.out(f"std::vector<{self.cpp_type(t.elem)}> {name};")
            self.out(f"for (long {var} = 1; {var} <= {self.dim_str(t.length)}; "
                     f"++{var}) {{")
            self.indent += 1
            self.out(f"{name}.push_back({self.expr(stmt.rhs)});")
            self.indent -= 1
            self.out("}")
            return
        if isinstance(t, VectorT):
            var = self.m.index_name(stmt.indices[0])
            n = self.dim_str(t.dim)
            if stmt.first_for_name:
                self.out(f"{self.cpp_type(t)} {name} = "
                         f"{self._zero_text(t)};")
            self.out(f"for (long {var} = 1; {var} <= {n}; ++{var}) {{")
            self.indent += 1
            self.out(f"{name}({var} - 1) = {self.expr(stmt.rhs)};")
            self.indent -= 1
            self.out("}")
            return
        assert isinstance(t, MatrixT)
        rows, cols = self.dim_str(t.rows), self.dim_str(t.cols)
        if stmt.first_for_name:
            self.out(f"{self.cpp_type(t)} {name} = {self._zero_text(t)};")
        if stmt.diagonal:
            var = self.m.index_name(stmt.indices[0])
            stop = rows if rows == cols else f"std::min<long>({rows}, {cols})"
            self.out(f"for (long {var} = 1; {var} <= {stop}; ++{var}) {{")
            self.indent += 1
            self.out(f"{name}({var} - 1, {var} - 1) = {self.expr(stmt.rhs)};")
            self.indent -= 1
            self.out("}")
            return
        vi = self.m.index_name(stmt.indices[0])
        vj = self.m.index_name(stmt.indices[1])
        self.out(f"for (long {vi} = 1; {vi} <= {rows}; ++{vi}) {{")
        self.indent += 1
        self.out(f"for (long {vj} = 1; {vj} <= {cols}; ++{vj}) {{")
        self.indent += 1
        self.out(f"{name}({vi} - 1, {vj} - 1) = {self.expr(stmt.rhs)};")
        self.indent -= 1
        self.out("}")
        self.indent -= 1
        self.out("}")

    def _element_sparse(self, stmt: TElementAssign, t: MatrixT) -> None:
        self.uses_sparse = True
        local = f"_{self.m.mangle(stmt.name)}_vals"
        rows, cols = self.dim_str(t.rows), self.dim_str(t.cols)
        if stmt.first_for_name:
            self.out(f"std::map<std::pair<long, long>, double> {local};")
            self.building[stmt.name] = local
        if stmt.diagonal:
            var = self.m.index_name(stmt.indices[0])
            stop = rows if rows == cols else f"std::min<long>({rows}, {cols})"
            self.out(f"for (long {var} = 1; {var} <= {stop}; ++{var}) {{")
            self.indent += 1
            self.out(f"{local}[{{{var} - 1, {var} - 1}}] = "
                     f"{self.expr(stmt.rhs)};")
            self.indent -= 1
            self.out("}")
            return
        vi = self.m.index_name(stmt.indices[0])
        vj = self.m.index_name(stmt.indices[1])
        plan = self._membership_plan(stmt)
        if plan is not None:
            for value, cond in stmt.rhs.arms:
                set_text = self.expr(cond.children[0])
                self.out(f"for (const auto& _e : {set_text}) {{")
                self.indent += 1
                self.out(f"const long {vi} = _e[0];")
                self.out(f"const long {vj} = _e[1];")
                self.out(f"{local}[{{{vi} - 1, {vj} - 1}}] = "
                         f"{self.expr(value)};")
                self.indent -= 1
                self.out("}")
            return
        self.out(f"for (long {vi} = 1; {vi} <= {rows}; ++{vi}) {{")
        self.indent += 1
        self.out(f"for (long {vj} = 1; {vj} <= {cols}; ++{vj}) {{")
        self.indent += 1
        self.out(f"{local}[{{{vi} - 1, {vj} - 1}}] = {self.expr(stmt.rhs)};")
        self.indent -= 1
        self.out("}")
        self.indent -= 1
        self.out("}")

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

    def _zero_text(self, t: LaType) -> str:
        if isinstance(t, VectorT):
            n = t.dim.constant_value()
            if n is not None:
                return f"Eigen::Matrix<double, {n}, 1>::Zero()"
            return f"Eigen::VectorXd::Zero({self.dim_str(t.dim)})"
        assert isinstance(t, MatrixT)
        r, c = t.rows.constant_value(), t.cols.constant_value()
        if r is not None and c is not None and not t.sparse:
            return f"Eigen::Matrix<double, {r}, {c}>::Zero()"
        return (f"Eigen::MatrixXd::Zero({self.dim_str(t.rows)}, "
                f"{self.dim_str(t.cols)})")

    # ---------------------------------------------------------- expressions

    def expr(self, e: TExpr, min_prec: int = 0) -> str:
        text, prec = self._render(e)
        if prec < min_prec:
            return f"({text})"
        return text

    def _render(self, e: TExpr) -> tuple[str, int]:
        k = e.kind
        if k == "num":
            if isinstance(e.type, ScalarZ):
                return e.text, _ATOM
            return (e.text if "." in e.text else e.text + ".0"), _ATOM
        if k == "pi":
            return "M_PI", _ATOM
        if k == "ident":
            if e.name in self.building:
                return self.building[e.name], _ATOM
            return self.m.mangle(e.name), _ATOM
        if k == "index":
            return self.m.index_name(e.name), _ATOM
        if k == "identity":
            n = e.dim.constant_value()
            if n is not None:
                return f"Eigen::Matrix<double, {n}, {n}>::Identity()", _ATOM
            d = self.dim_str(e.dim)
            return f"Eigen::MatrixXd::Identity({d}, {d})", _ATOM
        if k == "zeros":
            r, c = self.dim_str(e.dim), self.dim_str(e.dim2)
            return f"Eigen::MatrixXd::Zero({r}, {c})", _ATOM
        if k == "mul":
            return self._render_mul(e)
        if k == "dot":
            a = self.expr(e.children[0], _POSTFIX)
            b = self.expr(e.children[1])
            return f"{a}.dot({b})", _POSTFIX
        if k in ("add", "sub"):
            op = "+" if k == "add" else "-"
            a = self.expr(e.children[0], _ADDP)
            b = self.expr(e.children[1], _ADDP + 1)
            return f"{a} {op} {b}", _ADDP
        if k == "div":
            a_child, b_child = e.children
            a = self.expr(a_child, _MULP)
            b = self.expr(b_child, _MULP + 1)
            if isinstance(a_child.type, ScalarZ) and isinstance(b_child.type,
                                                                ScalarZ):
                a = f"(double)({a})"
            return f"{a} / {b}", _MULP
        if k == "solve":
            a_child, b_child = e.children
            a = self.expr(a_child, _POSTFIX)
            if isinstance(a_child.type, MatrixT) and a_child.type.sparse:
                a = f"Eigen::MatrixXd({a})"
            b = self.expr(b_child)
            return f"{a}.partialPivLu().solve({b})", _POSTFIX
        if k == "inverse":
            base = e.children[0]
            if is_scalar(base.type):
                return f"1.0 / {self.expr(base, _MULP + 1)}", _MULP
            a = self.expr(base, _POSTFIX)
            if isinstance(base.type, MatrixT) and base.type.sparse:
                a = f"Eigen::MatrixXd({a})"
            return f"{a}.inverse()", _POSTFIX
        if k == "cross":
            a = self.expr(e.children[0], _POSTFIX)
            b = self.expr(e.children[1])
            return f"{a}.cross({b})", _POSTFIX
        if k == "kron":
            a = self.expr(e.children[0])
            b = self.expr(e.children[1])
            return f"Eigen::kroneckerProduct({a}, {b}).eval()", _POSTFIX
        if k == "hadamard":
            a = self.expr(e.children[0], _POSTFIX)
            b = self.expr(e.children[1], _POSTFIX)
            return f"{a}.cwiseProduct({b})", _POSTFIX
        if k == "pow":
            base, expo = e.children
            if isinstance(base.type, MatrixT):
                text = self.expr(base, _ATOM)
                n = int(expo.text)
                return "(" + " * ".join([text] * n) + ")", _ATOM
            return (f"std::pow({self.expr(base)}, {self.expr(expo)})"), _POSTFIX
        if k == "transpose":
            return f"{self.expr(e.children[0], _POSTFIX)}.transpose()", _POSTFIX
        if k == "neg":
            return f"-{self.expr(e.children[0], _UNARY)}", _UNARY
        if k == "subscript":
            return self._render_subscript(e)
        if k == "norm":
            body = e.children[0]
            nb = self.expr(body, _POSTFIX)
            if isinstance(body.type, MatrixT) and body.type.sparse:
                nb = f"Eigen::MatrixXd({nb})"
            if e.flavor == "1":
                return f"{nb}.lpNorm<1>()", _POSTFIX
            if e.flavor == "∞":
                return f"{nb}.lpNorm<Eigen::Infinity>()", _POSTFIX
            return f"{nb}.norm()", _POSTFIX
        if k == "sum":
            return self._render_sum(e)
        if k == "integral":
            self.uses_integral = True
            var = self.m.index_name(e.name)
            lo = self.expr(e.children[0])
            hi = self.expr(e.children[1])
            body = self.expr(e.children[2])
            return (f"lina_integrate([&](double {var}) {{ return {body}; }}, "
                    f"{lo}, {hi})"), _ATOM
        if k == "matrix":
            return self._render_matrix(e)
        if k == "piecewise":
            text = self.expr(e.children[0], _TERN)
            for value, cond in reversed(e.arms):
                text = (f"{self.cond(cond)} ? {self.expr(value, _TERN + 1)} "
                        f": {text}")
            return text, _TERN
        if k == "call":
            return self._render_call(e)
        raise ValueError(f"cpp: cannot render {k}")

    def _render_mul(self, e: TExpr) -> tuple[str, int]:
        a, b = e.children
        na = self.expr(a, _MULP)
        nb = self.expr(b, _MULP + 1)
        text = f"{na} * {nb}"
        if is_scalar(e.type) and not (is_scalar(a.type) and is_scalar(b.type)):
            return f"({text}).value()", _POSTFIX
        return text, _MULP

    def _render_subscript(self, e: TExpr) -> tuple[str, int]:
        base = e.children[0]
        parts: list[str] = []
        for ix in e.children[1:]:
            if ix.kind == "num":
                value = int(ix.text)
                parts.append(str(value - 1))
                self.index_accesses.append(IndexAccess(ix.text, str(value - 1)))
            elif ix.kind == "index":
                name = self.m.index_name(ix.name)
                parts.append(f"{name} - 1")
                self.index_accesses.append(IndexAccess(name, f"{name} - 1"))
            else:
                text = f"{self.expr(ix, _ADDP)} - 1"
                parts.append(text)
                self.index_accesses.append(IndexAccess("<expr>", text))
        if base.kind == "ident" and base.name in self.building:
            local = self.building[base.name]
            key = ", ".join(parts)
            return (f"({local}.count({{{key}}}) ? {local}.at({{{key}}}) : 0.0)",
                    _ATOM)
        nb = self.expr(base, _POSTFIX)
        bt = base.type
        if isinstance(bt, SequenceT):
            return f"{nb}[{parts[0]}]", _POSTFIX
        if isinstance(bt, VectorT):
            return f"{nb}({parts[0]})", _POSTFIX
        if isinstance(bt, MatrixT) and bt.sparse:
            return f"{nb}.coeff({parts[0]}, {parts[1]})", _POSTFIX
        return f"{nb}({', '.join(parts)})", _POSTFIX

    def _render_sum(self, e: TExpr) -> tuple[str, int]:
        var = self.m.index_name(e.name)
        acc_type = self.cpp_type(e.type)
        zero = "0.0" if is_scalar(e.type) else self._zero_text(e.type)
        n = self.dim_str(e.domain.dim)
        body = self.expr(e.children[0])
        cond = ""
        if e.domain.cond is not None:
            cond = f" if (!({self.cond(e.domain.cond)})) continue;"
        text = (f"[&] {{ {acc_type} _acc = {zero}; "
                f"for (long {var} = 1; {var} <= {n}; ++{var}) {{{cond} "
                f"_acc += {body}; }} return _acc; }}()")
        return text, _ATOM

    def _render_matrix(self, e: TExpr) -> tuple[str, int]:
        t = e.type
        assert isinstance(t, MatrixT)
        r, c = t.rows.constant_value(), t.cols.constant_value()
        if r is not None and c is not None and not t.sparse:
            ctor = f"Eigen::Matrix<double, {r}, {c}>()"
        else:
            ctor = (f"Eigen::MatrixXd({self.dim_str(t.rows)}, "
                    f"{self.dim_str(t.cols)})")
        cells = ", ".join(self.expr(cell) for cell in e.children)
        text = f"({ctor} << {cells}).finished()"
        if t.sparse:
            text = f"{text}.sparseView()"
        return text, _POSTFIX

    def _render_call(self, e: TExpr) -> tuple[str, int]:
        args = [self.expr(a) for a in e.children]
        name = e.name
        if name in _STD_FUNCS:
            return f"{_STD_FUNCS[name]}({', '.join(args)})", _POSTFIX
        if name == "tr":
            return f"{self.expr(e.children[0], _POSTFIX)}.trace()", _POSTFIX
        if name == "det":
            return (f"{self.expr(e.children[0], _POSTFIX)}.determinant()",
                    _POSTFIX)
        if name == "vec":
            a = self.expr(e.children[0])
            return (f"[&] {{ const Eigen::MatrixXd _m = {a}; "
                    "return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>"
                    "(_m.data(), _m.size())); }()"), _ATOM
        return f"{self.m.mangle(name)}({', '.join(args)})", _POSTFIX

    def cond(self, c: TCond) -> str:
        if c.kind == "and":
            return f"{self.cond(c.children[0])} && {self.cond(c.children[1])}"
        if c.kind == "member":
            names = ", ".join(self.expr(x) for x in c.children[1:])
            return f"{self.expr(c.children[0], _POSTFIX)}.count({{{names}}})"
        ops = {"==": "==", "≠": "!=", "<": "<", ">": ">", "≤": "<=", "≥": ">="}
        a = self.expr(c.children[0], _CMP + 1)
        b = self.expr(c.children[1], _CMP + 1)
        return f"{a} {ops[c.op]} {b}"


def generate(program: TypedProgram, entry_name: str) -> str:
    return CppGenerator(program, entry_name).generate()


def generator_for(program: TypedProgram, entry_name: str) -> CppGenerator:
    gen = CppGenerator(program, entry_name)
    gen.generated_text = gen.generate()
    return gen
