"""Shared test utilities: pipeline shortcuts and random generators.

Two generators live here. ast_program() builds random well-formed surface
ASTs for the parse/unparse round trip; typed_program() builds random
dimension-consistent programs together with matching random inputs for
the soundness and differential suites.
"""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np

from lina import analyze, frontend, prepare_source
from lina import ast_nodes as A
from lina.dims import DimExpr
from lina.latypes import MatrixT, ScalarR, SequenceT, VectorT
from lina.sema import TypedProgram, TExpr

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
NEGATIVE = CORPUS / "negative"
GOLDENS = ROOT / "tests" / "goldens"
VALUES = CORPUS / "values"


def corpus_files() -> list[Path]:
    return sorted(CORPUS.glob("*.la"))


def compile_file(path: Path) -> TypedProgram:
    _, tp = frontend(path.read_text(encoding="utf-8"), str(path))
    return tp


def compile_text(text: str) -> TypedProgram:
    _, tp = frontend(text)
    return tp


# ------------------------------------------------------- surface generator

_SCALARS = ["a", "k", "t"]
_VECTORS = ["u", "v", "w"]
_MATRICES = ["M", "N"]
_SEQS = ["s"]
_INDICES = ["i", "j"]
_LHS = ["f", "g", "h", "z"]


def _gen_atom(rng: random.Random, depth: int) -> A.Expr:
    roll = rng.random()
    if roll < 0.25:
        return A.Number(rng.choice(["1", "2", "3", "0.5", "7"]))
    if roll < 0.8 or depth <= 0:
        return A.Ident(rng.choice(_SCALARS + _VECTORS + _MATRICES))
    if roll < 0.9:
        return A.Subscript(A.Ident(rng.choice(_SEQS + _VECTORS)),
                           (A.Ident(rng.choice(_INDICES)),))
    return A.Norm(_gen_expr(rng, depth - 1), rng.choice(["", "1", "2", "∞", "F"]))


def _gen_postfix(rng: random.Random, depth: int) -> A.Expr:
    base = _gen_atom(rng, depth)
    roll = rng.random()
    if roll < 0.15:
        return A.Transpose(base)
    if roll < 0.25:
        return A.Inverse(base)
    if roll < 0.35:
        return A.Pow(base, A.Number(rng.choice(["2", "3"])))
    return base


def _gen_mul_term(rng: random.Random, depth: int) -> A.Expr:
    """A multiplicative-level tree, usable as a Sum body."""
    left = _gen_postfix(rng, depth)
    for _ in range(rng.randint(0, 2)):
        if depth <= 0:
            break
        op = rng.random()
        right = _gen_postfix(rng, depth - 1)
        if op < 0.5:
            left = A.Mul(left, right)
        elif op < 0.65:
            left = A.DotOp(left, right)
        elif op < 0.8:
            left = A.Div(left, right)
        elif op < 0.9:
            left = A.Hadamard(left, right)
        else:
            left = A.Kron(left, right)
    return left


def _gen_expr(rng: random.Random, depth: int) -> A.Expr:
    roll = rng.random()
    if roll < 0.12 and depth > 0:
        idx = rng.choice(_INDICES)
        body = _gen_sum_body(rng, depth - 1, idx)
        cond = None
        if rng.random() < 0.3:
            other = "i" if idx == "j" else "j"
            cond = A.Compare("≠", (A.Ident(idx),), A.Ident(other))
        return A.Sum(idx, body, cond)
    if roll < 0.2 and depth > 0:
        rows = rng.randint(1, 2)
        cols = rng.randint(1, 2)
        grid = tuple(tuple(_gen_mul_term(rng, 0) for _ in range(cols))
                     for _ in range(rows))
        return A.MatrixLit(grid)
    if roll < 0.28 and depth > 0:
        var = rng.choice(["x", "y"])
        body = A.Mul(A.Ident(var), A.Ident(rng.choice(_SCALARS)))
        return A.Integral(var, A.Number("0"), A.Number("1"), body,
                          rng.random() < 0.5)
    term = _gen_mul_term(rng, depth)
    for _ in range(rng.randint(0, 2)):
        if depth <= 0:
            break
        right = _gen_mul_term(rng, depth - 1)
        term = A.Add(term, right) if rng.random() < 0.6 else A.Sub(term, right)
    if rng.random() < 0.1:
        term = A.Neg(term)
    return term


def _gen_sum_body(rng: random.Random, depth: int, idx: str) -> A.Expr:
    base = A.Subscript(A.Ident(rng.choice(_SEQS)), (A.Ident(idx),))
    if depth <= 0 or rng.random() < 0.4:
        return base
    return A.Mul(base, _gen_postfix(rng, depth - 1))


def ast_program(seed: int) -> A.ProgramAst:
    """A random well-formed surface program (not necessarily well-typed)."""
    rng = random.Random(seed)
    params = []
    dim_n = DimExpr.var("n")
    for name in _SCALARS:
        params.append(A.ParamDecl(name, A.TypeAnnotation(kind="scalarR")))
    for name in _VECTORS:
        params.append(A.ParamDecl(
            name, A.TypeAnnotation(kind="vector", rows=dim_n)))
    for name in _MATRICES:
        params.append(A.ParamDecl(
            name, A.TypeAnnotation(kind="matrix", rows=dim_n, cols=dim_n)))
    params.append(A.ParamDecl("s", A.TypeAnnotation(kind="vector", rows=dim_n),
                              seq_index="i"))
    stmts = []
    for k in range(rng.randint(1, 3)):
        stmts.append(A.AssignStmt(_LHS[k], _gen_expr(rng, 2)))
    if rng.random() < 0.3:
        stmts.append(A.ExprStmt(_gen_expr(rng, 1)))
    return A.ProgramAst(imports=(), params=tuple(params), stmts=tuple(stmts))


# --------------------------------------------------- typed program generator

class TypedGen:
    """Random dimension-consistent programs plus matching inputs."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)
        self.dims: dict[str, int] = {}

    def _dim(self) -> tuple[str, int]:
        name = self.rng.choice(["n", "m", "2", "3"])
        if name.isdigit():
            return name, int(name)
        if name not in self.dims:
            self.dims[name] = self.rng.randint(1, 8)
        return name, self.dims[name]

    def build(self) -> tuple[str, dict[str, object]]:
        rng = self.rng
        self.dims = {}
        decls: list[str] = []
        env: dict[str, tuple[str, tuple[int, ...]]] = {}
        inputs: dict[str, object] = {}

        def add_scalar(name):
            decls.append(f"{name} ∈ ℝ")
            env[name] = ("scalar", ())
            inputs[name] = round(rng.uniform(-3, 3), 3)

        def add_vector(name):
            d, dv = self._dim()
            decls.append(f"{name} ∈ ℝ^{d}" if len(d) == 1
                         else f"{name} ∈ ℝ^({d})")
            env[name] = ("vector", (d,))
            inputs[name] = np.round(rng_normal(rng, (dv,)), 3)

        def add_matrix(name, square=False):
            r, rv = self._dim()
            c, cv = (r, rv) if square else self._dim()
            decls.append(f"{name} ∈ ℝ^({r}×{c})")
            env[name] = ("matrix", (r, c))
            inputs[name] = np.round(rng_normal(rng, (rv, cv)), 3)

        def add_seq(name):
            d, dv = self._dim()
            length = rng.randint(1, 5)
            decls.append(f"{name}_i ∈ ℝ^{d}" if len(d) == 1
                         else f"{name}_i ∈ ℝ^({d})")
            env[name] = ("seqvec", (d,))
            inputs[name] = [np.round(rng_normal(rng, (dv,)), 3)
                            for _ in range(length)]

        add_scalar("a")
        add_vector("u")
        add_vector("v")
        add_matrix("M")
        add_matrix("Q", square=True)
        if rng.random() < 0.7:
            add_seq("p")

        stmts: list[str] = []
        for lhs in ["f", "g"][:rng.randint(1, 2)]:
            stmts.append(f"{lhs} = {self._scalar_expr(env, 2)}")
        program = "given\n" + "\n".join(decls) + "\n\n" + "\n".join(stmts) + "\n"
        return program, inputs

    def _scalar_expr(self, env, depth: int) -> str:
        rng = self.rng
        choices = ["num", "var", "norm", "dot", "sumseq", "arith", "quad"]
        if depth <= 0:
            choices = ["num", "var"]
        kind = rng.choice(choices)
        scalars = [n for n, (k, _) in env.items() if k == "scalar"]
        vectors = [(n, s) for n, (k, s) in env.items() if k == "vector"]
        if kind == "num":
            return rng.choice(["2", "0.5", "3", "1.5"])
        if kind == "var":
            return rng.choice(scalars)
        if kind == "norm":
            n, _ = rng.choice(vectors)
            flavor = rng.choice(["", "", "₁", "₂"])
            return f"‖{n}‖{flavor}"
        if kind == "dot":
            same = {}
            for n, s in vectors:
                same.setdefault(s, []).append(n)
            options = [group for group in same.values()]
            group = rng.choice(options)
            x = rng.choice(group)
            y = rng.choice(group)
            return f"{x} ⋅ {y}"
        if kind == "sumseq":
            seqs = [(n, s) for n, (k, s) in env.items() if k == "seqvec"]
            if not seqs:
                return self._scalar_expr(env, depth - 1)
            n, _ = rng.choice(seqs)
            return f"∑_i ‖{n}_i‖²"
        if kind == "quad":
            sq = [(n, s) for n, (k, s) in env.items()
                  if k == "matrix" and s[0] == s[1]]
            vec = [n for n, (k, s) in env.items()
                   if k == "vector" and sq and s[0] == sq[0][1][0]]
            if not sq or not vec:
                return self._scalar_expr(env, depth - 1)
            m = sq[0][0]
            x = rng.choice(vec)
            return f"{x}ᵀ{m}{x}"
        left = self._scalar_expr(env, depth - 1)
        right = self._scalar_expr(env, depth - 1)
        op = rng.choice([" + ", " - ", " ⋅ ", "/"])
        if op == "/":
            return f"{left}/({right} + 9)"
        return f"{left}{op}{right}"


def rng_normal(rng: random.Random, shape: tuple[int, ...]) -> np.ndarray:
    flat = [rng.gauss(0, 1) for _ in range(int(np.prod(shape)))]
    return np.array(flat).reshape(shape)


def random_inputs_for(tp: TypedProgram, rng: random.Random,
                      lo: int = 1, hi: int = 8) -> dict[str, object]:
    """Random inputs matching a typed program's parameter shapes."""
    mins = literal_index_minimums(tp)
    dims: dict[str, int] = {}

    def dim_value(d: DimExpr) -> int:
        total = d.const
        for mono, coeff in d.terms:
            prod = coeff
            for v in mono:
                if v not in dims:
                    dims[v] = rng.randint(max(lo, mins.get(v, lo)), hi)
                prod *= dims[v]
            total += prod
        return total

    from lina.latypes import ScalarZ, SetT, FunctionT, ScalarR as _R

    inputs: dict[str, object] = {}
    for p in tp.params:
        t = p.type
        if isinstance(t, ScalarZ):
            name = p.name
            if any(s.var == name and s.accessor == "value"
                   for s in tp.dim_sources):
                if name not in dims:
                    dims[name] = rng.randint(max(lo, mins.get(name, lo)), hi)
                inputs[name] = dims[name]
            else:
                inputs[name] = rng.randint(-5, 5)
        elif isinstance(t, _R):
            inputs[p.name] = round(rng.uniform(-3, 3), 6)
        elif isinstance(t, VectorT):
            inputs[p.name] = rng_normal(rng, (dim_value(t.dim),))
        elif isinstance(t, MatrixT):
            arr = rng_normal(rng, (dim_value(t.rows), dim_value(t.cols)))
            if t.sparse:
                from lina.values import SparseMatrix
                arr[np.abs(arr) < 0.8] = 0.0
                inputs[p.name] = SparseMatrix.from_dense(arr)
            else:
                inputs[p.name] = arr
        elif isinstance(t, SequenceT):
            length = dim_value(t.length)
            elems = []
            for _ in range(length):
                if isinstance(t.elem, VectorT):
                    elems.append(rng_normal(rng, (dim_value(t.elem.dim),)))
                elif isinstance(t.elem, MatrixT):
                    elems.append(rng_normal(rng, (dim_value(t.elem.rows),
                                                  dim_value(t.elem.cols))))
                else:
                    elems.append(rng.uniform(-3, 3))
            inputs[p.name] = elems
        elif isinstance(t, SetT):
            n = dims.get("n", rng.randint(max(lo, mins.get("n", 2)), hi))
            dims.setdefault("n", n)
            members = set()
            for _ in range(rng.randint(1, max(1, n))):
                i = rng.randint(1, n)
                j = rng.randint(1, n)
                if i != j:
                    members.add((i, j))
            inputs[p.name] = frozenset(members)
        elif isinstance(t, FunctionT):
            raise ValueError("function parameters have no random inputs")
    return inputs


def literal_index_minimums(tp: TypedProgram) -> dict[str, int]:
    """Smallest dimension values allowed by literal subscripts (x_3 needs
    the dimension of x to be at least 3)."""
    mins: dict[str, int] = {}

    def visit(e: TExpr):
        if e.kind == "subscript":
            base_t = e.children[0].type
            slots = []
            if isinstance(base_t, SequenceT):
                slots = [base_t.length]
            elif isinstance(base_t, VectorT):
                slots = [base_t.dim]
            elif isinstance(base_t, MatrixT):
                slots = [base_t.rows, base_t.cols]
            for ix, slot in zip(e.children[1:], slots):
                if ix.kind == "num":
                    for v in slot.vars():
                        mins[v] = max(mins.get(v, 1), int(ix.text))
        for c in e.children:
            visit(c)
        for value, cond in e.arms:
            visit(value)
            for cc in cond.children:
                if isinstance(cc, TExpr):
                    visit(cc)

    for stmt in tp.stmts:
        visit(stmt.expr if hasattr(stmt, "expr") else stmt.rhs)
    return mins
