"""The semantic type lattice: scalars, vectors, matrices, sequences,
sets of integer tuples, and functions.

Vectors are columns and are distinct from n-by-1 matrices; transposing a
vector yields a 1-by-n matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dims import DimExpr


class LaType:
    def render(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class ScalarR(LaType):
    def render(self) -> str:
        return "ℝ"


@dataclass(frozen=True)
class ScalarZ(LaType):
    def render(self) -> str:
        return "ℤ"


@dataclass(frozen=True)
class VectorT(LaType):
    dim: DimExpr

    def render(self) -> str:
        return f"ℝ^{_dim(self.dim)}"


@dataclass(frozen=True)
class MatrixT(LaType):
    rows: DimExpr
    cols: DimExpr
    sparse: bool = False

    def render(self) -> str:
        base = f"ℝ^({self.rows.render()}×{self.cols.render()})"
        return base + (" sparse" if self.sparse else "")


@dataclass(frozen=True)
class SequenceT(LaType):
    elem: LaType
    length: DimExpr

    def render(self) -> str:
        return f"sequence of {self.elem.render()} (length {self.length.render()})"


@dataclass(frozen=True)
class SetT(LaType):
    kinds: tuple[str, ...] = ("ℤ", "ℤ")  # per-slot scalar kind

    @property
    def arity(self) -> int:
        return len(self.kinds)

    def render(self) -> str:
        return "{" + "×".join(self.kinds) + "}"


@dataclass(frozen=True)
class FunctionT(LaType):
    params: tuple[LaType, ...]
    ret: LaType

    def render(self) -> str:
        dom = ", ".join(p.render() for p in self.params)
        return f"{dom} → {self.ret.render()}"


def _dim(d: DimExpr) -> str:
    text = d.render()
    return text if len(text) == 1 else f"({text})"


def is_scalar(t: LaType) -> bool:
    return isinstance(t, (ScalarR, ScalarZ))


def numeric_scalar(*types: LaType) -> LaType:
    """Join of scalar kinds: ℤ only when every operand is ℤ."""
    if all(isinstance(t, ScalarZ) for t in types):
        return ScalarZ()
    return ScalarR()
