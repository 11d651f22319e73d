"""Runtime values and their JSON encoding (the value-document format).

Scalars are plain Python numbers (float for ℝ, int for ℤ). Vectors and
dense matrices are float64 numpy arrays. Sparse matrices keep a dict of
0-based (row, col) -> value; triplets() presents them sorted, 1-based and
with explicit zeros dropped, which is the published wire form.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import err
from .latypes import (
    FunctionT, LaType, MatrixT, ScalarR, ScalarZ, SequenceT, SetT, VectorT,
)


class SparseMatrix:
    def __init__(self, rows: int, cols: int,
                 data: dict[tuple[int, int], float] | None = None):
        self.rows = rows
        self.cols = cols
        self.data = data if data is not None else {}

    def get(self, i: int, j: int) -> float:
        return self.data.get((i, j), 0.0)

    def set(self, i: int, j: int, value: float) -> None:
        if value == 0.0:
            self.data.pop((i, j), None)
        else:
            self.data[(i, j)] = float(value)

    def triplets(self) -> list[tuple[int, int, float]]:
        """Sorted, 1-based, zero-free coordinate triplets."""
        return [(i + 1, j + 1, v) for (i, j), v in sorted(self.data.items())
                if v != 0.0]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        for (i, j), v in self.data.items():
            out[i, j] = v
        return out

    @staticmethod
    def from_dense(a: np.ndarray) -> "SparseMatrix":
        out = SparseMatrix(a.shape[0], a.shape[1])
        for i, j in zip(*np.nonzero(a)):
            out.data[(int(i), int(j))] = float(a[i, j])
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): v for (i, j), v in self.data.items()})

    def scaled(self, k: float) -> "SparseMatrix":
        if k == 0.0:
            return SparseMatrix(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols,
                            {ij: k * v for ij, v in self.data.items()})

    def add(self, other: "SparseMatrix | np.ndarray",
            sign: float = 1.0) -> "SparseMatrix":
        out = dict(self.data)
        if isinstance(other, SparseMatrix):
            items = other.data.items()
        else:
            items = (((int(i), int(j)), float(other[i, j]))
                     for i, j in zip(*np.nonzero(other)))
        for ij, v in items:
            s = out.get(ij, 0.0) + sign * v
            if s == 0.0:
                out.pop(ij, None)
            else:
                out[ij] = s
        return SparseMatrix(self.rows, self.cols, out)

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        by_row: dict[int, list[tuple[int, float]]] = {}
        for (i, k), v in other.data.items():
            by_row.setdefault(i, []).append((k, v))
        out: dict[tuple[int, int], float] = {}
        for (i, k), v in self.data.items():
            for j, w in by_row.get(k, ()):
                ij = (i, j)
                s = out.get(ij, 0.0) + v * w
                out[ij] = s
        out = {ij: v for ij, v in out.items() if v != 0.0}
        return SparseMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.triplets() == other.triplets())

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}×{self.cols}, nnz={len(self.data)})"


Value = "float | int | np.ndarray | SparseMatrix | list | frozenset"


# ----------------------------------------------------------------- encoding

def encode_value(v) -> object:
    if isinstance(v, bool):
        raise err("E_JSON", "booleans are not values")
    if isinstance(v, (int, float, np.integer, np.floating)):
        if isinstance(v, (int, np.integer)):
            return int(v)
        f = float(v)
        return f
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, SparseMatrix):
        return {"rows": v.rows, "cols": v.cols,
                "triplets": [[i, j, val] for i, j, val in v.triplets()]}
    if isinstance(v, list):
        return [encode_value(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return [list(t) for t in sorted(v)]
    raise err("E_JSON", f"cannot encode value of type {type(v).__name__}")


def _expect(cond: bool, path: str, what: str):
    if not cond:
        raise err("E_JSON", f"at {path}: expected {what}")


def decode_value(doc, latype: LaType, path: str = "$"):
    """Type-directed decoding of one JSON value. Shapes against bound
    dimension variables are the interpreter's concern; this only checks
    structure."""
    if isinstance(latype, ScalarZ):
        _expect(isinstance(doc, (int, float)) and not isinstance(doc, bool)
                and float(doc) == int(doc), path, "an integer")
        v = int(doc)
        _expect(-(2 ** 63) <= v < 2 ** 63, path, "a 64-bit integer")
        return v
    if isinstance(latype, ScalarR):
        _expect(isinstance(doc, (int, float)) and not isinstance(doc, bool),
                path, "a number")
        return float(doc)
    if isinstance(latype, VectorT):
        _expect(isinstance(doc, list) and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in doc),
            path, "an array of numbers")
        return np.array(doc, dtype=float)
    if isinstance(latype, MatrixT):
        if isinstance(doc, dict):
            _expect(set(doc) == {"rows", "cols", "triplets"}, path,
                    '{"rows", "cols", "triplets"}')
            rows, cols = doc["rows"], doc["cols"]
            _expect(isinstance(rows, int) and isinstance(cols, int), path,
                    "integer rows/cols")
            out = SparseMatrix(rows, cols)
            for k, t in enumerate(doc["triplets"]):
                _expect(isinstance(t, list) and len(t) == 3, f"{path}.triplets[{k}]",
                        "[i, j, value]")
                i, j, v = t
                _expect(isinstance(i, int) and isinstance(j, int),
                        f"{path}.triplets[{k}]", "integer indices")
                _expect(1 <= i <= rows and 1 <= j <= cols,
                        f"{path}.triplets[{k}]", "indices in range (1-based)")
                out.set(i - 1, j - 1, float(v))
            return out if latype.sparse else out.to_dense()
        _expect(isinstance(doc, list) and doc and all(
            isinstance(r, list) for r in doc), path, "an array of arrays")
        width = len(doc[0])
        _expect(all(len(r) == width for r in doc), path, "rectangular rows")
        dense = np.array(doc, dtype=float)
        return SparseMatrix.from_dense(dense) if latype.sparse else dense
    if isinstance(latype, SequenceT):
        _expect(isinstance(doc, list), path, "an array (sequence)")
        return [decode_value(x, latype.elem, f"{path}[{k}]")
                for k, x in enumerate(doc)]
    if isinstance(latype, SetT):
        _expect(isinstance(doc, list), path, "an array of tuples")
        out = set()
        for k, t in enumerate(doc):
            _expect(isinstance(t, list) and len(t) == latype.arity,
                    f"{path}[{k}]", f"a {latype.arity}-tuple")
            _expect(all(isinstance(x, int) for x in t), f"{path}[{k}]",
                    "integer members")
            out.add(tuple(t))
        return frozenset(out)
    if isinstance(latype, FunctionT):
        raise err("E_EVAL_FN",
                  "function-typed parameters cannot be read from a values "
                  "document")
    raise err("E_JSON", f"at {path}: cannot decode a {latype.render()}")


def load_value_document(text: str, params) -> dict[str, object]:
    """Parse a JSON document of inputs keyed by parameter name."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as ex:
        raise err("E_JSON", f"invalid JSON: {ex}") from None
    if not isinstance(doc, dict):
        raise err("E_JSON", "the values document must be a JSON object")
    out = {}
    by_name = {p.name: p for p in params}
    for name, sub in doc.items():
        if name not in by_name:
            raise err("E_JSON", f"unknown input {name!r}")
        out[name] = decode_value(sub, by_name[name].type, f"$.{name}")
    missing = [p.name for p in params if p.name not in out]
    if missing:
        raise err("E_JSON", f"missing inputs: {', '.join(missing)}")
    return out
