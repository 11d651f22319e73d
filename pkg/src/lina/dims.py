"""Symbolic dimension algebra.

A DimExpr is a canonical linear combination of monomials in dimension
variables with positive integer coefficients plus a nonnegative constant.
Monomials (rather than bare variables) appear because Kronecker products
and vec() produce dimensions like m*n. Equality of canonical forms is the
whole decision procedure: n+3 equals 3+n, n never equals m.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DimExpr:
    const: int
    terms: tuple[tuple[tuple[str, ...], int], ...]  # (sorted monomial, coeff)

    # ------------------------------------------------------------ constructors

    @staticmethod
    def constant(value: int) -> "DimExpr":
        if value < 0:
            raise ValueError("dimension constants are nonnegative")
        return DimExpr(value, ())

    @staticmethod
    def var(name: str) -> "DimExpr":
        return DimExpr(0, (((name,), 1),))

    @staticmethod
    def _build(const: int, terms: dict[tuple[str, ...], int]) -> "DimExpr":
        kept = tuple(sorted((m, c) for m, c in terms.items() if c != 0))
        if any(c < 0 for _, c in kept) or const < 0:
            raise ValueError("negative dimension")
        return DimExpr(const, kept)

    # ------------------------------------------------------------- arithmetic

    def __add__(self, other: "DimExpr") -> "DimExpr":
        terms = dict(self.terms)
        for m, c in other.terms:
            terms[m] = terms.get(m, 0) + c
        return DimExpr._build(self.const + other.const, terms)

    def scale(self, k: int) -> "DimExpr":
        if k < 0:
            raise ValueError("negative scale")
        return DimExpr._build(self.const * k, {m: c * k for m, c in self.terms})

    def __mul__(self, other: "DimExpr") -> "DimExpr":
        terms: dict[tuple[str, ...], int] = {}
        const = self.const * other.const
        for m, c in self.terms:
            if other.const:
                terms[m] = terms.get(m, 0) + c * other.const
        for m, c in other.terms:
            if self.const:
                terms[m] = terms.get(m, 0) + c * self.const
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(sorted(m1 + m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return DimExpr._build(const, terms)

    def minus(self, other: "DimExpr") -> "DimExpr | None":
        """self - other if representable (all coefficients stay >= 0)."""
        const = self.const - other.const
        if const < 0:
            return None
        terms = dict(self.terms)
        for m, c in other.terms:
            left = terms.get(m, 0) - c
            if left < 0:
                return None
            terms[m] = left
        return DimExpr._build(const, terms)

    # ---------------------------------------------------------------- queries

    @property
    def is_constant(self) -> bool:
        return not self.terms

    def constant_value(self) -> int | None:
        return self.const if self.is_constant else None

    def vars(self) -> set[str]:
        return {v for m, _ in self.terms for v in m}

    def coeff_of_var(self, name: str) -> int:
        for m, c in self.terms:
            if m == (name,):
                return c
        return 0

    def drop_var(self, name: str) -> "DimExpr":
        return DimExpr._build(
            self.const, {m: c for m, c in self.terms if m != (name,)})

    def contains_var_in_product(self, name: str) -> bool:
        return any(name in m and len(m) > 1 for m, _ in self.terms)

    def value(self, bindings: dict[str, int]) -> int:
        total = self.const
        for m, c in self.terms:
            prod = c
            for v in m:
                if v not in bindings:
                    raise KeyError(f"unbound dimension variable {v}")
                prod *= bindings[v]
            total += prod
        return total

    def render(self) -> str:
        if self.is_constant:
            return str(self.const)
        parts = []
        for m, c in self.terms:
            mono = "".join(m) if all(len(v) == 1 for v in m) else "·".join(m)
            parts.append(mono if c == 1 else f"{c}{mono}")
        if self.const:
            parts.append(str(self.const))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()


def unify_dims(a: DimExpr, b: DimExpr, unknown: str | None = None):
    """Compare two canonical dims.

    Returns "equal" or "unequal"; when `unknown` is given and occurs
    linearly on exactly one side, returns ("constraint", name, solution)
    binding the unknown so both sides match, as block inference needs.
    """
    if a == b:
        return "equal"
    if unknown is not None:
        for lhs, rhs in ((a, b), (b, a)):
            c = lhs.coeff_of_var(unknown)
            if c == 1 and not lhs.contains_var_in_product(unknown) \
                    and unknown not in rhs.vars():
                rest = lhs.drop_var(unknown)
                solved = rhs.minus(rest)
                if solved is not None:
                    return ("constraint", unknown, solved)
    return "unequal"
