"""Deterministic, per-program-injective identifier mangling.

Greek letters spell out (β -> beta), combining marks become suffixes
(x̂ -> x_hat), decorations keep their underscore form (θ₁ -> theta_1) and
anything else collapses to underscores. Collisions resolve by a numeric
suffix in first-seen order, so two distinct source names never share an
emitted name inside one unit.
"""

from __future__ import annotations

import keyword
import unicodedata

GREEK = {
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "ε": "epsilon",
    "ϵ": "epsilon", "ζ": "zeta", "η": "eta", "θ": "theta", "ϑ": "theta",
    "ι": "iota", "κ": "kappa", "λ": "lambda", "μ": "mu", "ν": "nu",
    "ξ": "xi", "ο": "omicron", "π": "pi", "ρ": "rho", "σ": "sigma",
    "ς": "sigma", "τ": "tau", "υ": "upsilon", "φ": "phi", "ϕ": "phi",
    "χ": "chi", "ψ": "psi", "ω": "omega",
    "Γ": "Gamma", "Δ": "Delta", "Θ": "Theta", "Λ": "Lambda", "Ξ": "Xi",
    "Π": "Pi", "Φ": "Phi", "Ψ": "Psi", "Ω": "Omega",
}

MARKS = {
    "̀": "grave", "́": "prime", "̂": "hat", "̃": "tilde",
    "̄": "bar", "̅": "bar", "̆": "breve", "̇": "dot",
    "̈": "ddot", "̊": "ring", "́": "prime", "⃗": "vec",
}

_PY_RESERVED = set(keyword.kwlist) | {"np", "sp", "math"}
_CPP_RESERVED = {
    "int", "long", "short", "char", "bool", "float", "double", "void",
    "auto", "const", "constexpr", "static", "struct", "class", "enum",
    "union", "for", "while", "do", "if", "else", "switch", "case", "return",
    "break", "continue", "new", "delete", "this", "true", "false", "nullptr",
    "namespace", "using", "template", "typename", "operator", "public",
    "private", "protected", "virtual", "inline", "friend", "sizeof",
}


def ascii_base(name: str) -> str:
    """Spell a Unicode identifier as an ASCII identifier, not yet unique."""
    out: list[str] = []
    pending_marks: list[str] = []
    for ch in name:
        if ch.isascii() and (ch.isalnum() or ch == "_"):
            out.append(ch)
        elif ch in GREEK:
            out.append(GREEK[ch])
        elif unicodedata.category(ch) in ("Mn", "Me"):
            pending_marks.append(MARKS.get(ch, f"m{ord(ch):04x}"))
        else:
            out.append("_")
    for m in pending_marks:
        out.append("_" + m)
    text = "".join(out)
    while "__" in text:
        text = text.replace("__", "_")
    text = text.strip("_")
    if not text:
        text = "v"
    if text[0].isdigit():
        text = "v" + text
    return text


class Mangler:
    """First-seen-wins name table for one emitted unit."""

    def __init__(self, reserved: str = "py"):
        self._reserved = _PY_RESERVED if reserved == "py" else _CPP_RESERVED
        self._by_source: dict[str, str] = {}
        self._taken: set[str] = set(self._reserved)

    def mangle(self, source: str, base: str | None = None) -> str:
        if source in self._by_source:
            return self._by_source[source]
        cand = base if base is not None else ascii_base(source)
        if cand in self._reserved:
            cand = cand + "_"
        if cand in self._taken:
            k = 2
            while f"{cand}_{k}" in self._taken:
                k += 1
            cand = f"{cand}_{k}"
        self._taken.add(cand)
        self._by_source[source] = cand
        return cand

    def dim_name(self, var: str) -> str:
        if var.startswith("#"):
            return self.mangle(var, base=f"dim_{ascii_base(var[1:])}")
        return self.mangle(var)

    def index_name(self, var: str) -> str:
        return self.mangle(f"index:{var}", base=ascii_base(var))
