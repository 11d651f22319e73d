"""Tokenizer for Unicode math notation.

Identifiers are single letters (with attached combining marks) or
backtick-quoted names; multi-letter words are either reserved keywords or
fall apart into one-letter identifiers, and the parser reassembles runs
that pass 1 registered as multi-letter names. Unicode superscript and
subscript runs and their ASCII aliases (^2, _i, ^(-1)) canonicalize to the
same tokens, so either spelling parses identically.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from enum import Enum, auto

from .errors import Span, err
from .source import SourceFile, normalize


class TokenKind(Enum):
    IDENT = auto()
    NUMBER = auto()
    OPERATOR = auto()
    SUPERSCRIPT = auto()
    SUBSCRIPT = auto()
    KEYWORD = auto()
    DELIM = auto()
    NEWLINE = auto()


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span
    gap_before: bool = field(default=False, compare=False)

    def __repr__(self) -> str:
        return f"{self.kind.name}({self.lexeme!r})"


KEYWORDS = {
    "given", "where", "if", "otherwise", "for", "sum", "from",
    "argmin", "min", "sparse", "and",
}

# Unicode superscript characters and their canonical ASCII content.
SUPERSCRIPT_MAP = {
    "⁰": "0", "¹": "1", "²": "2", "³": "3", "⁴": "4",
    "⁵": "5", "⁶": "6", "⁷": "7", "⁸": "8", "⁹": "9",
    "⁺": "+", "⁻": "-", "⁽": "(", "⁾": ")",
    "ᵀ": "T", "ⁿ": "n", "ᵐ": "m", "ᵏ": "k",
}

SUBSCRIPT_MAP = {
    "₀": "0", "₁": "1", "₂": "2", "₃": "3", "₄": "4",
    "₅": "5", "₆": "6", "₇": "7", "₈": "8", "₉": "9",
    "₊": "+", "₋": "-", "₍": "(", "₎": ")",
    "ᵢ": "i", "ⱼ": "j", "ₖ": "k", "ₗ": "l", "ₘ": "m", "ₙ": "n", "ₓ": "x",
}

# Two-character ASCII operator aliases, tried before single characters.
TWO_CHAR_OPS = {"!=": "≠", "<=": "≤", ">=": "≥", "->": "→", "==": "=="}

SINGLE_OPS = {
    "+": "+", "-": "-", "/": "/", "\\": "\\", "=": "=", "<": "<", ">": ">",
    "⋅": "⋅", "·": "⋅", "×": "×", "⊗": "⊗", "∘": "∘", "∈": "∈",
    "≤": "≤", "≥": "≥", "≠": "≠", "→": "→", "*": "*",
}

DELIMS = {"(", ")", "[", "]", "{", "}", ",", ";", ":", "‖", "|"}

SIGMA_CHARS = {"Σ", "∑"}


def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch) in ("Lu", "Ll", "Lt", "Lo")


def _is_digit(ch: str) -> bool:
    # ASCII only: unicode sub/superscript digits also satisfy str.isdigit
    return "0" <= ch <= "9"


def _is_mark(ch: str) -> bool:
    return unicodedata.category(ch) in ("Mn", "Me")


def tokenize(src: SourceFile | str) -> list[Token]:
    """Tokenize a normalized source file. Raises LinaError on bad input."""
    if isinstance(src, str):
        src = normalize(src)
    text = src.text
    n = len(text)
    tokens: list[Token] = []
    i = 0
    prev_end = 0

    def emit(kind: TokenKind, lexeme: str, start: int, end: int) -> None:
        nonlocal prev_end
        tokens.append(Token(kind, lexeme, (start, end), gap_before=start > prev_end))
        prev_end = end

    def read_letter_unit(j: int) -> int:
        """Return the end offset of letter + attached combining marks at j."""
        j += 1
        while j < n and _is_mark(text[j]):
            j += 1
        return j

    def read_balanced(j: int, open_ch: str, close_ch: str) -> int:
        depth = 0
        k = j
        while k < n:
            if text[k] == open_ch:
                depth += 1
            elif text[k] == close_ch:
                depth -= 1
                if depth == 0:
                    return k + 1
            elif text[k] == "\n":
                break
            k += 1
        raise err("E_PARSE", f"unbalanced {open_ch!r}", (j, min(j + 1, n)))

    while i < n:
        ch = text[i]

        if ch in (" ", "\t"):
            i += 1
            continue
        if ch == "\n":
            emit(TokenKind.NEWLINE, "\n", i, i + 1)
            i += 1
            continue

        if ch == "`":
            j = text.find("`", i + 1)
            if j < 0 or "\n" in text[i + 1:j]:
                raise err("E_UNTERMINATED_BACKTICK",
                          "backtick-quoted name is never closed", (i, min(i + 1, n)))
            emit(TokenKind.IDENT, text[i + 1:j], i, j + 1)
            i = j + 1
            continue

        if text.startswith("s.t.", i):
            emit(TokenKind.KEYWORD, "s.t.", i, i + 4)
            i += 4
            continue

        if _is_digit(ch) or (ch == "." and i + 1 < n and _is_digit(text[i + 1])):
            j = i
            seen_dot = False
            while j < n and (_is_digit(text[j]) or (text[j] == "." and not seen_dot
                                                    and j + 1 < n and _is_digit(text[j + 1]))):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            emit(TokenKind.NUMBER, text[i:j], i, j)
            i = j
            continue

        if ch in SUPERSCRIPT_MAP:
            j = i
            content = []
            while j < n and text[j] in SUPERSCRIPT_MAP:
                content.append(SUPERSCRIPT_MAP[text[j]])
                j += 1
            emit(TokenKind.SUPERSCRIPT, "".join(content), i, j)
            i = j
            continue

        if ch in SUBSCRIPT_MAP:
            j = i
            content = []
            while j < n and text[j] in SUBSCRIPT_MAP:
                content.append(SUBSCRIPT_MAP[text[j]])
                j += 1
            emit(TokenKind.SUBSCRIPT, "".join(content), i, j)
            i = j
            continue

        if ch == "^":
            if i + 1 < n and text[i + 1] == "(":
                end = read_balanced(i + 1, "(", ")")
                emit(TokenKind.SUPERSCRIPT, text[i + 2:end - 1].strip(), i, end)
                i = end
                continue
            j = i + 1
            if j < n and text[j] in "+-" and j + 1 < n and _is_digit(text[j + 1]):
                j += 1
            if j < n and _is_digit(text[j]):
                while j < n and _is_digit(text[j]):
                    j += 1
                emit(TokenKind.SUPERSCRIPT, text[i + 1:j], i, j)
                i = j
                continue
            if j < n and _is_letter(text[j]):
                j = read_letter_unit(j)
                emit(TokenKind.SUPERSCRIPT, text[i + 1:j], i, j)
                i = j
                continue
            raise err("E_PARSE", "superscript content expected after '^'", (i, i + 1))

        if ch == "_":
            if i + 1 < n and text[i + 1] == "(":
                end = read_balanced(i + 1, "(", ")")
                emit(TokenKind.SUBSCRIPT, text[i + 2:end - 1].strip(), i, end)
                i = end
                continue
            if i + 1 < n and text[i + 1] == "[":
                end = read_balanced(i + 1, "[", "]")
                emit(TokenKind.SUBSCRIPT, text[i + 1:end], i, end)
                i = end
                continue
            j = i + 1
            if j < n and text[j] == "∞":
                emit(TokenKind.SUBSCRIPT, "∞", i, j + 1)
                i = j + 1
                continue
            content = []
            while j < n and (_is_digit(text[j]) or _is_letter(text[j]) or text[j] == ","):
                if _is_digit(text[j]) or text[j] == ",":
                    content.append(text[j])
                    j += 1
                else:
                    k = read_letter_unit(j)
                    content.append(text[j:k])
                    j = k
            if not content:
                raise err("E_PARSE", "subscript content expected after '_'", (i, i + 1))
            emit(TokenKind.SUBSCRIPT, "".join(content), i, j)
            i = j
            continue

        if ch in ("ℝ", "ℤ"):
            emit(TokenKind.KEYWORD, ch, i, i + 1)
            i += 1
            continue
        if ch in SIGMA_CHARS:
            emit(TokenKind.KEYWORD, "sum", i, i + 1)
            i += 1
            continue
        if ch == "∫":
            emit(TokenKind.KEYWORD, "int", i, i + 1)
            i += 1
            continue
        if ch == "∞":
            emit(TokenKind.IDENT, "∞", i, i + 1)
            i += 1
            continue

        if _is_letter(ch):
            # Maximal run of letter units: a keyword if it matches exactly,
            # otherwise one IDENT per unit (juxtaposition handles the rest).
            units: list[tuple[str, int, int]] = []
            j = i
            while j < n and _is_letter(text[j]):
                k = read_letter_unit(j)
                units.append((text[j:k], j, k))
                j = k
            word = "".join(u[0] for u in units)
            if word in KEYWORDS:
                emit(TokenKind.KEYWORD, word, i, j)
            else:
                for lexeme, s, e in units:
                    emit(TokenKind.IDENT, lexeme, s, e)
            i = j
            continue

        two = text[i:i + 2]
        if two in TWO_CHAR_OPS:
            emit(TokenKind.OPERATOR, TWO_CHAR_OPS[two], i, i + 2)
            i += 2
            continue
        if ch in SINGLE_OPS:
            emit(TokenKind.OPERATOR, SINGLE_OPS[ch], i, i + 1)
            i += 1
            continue
        if ch in DELIMS:
            emit(TokenKind.DELIM, ch, i, i + 1)
            i += 1
            continue

        raise err("E_BADCHAR", f"character {ch!r} cannot appear in a program", (i, i + 1))

    return tokens


def lex_fragment(fragment: str) -> list[Token]:
    """Tokenize superscript/subscript content for structural parsing."""
    return tokenize(normalize(fragment))
