"""Tokenizer: Unicode/ASCII equivalence, spans, and error cases."""

import pytest

from lina.errors import LinaError
from lina.lexer import Token, TokenKind, tokenize
from lina.source import normalize


def kinds_and_lexemes(text):
    return [(t.kind, t.lexeme) for t in tokenize(normalize(text))]


def test_quadratic_form_tokens():
    toks = kinds_and_lexemes("xᵀDᵀDx")
    assert toks == [
        (TokenKind.IDENT, "x"), (TokenKind.SUPERSCRIPT, "T"),
        (TokenKind.IDENT, "D"), (TokenKind.SUPERSCRIPT, "T"),
        (TokenKind.IDENT, "D"), (TokenKind.IDENT, "x"),
    ]


def test_ascii_and_unicode_aliases_tokenize_identically():
    pairs = [
        ("A^T", "Aᵀ"),
        ("x^2", "x²"),
        ("a_2", "a₂"),
        ("P_i", "Pᵢ"),
        ("A^(-1)", "A⁻¹"),
        ("sum_i a_i", "Σ_i a_i"),
        ("sum_i a_i", "∑ᵢaᵢ"),
    ]
    for ascii_text, unicode_text in pairs:
        a = kinds_and_lexemes(ascii_text)
        b = kinds_and_lexemes(unicode_text)
        assert a == b, (ascii_text, unicode_text)


def test_type_annotation_tokens():
    toks = kinds_and_lexemes("A ∈ ℝ^(3×n)")
    assert toks == [
        (TokenKind.IDENT, "A"), (TokenKind.OPERATOR, "∈"),
        (TokenKind.KEYWORD, "ℝ"), (TokenKind.SUPERSCRIPT, "3×n"),
    ]


def test_keywords_and_letter_runs():
    assert kinds_and_lexemes("given") == [(TokenKind.KEYWORD, "given")]
    # a non-keyword run falls apart into single-letter identifiers
    assert kinds_and_lexemes("abc") == [
        (TokenKind.IDENT, "a"), (TokenKind.IDENT, "b"), (TokenKind.IDENT, "c")]
    assert kinds_and_lexemes("s.t.") == [(TokenKind.KEYWORD, "s.t.")]


def test_backtick_names():
    toks = tokenize(normalize("`w_smoothness` = 1"))
    assert toks[0].kind == TokenKind.IDENT
    assert toks[0].lexeme == "w_smoothness"


def test_unterminated_backtick():
    with pytest.raises(LinaError) as ex:
        tokenize(normalize("`oops"))
    assert ex.value.code == "E_UNTERMINATED_BACKTICK"


def test_bad_character():
    with pytest.raises(LinaError) as ex:
        tokenize(normalize("a = 3 $"))
    assert ex.value.code == "E_BADCHAR"
    assert ex.value.diagnostics[0].span == (6, 7)


def test_combining_marks_attach_to_identifier():
    toks = tokenize(normalize("x̂ n̂ᵢ"))
    assert toks[0].lexeme == "x̂"
    assert toks[1].lexeme == "n̂"
    assert toks[2].kind == TokenKind.SUBSCRIPT and toks[2].lexeme == "i"


def test_numbers():
    assert kinds_and_lexemes("3 0.5 .5") == [
        (TokenKind.NUMBER, "3"), (TokenKind.NUMBER, "0.5"),
        (TokenKind.NUMBER, ".5")]


def test_determinism():
    text = "q = ( ∑_i P_i )⁻¹ ( ∑_i P_i p_i )"
    assert tokenize(normalize(text)) == tokenize(normalize(text))


def test_lossless_spans():
    text = "D = ABC\nc = xᵀDᵀDx ⋅ 2\n‖v‖₂"
    src = normalize(text)
    toks = tokenize(src)
    prev = 0
    rebuilt = []
    for t in toks:
        start, end = t.span
        assert start >= prev, "tokens overlap or go backwards"
        gap = src.text[prev:start]
        assert gap.strip() == "", "only whitespace may fall between tokens"
        rebuilt.append(gap)
        rebuilt.append(src.text[start:end])
        prev = end
    rebuilt.append(src.text[prev:])
    assert "".join(rebuilt) == src.text


def test_gap_tracking_for_matrix_elements():
    toks = tokenize(normalize("[2a 0]"))
    lexemes = [(t.lexeme, t.gap_before) for t in toks]
    assert lexemes == [("[", False), ("2", False), ("a", False),
                       ("0", True), ("]", False)]


def test_norm_flavor_subscripts():
    toks = kinds_and_lexemes("‖x‖_∞ ‖A‖_F ‖y‖₁")
    assert (TokenKind.SUBSCRIPT, "∞") in toks
    assert (TokenKind.SUBSCRIPT, "F") in toks
    assert (TokenKind.SUBSCRIPT, "1") in toks
