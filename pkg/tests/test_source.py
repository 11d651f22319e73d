"""Source normalization and the ASCII substitution table."""

import unicodedata

import pytest
from hypothesis import given, strategies as st

from lina.errors import LinaError
from lina.source import (
    SourceFile, SubstitutionTable, default_table, normalize, substitute_ascii,
)


def test_newline_canonicalization():
    src = normalize("A\r\nB")
    assert src.text == "A\nB"
    assert src.line_starts == (0, 2)


def test_nfc_composes_combining_accent():
    decomposed = "é"
    src = normalize(decomposed)
    assert src.text == "é"


def test_empty_input():
    src = normalize("")
    assert src.text == ""
    assert src.line_starts == (0,)


def test_bad_bytes_is_encoding_error():
    with pytest.raises(LinaError) as ex:
        normalize(b"\xff\xfe\x00abc")
    assert ex.value.code == "E_ENCODING"


def test_position_mapping():
    src = normalize("ab\ncd\n")
    assert src.position(0) == (1, 1)
    assert src.position(3) == (2, 1)
    assert src.position(4) == (2, 2)


def test_substitute_default_entries():
    assert substitute_ascii(r"x \in \R^3") == "x ∈ ℝ^3"


def test_substitute_backtick_spans_untouched():
    assert substitute_ascii("`w_smoothness`") == "`w_smoothness`"
    assert substitute_ascii(r"`a\in` \in") == "`a\\in` ∈"


def test_substitute_fixpoint_on_plain_text():
    assert substitute_ascii("no triggers here") == "no triggers here"


def test_longest_match_wins_for_in_vs_int():
    # \in is a prefix of \int; longest match keeps them distinct
    assert substitute_ascii(r"\int_0^1") == "∫_0^1"
    assert substitute_ascii(r"\in E") == "∈ E"


def test_default_table_matches_published_contract():
    table = default_table()
    assert table.entries[r"\sum"] == "Σ"
    assert table.entries[r"\T"] == "ᵀ"
    assert table.entries[r"\inv"] == "⁻¹"
    assert table.entries[r"\|"] == "‖"
    assert len(table.entries) == 16


def test_published_copies_of_the_table_are_identical():
    from pathlib import Path
    root = Path(__file__).resolve().parent.parent
    packaged = (root / "src/lina/data/substitutions.json").read_text("utf-8")
    docs = (root / "docs/substitutions.json").read_text("utf-8")
    playground = (root / "frontend/public/substitutions.json").read_text("utf-8")
    assert docs == packaged
    assert playground == packaged


def test_replacements_contain_no_triggers():
    table = default_table()
    for replacement in table.entries.values():
        for trigger in table.entries:
            assert trigger not in replacement


def test_table_rejects_trigger_inside_replacement():
    with pytest.raises(ValueError):
        SubstitutionTable({r"\a": r"x\b", r"\b": "y"})


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)),
               max_size=80))
def test_substitution_idempotent(text):
    once = substitute_ascii(text)
    assert substitute_ascii(once) == once
