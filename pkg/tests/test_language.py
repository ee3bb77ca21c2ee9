import pytest

from substdyn.core import parse_substitution
from substdyn.errors import MarginError
from substdyn.language import (LanguageTable, is_admissible,
                               periodic_point_search)

from conftest import brute_admitted


def words(sub, items):
    return sorted(sub.format_word(w) for w in items)


def test_admitted_examples(wild_ab):
    table = LanguageTable(wild_ab, 2)
    assert words(wild_ab, table.admitted(2)) == ["ab", "bb"]
    swap = parse_substitution("a -> b\nb -> a\n")
    ts = LanguageTable(swap, 2)
    assert words(swap, ts.admitted(1)) == ["a", "b"]
    assert ts.admitted(2) == []
    assert ts.empty_subshift
    assert table.admitted(0) == [()]


def test_admitted_matches_brute(fib, chacon):
    # powers chosen so factor sets of length <= 6 have saturated while the
    # iterates stay within the expansion budget
    for sub, power in ((fib, 12), (chacon, 8)):
        table = LanguageTable(sub, 6)
        oracle = brute_admitted(sub, 6, max_power=power)
        for length in range(7):
            assert set(table.admitted(length)) == oracle[length], (sub, length)


def test_legal_examples(wild_ab, fib):
    table = LanguageTable(wild_ab, 2)
    assert words(wild_ab, table.legal(1)) == ["b"]
    assert words(wild_ab, table.legal(2)) == ["bb"]
    assert table.is_admitted(("a", "b")) and not table.is_legal(("a", "b"))
    tf = LanguageTable(fib, 3)
    assert words(fib, tf.legal(3)) == ["001", "010", "100", "101"]
    assert words(fib, tf.legal(3)) == words(fib, tf.admitted(3))


def test_legality_drops_under_squaring():
    sub = parse_substitution("0 -> 0b 0b 1 0b\n0b -> 0 0 1 0\n1 -> 1\nX -> 0 0b\n")
    word = sub.parse_word("0 0b")
    table = LanguageTable(sub, 4)
    assert table.is_legal(word)
    assert table.legal_exact
    square = LanguageTable(sub.power(2), 4)
    assert not square.is_legal(word)


def test_factoriality_and_biextendability(fib_handle):
    table = LanguageTable(fib_handle, 6)
    for length in range(2, 7):
        admitted_shorter = set(table.admitted(length - 1))
        for word in table.admitted(length):
            assert word[:-1] in admitted_shorter
            assert word[1:] in admitted_shorter
        legal_shorter = set(table.legal(length - 1))
        legal_here = set(table.legal(length))
        for word in legal_here:
            assert word[:-1] in legal_shorter and word[1:] in legal_shorter
        for word in legal_shorter:
            assert any(v[:-1] == word for v in legal_here)
            assert any(v[1:] == word for v in legal_here)


def test_rauzy_graph(fib):
    table = LanguageTable(fib, 3)
    vertices, edges = table.rauzy(2)
    assert set(vertices) == set(table.admitted(2))
    for head, tail in edges:
        assert head in vertices and tail in vertices


def test_length_guards(fib):
    table = LanguageTable(fib, 3)
    with pytest.raises(MarginError):
        table.legal(10)


def test_periodic_point_search(fib, wild_ab):
    assert [wild_ab.format_word(w) for w in periodic_point_search(wild_ab, 1)] == ["b"]
    assert periodic_point_search(fib, 8) == []
    mixed = parse_substitution("a -> ab\nb -> a\nc -> cc\nd -> ca\n")
    assert [mixed.format_word(w) for w in periodic_point_search(mixed, 1)] == ["c"]


def test_admissibility(fib, wild_ab):
    assert is_admissible(fib)
    assert not is_admissible(wild_ab)
    three = parse_substitution("a -> aba\nb -> bbab\nc -> aa\n")
    assert not is_admissible(three)


def test_json_dict(wild_ab):
    table = LanguageTable(wild_ab, 2)
    data = table.to_json_dict()
    assert data["exact"] is True
    assert data["legal"]["2"] == ["bb"]
    assert data["admitted"]["2"] == ["ab", "bb"]
