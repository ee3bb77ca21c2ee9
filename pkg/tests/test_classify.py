import pytest

from substdyn.classify import (WildWitness, classify_letters, decide_tameness,
                               find_seed, frontier_maps, is_minimal,
                               wild_periodic_word)
from substdyn.core import PointedWord, parse_substitution
from substdyn.corpus import sigma_family
from substdyn.errors import WildInputError, WitnessError
from substdyn.language import LanguageTable, periodic_point_search

from conftest import brute_bounded_letters, brute_iterate


def test_classification_examples(wild_ab):
    limits = parse_substitution("a -> aaca\nb -> b\nc -> bb\n")
    cl = classify_letters(limits)
    assert set(cl.bounded) == {"b", "c"} and set(cl.expanding) == {"a"}
    tame = parse_substitution("a -> abb\nb -> bbb\n")
    cl2 = classify_letters(tame)
    assert not cl2.bounded
    cl3 = classify_letters(wild_ab)
    assert set(cl3.bounded) == {"b"}
    assert set(cl3.a_right) == {"a"} and not cl3.a_left


def test_classification_matches_iteration_oracle(fib, chacon, wild_ab):
    subs = [fib, chacon, wild_ab,
            parse_substitution("a -> aaca\nb -> b\nc -> bb\n"),
            parse_substitution("a -> ab\nb -> a\nc -> cc\nd -> ca\n"),
            sigma_family(3)]
    for sub in subs:
        assert set(classify_letters(sub).bounded) == brute_bounded_letters(sub)


def test_frontier_law(fib_handle, chacon):
    for sub in (fib_handle, chacon, sigma_family(2)):
        cl = classify_letters(sub)
        r_map, l_map = frontier_maps(sub, cl)
        for a in cl.expanding:
            for n in range(1, 9):
                image = sub.iterate((a,), n)
                rightmost = next(x for x in reversed(image) if x in cl.expanding)
                leftmost = next(x for x in image if x in cl.expanding)
                r_iter, l_iter = a, a
                for _ in range(n):
                    r_iter, l_iter = r_map[r_iter], l_map[l_iter]
                assert rightmost == r_iter and leftmost == l_iter


def test_tameness_examples(wild_ab, chacon):
    report = decide_tameness(wild_ab)
    assert report.verdict == "wild"
    assert report.witness.letter == "a" and report.witness.side == "right"
    assert report.witness.periodic_word == ("b",)

    tame = decide_tameness(parse_substitution("a -> abb\nb -> bbb\n"))
    assert tame.verdict == "tame"
    assert tame.bounded_legal_words == ((),) and tame.n_sigma == 1

    chacon_report = decide_tameness(chacon)
    assert chacon_report.verdict == "tame" and chacon_report.n_sigma == 2
    assert set(chacon_report.bounded_legal_words) == {(), ("b",)}
    # bb is not even admitted: brute-check factors of a long iterate
    word = brute_iterate(chacon, ("a",), 6)
    assert ("b", "b") not in {word[i:i + 2] for i in range(len(word) - 1)}


def test_leftmost_rightmost_corollary():
    # expanding first and last letters in every expanding image force tameness
    for text in ("a -> abb\nb -> bbb\n", "a -> aba\nb -> ab\n"):
        sub = parse_substitution(text)
        cl = classify_letters(sub)
        if all(sub.rules[a][0] in cl.expanding and sub.rules[a][-1] in cl.expanding
               for a in cl.expanding):
            assert decide_tameness(sub).verdict == "tame"


def test_wild_periodic_word_examples(wild_ab):
    report = decide_tameness(wild_ab)
    assert wild_periodic_word(wild_ab, report.witness) == ("b",)

    fixed = parse_substitution("a -> ab\nb -> a\nc -> cc\nd -> ca\n")
    assert wild_periodic_word(fixed, WildWitness("c", "right", 1)) == ("c",)

    two = parse_substitution("a -> abc\nb -> b\nc -> c\n")
    report2 = decide_tameness(two)
    assert report2.verdict == "wild"
    word = wild_periodic_word(two, report2.witness)
    assert word == ("b", "c")
    # powers of the emitted word stay legal well past its own length
    table = LanguageTable(two, 4 * len(word))
    ring = word * 4
    assert table.is_legal(ring[:4 * len(word)])


def test_wild_witness_errors(fib):
    with pytest.raises(WitnessError):
        wild_periodic_word(fib, WildWitness("0", "right", 1))


def test_wild_cross_consistency(wild_ab):
    # a wild verdict's periodic word must be confirmed by the periodic search
    report = decide_tameness(wild_ab)
    hits = periodic_point_search(wild_ab, len(report.witness.periodic_word))
    assert report.witness.periodic_word in hits


def test_find_seed_examples(fib, chacon):
    seed = find_seed(fib)
    assert seed.fixed_pointed_word == PointedWord(("1", "0"), 1)
    assert seed.seed_letter == "0" and seed.n_for_doubling == 1

    chacon_seed = find_seed(chacon)
    assert chacon_seed.seed_letter == "a" and chacon_seed.n_for_doubling == 1

    family = sigma_family(3)
    fam_seed = find_seed(family)
    assert fam_seed.power == 1 and fam_seed.n_for_doubling == 1
    assert fam_seed.seed_letter == "a"
    # the pointed-word family is carried into itself: the fixed word's
    # endpoints are expanding and its interior bounded
    word = fam_seed.fixed_pointed_word.word
    cl = classify_letters(family)
    assert word[0] in cl.expanding and word[-1] in cl.expanding
    assert all(x in cl.bounded for x in word[1:-1])


def test_find_seed_guards(wild_ab):
    with pytest.raises(WildInputError):
        find_seed(wild_ab)


def test_is_minimal(fib, wild_ab, fib_handle):
    assert is_minimal(fib).verdict == "yes"
    wild = is_minimal(wild_ab)
    assert wild.verdict == "yes" and "periodic" in wild.reason
    handle = is_minimal(fib_handle)
    assert handle.verdict == "no"
    assert handle.witness is not None
    family = is_minimal(sigma_family(3), use_cis=False)
    assert family.verdict == "yes" and family.constant is not None
    empty = is_minimal(parse_substitution("a -> b\nb -> a\n"))
    assert empty.verdict == "no" and "empty" in empty.reason
