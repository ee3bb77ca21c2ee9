"""Named substitutions used throughout the test-suite and the CLI.

Overlined letters are written with a ``b`` suffix (``0b`` for barred 0), so
those entries use whitespace-separated rule tokens.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Substitution, parse_substitution


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    rules: str
    note: str

    def substitution(self) -> Substitution:
        return parse_substitution(self.rules)


_ENTRIES = [
    CorpusEntry("fibonacci", "0 -> 001\n1 -> 01\n",
                "primitive golden-mean substitution (square flavour)"),
    CorpusEntry("fibonacci_ab", "a -> ab\nb -> a\n",
                "primitive golden-mean substitution on {a, b}"),
    CorpusEntry("tribonacci", "0 -> 0201\n1 -> 001\n2 -> 0\n",
                "primitive three-letter substitution with H1 of rank 3"),
    CorpusEntry("wild_ab", "a -> ab\nb -> b\n",
                "wild; the subshift is the single constant sequence of b"),
    CorpusEntry("tame_abb", "a -> abb\nb -> bbb\n",
                "tame companion of wild_ab with the same subshift"),
    CorpusEntry("empty_swap", "a -> b\nb -> a\n",
                "letter swap; the subshift is empty"),
    CorpusEntry("legality_drop", "0 -> 0b 0b 1 0b\n0b -> 0 0 1 0\n1 -> 1\nX -> 0 0b\n",
                "the word 0 0b is legal but stops being legal for the square"),
    CorpusEntry("bounded_limits", "a -> aaca\nb -> b\nc -> bb\n",
                "image lengths of b and c converge to 1 and 2"),
    CorpusEntry("two_components", "a -> ab\nb -> a\nc -> cd\nd -> c\n",
                "two disjoint golden-mean systems; disconnected tiling space"),
    CorpusEntry("fib_plus_fixed", "a -> ab\nb -> a\nc -> cc\nd -> ca\n",
                "golden-mean system plus a fixed letter orbit and a connecting ray"),
    CorpusEntry("mixed_types", "a -> aa\nb -> aba\nc -> ccd\nd -> cd\ne -> bdecb\n",
                "subshift with periodic, asymptotic and dense-orbit points"),
    CorpusEntry("chacon", "a -> aaba\nb -> b\n",
                "non-primitive Chacon substitution; minimal and aperiodic"),
    CorpusEntry("sigma_2", "a -> ababba\nb -> b\n",
                "two-letter family member with H1 of rank 2"),
    CorpusEntry("sigma_3", "a -> ababbabbba\nb -> b\n",
                "two-letter family member with H1 of rank 3"),
    CorpusEntry("sigma_4", "a -> ababbabbbabbbba\nb -> b\n",
                "two-letter family member with H1 of rank 4"),
    CorpusEntry("sigma_5", "a -> ababbabbbabbbbabbbbba\nb -> b\n",
                "two-letter family member with H1 of rank 5"),
    CorpusEntry("fib_handle", "0 -> 001\n1 -> 01\n2 -> 021\n",
                "Fibonacci with one handle; three invariant subspaces"),
    CorpusEntry("two_trib_bridge",
                "0 -> 0 2 0 1\n1 -> 0 0 1\n2 -> 0\n"
                "0b -> 0b 2b 0b 1b\n1b -> 0b 0b 1b\n2b -> 0b\nX -> 1 0b\n",
                "two Tribonacci systems joined by a one-way bridge"),
    CorpusEntry("quad_fib_bridge",
                "0 -> 0 2 0 1\n1 -> 0 3 0 1\n2 -> 0 0 1\n3 -> 0\n"
                "0b -> 0b 0b 1b\n1b -> 0b 1b\nX -> 1 0b\n",
                "Quadibonacci and Fibonacci systems joined by a bridge"),
    CorpusEntry("fib_proximal", "0 -> 001\n1 -> 01\n2 -> X021X\nX -> X\n",
                "Fibonacci with an asymptotic handle and a proximal component"),
    CorpusEntry("aug_fib_handle", "a -> aab\nb -> ab\nc -> c\nd -> bca\n",
                "augmented handle example with a non-invariant eventual range"),
    CorpusEntry("one_proper_cis", "a -> aba\nb -> bbab\nc -> aa\n",
                "exactly one nonempty proper invariant subspace (avoid aa)"),
    CorpusEntry("fib_ext_solenoid", "0 -> 00100101\n1 -> 00101\na -> 001aa101\n",
                "extension of the squared Fibonacci by a doubling letter"),
    CorpusEntry("fib_bd_proximal", "a -> aab\nb -> ab\nc -> acab\n",
                "proximal augmentation of Fibonacci; orbit-equivalent to a handle"),
    CorpusEntry("f_not_bijection", "a -> acb\nb -> adb\nc -> dd\nd -> d\n",
                "seed-frontier map that is not a bijection"),
    CorpusEntry("asym_trib_a", "a -> cab\nb -> ac\nc -> a\n",
                "first member of a cohomology-indistinguishable pair (H1 rank 5)"),
    CorpusEntry("asym_trib_b", "a -> bbac\nb -> a\nc -> b\n",
                "second member of a cohomology-indistinguishable pair (H1 rank 5)"),
]

CORPUS = {entry.name: entry for entry in _ENTRIES}


def names() -> list[str]:
    return [entry.name for entry in _ENTRIES]


def get(name: str) -> Substitution:
    return CORPUS[name].substitution()


def sigma_family(n: int) -> Substitution:
    """a maps to ab ab^2 ... ab^n a, b maps to b."""
    if n < 1:
        raise ValueError("family index must be >= 1")
    image = []
    for i in range(1, n + 1):
        image.append("a")
        image.extend("b" * i)
    image.append("a")
    return parse_substitution(f"a -> {''.join(image)}\nb -> b\n")
