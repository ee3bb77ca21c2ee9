"""Letter classification, tameness, wild witnesses, seeds and minimality.

A letter is bounded when its iterated images stay bounded in length, which
holds exactly when every letter on a directed cycle of the occurrence
digraph reachable from it has a one-letter image.  A substitution is tame
when it has finitely many bounded legal words; this is decided through the
frontier maps r and l (rightmost/leftmost expanding letter of an image),
whose orbits are eventually periodic: the substitution is wild iff a letter
whose image ends (starts) in a bounded letter lies on an r-cycle (l-cycle).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import PointedWord, Substitution, Word
from .errors import EmptySubshiftError, MarginError, WildInputError, WitnessError
from .graphs import cyclic_nodes, forward_closure
from .language import LanguageTable, periodic_point_search


@dataclass(frozen=True)
class LetterClassification:
    bounded: frozenset[str]
    expanding: frozenset[str]
    a_right: frozenset[str]  # expanding letters whose image ends in a bounded letter
    a_left: frozenset[str]   # expanding letters whose image starts with a bounded letter


def classify_letters(sub: Substitution) -> LetterClassification:
    adjacency = {a: set(sub.rules[a]) for a in sub.alphabet}
    on_cycle = cyclic_nodes(sub.alphabet, lambda a: adjacency[a])
    bounded = set()
    for letter in sub.alphabet:
        reachable = forward_closure([letter], lambda a: adjacency[a])
        if all(len(sub.rules[c]) == 1 for c in reachable & on_cycle):
            bounded.add(letter)
    expanding = set(sub.alphabet) - bounded
    a_right = frozenset(a for a in expanding if sub.rules[a][-1] in bounded)
    a_left = frozenset(a for a in expanding if sub.rules[a][0] in bounded)
    return LetterClassification(frozenset(bounded), frozenset(expanding), a_right, a_left)


def frontier_maps(sub: Substitution, classification: LetterClassification):
    """The self-maps r, l of the expanding letters: rightmost (leftmost)
    expanding letter occurring in the image."""
    r_map = {}
    l_map = {}
    for a in classification.expanding:
        image = sub.rules[a]
        r_map[a] = next(x for x in reversed(image) if x in classification.expanding)
        l_map[a] = next(x for x in image if x in classification.expanding)
    return r_map, l_map


def _cycle_members(mapping):
    """Letters on cycles of a functional graph, with their cycle lengths."""
    out = {}
    for start in mapping:
        seen = {}
        node = start
        step = 0
        while node not in seen:
            seen[node] = step
            node = mapping[node]
            step += 1
        # node is the first repeated element; everything from its first
        # occurrence onwards lies on the cycle
        cycle_len = step - seen[node]
        cursor = node
        for _ in range(cycle_len):
            out.setdefault(cursor, cycle_len)
            cursor = mapping[cursor]
    return out


@dataclass(frozen=True)
class WildWitness:
    letter: str
    side: str   # "right" or "left"
    period: int
    periodic_word: Word = ()


@dataclass(frozen=True)
class TamenessReport:
    verdict: str  # "tame" or "wild"
    classification: LetterClassification
    witness: WildWitness | None = None
    bounded_legal_words: tuple[Word, ...] | None = None
    n_sigma: int | None = None
    empty_subshift: bool = False
    exact: bool = True

    @property
    def tame(self) -> bool:
        return self.verdict == "tame"


def decide_tameness(sub: Substitution, table: LanguageTable | None = None) -> TamenessReport:
    classification = classify_letters(sub)
    if not classification.expanding:
        # image lengths stay bounded, so the subshift is empty
        return TamenessReport("tame", classification, bounded_legal_words=((),),
                              n_sigma=1, empty_subshift=True)
    r_map, l_map = frontier_maps(sub, classification)
    for side, mapping, boundary in (("right", r_map, classification.a_right),
                                    ("left", l_map, classification.a_left)):
        cycles = _cycle_members(mapping)
        witnesses = sorted(c for c in cycles if c in boundary)
        if witnesses:
            letter = min(witnesses, key=sub.letter_index)
            witness = WildWitness(letter, side, cycles[letter])
            word = wild_periodic_word(sub, witness)
            witness = WildWitness(letter, side, cycles[letter], word)
            return TamenessReport("wild", classification, witness=witness)
    # tame: collect every bounded legal word
    if table is None:
        table = LanguageTable(sub, max(4, 2 * sub.max_image_len * len(sub.alphabet)))
    bounded_words: list[Word] = [()]
    length = 1
    while True:
        if length > table.max_length:
            raise MarginError("bounded legal words persist past the margin order; "
                              "raise the table bound")
        at_length = [w for w in table.legal(length)
                     if all(x in classification.bounded for x in w)]
        if not at_length:
            break
        bounded_words.extend(at_length)
        length += 1
    return TamenessReport("tame", classification,
                          bounded_legal_words=tuple(bounded_words),
                          n_sigma=length, exact=table.legal_exact)


def wild_periodic_word(sub: Substitution, witness: WildWitness,
                       verify: bool = True) -> Word:
    """The bounded periodic word built from a wildness witness: iterate the
    bounded tail (head) of sigma^N(c) until the iterates cycle and
    concatenate one full cycle."""
    classification = classify_letters(sub)
    c = witness.letter
    if c not in classification.expanding:
        raise WitnessError(f"witness letter {c!r} is not expanding")
    n = witness.period
    image = sub.iterate((c,), n)
    expanding_positions = [i for i, x in enumerate(image) if x in classification.expanding]
    if not expanding_positions:
        raise WitnessError("witness image contains no expanding letter")
    if witness.side == "right":
        pos = expanding_positions[-1]
        if image[pos] != c:
            raise WitnessError(f"letter {c!r} is not on an r-cycle of period {n}")
        tail: Word = image[pos + 1:]
    else:
        pos = expanding_positions[0]
        if image[pos] != c:
            raise WitnessError(f"letter {c!r} is not on an l-cycle of period {n}")
        tail = image[:pos]
    if not tail:
        # degenerate: the frontier letter sits at the very end (start); the
        # construction still yields a periodic point when the whole image is
        # a power of the witness letter
        if all(x == c for x in image) and len(image) >= 2:
            word: Word = (c,)
        else:
            raise WitnessError("witness has an empty bounded tail; no periodic "
                               "word arises from it")
    else:
        iterates = [tail]
        seen = {tail: 0}
        while True:
            nxt = sub.iterate(iterates[-1], n)
            if nxt in seen:
                start = seen[nxt]
                cycle = iterates[start:]
                break
            seen[nxt] = len(iterates)
            iterates.append(nxt)
        if witness.side == "right":
            word = tuple(itertools.chain.from_iterable(cycle))
        else:
            word = tuple(itertools.chain.from_iterable(reversed(cycle)))
    if verify:
        hits = periodic_point_search(sub, len(word))
        if not any(_is_rotation_power(hit, word) for hit in hits):
            raise WitnessError(f"constructed word {word!r} failed the periodic check")
    return word


def _is_rotation_power(candidate: Word, word: Word) -> bool:
    """candidate is a rotation of a primitive root of word."""
    root = word
    for period in range(1, len(word) + 1):
        if len(word) % period == 0 and word == word[:period] * (len(word) // period):
            root = word[:period]
            break
    rotations = {root[i:] + root[:i] for i in range(len(root))}
    return candidate in rotations


@dataclass(frozen=True)
class SeedResult:
    fixed_pointed_word: PointedWord
    power: int
    legal_expanding_letters: tuple[str, str]
    seed_letter: str
    n_for_doubling: int


def _pointed_shape_elements(sub, table, classification):
    """Admitted pointed words: expanding endpoint, bounded interior,
    expanding endpoint, with every interior separator position."""
    elements = []
    for length in range(2, table.max_length + 1):
        for word in table.admitted(length):
            if word[0] not in classification.expanding:
                continue
            if word[-1] not in classification.expanding:
                continue
            if any(x not in classification.bounded for x in word[1:-1]):
                continue
            for origin in range(1, length):
                elements.append(PointedWord(word, origin))
    return elements


def _seed_step(sub, classification, pointed: PointedWord) -> PointedWord:
    left = sub.apply(pointed.word[:pointed.origin])
    right = sub.apply(pointed.word[pointed.origin:])
    word = left + right
    origin = len(left)
    first_len = len(sub.rules[pointed.word[0]])
    last_len = len(sub.rules[pointed.word[-1]])
    head = [i for i in range(first_len) if word[i] in classification.expanding]
    tail = [len(word) - last_len + i for i in range(last_len)
            if word[len(word) - last_len + i] in classification.expanding]
    b_minus = head[-1]
    b_plus = tail[0]
    new_word = word[b_minus:b_plus + 1]
    new_origin = origin - b_minus
    if not 1 <= new_origin <= len(new_word) - 1:
        raise WitnessError("seed iteration left the pointed-word family")
    return PointedWord(new_word, new_origin)


def find_seed(sub: Substitution, table: LanguageTable | None = None,
              report: TamenessReport | None = None) -> SeedResult:
    """A pointed word fixed by a power of the image-frontier map, a legal
    expanding seed letter b, and the least multiple N of the period with two
    occurrences of b in sigma^N(b)."""
    if report is None:
        report = decide_tameness(sub, table)
    if report.empty_subshift:
        raise EmptySubshiftError("cannot seed an empty subshift")
    if not report.tame:
        raise WildInputError("seed search requires a tame substitution")
    classification = report.classification
    if table is None:
        table = LanguageTable(sub, max(4, 2 * sub.max_image_len * len(sub.alphabet)))
    elements = _pointed_shape_elements(sub, table, classification)
    periodic: dict[PointedWord, int] = {}
    step_cache: dict[PointedWord, PointedWord] = {}

    def step(p):
        if p not in step_cache:
            step_cache[p] = _seed_step(sub, classification, p)
        return step_cache[p]

    for start in elements:
        orbit_index = {start: 0}
        orbit = [start]
        node = start
        while True:
            node = step(node)
            if node in orbit_index:
                first = orbit_index[node]
                cycle = orbit[first:]
                for member in cycle:
                    periodic.setdefault(member, len(cycle))
                break
            if node in periodic:
                break
            orbit_index[node] = len(orbit)
            orbit.append(node)
    if not periodic:
        raise WitnessError("no pointed word is fixed by any power of the frontier map")
    v = min(periodic, key=lambda p: (len(p.word), p.word, p.origin))
    p = periodic[v]
    endpoints = (v.word[0], v.word[-1])
    for b in sorted(set(endpoints), key=sub.letter_index):
        n = p
        length_guard = 0
        while length_guard < 64:
            image = sub.iterate((b,), n)
            if sum(1 for x in image if x == b) >= 2:
                return SeedResult(v, p, endpoints, b, n)
            if len(image) > 1_000_000:
                break
            n += p
            length_guard += 1
    raise WitnessError("no endpoint letter doubles under iteration; "
                       "the subshift is unlikely to be minimal")


@dataclass(frozen=True)
class MinimalityResult:
    verdict: str  # "yes", "no", "unknown"
    constant: int | None = None
    witness: tuple[Word, Word] | None = None
    reason: str = ""
    bound: int | None = None

    @property
    def is_no(self):
        return self.verdict == "no"


def _contains(word: Word, factor: Word) -> bool:
    if not factor:
        return True
    return any(word[i:i + len(factor)] == factor
               for i in range(len(word) - len(factor) + 1))


def _recurrence_constant(table: LanguageTable, c_bound: int) -> int | None:
    """Least C <= c_bound such that every legal word longer than C|u|
    contains every legal u, checked to the table bound; requires at least
    two scales to have been testable."""
    max_len = table.max_length
    for constant in range(1, c_bound + 1):
        scales = 0
        ok = True
        for ulen in range(1, max_len + 1):
            target = constant * ulen + 1
            if target > max_len:
                break
            scales += 1
            longer = table.legal_coded(target)
            for u in table.legal_coded(ulen):
                if any(u not in v for v in longer):
                    ok = False
                    break
            if not ok:
                break
        if ok and scales >= 2:
            return constant
    return None


def is_minimal(sub: Substitution, c_bound: int = 8,
               table: LanguageTable | None = None,
               use_cis: bool = True) -> MinimalityResult:
    """Semi-decision of minimality.  Primitive substitutions are minimal;
    wild ones are minimal iff the subshift is a single periodic orbit; tame
    non-primitive ones are probed by a linear-recurrence search, with the
    invariant-subspace lattice as the certifying negative oracle."""
    report = decide_tameness(sub, table)
    if report.empty_subshift:
        return MinimalityResult("no", reason="empty subshift")
    if sub.is_primitive():
        return MinimalityResult("yes", reason="primitive")
    if table is None:
        table = LanguageTable(sub, max(8, 2 * sub.max_image_len * len(sub.alphabet)))
    if not report.tame:
        word = report.witness.periodic_word
        ring = word * (table.max_length // len(word) + 2)
        factors = {ring[i:i + table.max_length] for i in range(len(word))}
        legal_top = set(table.legal(table.max_length))
        if legal_top <= factors:
            return MinimalityResult("yes", reason="single periodic orbit",
                                    bound=table.max_length)
        outside = sorted(legal_top - factors)[0]
        return MinimalityResult("no", witness=(outside, ring[:table.max_length]),
                                reason="wild with a sequence outside the periodic orbit")
    constant = _recurrence_constant(table, c_bound)
    if constant is not None:
        if table.legal_exact:
            return MinimalityResult("yes", constant=constant,
                                    reason="linear recurrence verified to bound",
                                    bound=table.max_length)
        return MinimalityResult("unknown", constant=constant,
                                reason="recurrence holds but legality not stabilised",
                                bound=table.max_length)
    if use_cis:
        from .collar import collar
        from .cis import enumerate_cis
        try:
            collared = collar(sub, report.n_sigma)
            lattice = enumerate_cis(collared, tameness=report)
        except Exception:
            return MinimalityResult("unknown", reason="recurrence failed; lattice unavailable",
                                    bound=table.max_length)
        nonempty = [node for node in lattice.nodes if node.edges]
        if len(nonempty) >= 2:
            small = min(nonempty, key=lambda node: len(node.edges))
            big = max(nonempty, key=lambda node: len(node.edges))
            outside_edges = sorted(big.edges - small.edges)
            u = collared.letters[outside_edges[0]].context
            v = next((w for w in table.legal(table.max_length)
                      if not _contains(w, u)), None)
            witness = (u, v) if v is not None else None
            return MinimalityResult("no", witness=witness,
                                    reason="two distinct nonempty closed invariant subspaces")
        return MinimalityResult("unknown", reason="recurrence inconclusive; lattice trivial",
                                bound=table.max_length)
    return MinimalityResult("unknown", reason="recurrence inconclusive",
                            bound=table.max_length)
