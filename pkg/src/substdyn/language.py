"""Admitted and legal languages of a substitution.

Admitted words are factors of some sigma^k(a).  They are computed by
iterating, per letter, the set of maximal bounded-length factors of
sigma^k(a): the per-letter tuples of factor sets evolve under a
deterministic map on a finite state space, so they are eventually periodic
and the union over the pre-period and cycle is exact.

Legal words are factors of bi-infinite sequences of the subshift.  A word
of length l is accepted when it lies on a bi-infinite path of the Rauzy
graph at a margin order m >= l (reachable from a cycle and reaching a
cycle).  This over-approximates legality and decreases to it as m grows, so
the table is flagged exact only when two successive margin orders agree.
Emptiness of the subshift, by contrast, is decided exactly: the subshift is
empty iff admitted word lengths stay bounded.
"""

from __future__ import annotations

from .core import Substitution, Word
from .errors import MarginError
from .graphs import biinfinite_path_nodes

# Hard ceiling on the default margin order; larger orders must be requested
# explicitly (guards accidental blow-ups on large alphabets).
DEFAULT_MARGIN_CAP = 400


def default_margin(sub: Substitution, max_length: int) -> int:
    return max(max_length, 2 * sub.max_image_len * len(sub.alphabet))


class LanguageTable:
    """Admitted/legal word sets of a substitution up to a length bound."""

    def __init__(self, sub: Substitution, max_length: int, margin: int | None = None):
        if max_length < 1:
            raise ValueError("max_length must be >= 1")
        self.sub = sub
        self.max_length = max_length
        if margin is None:
            margin = min(default_margin(sub, max_length), max(max_length, DEFAULT_MARGIN_CAP))
        self.margin = max(margin, max_length)
        self._primitive = sub.is_primitive()
        # admitted words up to cap are needed to build the Rauzy graphs at
        # orders margin and margin + 1
        self._cap = self.margin + 2 if not self._primitive else max_length + 1
        self._pool: set[str] = set()
        self._short: set[str] = set()
        self.stabilized_at = self._compute_admitted()
        self._admitted_cache: dict[int, frozenset[str]] = {}
        self.empty_subshift = not self._admitted_exact_length(self._cap)
        self._legal_cache: dict[int, frozenset[str]] = {}
        self.legal_exact = True
        if not self.empty_subshift:
            self._compute_legal()

    # -- admitted ---------------------------------------------------------

    def _compute_admitted(self) -> int:
        sub = self.sub
        cap = self._cap
        state = tuple(frozenset((sub.encode((a,)),)) for a in sub.alphabet)
        seen = {state: 0}
        k = 0
        while True:
            for group in state:
                for word in group:
                    if len(word) == cap:
                        self._pool.add(word)
                    else:
                        self._short.add(word)
            nxt = []
            for group in state:
                new_group = set()
                for word in group:
                    image = sub.apply_coded(word)
                    if len(image) <= cap:
                        new_group.add(image)
                    else:
                        for i in range(len(image) - cap + 1):
                            new_group.add(image[i:i + cap])
                nxt.append(frozenset(new_group))
            state = tuple(nxt)
            k += 1
            if state in seen:
                return k
            seen[state] = k

    def _admitted_exact_length(self, length: int) -> frozenset[str]:
        if length == 0:
            return frozenset(("",))
        if length > self._cap:
            raise MarginError(f"admitted length {length} exceeds computed cap {self._cap}")
        cached = self._admitted_cache.get(length)
        if cached is not None:
            return cached
        out = set()
        for word in self._pool:
            for i in range(len(word) - length + 1):
                out.add(word[i:i + length])
        for word in self._short:
            if len(word) >= length:
                for i in range(len(word) - length + 1):
                    out.add(word[i:i + length])
        result = frozenset(out)
        self._admitted_cache[length] = result
        return result

    def admitted(self, length: int) -> list[Word]:
        """Sorted admitted words of the given length (<= internal cap)."""
        if length > self._cap:
            raise MarginError(f"admitted length {length} exceeds computed cap {self._cap}")
        return sorted(self.sub.decode(w) for w in self._admitted_exact_length(length))

    def is_admitted(self, word) -> bool:
        coded = self.sub.encode(word)
        if len(coded) > self._cap:
            raise MarginError(f"word longer than computed cap {self._cap}")
        return coded in self._admitted_exact_length(len(coded))

    # -- legal ------------------------------------------------------------

    def _biinfinite_words(self, order: int) -> set[str]:
        vertices = self._admitted_exact_length(order)
        longer = self._admitted_exact_length(order + 1)
        succ_map: dict[str, list[str]] = {v: [] for v in vertices}
        pred_map: dict[str, list[str]] = {v: [] for v in vertices}
        for word in longer:
            head, tail = word[:-1], word[1:]
            succ_map[head].append(tail)
            pred_map[tail].append(head)
        nodes = sorted(vertices)
        return biinfinite_path_nodes(nodes, lambda v: succ_map[v], lambda v: pred_map[v])

    def _legal_from_vertices(self, vertices, length: int) -> frozenset[str]:
        out = set()
        for vertex in vertices:
            for i in range(len(vertex) - length + 1):
                out.add(vertex[i:i + length])
        return frozenset(out)

    def _compute_legal(self):
        if self._primitive:
            # admitted and legal coincide for primitive substitutions
            for length in range(1, self.max_length + 1):
                self._legal_cache[length] = self._admitted_exact_length(length)
            self.legal_exact = True
            return
        base = self._biinfinite_words(self.margin)
        check = self._biinfinite_words(self.margin + 1)
        exact = True
        for length in range(1, self.max_length + 1):
            at_margin = self._legal_from_vertices(base, length)
            at_next = self._legal_from_vertices(check, length)
            if at_margin != at_next:
                exact = False
            # legality-at-order shrinks as the order grows; keep the tighter set
            self._legal_cache[length] = at_next
        self.legal_exact = exact

    def legal(self, length: int) -> list[Word]:
        """Sorted legal words of the given length (<= max_length)."""
        if self.empty_subshift:
            return []
        if length == 0:
            return [()]
        if length > self.max_length:
            raise MarginError(f"legal length {length} exceeds table bound {self.max_length}")
        return sorted(self.sub.decode(w) for w in self._legal_cache[length])

    def legal_coded(self, length: int) -> frozenset[str]:
        if self.empty_subshift:
            return frozenset()
        if length > self.max_length:
            raise MarginError(f"legal length {length} exceeds table bound {self.max_length}")
        return self._legal_cache[length]

    def is_legal(self, word) -> bool:
        if self.empty_subshift:
            return False
        coded = self.sub.encode(word)
        if len(coded) == 0:
            return True
        if len(coded) > self.max_length:
            raise MarginError(f"word longer than table bound {self.max_length}")
        return coded in self._legal_cache[len(coded)]

    def legal_letters(self) -> list[str]:
        if self.empty_subshift:
            return []
        return sorted(self.sub.decode(w)[0] for w in self._legal_cache[1])

    # -- Rauzy graphs -------------------------------------------------------

    def rauzy(self, order: int):
        """Vertices (admitted words of the order) and labelled edges
        (admitted words one longer, as (prefix, suffix) pairs)."""
        vertices = [self.sub.decode(w) for w in sorted(self._admitted_exact_length(order))]
        edges = []
        for word in sorted(self._admitted_exact_length(order + 1)):
            edges.append((self.sub.decode(word[:-1]), self.sub.decode(word[1:])))
        return vertices, edges

    # -- serialisation ------------------------------------------------------

    def to_json_dict(self) -> dict:
        fmt = self.sub.format_word
        admitted = {str(length): sorted(fmt(w) for w in self.admitted(length))
                    for length in range(self.max_length + 1)}
        legal = {str(length): sorted(fmt(w) for w in self.legal(length))
                 for length in range(0 if not self.empty_subshift else 1,
                                     self.max_length + 1)}
        return {
            "max_length": self.max_length,
            "margin": self.margin,
            "stabilized_at": self.stabilized_at,
            "empty_subshift": self.empty_subshift,
            "admitted": admitted,
            "legal": legal,
            "exact": self.legal_exact,
        }


def build_language(sub: Substitution, max_length: int, margin: int | None = None) -> LanguageTable:
    return LanguageTable(sub, max_length, margin=margin)


def is_admissible(sub: Substitution, table: LanguageTable | None = None) -> bool:
    """True iff every computed legal set equals the admitted set (checked to
    the table bound); in particular every letter must be legal."""
    if table is None:
        table = LanguageTable(sub, max(4, 2 * sub.max_image_len))
    if table.empty_subshift:
        return False
    for length in range(1, table.max_length + 1):
        if set(table.legal(length)) != set(table.admitted(length)):
            return False
    return True


def _primitive_necklaces(alphabet, max_len):
    """Lexicographically least rotations of primitive (non-power) cyclic
    words, lengths 1..max_len."""
    out = []

    def rotations(word):
        return {word[i:] + word[:i] for i in range(len(word))}

    seen = set()
    for length in range(1, max_len + 1):
        for word in _all_words(alphabet, length):
            if word in seen:
                continue
            # primitive: not a proper power
            primitive = True
            for period in range(1, length):
                if length % period == 0 and word == word[:period] * (length // period):
                    primitive = False
                    break
            rots = rotations(word)
            seen.update(rots)
            if primitive:
                out.append(min(rots))
    return out


def _all_words(alphabet, length):
    if length == 0:
        yield ()
        return
    for shorter in _all_words(alphabet, length - 1):
        for letter in alphabet:
            yield shorter + (letter,)


def periodic_point_search(sub: Substitution, period_bound: int,
                          table: LanguageTable | None = None) -> list[Word]:
    """Primitive cyclic words u with |u| <= period_bound whose bi-infinite
    repetition survives every legality check up to the table bound.  A
    nonempty result certifies a shift-periodic point; an empty result is
    evidence of aperiodicity only up to the bound."""
    if period_bound < 1:
        raise ValueError("period bound must be >= 1")
    if table is None:
        # windows must outgrow repetitions that occur inside genuinely
        # aperiodic sequences, so scale the check length with the period
        table = LanguageTable(sub, max(4 * period_bound + 4,
                                       2 * sub.max_image_len * len(sub.alphabet)))
    if table.empty_subshift:
        return []
    found = []
    check_len = table.max_length
    for necklace in _primitive_necklaces(sub.alphabet, period_bound):
        ring = necklace * (check_len // len(necklace) + 2)
        ok = True
        for i in range(len(necklace)):
            factor = ring[i:i + check_len]
            if not table.is_legal(factor):
                ok = False
                break
        if ok:
            found.append(necklace)
    return sorted(found, key=lambda w: (len(w), w))
