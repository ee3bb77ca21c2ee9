"""Rewriting a minimal substitution as a primitive one.

Given a legal expanding seed letter b with sigma^N(b) containing two copies
of b, the return words to b (words bu with u free of b and bub legal) form
a finite alphabet on which sigma^N induces a primitive substitution psi.
Splitting each return-word symbol into per-position letters refines psi to
a substitution theta whose subshift is topologically conjugate to the
original one, the conjugacy being the one-block code h((v, k)) = v[k].
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Substitution, Word
from .errors import (BlockShortfallError, ConjugacyError, EmptySubshiftError,
                     NonClosureError, PrimitivityError, WildInputError)
from .classify import SeedResult, TamenessReport, decide_tameness, find_seed
from .language import LanguageTable, periodic_point_search


@dataclass(frozen=True)
class BlockForm:
    """sigma^N(v) written as sigma^N(b) . w . v_1 ... v_r, with the blocks
    starting at occurrences of b; for the seed letter itself the prefix is
    the b-free head u and the blocks cover the rest."""
    head: Word
    blocks: tuple[Word, ...]


@dataclass(frozen=True)
class ReturnWordSystem:
    seed_letter: str
    power: int
    return_words: tuple[Word, ...]       # enumeration order: first appearance
    has_seed_word: bool                  # True iff b itself is a return word
    head: Word                           # u: b-free prefix of sigma^N(b)
    seed_blocks: tuple[Word, ...]        # v_{0,1} .. v_{0,r0}
    decompositions: dict[Word, BlockForm]
    primed_last: dict[Word, Word]        # v |-> v_{r} u for the final block
    primed_w: dict[Word, Word]           # v |-> v_{0,r0} w (u)
    primed_seed_last: Word               # v_{0,r0} u

    @property
    def r0(self) -> int:
        return len(self.seed_blocks)


def _occurrences(word: Word, letter: str) -> list[int]:
    return [i for i, x in enumerate(word) if x == letter]


def _split_blocks(word: Word, letter: str):
    """(head before the first occurrence, blocks starting at occurrences)."""
    positions = _occurrences(word, letter)
    if not positions:
        return word, ()
    head = word[:positions[0]]
    blocks = []
    for idx, start in enumerate(positions):
        end = positions[idx + 1] if idx + 1 < len(positions) else len(word)
        blocks.append(word[start:end])
    return head, tuple(blocks)


def return_words(sub: Substitution, seed: SeedResult | None = None,
                 table: LanguageTable | None = None,
                 max_rounds: int | None = None) -> ReturnWordSystem:
    """Enumerate the return words to the seed letter by scanning iterates of
    sigma^N(b), then close the block decompositions over them."""
    if seed is None:
        seed = find_seed(sub, table=table)
    b = seed.seed_letter
    n = seed.n_for_doubling
    if max_rounds is None:
        max_rounds = 2 ** len(sub.alphabet) * sub.max_image_len
    power_sub = sub.power(n)

    found: dict[Word, None] = {}   # insertion-ordered set
    word = (b,)
    rounds = 0
    stable_rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise NonClosureError(
                f"return words to {b!r} did not stabilise within {max_rounds} rounds; "
                "evidence against minimality", partial=tuple(found))
        word = power_sub.apply(word)
        if len(word) > 2_000_000:
            raise NonClosureError(
                f"iterates of {b!r} grew past the scan budget before the "
                "return words stabilised", partial=tuple(found))
        positions = _occurrences(word, b)
        before = len(found)
        for idx in range(len(positions) - 1):
            candidate = word[positions[idx]:positions[idx + 1]]
            if candidate not in found:
                found[candidate] = None
        if len(found) == before:
            stable_rounds += 1
        else:
            stable_rounds = 0
        if stable_rounds < 2 or len(found) == 0:
            continue
        # candidate set is stable; try to close the block decompositions
        system = _close_blocks(sub, power_sub, b, n, tuple(found))
        if system is not None:
            return system
        stable_rounds = 0


def _close_blocks(sub, power_sub, b, n, words):
    image_of_b = power_sub.apply((b,))
    head, seed_blocks = _split_blocks(image_of_b, b)
    if len(seed_blocks) < 2:
        raise NonClosureError(
            f"sigma^{n}({b!r}) contains fewer than two occurrences of {b!r}")
    word_set = set(words)
    has_seed_word = (b,) in word_set
    decompositions = {}
    primed_last = {}
    primed_w = {}
    ok = True
    # blocks of the seed image except the last must already be return words
    for block in seed_blocks[:-1]:
        if block not in word_set:
            ok = False
    primed_seed_last = seed_blocks[-1] + head
    if has_seed_word and primed_seed_last not in word_set:
        # only the seed-word rule consumes the closed final block
        ok = False
    for v in words:
        if v == (b,):
            continue
        image = power_sub.apply(v)
        assert image[:len(image_of_b)] == image_of_b
        w_part, blocks = _split_blocks(image[len(image_of_b):], b)
        decompositions[v] = BlockForm(w_part, blocks)
        for block in blocks[:-1]:
            if block not in word_set:
                ok = False
        if blocks:
            primed_last[v] = blocks[-1] + head
            if primed_last[v] not in word_set:
                ok = False
            primed_w[v] = seed_blocks[-1] + w_part
        else:
            primed_w[v] = seed_blocks[-1] + w_part + head
        if primed_w[v] not in word_set:
            ok = False
    if not ok:
        return None
    return ReturnWordSystem(
        seed_letter=b, power=n, return_words=tuple(words),
        has_seed_word=has_seed_word, head=head, seed_blocks=seed_blocks,
        decompositions=decompositions, primed_last=primed_last,
        primed_w=primed_w, primed_seed_last=primed_seed_last)


@dataclass(frozen=True)
class DerivedSubstitution:
    """psi on the return-word alphabet, with alpha expanding each symbol to
    its return word."""
    psi: Substitution
    alpha: dict[str, Word]
    system: ReturnWordSystem
    primitive: bool


def _gamma_token(sub: Substitution, v: Word) -> str:
    return sub.format_word(v).replace(" ", "_")


def build_psi(sub: Substitution, rws: ReturnWordSystem) -> DerivedSubstitution:
    token = {v: _gamma_token(sub, v) for v in rws.return_words}
    rules = []
    for v in rws.return_words:
        if v == (rws.seed_letter,):
            # seed word: image is the seed blocks with the final one closed by u
            symbols = [token[block] for block in rws.seed_blocks[:-1]]
            symbols.append(token[rws.primed_seed_last])
        else:
            form = rws.decompositions[v]
            symbols = [token[block] for block in rws.seed_blocks[:-1]]
            symbols.append(token[rws.primed_w[v]])
            if form.blocks:
                symbols.extend(token[block] for block in form.blocks[:-1])
                symbols.append(token[rws.primed_last[v]])
        rules.append((token[v], tuple(symbols)))
    psi = Substitution(rules, alphabet=tuple(token[v] for v in rws.return_words))
    alpha = {token[v]: v for v in rws.return_words}
    # length bookkeeping: the alpha-expansion of psi(v~) must cover sigma^N(v)
    power_sub = sub.power(rws.power)
    for v in rws.return_words:
        expanded = sum(len(alpha[s]) for s in psi.rules[token[v]])
        assert expanded == len(power_sub.apply(v)), (v, expanded)
    primitive = psi.is_primitive()
    if not primitive:
        raise PrimitivityError("derived return-word substitution is not primitive; "
                               "the input is unlikely to be minimal")
    return DerivedSubstitution(psi=psi, alpha=alpha, system=rws, primitive=True)


@dataclass(frozen=True)
class ConjugateSubstitution:
    """theta on per-position letters (v, k), with the one-block code h."""
    theta: Substitution
    h: dict[str, str]                 # zeta letter -> original letter
    positions: dict[str, tuple[str, int]]  # zeta letter -> (gamma letter, k)
    p_block_size: int
    power_lift: int
    derived: DerivedSubstitution


def _zeta_token(gamma_letter: str, k: int) -> str:
    return f"{gamma_letter}:{k}"


def build_theta(ds: DerivedSubstitution, max_lift: int = 10) -> ConjugateSubstitution:
    psi = ds.psi
    alpha = ds.alpha
    lift = 1
    while any(len(psi.power(lift).rules[g]) < len(alpha[g]) for g in psi.alphabet):
        lift += 1
        if lift > max_lift:
            raise BlockShortfallError(
                "psi images stay shorter than their return words after power lifting")
    lifted = psi.power(lift) if lift > 1 else psi
    zeta_letters = []
    positions = {}
    h = {}
    for g in psi.alphabet:
        for k in range(1, len(alpha[g]) + 1):
            z = _zeta_token(g, k)
            zeta_letters.append(z)
            positions[z] = (g, k)
            h[z] = alpha[g][k - 1]

    def expansion(gamma_word):
        out = []
        for g in gamma_word:
            out.extend(_zeta_token(g, k) for k in range(1, len(alpha[g]) + 1))
        return tuple(out)

    rules = []
    for g in psi.alphabet:
        image = lifted.rules[g]
        size = len(alpha[g])
        for k in range(1, size + 1):
            z = _zeta_token(g, k)
            if k < size:
                rules.append((z, expansion(image[k - 1:k])))
            else:
                rules.append((z, expansion(image[size - 1:])))
    theta = Substitution(rules, alphabet=tuple(zeta_letters))
    if not theta.is_primitive():
        raise PrimitivityError("letter-expansion refinement lost primitivity")
    return ConjugateSubstitution(
        theta=theta, h=h, positions=positions,
        p_block_size=max(len(v) for v in alpha.values()),
        power_lift=lift, derived=ds)


@dataclass(frozen=True)
class ConjugacyReport:
    ok: bool
    depth: int
    windows_checked: int
    checks: dict
    counterexample: tuple | None = None


def _parse_return_positions(word: Word, seed_letter: str, by_word: dict[Word, str]):
    """Sliding-block parse of a window: positions covered by a complete
    return word get the (gamma letter, offset) code; others get None."""
    positions = _occurrences(word, seed_letter)
    codes: list[tuple[str, int] | None] = [None] * len(word)
    for idx in range(len(positions) - 1):
        start, end = positions[idx], positions[idx + 1]
        block = word[start:end]
        gamma = by_word.get(block)
        if gamma is None:
            return None  # not a return word: window corrupt
        for offset in range(end - start):
            codes[start + offset] = (gamma, offset + 1)
    return codes


def verify_conjugacy(sub: Substitution, cs: ConjugateSubstitution,
                     depth: int = 6, table: LanguageTable | None = None) -> ConjugacyReport:
    """Sampled checks that h carries the refined subshift onto the original
    one: h-images of legal windows are legal, the sliding-block parse
    inverts h on window interiors, and the parse intertwines sigma^(N*lift)
    with theta."""
    ds = cs.derived
    rws = ds.system
    n_total = rws.power * cs.power_lift
    theta = cs.theta
    theta_table = LanguageTable(theta, depth)
    if theta_table.empty_subshift:
        raise EmptySubshiftError("refined substitution has an empty subshift")
    if table is None:
        window = depth * cs.p_block_size + len(rws.head) + 2
        table = LanguageTable(sub, window)
    by_word = {v: _gamma_token(sub, v) for v in rws.return_words}
    checks = {"h_legal": 0, "parse_inverts": 0, "intertwine": 0}
    windows = 0
    for z_word in theta_table.legal(depth):
        windows += 1
        image = tuple(cs.h[z] for z in z_word)
        if not table.is_legal(image):
            return ConjugacyReport(False, depth, windows, checks,
                                   counterexample=("h_legal", z_word, image))
        checks["h_legal"] += 1
        codes = _parse_return_positions(image, rws.seed_letter, by_word)
        if codes is None:
            return ConjugacyReport(False, depth, windows, checks,
                                   counterexample=("parse", z_word, image))
        for j, code in enumerate(codes):
            if code is None:
                continue
            gamma, offset = code
            expected = _zeta_token(gamma, offset)
            if z_word[j] != expected:
                return ConjugacyReport(False, depth, windows, checks,
                                       counterexample=("parse_inverts", z_word, j, expected))
        checks["parse_inverts"] += 1
        # intertwining on the window: the image of a parsed return-word run
        # under sigma^(N*lift) must parse to theta of its code
        ok = _check_intertwine(sub, cs, image, codes, by_word, n_total)
        if ok is False:
            return ConjugacyReport(False, depth, windows, checks,
                                   counterexample=("intertwine", z_word, image))
        checks["intertwine"] += 1
    return ConjugacyReport(True, depth, windows, checks)


def _check_intertwine(sub, cs, image, codes, by_word, n_total):
    rws = cs.derived.system
    theta = cs.theta
    power_sub = sub.power(n_total)
    # locate maximal parsed run of complete return words
    starts = [j for j, code in enumerate(codes) if code is not None and code[1] == 1]
    if not starts:
        return None
    run_gammas = []
    run_start = starts[0]
    cursor = run_start
    while cursor < len(codes) and codes[cursor] is not None and codes[cursor][1] == 1:
        gamma = codes[cursor][0]
        run_gammas.append(gamma)
        cursor += len(cs.derived.alpha[gamma])
    if not run_gammas:
        return None
    # expected: theta applied to the zeta-expansion of the run
    expansion = []
    for gamma in run_gammas:
        expansion.extend(_zeta_token(gamma, k)
                         for k in range(1, len(cs.derived.alpha[gamma]) + 1))
    expected = theta.apply(tuple(expansion))
    # actual: substitute the run and parse it back
    run_word = tuple()
    for gamma in run_gammas:
        run_word = run_word + cs.derived.alpha[gamma]
    image_word = power_sub.apply(run_word)
    parsed = _parse_return_positions(image_word, rws.seed_letter, by_word)
    if parsed is None:
        return False
    actual = []
    for j, code in enumerate(parsed):
        if code is None:
            continue
        actual.append(_zeta_token(code[0], code[1]))
    # the parsed interior of sigma^(N)(run) must appear inside theta(run
    # expansion) as an aligned factor; boundary letters may be unparsed
    expected_str = "".join(expected)
    actual_str = "".join(actual)
    if actual and actual_str not in expected_str:
        return False
    if len(actual) < len(expected) // 2:
        return None  # too little parsed to be meaningful
    return True


def primitivize(sub: Substitution, depth: int = 6,
                table: LanguageTable | None = None):
    """Full pipeline: tameness gate, seed, return words, psi, theta and the
    sampled conjugacy verification.  Periodic minimal inputs short-circuit
    to a constant-length primitive substitution on the periodic word."""
    report = decide_tameness(sub)
    if report.empty_subshift:
        raise EmptySubshiftError("cannot primitivize an empty subshift")
    if not report.tame:
        periodic = _periodic_bypass(sub, report)
        if periodic is not None:
            return periodic
        raise WildInputError("substitution is wild and not a single periodic orbit")
    seed = find_seed(sub, table=table, report=report)
    rws = return_words(sub, seed=seed, table=table)
    ds = build_psi(sub, rws)
    cs = build_theta(ds)
    verification = verify_conjugacy(sub, cs, depth=depth, table=table)
    if not verification.ok:
        raise ConjugacyError("conjugacy verification failed",
                             window=verification.counterexample)
    return PrimitivizationResult(ds, cs, verification, bypass=None)


@dataclass(frozen=True)
class PrimitivizationResult:
    derived: DerivedSubstitution | None
    conjugate: ConjugateSubstitution | None
    verification: ConjugacyReport | None
    bypass: Substitution | None = None

    @property
    def psi(self):
        return self.derived.psi if self.derived else self.bypass

    @property
    def theta(self):
        return self.conjugate.theta if self.conjugate else self.bypass


def _periodic_bypass(sub: Substitution, report: TamenessReport):
    """A wild but minimal subshift is one periodic orbit; it equals the
    subshift of the constant-length primitive substitution sending every
    legal letter of the cycle to the periodic word."""
    word = report.witness.periodic_word
    table = LanguageTable(sub, max(4 * len(word) + 4,
                                   2 * sub.max_image_len * len(sub.alphabet)))
    ring = word * (table.max_length // len(word) + 2)
    factors = {ring[i:i + table.max_length] for i in range(len(word))}
    if not set(table.legal(table.max_length)) <= factors:
        return None
    letters = sorted(set(word), key=sub.letter_index)
    rotations = {}
    for letter in letters:
        idx = word.index(letter)
        rotation = word[idx:] + word[:idx]
        if len(rotation) == 1:
            rotation = rotation * 2  # images must grow for a nonempty subshift
        rotations[letter] = rotation
    constant = Substitution([(a, rotations[a]) for a in letters], alphabet=tuple(letters))
    return PrimitivizationResult(None, None, None, bypass=constant)
