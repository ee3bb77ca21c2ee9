"""Closed invariant subspaces of a tiling space via canonical subcomplexes.

At collaring radius >= the bounded-word bound, a closed invariant subspace
is determined by the set of collared letters occurring in it, and those
letter sets are exactly the fixed points of the canonicalization operator
(letters surviving on a bi-infinite path of the edge-restricted transition
graph).  Canonicalization is monotone, deflationary and idempotent, and any
canonical set strictly below another is reachable from it by deleting one
edge and re-canonicalizing; the lattice is therefore enumerated completely
by a downward deletion closure from the full complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import intlin
from .apcomplex import (APComplex, H1Presentation, Multigraph, build_complex,
                        cycle_basis, direct_limit, _boundary)
from .classify import TamenessReport, decide_tameness
from .collar import CollaredSubstitution
from .core import Substitution
from .errors import SubstdynError, SymbolError, WildInputError
from .graphs import biinfinite_path_nodes
from .language import LanguageTable

Subcomplex = frozenset


class CanonicalizeContext:
    """Restricted-legality engine: the Rauzy graph of the base language at
    the stabilized order, with each window carrying the set of collared
    letters it witnesses.  Canonicalizing an edge set keeps the windows
    whose letters lie inside it and returns the letters surviving on
    bi-infinite paths.  Order 2 alone is too coarse: it would admit
    spurious periodic patterns whose longer factors are illegal."""

    def __init__(self, collared: CollaredSubstitution,
                 table: LanguageTable | None = None):
        from .language import LanguageTable as _LT, default_margin
        base = collared.base
        n = collared.radius
        if table is None or table.max_length < 2 * n + 2:
            # windows must outgrow the recurrence scale of the collared
            # letters themselves, so the order grows with the radius
            length = max(2 * n + 2, default_margin(base, 2 * n + 2),
                         4 * (2 * n + 1))
            table = collared.table if collared.table.max_length >= length \
                else _LT(base, length)
        self.collared = collared
        self.table = table
        self.exact = table.legal_exact
        self.order = table.max_length - 1  # vertex window length (base letters)
        sub = base

        def tokens_of(coded):
            word = sub.decode(coded)
            out = set()
            for i in range(n, len(word) - n):
                out.add(f"{word[i]}|" + _context_text(sub, word[i - n:i + n + 1]))
            return frozenset(out)

        self.vertices = sorted(table.legal_coded(self.order))
        self.edges = sorted(table.legal_coded(self.order + 1))
        self.vertex_tokens = {v: tokens_of(v) for v in self.vertices}
        self.edge_tokens = {e: tokens_of(e) for e in self.edges}

    def canonicalize(self, edge_set: Subcomplex) -> Subcomplex:
        keep = set(edge_set)
        vertices = [v for v in self.vertices if self.vertex_tokens[v] <= keep]
        alive = set(vertices)
        succ: dict[str, list[str]] = {v: [] for v in vertices}
        pred: dict[str, list[str]] = {v: [] for v in vertices}
        for e in self.edges:
            if self.edge_tokens[e] <= keep:
                head, tail = e[:-1], e[1:]
                if head in alive and tail in alive:
                    succ[head].append(tail)
                    pred[tail].append(head)
        surviving = biinfinite_path_nodes(vertices, lambda v: succ[v],
                                          lambda v: pred[v])
        out = set()
        for v in surviving:
            out.update(self.vertex_tokens[v])
        return frozenset(out)


def _context_text(sub: Substitution, context) -> str:
    return sub.format_word(context).replace(" ", ".")


def cis_canonicalize(edges: Subcomplex, collared: CollaredSubstitution,
                     context: CanonicalizeContext | None = None) -> Subcomplex:
    """Letters of the largest closed invariant subspace whose sequences use
    only the given letters.  Idempotent, monotone and deflationary."""
    if context is None:
        context = CanonicalizeContext(collared)
    return context.canonicalize(edges)


def image_period(edges: Subcomplex, collared: CollaredSubstitution,
                 context: CanonicalizeContext | None = None) -> int | None:
    """Least t >= 1 with the t-fold canonicalized image equal to the set
    itself, or None when the set is not on its own image cycle."""
    if not edges:
        return 1
    if context is None:
        context = CanonicalizeContext(collared)
    orbit = [frozenset(edges)]
    seen = {orbit[0]: 0}
    while True:
        nxt = context.canonicalize(edge_image(orbit[-1], collared))
        if nxt == orbit[0]:
            return len(orbit)
        if nxt in seen:
            return None
        seen[nxt] = len(orbit)
        orbit.append(nxt)


def edge_image(edges, collared: CollaredSubstitution) -> Subcomplex:
    out = set()
    for e in edges:
        out.update(collared.sub.rules[e])
    return frozenset(out)


def eventual_range(edges: Subcomplex, collared: CollaredSubstitution,
                   power: int = 1) -> Subcomplex:
    """Union of the cycle of the iterated edge-image sets: the stable image
    of the subcomplex under the induced map.  Idempotent."""
    def step(k):
        out = k
        for _ in range(power):
            out = edge_image(out, collared)
        return out

    seen = {frozenset(edges): 0}
    orbit = [frozenset(edges)]
    while True:
        nxt = step(orbit[-1])
        if nxt in seen:
            start = seen[nxt]
            cycle = orbit[start:]
            union = set()
            for member in cycle:
                union.update(member)
            return frozenset(union)
        seen[nxt] = len(orbit)
        orbit.append(nxt)


@dataclass(frozen=True)
class CISNode:
    name: str
    edges: Subcomplex
    period: int | None          # least t with image^t fixing this node
    h0_rank: int
    h1: H1Presentation | None   # None for the empty node
    quotient_h0: int
    quotient_h1: H1Presentation | None

    @property
    def h1_rank(self) -> int:
        return self.h1.limit.eventual_rank if self.h1 else 0

    @property
    def quotient_h1_rank(self) -> int:
        return self.quotient_h1.limit.eventual_rank if self.quotient_h1 else 0


@dataclass
class CISLattice:
    collared: CollaredSubstitution
    complex: APComplex
    nodes: list[CISNode]
    order: list[tuple[str, str]]            # (smaller, larger) strict pairs
    power: int
    inclusion_arrows: list[dict]
    quotient_arrows: list[dict]
    exact: bool
    warnings: list[str] = field(default_factory=list)

    def node(self, name: str) -> CISNode:
        return next(n for n in self.nodes if n.name == name)

    def inclusion_h1_profile(self):
        return [n.h1_rank for n in self.nodes]

    def quotient_h1_profile(self):
        return [n.quotient_h1_rank for n in self.nodes]

    def nonempty_proper(self):
        top = self.nodes[0].edges
        return [n for n in self.nodes if n.edges and n.edges != top]


def _sub_multigraph(graph: Multigraph, edges):
    edge_list = tuple(sorted(edges))
    vertices = sorted({graph.source[e] for e in edge_list}
                      | {graph.target[e] for e in edge_list})
    remap = {v: i for i, v in enumerate(vertices)}
    return Multigraph(edge_list,
                      {e: remap[graph.source[e]] for e in edge_list},
                      {e: remap[graph.target[e]] for e in edge_list},
                      tuple(graph.vertex_labels[v] for v in vertices))


def _quotient_multigraph(graph: Multigraph, collapsed_edges):
    """Collapse a subcomplex (edges and their vertices) to a single vertex;
    with nothing to collapse this is the graph itself."""
    collapsed_vertices = {graph.source[e] for e in collapsed_edges} | \
                         {graph.target[e] for e in collapsed_edges}
    edge_list = tuple(sorted(set(graph.edges) - set(collapsed_edges)))
    keep = sorted({v for e in edge_list
                   for v in (graph.source[e], graph.target[e])
                   if v not in collapsed_vertices})
    remap = {v: i for i, v in enumerate(keep)}
    labels = [graph.vertex_labels[v] for v in keep]
    star = None
    if collapsed_edges:
        star = len(keep)
        labels.append("*")

    def project(v):
        return star if v in collapsed_vertices else remap[v]

    if not collapsed_edges and edge_list:
        # nothing collapsed: keep all original vertices
        return _sub_multigraph(graph, edge_list)
    return Multigraph(edge_list,
                      {e: project(graph.source[e]) for e in edge_list},
                      {e: project(graph.target[e]) for e in edge_list},
                      tuple(labels))


def _graph_h1(graph: Multigraph, on_edges) -> H1Presentation:
    basis, chords = cycle_basis(graph)
    index = {e: i for i, e in enumerate(graph.edges)}
    chain = {e: [0] * len(graph.edges) for e in graph.edges}
    for e in graph.edges:
        for step in on_edges[e]:
            if step in index:
                chain[e][index[step]] += 1
    columns = []
    for cycle in basis:
        image = [0] * len(graph.edges)
        for i, e in enumerate(graph.edges):
            if cycle[i]:
                for j in range(len(graph.edges)):
                    image[j] += cycle[i] * chain[e][j]
        if any(_boundary(graph, image)):
            raise SubstdynError("cycle image has nonzero boundary")
        columns.append([image[index[c]] for c in chords])
    size = len(basis)
    matrix = [[columns[j][i] for j in range(size)] for i in range(size)]
    return H1Presentation(size, basis, chords,
                          tuple(tuple(row) for row in matrix),
                          direct_limit(intlin.transpose(matrix)))


def _quotient_paths(collared, edges_kept, power):
    out = {}
    for e in edges_kept:
        path = collared.sub.iterate((e,), power)
        out[e] = tuple(x for x in path if x in edges_kept)
    return out


def _restricted_paths(collared, edges, power):
    out = {}
    for e in edges:
        path = collared.sub.iterate((e,), power)
        if any(x not in edges for x in path):
            raise SubstdynError(f"subcomplex is not invariant at power {power}")
        out[e] = tuple(path)
    return out


def enumerate_cis(collared: CollaredSubstitution,
                  tameness: TamenessReport | None = None,
                  max_nodes: int = 512,
                  context: CanonicalizeContext | None = None) -> CISLattice:
    """The full lattice of canonical subcomplexes, with per-node direct-limit
    presentations and quotient data."""
    base = collared.base
    if tameness is None:
        tameness = decide_tameness(base)
    if not tameness.tame:
        raise WildInputError("invariant-subspace enumeration requires a tame substitution")
    warnings = []
    if tameness.n_sigma is not None and collared.radius < tameness.n_sigma:
        warnings.append(
            f"radius {collared.radius} is below the bounded-word bound "
            f"{tameness.n_sigma}; distinct subspaces may collapse")
    complex_ = build_complex(collared)
    if context is None:
        context = CanonicalizeContext(collared)
    if not context.exact:
        warnings.append("legality did not stabilise at the margin order; "
                        "the lattice is exact only to that order")
    top = context.canonicalize(frozenset(complex_.edges))
    if top != frozenset(complex_.edges):
        warnings.append("some legal letters are not on any bi-infinite path; "
                        "the top node omits them")

    # downward deletion closure: complete because canonicalization is
    # monotone, so any canonical K' < K is below canonicalize(K - {e}) for
    # every edge e of K outside K'
    family = {top, frozenset()}
    stack = [top]
    while stack:
        current = stack.pop()
        for e in sorted(current):
            candidate = context.canonicalize(current - {e})
            if candidate not in family:
                if len(family) >= max_nodes:
                    raise SubstdynError(f"lattice exceeded {max_nodes} nodes")
                family.add(candidate)
                stack.append(candidate)

    # closure sanity: unions of canonical sets are canonical and meets
    # re-canonicalize, so the deletion closure already contains both; any
    # addition here signals a margin artifact
    members = sorted(family, key=lambda k: (-len(k), tuple(sorted(k))))
    for a, b in itertools.combinations(members, 2):
        for candidate in (context.canonicalize(a | b),
                          context.canonicalize(a & b)):
            if candidate not in family:
                family.add(candidate)
                warnings.append("lattice closure added a node outside the "
                                "deletion closure (margin artifact)")
    members = sorted(family, key=lambda k: (-len(k), tuple(sorted(k))))

    # node periods under the induced image map; a genuine invariant
    # subspace's subcomplex is fixed by a power of the map, so canonical
    # sets without a period are margin artifacts and are dropped
    periods = {}
    for k in members:
        periods[k] = image_period(k, collared, context)
        if periods[k] is None:
            warnings.append(f"dropped a size-{len(k)} canonical set that is "
                            "not image-periodic (margin artifact)")
    members = [k for k in members if periods[k] is not None]
    power = 1
    for k in members:
        p = periods[k]
        power = power * p // _gcd(power, p)

    nodes = []
    graph = complex_.graph
    for idx, k in enumerate(members):
        if k == top:
            name = "omega"
        elif not k:
            name = "empty"
        else:
            name = f"cis_{idx}"
        if k:
            sub_graph = _sub_multigraph(graph, k)
            count, _ = sub_graph.components()
            h1 = _graph_h1(sub_graph, _restricted_paths(collared, k, power))
        else:
            count, h1 = 0, None
        q_graph = _quotient_multigraph(graph, k)
        if q_graph.edges:
            q_count, _ = q_graph.components()
            q_h1 = _graph_h1(q_graph, _quotient_paths(collared, set(q_graph.edges), power))
        else:
            q_count, q_h1 = (1 if k else 0), None
        nodes.append(CISNode(name=name, edges=k, period=periods[k],
                             h0_rank=count, h1=h1,
                             quotient_h0=q_count, quotient_h1=q_h1))

    order = [(a.name, b.name) for a in nodes for b in nodes
             if a.edges < b.edges]
    inclusion_arrows = _inclusion_arrows(nodes, graph)
    quotient_arrows = _quotient_arrows(nodes, graph)
    return CISLattice(collared=collared, complex=complex_, nodes=nodes,
                      order=order, power=power,
                      inclusion_arrows=inclusion_arrows,
                      quotient_arrows=quotient_arrows,
                      exact=collared.table.legal_exact, warnings=warnings)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _cycle_vectors_by_edge(h1: H1Presentation, graph: Multigraph):
    out = []
    for cycle in h1.basis:
        out.append({e: cycle[i] for i, e in enumerate(graph.edges) if cycle[i]})
    return out


def _limit_map_rank(source_h1, source_graph, target_h1, target_graph, project):
    """Rank of the induced map between direct limits, computed as the rank
    of target_A^dim . projection . source_A^dim."""
    if source_h1 is None or target_h1 is None:
        return 0
    if source_h1.rank == 0 or target_h1.rank == 0:
        return 0
    chord_index = {c: i for i, c in enumerate(target_h1.chord_edges)}
    proj = [[0] * source_h1.rank for _ in range(target_h1.rank)]
    for j, vec in enumerate(_cycle_vectors_by_edge(source_h1, source_graph)):
        image = project(vec)
        for e, coeff in image.items():
            if e in chord_index:
                proj[chord_index[e]][j] = coeff
    a_src = intlin.mat_pow([list(r) for r in source_h1.matrix], source_h1.rank)
    a_tgt = intlin.mat_pow([list(r) for r in target_h1.matrix], target_h1.rank)
    return intlin.rank(intlin.mat_mul(a_tgt, intlin.mat_mul(proj, a_src)))


def _component_map_rank(small_edges, big_edges, graph):
    if not small_edges or not big_edges:
        return 0
    _, small_comp = _sub_multigraph(graph, small_edges).components()
    big_graph = _sub_multigraph(graph, big_edges)
    _, big_comp = big_graph.components()
    big_vertices = {v: i for i, v in enumerate(
        sorted({graph.source[e] for e in big_graph.edges}
               | {graph.target[e] for e in big_graph.edges}))}
    # component of the big complex met by each small component
    small_graph = _sub_multigraph(graph, small_edges)
    hit = set()
    small_vertices = sorted({graph.source[e] for e in small_graph.edges}
                            | {graph.target[e] for e in small_graph.edges})
    for v in small_vertices:
        hit.add(big_comp[big_vertices[v]])
    return len(hit)


def _inclusion_arrows(nodes, graph):
    # ranks of the cohomology restriction maps, which run from the larger
    # node to the smaller one
    arrows = []
    for small in nodes:
        for big in nodes:
            if not small.edges < big.edges:
                continue
            s_graph = _sub_multigraph(graph, small.edges) if small.edges else None
            b_graph = _sub_multigraph(graph, big.edges)
            h1_rank = _limit_map_rank(small.h1, s_graph, big.h1, b_graph,
                                      lambda vec: vec)
            arrows.append({
                "from": small.name, "to": big.name,
                "h1_map_rank": h1_rank,
                "h0_map_rank": _component_map_rank(small.edges, big.edges, graph),
            })
    return arrows


def _quotient_arrows(nodes, graph):
    arrows = []
    for small in nodes:
        for big in nodes:
            if not small.edges < big.edges:
                continue
            # quotient map Omega/small -> Omega/big collapses the extra edges
            sq = _quotient_multigraph(graph, small.edges)
            bq = _quotient_multigraph(graph, big.edges)

            def project(vec, extra=big.edges):
                return {e: c for e, c in vec.items() if e not in extra}

            rank = _limit_map_rank(small.quotient_h1, sq, big.quotient_h1, bq, project)
            arrows.append({
                "from": small.name, "to": big.name,
                "h1_map_rank": rank,
            })
    return arrows


def brute_force_canonical_sets(collared: CollaredSubstitution,
                               context: CanonicalizeContext | None = None
                               ) -> set[Subcomplex]:
    """All canonicalizations of all edge subsets; exponential, for
    cross-checking small complexes only."""
    complex_ = build_complex(collared)
    if context is None:
        context = CanonicalizeContext(collared)
    edges = sorted(complex_.edges)
    out = set()
    for bits in range(1 << len(edges)):
        subset = frozenset(e for i, e in enumerate(edges) if bits >> i & 1)
        out.add(context.canonicalize(subset))
    return out


@dataclass(frozen=True)
class DiagramComparison:
    shape_isomorphic: bool
    profiles_match: bool
    witness: str | None

    @property
    def distinguishable(self):
        return not (self.shape_isomorphic and self.profiles_match)


def _node_label(node: CISNode):
    return (node.h0_rank, node.h1_rank, node.quotient_h0, node.quotient_h1_rank)


def _order_isomorphism_exists(nodes_a, order_a, nodes_b, order_b, labels=None):
    if len(nodes_a) != len(nodes_b):
        return False
    names_a = [n.name for n in nodes_a]
    names_b = [n.name for n in nodes_b]
    rel_a = {(x, y) for x, y in order_a}
    rel_b = {(x, y) for x, y in order_b}
    for perm in itertools.permutations(range(len(names_b))):
        if labels is not None:
            if any(labels[0][i] != labels[1][perm[i]] for i in range(len(names_a))):
                continue
        mapping = {names_a[i]: names_b[perm[i]] for i in range(len(names_a))}
        if all(((mapping[x], mapping[y]) in rel_b) == ((x, y) in rel_a)
               for x in names_a for y in names_a):
            return True
    return False


def diagram_compare(first: CISLattice, second: CISLattice) -> DiagramComparison:
    """Compare lattice shapes and per-node cohomology rank profiles along
    order-preserving bijections."""
    shape = _order_isomorphism_exists(first.nodes, first.order,
                                      second.nodes, second.order)
    if not shape:
        return DiagramComparison(False, False,
                                 f"lattice shapes differ: {len(first.nodes)} nodes "
                                 f"vs {len(second.nodes)}")
    labels = ([_node_label(n) for n in first.nodes],
              [_node_label(n) for n in second.nodes])
    if sorted(labels[0]) != sorted(labels[1]):
        profile_a = sorted(n.h1_rank for n in first.nodes)
        profile_b = sorted(n.h1_rank for n in second.nodes)
        if profile_a != profile_b:
            witness = (f"inclusion H1 rank multisets differ: {profile_a} vs {profile_b}")
        else:
            witness = (f"node (H0, H1, quotient) rank profiles differ: "
                       f"{sorted(labels[0])} vs {sorted(labels[1])}")
        return DiagramComparison(True, False, witness)
    if _order_isomorphism_exists(first.nodes, first.order, second.nodes,
                                 second.order, labels=labels):
        return DiagramComparison(True, True, None)
    return DiagramComparison(True, False,
                             "rank profiles agree but no order-preserving "
                             "bijection matches them")


def lattice_to_dot(lattice: CISLattice, title: str = "cis_lattice") -> str:
    lines = [f'digraph "{title}" {{', "  rankdir=BT;"]
    for node in lattice.nodes:
        label = f"{node.name}\\nE={len(node.edges)} H1={node.h1_rank}"
        lines.append(f'  "{node.name}" [label="{label}", shape=box];')
    covers = _hasse_pairs(lattice)
    for small, big in covers:
        lines.append(f'  "{small}" -> "{big}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _hasse_pairs(lattice: CISLattice):
    strict = set(lattice.order)
    covers = []
    for a, b in strict:
        if any((a, c) in strict and (c, b) in strict
               for c in {n.name for n in lattice.nodes} - {a, b}):
            continue
        covers.append((a, b))
    return sorted(covers)


def extend_substitution(base: Substitution, handle: Substitution,
                        injection: dict[str, str],
                        subsequences: dict[str, tuple[int, ...]] | None = None,
                        power: int | None = None) -> Substitution:
    """Extend a primitive substitution by another along interior
    subsequences: new letters substitute like their injected images except
    at the chosen positions, which carry the handle letters instead."""
    if not base.is_primitive():
        raise SubstdynError("extension requires a primitive carrier substitution")
    if set(injection) != set(handle.alphabet):
        raise SymbolError("injection must be defined exactly on the handle alphabet")
    if len(set(injection.values())) != len(injection):
        raise SymbolError("injection is not injective")
    for target in injection.values():
        if target not in base.alphabet:
            raise SymbolError(f"injection target {target!r} not in the carrier alphabet")
    if set(base.alphabet) & set(handle.alphabet):
        raise SymbolError("carrier and handle alphabets must be disjoint")

    def find_interior(image, wanted):
        # earliest strictly increasing interior positions carrying the wanted
        # letters (1-based); backtracking keeps completeness
        m = len(image)

        def search(start, remaining):
            if not remaining:
                return ()
            for pos in range(start, m - 1):
                if image[pos] == remaining[0]:
                    rest = search(pos + 1, remaining[1:])
                    if rest is not None:
                        return (pos,) + rest
            return None

        return search(1, wanted)

    if subsequences is not None:
        chosen_power = power or 1
        lifted = base.power(chosen_power)
        plans = {}
        for b in handle.alphabet:
            image = lifted.rules[injection[b]]
            wanted = tuple(injection[x] for x in handle.rules[b])
            positions = tuple(p - 1 for p in subsequences[b])
            if len(positions) != len(wanted):
                raise SubstdynError(f"need {len(wanted)} positions for {b!r}")
            if list(positions) != sorted(set(positions)):
                raise SubstdynError(f"positions for {b!r} must be strictly increasing")
            if any(not 1 <= p <= len(image) - 2 for p in positions):
                raise SubstdynError(f"positions for {b!r} are not interior")
            if any(image[p] != w for p, w in zip(positions, wanted)):
                raise SubstdynError(f"positions for {b!r} do not carry the "
                                    "injected handle letters")
            plans[b] = positions
    else:
        chosen_power = None
        plans = None
        for t in ([power] if power else range(1, 13)):
            lifted = base.power(t)
            candidate = {}
            for b in handle.alphabet:
                image = lifted.rules[injection[b]]
                wanted = tuple(injection[x] for x in handle.rules[b])
                positions = find_interior(image, wanted)
                if positions is None:
                    candidate = None
                    break
                candidate[b] = positions
            if candidate is not None:
                chosen_power = t
                plans = candidate
                break
        if plans is None:
            raise SubstdynError("no power admits interior subsequences for the handle")
    lifted = base.power(chosen_power)
    rules = [(a, lifted.rules[a]) for a in base.alphabet]
    for b in handle.alphabet:
        image = list(lifted.rules[injection[b]])
        for p, letter in zip(plans[b], handle.rules[b]):
            image[p] = letter
        rules.append((b, tuple(image)))
    return Substitution(rules, alphabet=tuple(base.alphabet) + tuple(handle.alphabet))
