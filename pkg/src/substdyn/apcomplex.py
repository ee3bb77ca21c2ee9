"""Collared Anderson-Putnam complexes as directed multigraphs.

Edges are the legal collared letters; vertices are equivalence classes of
admissible transitions under the transitive closure of sharing either
endpoint letter.  The substitution induces a cellular self-map sending each
edge to the edge path spelled by its rule image.  First cohomology of the
inverse limit is presented as the direct limit of the transpose of the
induced matrix on a fundamental cycle basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import intlin
from .core import Substitution
from .classify import decide_tameness
from .collar import CollaredSubstitution, collar, border_forcing_level
from .errors import EmptySubshiftError, InconsistentRuleError, WildInputError
from .graphs import UnionFind
from .language import LanguageTable


@dataclass(frozen=True)
class Multigraph:
    """Directed multigraph with ordered edges; vertex ids are 0..V-1."""
    edges: tuple[str, ...]
    source: dict[str, int]
    target: dict[str, int]
    vertex_labels: tuple[str, ...]

    @property
    def vertex_count(self):
        return len(self.vertex_labels)

    def components(self):
        uf = UnionFind()
        for v in range(self.vertex_count):
            uf.add(v)
        for e in self.edges:
            uf.union(self.source[e], self.target[e])
        classes = uf.classes()
        roots = sorted(classes, key=lambda r: min(classes[r]))
        index = {root: i for i, root in enumerate(roots)}
        return len(roots), {v: index[uf.find(v)] for v in range(self.vertex_count)}


@dataclass(frozen=True)
class APComplex:
    graph: Multigraph
    transitions: tuple[tuple[str, str], ...]
    component_count: int

    @property
    def edges(self):
        return self.graph.edges

    @property
    def vertex_count(self):
        return self.graph.vertex_count

    def h1_rank(self):
        return len(self.edges) - self.vertex_count + self.component_count


def _build_graph(edges, transitions):
    """Vertices as transition classes: out-port of the left edge is glued to
    the in-port of the right edge; sharing either edge merges classes."""
    uf = UnionFind()
    for e in edges:
        uf.add(("out", e))
        uf.add(("in", e))
    for left, right in transitions:
        uf.union(("out", left), ("in", right))
    classes = uf.classes()
    # deterministic vertex order and labels: boundary word of the class when
    # the members agree on one, else positional
    roots = sorted(classes, key=lambda r: sorted(map(repr, classes[r])))
    labels = []
    root_index = {}
    used = {}
    for root in roots:
        root_index[root] = len(labels)
        members = classes[root]
        words = set()
        for kind, edge in members:
            body = edge.split("|", 1)[1]
            parts = body.split(".") if "." in body else list(body)
            words.add("".join(parts[1:]) if kind == "out" else "".join(parts[:-1]))
        label = words.pop() if len(words) == 1 else None
        if not label:
            label = "v"
        count = used.get(label, 0)
        used[label] = count + 1
        labels.append(label if count == 0 else f"{label}#{count}")
    source = {e: root_index[uf.find(("in", e))] for e in edges}
    target = {e: root_index[uf.find(("out", e))] for e in edges}
    return Multigraph(tuple(edges), source, target, tuple(labels))


def build_complex(collared: CollaredSubstitution) -> APComplex:
    edges = sorted(collared.legal)
    if not edges:
        raise EmptySubshiftError("no legal collared letters; the subshift is empty")
    transitions = tuple(collared.transitions())
    graph = _build_graph(edges, transitions)
    count, _ = graph.components()
    return APComplex(graph, transitions, count)


@dataclass(frozen=True)
class CellularMap:
    on_edges: dict[str, tuple[str, ...]]
    on_vertices: dict[int, int]
    power: int = 1


def induced_map(collared: CollaredSubstitution, complex_: APComplex,
                power: int = 1) -> CellularMap:
    """Each edge maps to the path spelled by its (power-fold) rule image."""
    graph = complex_.graph
    on_edges = {}
    for e in complex_.edges:
        path = tuple(collared.sub.iterate((e,), power))
        for step in path:
            if step not in graph.source:
                raise InconsistentRuleError(f"image of {e} leaves the complex at {step}")
        for a, b in zip(path, path[1:]):
            if graph.target[a] != graph.source[b]:
                raise InconsistentRuleError(f"image path of {e} is not connected")
        on_edges[e] = path
    on_vertices = {}
    for e in complex_.edges:
        path = on_edges[e]
        for vertex, image in ((graph.source[e], graph.source[path[0]]),
                              (graph.target[e], graph.target[path[-1]])):
            if vertex in on_vertices and on_vertices[vertex] != image:
                raise InconsistentRuleError("vertex image is inconsistent")
            on_vertices[vertex] = image
    return CellularMap(on_edges, on_vertices, power)


@dataclass(frozen=True)
class DirectLimit:
    """The abelian group lim(Z^k, A) presented by iterating an integer
    matrix; its free rank is the eventual rank of A."""
    matrix: tuple[tuple[int, ...], ...]
    eventual_rank: int
    unimodular_on_image: bool
    restricted: tuple[tuple[int, ...], ...]
    group_description: str


def eventual_rank(matrix):
    """(rank of A^dim, whether A is unimodular on its eventual image, the
    restricted matrix in a lattice basis of that image)."""
    n, m = intlin.dims(matrix)
    if n != m:
        raise intlin.DimensionError("eventual rank of a non-square matrix")
    if n == 0:
        return 0, True, []
    power = intlin.mat_pow(matrix, n)
    r = intlin.rank(power)
    if r == 0:
        return 0, True, []
    basis = intlin.column_lattice_basis(power)
    image = [[sum(matrix[i][k] * col[k] for k in range(n)) for col in basis]
             for i in range(n)]
    restricted_cols = [intlin.express_in_basis(basis, [image[i][j] for i in range(n)])
                       for j in range(len(basis))]
    restricted = [[restricted_cols[j][i] for j in range(len(basis))]
                  for i in range(len(basis))]
    unimodular = abs(intlin.det(restricted)) == 1
    return r, unimodular, restricted


def direct_limit(matrix) -> DirectLimit:
    r, unimodular, restricted = eventual_rank(matrix)
    if r == 0:
        description = "0"
    elif unimodular:
        description = f"Z^{r}"
    else:
        description = f"lim(Z^{r}, {restricted})"
    return DirectLimit(tuple(tuple(row) for row in matrix), r, unimodular,
                       tuple(tuple(row) for row in restricted), description)


@dataclass(frozen=True)
class H1Presentation:
    rank: int
    basis: tuple[tuple[int, ...], ...]     # cycles as edge-indexed vectors
    chord_edges: tuple[str, ...]
    matrix: tuple[tuple[int, ...], ...]    # action on the cycle basis
    limit: DirectLimit                     # of the transpose

    @property
    def cohomology_rank(self):
        return self.limit.eventual_rank


def _spanning_forest(graph: Multigraph):
    """Greedy forest over the undirected graph in edge order; returns
    (tree edges, chord edges)."""
    uf = UnionFind()
    for v in range(graph.vertex_count):
        uf.add(v)
    tree = []
    chords = []
    for e in graph.edges:
        s, t = graph.source[e], graph.target[e]
        if uf.find(s) != uf.find(t):
            uf.union(s, t)
            tree.append(e)
        else:
            chords.append(e)
    return tree, chords


def _forest_path(graph, tree, start, goal):
    """Signed edge path start -> goal inside the forest: list of
    (edge, +1/-1)."""
    if start == goal:
        return []
    adjacency = {}
    for e in tree:
        adjacency.setdefault(graph.source[e], []).append((e, graph.target[e], 1))
        adjacency.setdefault(graph.target[e], []).append((e, graph.source[e], -1))
    parent = {start: None}
    queue = [start]
    while queue:
        node = queue.pop(0)
        if node == goal:
            break
        for edge, other, sign in adjacency.get(node, ()):
            if other not in parent:
                parent[other] = (node, edge, sign)
                queue.append(other)
    if goal not in parent:
        raise InconsistentRuleError("forest path between vertices in distinct trees")
    path = []
    node = goal
    while parent[node] is not None:
        prev, edge, sign = parent[node]
        path.append((edge, sign))
        node = prev
    path.reverse()
    return path


def cycle_basis(graph: Multigraph):
    """Fundamental cycles of the lex-least spanning forest: one per chord,
    as integer vectors over the edge order."""
    tree, chords = _spanning_forest(graph)
    index = {e: i for i, e in enumerate(graph.edges)}
    basis = []
    for chord in chords:
        vector = [0] * len(graph.edges)
        vector[index[chord]] = 1
        for edge, sign in _forest_path(graph, tree, graph.target[chord],
                                       graph.source[chord]):
            vector[index[edge]] += sign
        basis.append(tuple(vector))
    return tuple(basis), tuple(chords)


def _boundary(graph, vector):
    out = [0] * graph.vertex_count
    for i, e in enumerate(graph.edges):
        if vector[i]:
            out[graph.target[e]] += vector[i]
            out[graph.source[e]] -= vector[i]
    return out


def h1_presentation(complex_: APComplex, cell_map: CellularMap) -> H1Presentation:
    graph = complex_.graph
    basis, chords = cycle_basis(graph)
    index = {e: i for i, e in enumerate(graph.edges)}
    chord_positions = [index[c] for c in chords]
    # chain map: edge -> multiset of path edges (orientation is always +1)
    chain = {e: [0] * len(graph.edges) for e in graph.edges}
    for e in graph.edges:
        for step in cell_map.on_edges[e]:
            chain[e][index[step]] += 1
    columns = []
    for cycle in basis:
        image = [0] * len(graph.edges)
        for i, e in enumerate(graph.edges):
            if cycle[i]:
                for j in range(len(graph.edges)):
                    image[j] += cycle[i] * chain[e][j]
        if any(_boundary(graph, image)):
            raise InconsistentRuleError("image of a basis cycle has nonzero boundary")
        columns.append([image[p] for p in chord_positions])
    size = len(basis)
    matrix = [[columns[j][i] for j in range(size)] for i in range(size)]
    limit = direct_limit(intlin.transpose(matrix))
    return H1Presentation(size, basis, chords,
                          tuple(tuple(row) for row in matrix), limit)


@dataclass(frozen=True)
class InverseLimitPresentation:
    collared: CollaredSubstitution
    complex: APComplex
    cell_map: CellularMap
    h1: H1Presentation
    forcing_level: int
    n_sigma: int
    recognisable: str  # "evidenced" | "assumed" | "unknown"


def inverse_limit_presentation(sub: Substitution, radius: int | None = None,
                               table: LanguageTable | None = None,
                               assume_recognisable: bool = False,
                               max_letters: int | None = None) -> InverseLimitPresentation:
    """The tiling space as an inverse limit: the collared complex at the
    bounded-word radius, its cellular self-map, and the border-forcing
    level."""
    report = decide_tameness(sub)
    if report.empty_subshift:
        raise EmptySubshiftError("empty subshift has no tiling space presentation")
    if not report.tame:
        raise WildInputError("inverse-limit presentation requires a tame substitution")
    n_sigma = report.n_sigma
    if radius is None:
        radius = n_sigma
    collared = collar(sub, radius, table=table, max_letters=max_letters)
    complex_ = build_complex(collared)
    cell_map = induced_map(collared, complex_)
    h1 = h1_presentation(complex_, cell_map)
    level = border_forcing_level(collared, n_sigma=n_sigma) if radius >= n_sigma else 0
    if assume_recognisable:
        status = "assumed"
    else:
        from .language import periodic_point_search
        hits = periodic_point_search(sub, min(6, 2 + sub.max_image_len))
        status = "evidenced" if not hits else "unknown"
    return InverseLimitPresentation(collared, complex_, cell_map, h1,
                                    level, n_sigma, status)


def complex_to_dot(complex_: APComplex, highlights: dict[str, str] | None = None,
                   title: str = "ap_complex") -> str:
    """DOT rendering: vertices by label, edges labelled by collared letter,
    optional per-edge colours (e.g. subcomplex membership)."""
    graph = complex_.graph
    lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
    for i, label in enumerate(graph.vertex_labels):
        lines.append(f'  v{i} [label="{label}"];')
    for e in graph.edges:
        colour = (highlights or {}).get(e)
        attrs = f'label="{e}"'
        if colour:
            attrs += f', color="{colour}", fontcolor="{colour}"'
        lines.append(f"  v{graph.source[e]} -> v{graph.target[e]} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
